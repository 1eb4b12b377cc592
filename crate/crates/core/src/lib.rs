//! Normal modes, Kerr couplings and open-system dynamics of transmission-line
//! resonators with an embedded Josephson junction or SQUID.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod constants;
pub mod dynamics;
pub mod effective;
pub mod error;
pub mod integrals;
pub mod modes;
pub mod nonlinear;
pub mod roots;
pub mod table;

pub use error::{Error, Result};
