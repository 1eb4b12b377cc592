use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Config document does not match the schema.
    #[error("config error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// A physical parameter violates an invariant.
    #[error("invalid `{field}`: {message}")]
    Invalid { field: String, message: String },

    #[error("found only {found} of {requested} requested modes below k = {k_max:.6e} 1/m; widen the scan window")]
    FewerRootsThanRequested {
        found: usize,
        requested: usize,
        k_max: f64,
    },

    #[error("two roots inside scan cell [{k_lo:.9e}, {k_hi:.9e}] 1/m; raise scan_points")]
    DegenerateBracket { k_lo: f64, k_hi: f64 },

    #[error("participation sum rule violated for mode {mode}: capacitive {capacitive:.3e}, inductive {inductive:.3e}")]
    SumRuleViolation {
        mode: usize,
        capacitive: f64,
        inductive: f64,
    },

    #[error("junction is not a SQUID; flux pumping needs `junction.type = \"squid\"`")]
    NotASquid,

    #[error("derivative pump relation needs d < 0.1 and flux away from Φ0/2 (flux = {flux}, d = {asymmetry})")]
    NearHalfQuantum { flux: f64, asymmetry: f64 },

    #[error("critical photon number forms disagree for mode {mode}: {forms:?}")]
    IdentityViolation { mode: usize, forms: [f64; 3] },

    #[error("no junction-coupled mode in basis")]
    NoCoupledMode,

    #[error("{what} did not converge: {detail}")]
    NotConverged { what: &'static str, detail: String },

    #[error("Fock truncation {dim} too small for |alpha| = {alpha_abs:.3} (need {required})")]
    TruncationTooSmall {
        dim: usize,
        alpha_abs: f64,
        required: usize,
    },

    #[error("trace drifted by {drift:.3e} at t = {time:.6e} s")]
    TraceDrift { drift: f64, time: f64 },

    #[error("time step {dt:.3e} s exceeds stability bound {bound:.3e} s")]
    StepTooLarge { dt: f64, bound: f64 },

    #[error("Kerr phase target unreachable: {0}")]
    PhaseTargetUnreachable(String),

    #[error("no avoided crossing in flux range [{0}, {1}]")]
    NoCrossingFound(f64, f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by the input document rather than by numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Schema { .. } | Error::Invalid { .. } | Error::NotASquid
        )
    }
}
