//! One function per subcommand. Each resolves its parameters (flag, then the
//! config's experiment block, then a default), computes, and writes artifacts.

use std::f64::consts::PI;

use kerrline::circuit::{
    apply_override, effective_josephson_energy, junction_inductance, CircuitSpec, ConfigDocument, ExperimentDoc,
    JunctionKind, JunctionSpec,
};
use kerrline::dynamics::experiments::kerr_schedule;
use kerrline::dynamics::{
    count_peaks, simulate_blockade, simulate_cat, symmetric_axis, wigner, BlockadeFrame, BlockadeParams, CatParams,
};
use kerrline::effective::{avoided_crossing, crossing_table, end_coupled_model, length_sweep, length_table};
use kerrline::modes::{find_modes, mode_properties};
use kerrline::nonlinear::{
    analyze_flux_point, critical_photon_number, decay_rates, flux_sweep, nonlinear_couplings, sweep_table,
    SweepSettings,
};
use kerrline::table::Table;
use kerrline::Error;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::output::{constants_json, fmt_f64, sha256_hex, Artifacts};
use crate::{Cli, Command};

const TWO_PI: f64 = 2.0 * PI;

fn mhz(w: f64) -> f64 {
    w / TWO_PI / 1e6
}

fn ghz(w: f64) -> f64 {
    w / TWO_PI / 1e9
}

struct Loaded {
    doc: ConfigDocument,
    spec: CircuitSpec,
    exp: ExperimentDoc,
    file: String,
    sha256: String,
}

fn load(cli: &Cli) -> Result<Loaded, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::usage("missing --config PATH"))?;
    let bytes = std::fs::read(path).map_err(|source| CliError::ConfigRead {
        path: path.clone(),
        source,
    })?;
    let mut value: Value = serde_json::from_slice(&bytes).map_err(|e| Error::Schema {
        path: ".".into(),
        message: e.to_string(),
    })?;
    for assignment in &cli.overrides {
        apply_override(&mut value, assignment)?;
    }
    let doc = ConfigDocument::from_value(value)?;
    let spec = doc.to_spec()?;
    Ok(Loaded {
        exp: doc.experiment(),
        doc,
        spec,
        file: path
            .file_name()
            .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned()),
        sha256: sha256_hex(&bytes),
    })
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}

fn need_positive(field: &str, n: usize) -> Result<usize, CliError> {
    if n == 0 {
        Err(Error::Invalid {
            field: field.into(),
            message: "must be at least 1".into(),
        }
        .into())
    } else {
        Ok(n)
    }
}

fn mode_count(cli: &Cli, exp: &ExperimentDoc, default: usize) -> Result<usize, CliError> {
    need_positive("--modes", cli.modes.or(exp.modes).unwrap_or(default))
}

fn grid(cli: &Cli, from_config: Option<usize>, default: usize) -> Result<usize, CliError> {
    need_positive("--grid", cli.grid.or(from_config).unwrap_or(default))
}

/// Per-item list: a single entry is broadcast, otherwise lengths must match.
fn per_item<T: Copy>(field: &str, values: Option<Vec<T>>, fallback: T, count: usize) -> Result<Vec<T>, CliError> {
    match values {
        None => Ok(vec![fallback; count]),
        Some(v) if v.len() == 1 => Ok(vec![v[0]; count]),
        Some(v) if v.len() == count => Ok(v),
        Some(v) => Err(Error::Invalid {
            field: field.into(),
            message: format!("expected 1 or {count} entries, got {}", v.len()),
        }
        .into()),
    }
}

fn manifest(cli: &Cli, loaded: &Loaded, parameters: Value, results: Value) -> Map<String, Value> {
    let (constants, constants_hash) = constants_json();
    let mut m = Map::new();
    m.insert("tool".into(), json!("kerrline"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(cli.command.name()));
    m.insert(
        "config".into(),
        json!({"file": loaded.file, "sha256": loaded.sha256, "overrides": cli.overrides}),
    );
    m.insert("resolved_config".into(), serde_json::to_value(&loaded.doc).expect("serializable"));
    m.insert("parameters".into(), parameters);
    m.insert("constants".into(), constants);
    m.insert("constants_sha256".into(), json!(constants_hash));
    m.insert("results".into(), results);
    m
}

fn finish(cli: &Cli, loaded: &Loaded, out: Artifacts, parameters: Value, results: Value) -> Result<(), CliError> {
    let path = out.finish(manifest(cli, loaded, parameters, results))?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let loaded = load(cli)?;
    match cli.command {
        Command::Validate => validate(&loaded),
        Command::Spectrum => spectrum(cli, &loaded),
        Command::SweepFlux => sweep_flux(cli, &loaded),
        Command::SweepPosition => sweep_position(cli, &loaded),
        Command::SweepLength => sweep_length(cli, &loaded),
        Command::Jpc => jpc(cli, &loaded),
        Command::Blockade => blockade(cli, &loaded),
        Command::Cat => cat(cli, &loaded),
        Command::Ultrastrong => ultrastrong(cli, &loaded),
    }
}

fn validate(loaded: &Loaded) -> Result<(), CliError> {
    let spec = &loaded.spec;
    let flux = loaded.exp.flux.unwrap_or(0.0);
    let ej = effective_josephson_energy(&spec.junction, flux);
    println!("config ok: {} (sha256 {})", loaded.file, loaded.sha256);
    println!("z0_left_ohm = {}", fmt_f64(spec.left.impedance()));
    println!("z0_right_ohm = {}", fmt_f64(spec.right.impedance()));
    println!("v_left_m_per_s = {}", fmt_f64(spec.left.velocity()));
    println!("v_right_m_per_s = {}", fmt_f64(spec.right.velocity()));
    println!("c_sigma_f = {}", fmt_f64(spec.total_capacitance()));
    println!("flux_phi0 = {}", fmt_f64(flux));
    println!("ej_hz = {}", fmt_f64(ej));
    println!("l_j_h = {}", fmt_f64(junction_inductance(&spec.junction, flux)));
    Ok(())
}

fn spectrum(cli: &Cli, loaded: &Loaded) -> Result<(), CliError> {
    let (spec, exp) = (&loaded.spec, &loaded.exp);
    let flux = exp.flux.unwrap_or(0.0);
    let count = mode_count(cli, exp, 3)?;
    let points = grid(cli, exp.envelope_points, 401)?;
    let basis = find_modes(spec, flux, count)?;
    let props = mode_properties(&basis)?;
    let couplings = nonlinear_couplings(&props)?;
    let decay = decay_rates(&basis);
    let ej = effective_josephson_energy(&spec.junction, flux);

    let mut out = Artifacts::create(&cli.out)?;
    out.json(
        "modes.json",
        &json!({
            "flux_phi0": flux,
            "total_capacitance_f": basis.total_capacitance,
            "modes": basis.records(),
        }),
    )?;

    let mut header = vec!["x_m".to_string()];
    header.extend((1..=count).map(|m| format!("u_{m}")));
    let rows = basis
        .sample_envelopes(points)
        .into_iter()
        .map(|(x, u)| std::iter::once(x).chain(u).collect())
        .collect();
    out.table("envelopes.csv", &Table { header, rows })?;

    let header: Vec<String> = [
        "m", "f_ghz", "delta_u", "c_tilde_f", "l_tilde_h", "l_m_h", "c_prime_f", "l_prime_h", "eta_c", "eta_l",
        "ec_prime_ghz", "k_mm_mhz", "f_shifted_ghz", "kappa_mhz", "n_c",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut rows = Vec::with_capacity(count);
    for (p, &kappa) in props.iter().zip(&decay) {
        let mut row = vec![
            p.index.to_string(),
            fmt_f64(ghz(p.frequency)),
            fmt_f64(p.kink),
            fmt_f64(p.resonator_capacitance),
            fmt_f64(p.resonator_inductance),
            fmt_f64(p.mode_inductance),
        ];
        match (p.coupled, couplings.position(p.index)) {
            (Some(c), Some(i)) => {
                row.extend([
                    fmt_f64(c.capacitance),
                    fmt_f64(c.inductance),
                    fmt_f64(c.capacitive_participation),
                    fmt_f64(c.inductive_participation),
                    fmt_f64(c.charging_energy / 1e9),
                    fmt_f64(mhz(couplings.kerr[i][i])),
                    fmt_f64(ghz(couplings.shifted_frequencies[i])),
                ]);
            }
            _ => row.extend(std::iter::repeat_n(String::new(), 7)),
        }
        row.push(fmt_f64(mhz(kappa)));
        row.push(match p.coupled {
            Some(_) => fmt_f64(critical_photon_number(p, ej)?),
            None => String::new(),
        });
        rows.push(row);
    }
    out.rows("properties.csv", &header, &rows)?;

    for p in &props {
        println!(
            "mode {}: f = {:.6} GHz, delta_u = {:.4e}, K = {:.6} MHz",
            p.index,
            ghz(p.frequency),
            p.kink,
            mhz(couplings.self_kerr(p.index))
        );
    }
    finish(
        cli,
        loaded,
        out,
        json!({"flux_phi0": flux, "modes": count, "envelope_points": points}),
        json!({
            "frequencies_ghz": props.iter().map(|p| ghz(p.frequency)).collect::<Vec<_>>(),
            "self_kerr_mhz": props.iter().map(|p| mhz(couplings.self_kerr(p.index))).collect::<Vec<_>>(),
        }),
    )
}

fn sweep_flux(cli: &Cli, loaded: &Loaded) -> Result<(), CliError> {
    let (spec, exp) = (&loaded.spec, &loaded.exp);
    let count = mode_count(cli, exp, 3)?;
    let (lo, hi) = (exp.flux_min.unwrap_or(0.0), exp.flux_max.unwrap_or(0.5));
    let n = grid(cli, exp.flux_points, 51)?;
    let settings = SweepSettings {
        modes: count,
        flux_rf: exp.flux_rf.unwrap_or(0.02),
        drive_frequency: 0.0,
    };
    let points = flux_sweep(spec, &linspace(lo, hi, n), &settings)?;
    let mut out = Artifacts::create(&cli.out)?;
    out.table("sweep_flux.csv", &sweep_table(&points, count))?;
    println!("swept {n} flux points on [{lo}, {hi}] with {count} modes");
    finish(
        cli,
        loaded,
        out,
        json!({"modes": count, "flux_min": lo, "flux_max": hi, "flux_points": n, "flux_rf": settings.flux_rf}),
        json!({"points": points.len()}),
    )
}

fn with_josephson_energy(spec: &CircuitSpec, ej: f64) -> CircuitSpec {
    let kind = match spec.junction.kind {
        JunctionKind::Single { .. } => JunctionKind::Single { josephson_energy: ej },
        JunctionKind::Squid { asymmetry, .. } => JunctionKind::Squid {
            total_josephson_energy: ej,
            asymmetry,
        },
    };
    spec.with_junction(JunctionSpec {
        kind,
        capacitance: spec.junction.capacitance,
    })
}

fn sweep_position(cli: &Cli, loaded: &Loaded) -> Result<(), CliError> {
    let (spec, exp) = (&loaded.spec, &loaded.exp);
    let count = mode_count(cli, exp, 4)?;
    let flux = exp.flux.unwrap_or(0.0);
    let l = spec.half_length;
    let (x_lo, x_hi) = (exp.position_min_m.unwrap_or(0.0), exp.position_max_m.unwrap_or(0.95 * l));
    let positions = linspace(x_lo, x_hi, grid(cli, exp.position_points, 41)?);
    let energies: Vec<Option<f64>> = match (exp.ej_min_hz, exp.ej_max_hz) {
        (Some(a), Some(b)) => logspace(a, b, grid(cli, exp.ej_points, 31)?).into_iter().map(Some).collect(),
        (None, None) => vec![None],
        _ => {
            return Err(Error::Invalid {
                field: "experiment.ej_min_hz".into(),
                message: "ej_min_hz and ej_max_hz must be given together".into(),
            }
            .into())
        }
    };
    let settings = SweepSettings {
        modes: count,
        flux_rf: exp.flux_rf.unwrap_or(0.02),
        drive_frequency: 0.0,
    };
    let jobs: Vec<(Option<f64>, f64)> = energies
        .iter()
        .flat_map(|&ej| positions.iter().map(move |&x| (ej, x)))
        .collect();
    let points = jobs
        .par_iter()
        .map(|&(ej, x)| {
            let s = ej.map_or(*spec, |e| with_josephson_energy(spec, e)).with_junction_position(x);
            analyze_flux_point(&s, flux, &settings)
        })
        .collect::<kerrline::Result<Vec<_>>>()?;
    let base = sweep_table(&points, count);
    let mut header = vec!["position_m".to_string(), "x_over_l".into(), "ej_ghz".into()];
    header.extend(base.header);
    let rows = jobs
        .iter()
        .zip(&points)
        .zip(base.rows)
        .map(|((&(_, x), p), row)| {
            let mut r = vec![x, x / l, p.josephson_energy / 1e9];
            r.extend(row);
            r
        })
        .collect();
    let mut out = Artifacts::create(&cli.out)?;
    out.table("sweep_position.csv", &Table { header, rows })?;
    println!("swept {} positions x {} junction energies with {count} modes", positions.len(), energies.len());
    finish(
        cli,
        loaded,
        out,
        json!({
            "modes": count, "flux_phi0": flux, "position_min_m": x_lo, "position_max_m": x_hi,
            "position_points": positions.len(), "ej_hz": energies,
        }),
        json!({"points": points.len()}),
    )
}

fn sweep_length(cli: &Cli, loaded: &Loaded) -> Result<(), CliError> {
    let (spec, exp) = (&loaded.spec, &loaded.exp);
    let flux = exp.flux.unwrap_or(0.0);
    let hi = exp.half_length_max_m.unwrap_or(spec.half_length);
    let lo = exp.half_length_min_m.unwrap_or(1e-4);
    if !(lo > 0.0 && hi >= lo) {
        return Err(Error::Invalid {
            field: "experiment.half_length_min_m".into(),
            message: format!("need 0 < half_length_min_m <= half_length_max_m, got {lo} and {hi}"),
        }
        .into());
    }
    let lengths = logspace(2.0 * hi, 2.0 * lo, grid(cli, exp.half_length_points, 9)?);
    let points = length_sweep(spec, flux, &lengths)?;
    let mut out = Artifacts::create(&cli.out)?;
    out.table("sweep_length.csv", &length_table(&points))?;
    let last = points.last().expect("at least one length");
    println!(
        "shortest line {:.3e} m: w1/wp = {:.5}, K11/E_C,T = {:.5}",
        last.total_length,
        last.frequency_ratio(),
        last.kerr_ratio()
    );
    finish(
        cli,
        loaded,
        out,
        json!({"flux_phi0": flux, "total_lengths_m": lengths}),
        json!({
            "shortest_length_m": last.total_length,
            "frequency_ratio": last.frequency_ratio(),
            "kerr_ratio": last.kerr_ratio(),
        }),
    )
}

fn jpc(cli: &Cli, loaded: &Loaded) -> Result<(), CliError> {
    let (spec, exp) = (&loaded.spec, &loaded.exp);
    if !spec.junction.is_squid() {
        return Err(Error::NotASquid.into());
    }
    let count = mode_count(cli, exp, 3)?;
    let flux = exp.flux.unwrap_or(0.37);
    let settings = SweepSettings {
        modes: count,
        flux_rf: exp.flux_rf.unwrap_or(0.02),
        drive_frequency: 0.0,
    };
    let point = analyze_flux_point(spec, flux, &settings)?;
    let c = &point.couplings;
    let pump = point.pump.as_ref().expect("SQUID has pump amplitudes");

    let header: Vec<String> = ["m", "n", "f_m_ghz", "f_n_ghz", "k_mn_mhz", "g_mn_mhz"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, &m) in c.modes.iter().enumerate() {
        for (j, &n) in c.modes.iter().enumerate().skip(i) {
            rows.push(vec![
                m.to_string(),
                n.to_string(),
                fmt_f64(ghz(c.frequencies[i])),
                fmt_f64(ghz(c.frequencies[j])),
                fmt_f64(mhz(c.kerr[i][j])),
                fmt_f64(mhz(pump.two_photon[i][j])),
            ]);
        }
    }

    // Two-photon processes: ω'_m + ω'_n (m ≤ n) and |ω'_m − ω'_n| (m < n).
    let w = &c.shifted_frequencies;
    let mut processes = Vec::new();
    for i in 0..c.modes.len() {
        for j in i..c.modes.len() {
            processes.push((c.modes[i], c.modes[j], 1i8, w[i] + w[j]));
            if j > i {
                processes.push((c.modes[i], c.modes[j], -1i8, (w[i] - w[j]).abs()));
            }
        }
    }
    let det_header: Vec<String> = [
        "m", "n", "sign", "drive_ghz", "nearest_m", "nearest_n", "nearest_sign", "detuning_mhz",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut det_rows = Vec::new();
    for (k, &(m, n, s, wd)) in processes.iter().enumerate() {
        let nearest = processes
            .iter()
            .enumerate()
            .filter(|&(q, _)| q != k)
            .min_by(|a, b| (a.1 .3 - wd).abs().total_cmp(&(b.1 .3 - wd).abs()));
        let (nm, nn, ns, dw) = nearest.map_or((0, 0, 0, f64::NAN), |(_, p)| (p.0, p.1, p.2, p.3 - wd));
        det_rows.push(vec![
            m.to_string(),
            n.to_string(),
            s.to_string(),
            fmt_f64(ghz(wd)),
            nm.to_string(),
            nn.to_string(),
            ns.to_string(),
            fmt_f64(mhz(dw)),
        ]);
    }

    let mut out = Artifacts::create(&cli.out)?;
    out.rows("jpc_couplings.csv", &header, &rows)?;
    out.rows("jpc_detunings.csv", &det_header, &det_rows)?;
    let pairs: Vec<Value> = c
        .modes
        .iter()
        .enumerate()
        .flat_map(|(i, &m)| {
            c.modes.iter().enumerate().skip(i + 1).map(move |(j, &n)| (i, m, j, n))
        })
        .map(|(i, m, j, n)| json!({"m": m, "n": n, "g_mhz": mhz(pump.two_photon[i][j])}))
        .collect();
    let self_kerr: Vec<f64> = (0..c.modes.len()).map(|i| mhz(c.kerr[i][i])).collect();
    for p in &pairs {
        println!("g_{}{} = {:.3} MHz", p["m"], p["n"], p["g_mhz"].as_f64().unwrap_or(f64::NAN));
    }
    for (i, &m) in c.modes.iter().enumerate() {
        println!("K_{m}{m} = {:.4} MHz", self_kerr[i]);
    }
    finish(
        cli,
        loaded,
        out,
        json!({"modes": count, "flux_phi0": flux, "flux_rf": settings.flux_rf}),
        json!({"coupled_modes": c.modes, "g_mn": pairs, "self_kerr_mhz": self_kerr}),
    )
}

fn blockade(cli: &Cli, loaded: &Loaded) -> Result<(), CliError> {
    let (spec, exp) = (&loaded.spec, &loaded.exp);
    let fluxes = exp.blockade_fluxes.clone().unwrap_or_else(|| vec![exp.flux.unwrap_or(0.5)]);
    let cuts = fluxes.len();
    let focks = match cli.fock {
        Some(n) => vec![n; cuts],
        None => per_item("experiment.blockade_fock", exp.blockade_fock.clone(), exp.fock.unwrap_or(15), cuts)?,
    };
    let t_ends = per_item(
        "experiment.blockade_t_end_s",
        exp.blockade_t_end_s.clone(),
        exp.t_end_s.unwrap_or(1e-6),
        cuts,
    )?;
    let samples = exp.samples.unwrap_or(2000);
    let drive = TWO_PI * exp.drive_hz.unwrap_or(2e6);

    let params = fluxes
        .iter()
        .zip(&focks)
        .zip(&t_ends)
        .map(|((&flux, &fock), &t_end)| {
            let basis = find_modes(spec, flux, 1)?;
            let props = mode_properties(&basis)?;
            let kerr = nonlinear_couplings(&props)?.self_kerr(1);
            Ok(BlockadeParams {
                frequency: basis.modes[0].frequency,
                kerr,
                decay: decay_rates(&basis)[0],
                drive,
                t_end,
                samples,
                fock,
                frame: BlockadeFrame::Rotating,
                dt: None,
            })
        })
        .collect::<kerrline::Result<Vec<_>>>()?;
    let results = params
        .par_iter()
        .map(simulate_blockade)
        .collect::<kerrline::Result<Vec<_>>>()?;

    let mut out = Artifacts::create(&cli.out)?;
    let header: Vec<String> = [
        "cut", "flux_phi0", "k_mhz", "kappa_mhz", "k_over_kappa", "fock", "t_end_ns", "max_n", "steady_n",
        "ringing_peaks", "p1_peaks", "max_trace_drift", "max_hermiticity_error",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for (i, (r, &flux)) in results.iter().zip(&fluxes).enumerate() {
        out.table(&format!("blockade_cut{}.csv", i + 1), &r.trajectory.table())?;
        let n = &r.trajectory.mean_photon;
        // late-time mean over the second half of the window
        let tail = &n[n.len() / 2..];
        let steady = tail.iter().sum::<f64>() / tail.len() as f64;
        let ringing = count_peaks(n, 1.02 * steady);
        let p1_peaks = count_peaks(&r.trajectory.p1, 0.5);
        let p = &r.params;
        rows.push(vec![
            (i + 1).to_string(),
            fmt_f64(flux),
            fmt_f64(mhz(p.kerr)),
            fmt_f64(mhz(p.decay)),
            fmt_f64(p.kerr / p.decay),
            p.fock.to_string(),
            fmt_f64(p.t_end * 1e9),
            fmt_f64(r.max_photon_number()),
            fmt_f64(steady),
            ringing.to_string(),
            p1_peaks.to_string(),
            fmt_f64(r.trajectory.max_trace_drift),
            fmt_f64(r.trajectory.max_hermiticity_error),
        ]);
        println!(
            "cut {}: flux {flux}, K/kappa = {:.4}, max n = {:.4}, steady n = {:.4}, P1 peaks = {p1_peaks}, ringing peaks = {ringing}",
            i + 1,
            p.kerr / p.decay,
            r.max_photon_number(),
            steady
        );
        summary.push(json!({
            "cut": i + 1,
            "flux_phi0": flux,
            "k_over_kappa": p.kerr / p.decay,
            "max_n": r.max_photon_number(),
            "steady_n": steady,
            "ringing_peaks": ringing,
            "p1_peaks": p1_peaks,
            "dt_s": r.dt,
            "steps": r.trajectory.steps,
            "max_trace_drift": r.trajectory.max_trace_drift,
        }));
    }
    out.rows("blockade_summary.csv", &header, &rows)?;
    finish(
        cli,
        loaded,
        out,
        json!({"cuts": params, "drive_hz": drive / TWO_PI, "frame": "rotating"}),
        Value::Array(summary),
    )
}

fn cat(cli: &Cli, loaded: &Loaded) -> Result<(), CliError> {
    let (spec, exp) = (&loaded.spec, &loaded.exp);
    let flux_start = exp.flux_start.unwrap_or(0.3);
    let flux_peak = exp.flux_peak.unwrap_or(0.5);
    let alphas = exp.alpha.clone().unwrap_or_else(|| vec![2.0]);
    let fock = need_positive("--fock", cli.fock.or(exp.fock).unwrap_or(40))?;
    let count = mode_count(cli, exp, 2)?;
    let n_sched = grid(cli, exp.flux_points, 41)?;
    let (lo, hi) = (flux_start.min(flux_peak), flux_start.max(flux_peak));
    let settings = SweepSettings {
        modes: count,
        flux_rf: 0.0,
        drive_frequency: 0.0,
    };
    let schedule = kerr_schedule(&flux_sweep(spec, &linspace(lo, hi, n_sched), &settings)?, 1)?;
    let axis = symmetric_axis(exp.wigner_extent.unwrap_or(5.0), exp.wigner_points.unwrap_or(101));

    let params: Vec<CatParams> = alphas
        .iter()
        .map(|&alpha| CatParams {
            alpha,
            fock,
            flux_start,
            flux_peak,
            ramp: exp.t_ramp_s.unwrap_or(5e-9),
            phase_target: PI,
            constant_decay: exp.constant_kappa.unwrap_or(false),
            decay_scale: 1.0,
            samples: exp.samples.unwrap_or(200),
            dt: None,
        })
        .collect();
    let runs = params
        .par_iter()
        .map(|p| {
            let r = simulate_cat(&schedule, p)?;
            let w = wigner(&r.trajectory.final_state, &axis, &axis);
            Ok((r, w))
        })
        .collect::<kerrline::Result<Vec<_>>>()?;

    let mut out = Artifacts::create(&cli.out)?;
    let sched = Table {
        header: ["flux_phi0", "f_ghz", "k_mhz", "kappa_mhz"].iter().map(|s| s.to_string()).collect(),
        rows: (0..schedule.fluxes.len())
            .map(|i| {
                vec![
                    schedule.fluxes[i],
                    ghz(schedule.frequency[i]),
                    mhz(schedule.kerr[i]),
                    mhz(schedule.decay[i]),
                ]
            })
            .collect(),
    };
    out.table("cat_schedule.csv", &sched)?;

    let mut summary_rows = Vec::new();
    let mut summary = Vec::new();
    for (i, (r, w)) in runs.iter().enumerate() {
        let tag = i + 1;
        out.table(&format!("cat{tag}_trajectory.csv"), &r.trajectory.table())?;
        out.table(&format!("cat{tag}_wigner.csv"), &w.table())?;
        let pulse = Table {
            header: ["t_ns", "flux_phi0", "k_mhz"].iter().map(|s| s.to_string()).collect(),
            rows: r
                .trajectory
                .times
                .iter()
                .map(|&t| vec![t * 1e9, r.pulse.flux(t), mhz(schedule.kerr_at(r.pulse.flux(t)))])
                .collect(),
        };
        out.table(&format!("cat{tag}_pulse.csv"), &pulse)?;
        let purity = *r.trajectory.purity.last().expect("samples");
        summary_rows.push(vec![
            r.params.alpha,
            fock as f64,
            r.fidelity,
            r.tau_used * 1e9,
            r.pulse.plateau * 1e9,
            r.accumulated_phase,
            r.rotation_angle,
            purity,
            w.min(),
        ]);
        println!(
            "alpha {}: F = {:.5}, tau = {:.3} ns, phase = {:.6} rad, W_min = {:.4}",
            r.params.alpha,
            r.fidelity,
            r.tau_used * 1e9,
            r.accumulated_phase,
            w.min()
        );
        summary.push(json!({
            "alpha": r.params.alpha,
            "fidelity": r.fidelity,
            "tau_used_s": r.tau_used,
            "plateau_s": r.pulse.plateau,
            "accumulated_phase_rad": r.accumulated_phase,
            "rotation_angle_rad": r.rotation_angle,
            "final_purity": purity,
            "wigner_min": w.min(),
            "dt_s": r.dt,
            "steps": r.trajectory.steps,
            "max_trace_drift": r.trajectory.max_trace_drift,
        }));
    }
    out.table(
        "cat_summary.csv",
        &Table {
            header: [
                "alpha", "fock", "fidelity", "tau_used_ns", "plateau_ns", "accumulated_phase_rad",
                "rotation_angle_rad", "final_purity", "wigner_min",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            rows: summary_rows,
        },
    )?;
    finish(
        cli,
        loaded,
        out,
        json!({
            "runs": params,
            "schedule_modes": count,
            "schedule_points": n_sched,
            "k_start_mhz": mhz(schedule.kerr_at(flux_start)),
            "k_peak_mhz": mhz(schedule.kerr_at(flux_peak)),
            "kappa_peak_mhz": mhz(schedule.decay_at(flux_peak)),
            "wigner_axis": {"extent": axis.last(), "points": axis.len()},
        }),
        Value::Array(summary),
    )
}

fn ultrastrong(cli: &Cli, loaded: &Loaded) -> Result<(), CliError> {
    let (spec, exp) = (&loaded.spec, &loaded.exp);
    let range = (exp.flux_min.unwrap_or(0.2), exp.flux_max.unwrap_or(0.48));
    let n = grid(cli, exp.flux_points, 57)?;
    let x = avoided_crossing(spec, range, n)?;
    let eff = end_coupled_model(spec, x.crossing_flux)?;

    let half = find_modes(spec, 0.5, 2)?;
    let half_props = mode_properties(&half)?;
    let k11_half = nonlinear_couplings(&half_props)?.self_kerr(1);
    let eta_half = half_props[0].inductive_participation().unwrap_or(0.0);
    let ec = eff
        .provenance
        .iter()
        .find(|p| p.0 == "ec_hz")
        .map_or(f64::NAN, |p| p.1);

    let mut out = Artifacts::create(&cli.out)?;
    out.table("ultrastrong_crossing.csv", &crossing_table(&x.sweep))?;
    let header: Vec<String> = ["model", "flux_phi0", "f_r_ghz", "f_p_ghz", "g_mhz", "g_over_wp"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<String>> = [("exact_numeric", &x.report), ("end_coupled", &eff)]
        .iter()
        .map(|(name, r)| {
            vec![
                name.to_string(),
                fmt_f64(x.crossing_flux),
                fmt_f64(ghz(r.resonator_frequency)),
                fmt_f64(ghz(r.plasma_frequency)),
                fmt_f64(mhz(r.coupling)),
                fmt_f64(r.ratio),
            ]
        })
        .collect();
    out.rows("ultrastrong_models.csv", &header, &rows)?;
    println!(
        "crossing at flux {:.6}: g/wp = {:.4} (end-coupled model {:.4}); at flux 0.5 eta_l1 = {:.4}, K11/E_C = {:.4}",
        x.crossing_flux,
        x.report.ratio,
        eff.ratio,
        eta_half,
        k11_half / TWO_PI / ec
    );
    finish(
        cli,
        loaded,
        out,
        json!({"flux_min": range.0, "flux_max": range.1, "flux_points": n}),
        json!({
            "crossing_flux_phi0": x.crossing_flux,
            "g_over_wp": x.report.ratio,
            "exact": x.report,
            "end_coupled": eff,
            "half_flux": {"eta_l1": eta_half, "k11_mhz": mhz(k11_half), "ec_hz": ec},
        }),
    )
}
