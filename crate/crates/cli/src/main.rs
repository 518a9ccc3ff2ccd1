//! `qdisc`: evaluate q-special functions and kernels of the quantum-disc
//! radial calculus, run the spectral transform, and execute the library's
//! verification suites.

mod config;
mod emit;

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use qdisc_core::eigen::{lambda_eig, phi_l, psi_l, GreenKernel};
use qdisc_core::lattice::{l2_inner, Lattice, LatticeFunction, LatticeSample};
use qdisc_core::qspecial::{cfunc, qgamma, qpochhammer_finite, qpochhammer_infinite};
use qdisc_core::transform::{forward, inverse, plancherel_defect, SpectralFunction, SpectralGrid};
use qdisc_core::verify::{run_suite, Suite, VerifyParams};
use qdisc_core::{Error, SpectralSample};

use config::{ConfigFlags, OutputFormat, RunConfig};
use emit::{csv_table, emit, fmt_f64};

#[derive(Parser)]
#[command(name = "qdisc", version, about = "Radial harmonic analysis on the quantum disc")]
struct Cli {
    #[command(flatten)]
    flags: ConfigFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalKind {
    Pochhammer,
    Qgamma,
    Cfunc,
    Psi,
    Phi,
    Lambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    Forward,
    Inverse,
    Roundtrip,
    Plancherel,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one scalar quantity and print a JSON record
    Eval {
        #[arg(long, value_enum)]
        kind: EvalKind,
        /// Real part of the Pochhammer argument a
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a_re: f64,
        /// Imaginary part of the Pochhammer argument a
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a_im: f64,
        /// Finite Pochhammer length (infinite product when omitted)
        #[arg(long)]
        n: Option<usize>,
        /// Real part of the q-Gamma argument z
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        z_re: f64,
        /// Imaginary part of the q-Gamma argument z
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        z_im: f64,
        /// Evaluation point for psi (a real > q^2)
        #[arg(long)]
        x: Option<f64>,
        /// Lattice index j for phi (x = q^{-2j})
        #[arg(long, default_value_t = 0)]
        x_index: usize,
    },
    /// Emit a window of the Green kernel G(x_i, x_j, l)
    Green {
        /// Largest window index (emits all i, j <= i_max)
        #[arg(long, default_value_t = 10)]
        i_max: usize,
    },
    /// Run the spectral transform on a serialized function
    Transform {
        #[arg(long, value_enum)]
        direction: Direction,
        /// Input file: JSON lattice samples [{j,x,re,im}] or spectral samples
        /// [{k,rho,re,im}] depending on direction
        #[arg(long)]
        input: String,
    },
    /// Run a verification suite and emit its JSON report
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
}

enum CliError {
    Lib(Error),
    Parse(String),
    VerifyFailed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

fn error_record(e: &CliError) -> (i32, serde_json::Value) {
    match e {
        CliError::Lib(err) => {
            let code = match err {
                Error::NonConvergence { .. } => 3,
                _ => 2,
            };
            let name = match err {
                Error::NonConvergence { .. } => "NonConvergence",
                Error::PoleOfGamma => "PoleOfGamma",
                Error::PoleOfC => "PoleOfC",
                Error::SingularParameter { .. } => "SingularParameter",
                Error::CriticalLine { .. } => "CriticalLine",
                Error::NotOnLattice { .. } => "NotOnLattice",
                Error::ConfigError(_) => "ConfigError",
                _ => "Error",
            };
            (code, json!({"error": name, "message": err.to_string(), "code": code}))
        }
        CliError::Parse(msg) => (4, json!({"error": "ParseError", "message": msg, "code": 4})),
        CliError::VerifyFailed => {
            (1, json!({"error": "VerifyFailed", "message": "one or more checks failed", "code": 1}))
        }
    }
}

fn complex_record(v: Complex64) -> serde_json::Value {
    json!({"re": v.re, "im": v.im})
}

fn run_eval(
    cfg: &RunConfig,
    kind: EvalKind,
    a: Complex64,
    n: Option<usize>,
    z: Complex64,
    x: Option<f64>,
    x_index: usize,
) -> Result<(), CliError> {
    let d = cfg.deformation()?;
    let tol = cfg.tolerance()?;
    let l = Complex64::new(cfg.l_re, cfg.l_im);
    let record = match kind {
        EvalKind::Pochhammer => {
            let value = match n {
                Some(n) => qpochhammer_finite(a, cfg.q, n),
                None => qpochhammer_infinite(a, cfg.q, &tol)?,
            };
            json!({"kind": "pochhammer", "q": cfg.q, "a": complex_record(a),
                   "n": n, "value": complex_record(value)})
        }
        EvalKind::Qgamma => {
            let value = qgamma(z, cfg.q * cfg.q, &tol)?;
            json!({"kind": "qgamma", "q": cfg.q, "z": complex_record(z),
                   "value": complex_record(value)})
        }
        EvalKind::Cfunc => {
            let value = cfunc(l, cfg.q, &tol)?;
            json!({"kind": "cfunc", "q": cfg.q, "l": complex_record(l),
                   "value": complex_record(value)})
        }
        EvalKind::Psi => {
            let x = x.ok_or_else(|| {
                CliError::Lib(Error::ConfigError("--x is required for kind psi".into()))
            })?;
            let value = psi_l(x, l, &d, &tol)?;
            json!({"kind": "psi", "q": cfg.q, "l": complex_record(l), "x": x,
                   "value": complex_record(value)})
        }
        EvalKind::Phi => {
            let lat = Lattice::new(&d, x_index.max(1));
            let x = lat.point(x_index)?;
            let value = phi_l(x, l, &d)?;
            json!({"kind": "phi", "q": cfg.q, "l": complex_record(l),
                   "x_index": x_index, "x": x, "value": complex_record(value)})
        }
        EvalKind::Lambda => {
            let value = lambda_eig(l, &d);
            json!({"kind": "lambda", "q": cfg.q, "l": complex_record(l),
                   "value": complex_record(value)})
        }
    };
    let mut text = serde_json::to_string(&record).expect("serialize");
    text.push('\n');
    emit(cfg.output_path.as_deref(), &text)?;
    Ok(())
}

fn run_green(cfg: &RunConfig, i_max: usize) -> Result<(), CliError> {
    let d = cfg.deformation()?;
    let tol = cfg.tolerance()?;
    let l = Complex64::new(cfg.l_re, cfg.l_im);
    if i_max > cfg.lattice_j {
        return Err(CliError::Lib(Error::ConfigError(format!(
            "window index {i_max} exceeds lattice_j {}",
            cfg.lattice_j
        ))));
    }
    let lat = Lattice::new(&d, cfg.lattice_j);
    let kernel = GreenKernel::new(l, &d, &tol)?;
    let window = kernel.window(&lat, i_max)?;
    let text = match cfg.output_format {
        OutputFormat::Json => {
            let entries: Vec<_> = window
                .iter()
                .enumerate()
                .flat_map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(move |(j, v)| json!({"i": i, "j": j, "re": v.re, "im": v.im}))
                })
                .collect();
            let mut s = serde_json::to_string(&json!({
                "kind": "green_window", "q": cfg.q, "l": complex_record(l),
                "i_max": i_max, "entries": entries
            }))
            .expect("serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = window
                .iter()
                .enumerate()
                .flat_map(|(i, row)| {
                    row.iter().enumerate().map(move |(j, v)| {
                        vec![i.to_string(), j.to_string(), fmt_f64(v.re), fmt_f64(v.im)]
                    })
                })
                .collect();
            csv_table(&["i", "j", "re", "im"], &rows)
        }
    };
    emit(cfg.output_path.as_deref(), &text)?;
    Ok(())
}

fn read_lattice_input(path: &str, lat: &Arc<Lattice>) -> Result<LatticeFunction, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
    let samples: Vec<LatticeSample> = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{path} is not a lattice-sample array: {e}")))?;
    let mut vals = vec![Complex64::new(0.0, 0.0); lat.len()];
    for s in samples {
        if s.j >= vals.len() {
            return Err(CliError::Parse(format!(
                "sample index {} exceeds lattice_j {}",
                s.j,
                lat.j_max()
            )));
        }
        vals[s.j] = Complex64::new(s.re, s.im);
    }
    Ok(LatticeFunction::new(lat.clone(), vals)?)
}

fn read_spectral_input(path: &str, grid: &Arc<SpectralGrid>) -> Result<SpectralFunction, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
    let samples: Vec<SpectralSample> = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{path} is not a spectral-sample array: {e}")))?;
    let mut vals = vec![Complex64::new(0.0, 0.0); grid.len()];
    for s in samples {
        if s.k >= vals.len() {
            return Err(CliError::Parse(format!(
                "sample index {} exceeds grid size {}",
                s.k,
                grid.len()
            )));
        }
        vals[s.k] = Complex64::new(s.re, s.im);
    }
    Ok(SpectralFunction::new(grid.clone(), vals)?)
}

fn lattice_text(cfg: &RunConfig, f: &LatticeFunction) -> String {
    match cfg.output_format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string(&f.samples()).expect("serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = f
                .samples()
                .iter()
                .map(|s| vec![s.j.to_string(), fmt_f64(s.x), fmt_f64(s.re), fmt_f64(s.im)])
                .collect();
            csv_table(&["j", "x", "re", "im"], &rows)
        }
    }
}

fn spectral_text(cfg: &RunConfig, fh: &SpectralFunction) -> String {
    match cfg.output_format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string(&fh.samples()).expect("serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = fh
                .samples()
                .iter()
                .map(|s| vec![s.k.to_string(), fmt_f64(s.rho), fmt_f64(s.re), fmt_f64(s.im)])
                .collect();
            csv_table(&["k", "rho", "re", "im"], &rows)
        }
    }
}

fn run_transform(cfg: &RunConfig, direction: Direction, input: &str) -> Result<(), CliError> {
    let d = cfg.deformation()?;
    let tol = cfg.tolerance()?;
    let lat = Arc::new(Lattice::new(&d, cfg.lattice_j));
    let grid = Arc::new(SpectralGrid::new(&d, cfg.grid_n)?);
    match direction {
        Direction::Forward => {
            let f = read_lattice_input(input, &lat)?;
            let fh = forward(&f, &grid);
            emit(cfg.output_path.as_deref(), &spectral_text(cfg, &fh))?;
        }
        Direction::Inverse => {
            let fh = read_spectral_input(input, &grid)?;
            let f = inverse(&fh, &lat, &tol)?;
            emit(cfg.output_path.as_deref(), &lattice_text(cfg, &f))?;
        }
        Direction::Roundtrip => {
            let f = read_lattice_input(input, &lat)?;
            let back = inverse(&forward(&f, &grid), &lat, &tol)?;
            let maxerr = f
                .values()
                .iter()
                .zip(back.values())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            let mut text = lattice_text(cfg, &back);
            let metrics =
                serde_json::to_string(&json!({"roundtrip_maxerr": maxerr})).expect("serialize");
            text.push_str(&metrics);
            text.push('\n');
            emit(cfg.output_path.as_deref(), &text)?;
        }
        Direction::Plancherel => {
            let f = read_lattice_input(input, &lat)?;
            let defect = plancherel_defect(&f, &grid, &tol)?;
            let norm_sq = l2_inner(&f, &f)?.re;
            let mut text = serde_json::to_string(
                &json!({"plancherel_defect": defect, "norm_sq": norm_sq, "grid_n": cfg.grid_n}),
            )
            .expect("serialize");
            text.push('\n');
            emit(cfg.output_path.as_deref(), &text)?;
        }
    }
    Ok(())
}

fn run_verify(cfg: &RunConfig, suite: Suite) -> Result<(), CliError> {
    let params = VerifyParams {
        deformation: cfg.deformation()?,
        j_max: cfg.lattice_j,
        grid_n: cfg.grid_n,
        tol: cfg.tolerance()?,
    };
    let report = run_suite(suite, &params)?;
    let mut text = serde_json::to_string_pretty(&report).expect("serialize");
    text.push('\n');
    emit(cfg.output_path.as_deref(), &text)?;
    if report.pass {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.flags)?;
    match cli.command {
        Command::Eval { kind, a_re, a_im, n, z_re, z_im, x, x_index } => run_eval(
            &cfg,
            kind,
            Complex64::new(a_re, a_im),
            n,
            Complex64::new(z_re, z_im),
            x,
            x_index,
        ),
        Command::Green { i_max } => run_green(&cfg, i_max),
        Command::Transform { direction, input } => run_transform(&cfg, direction, &input),
        Command::Verify { suite } => run_verify(&cfg, suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, record) = error_record(&e);
            eprintln!("{}", serde_json::to_string(&record).expect("serialize"));
            ExitCode::from(code as u8)
        }
    }
}
