//! Run configuration: built-in defaults, optional JSON file via the
//! QDISC_CONFIG environment variable, and command-line flag overrides, in
//! increasing precedence.

use clap::Args;
use serde::{Deserialize, Serialize};

use qdisc_core::{Deformation, Error, SeriesTolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub q: f64,
    pub l_re: f64,
    pub l_im: f64,
    pub lattice_j: usize,
    pub grid_n: usize,
    pub abs_tol: f64,
    pub max_terms: usize,
    pub output_format: OutputFormat,
    pub output_path: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            q: 0.5,
            l_re: 0.0,
            l_im: 0.0,
            lattice_j: 60,
            grid_n: 4096,
            abs_tol: 1e-14,
            max_terms: 10_000,
            output_format: OutputFormat::Json,
            output_path: None,
        }
    }
}

/// Flag-level overrides shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct ConfigFlags {
    /// Deformation parameter q in (0, 1)
    #[arg(long, global = true)]
    pub q: Option<f64>,
    /// Real part of the spectral parameter l
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub l_re: Option<f64>,
    /// Imaginary part of the spectral parameter l
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub l_im: Option<f64>,
    /// Largest lattice index J
    #[arg(long, global = true)]
    pub lattice_j: Option<usize>,
    /// Number of spectral quadrature panels
    #[arg(long, global = true)]
    pub grid_n: Option<usize>,
    /// Absolute truncation tolerance for series
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Series term budget
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Output file (stdout when omitted); written atomically
    #[arg(long, global = true)]
    pub output: Option<String>,
}

impl RunConfig {
    /// defaults < QDISC_CONFIG file < flags
    pub fn resolve(flags: &ConfigFlags) -> Result<Self, Error> {
        let mut cfg = RunConfig::default();
        if let Ok(path) = std::env::var("QDISC_CONFIG") {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                Error::ConfigError(format!("cannot read QDISC_CONFIG file {path}: {e}"))
            })?;
            cfg = serde_json::from_str(&text).map_err(|e| {
                Error::ConfigError(format!("invalid JSON in QDISC_CONFIG file {path}: {e}"))
            })?;
        }
        if let Some(q) = flags.q {
            cfg.q = q;
        }
        if let Some(v) = flags.l_re {
            cfg.l_re = v;
        }
        if let Some(v) = flags.l_im {
            cfg.l_im = v;
        }
        if let Some(v) = flags.lattice_j {
            cfg.lattice_j = v;
        }
        if let Some(v) = flags.grid_n {
            cfg.grid_n = v;
        }
        if let Some(v) = flags.abs_tol {
            cfg.abs_tol = v;
        }
        if let Some(v) = flags.max_terms {
            cfg.max_terms = v;
        }
        if let Some(v) = flags.format {
            cfg.output_format = v;
        }
        if let Some(v) = &flags.output {
            cfg.output_path = Some(v.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), Error> {
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::ConfigError(format!("q must be in (0, 1), got {}", self.q)));
        }
        if self.lattice_j < 8 {
            return Err(Error::ConfigError(format!(
                "lattice_j must be at least 8, got {}",
                self.lattice_j
            )));
        }
        if self.grid_n < 16 {
            return Err(Error::ConfigError(format!(
                "grid_n must be at least 16, got {}",
                self.grid_n
            )));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::ConfigError(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        Ok(())
    }

    pub fn deformation(&self) -> Result<Deformation, Error> {
        Deformation::new(self.q)
    }

    pub fn tolerance(&self) -> Result<SeriesTolerance, Error> {
        SeriesTolerance::new(self.abs_tol, self.max_terms)
    }
}
