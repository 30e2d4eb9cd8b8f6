//! TOML configuration file schema and flag/file/default resolution.
//!
//! Precedence: command-line flags override file values, which override the
//! built-in defaults (the square-channel reference parameters).

use crate::AppError;
use edgeplasma::Domain;
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Built-in defaults (reference channel).
pub const DEFAULT_L1: f64 = 2.0;
pub const DEFAULT_L2: f64 = 2.0;
pub const DEFAULT_NU: f64 = 9.0e-4;
pub const DEFAULT_T_PLUS: f64 = 0.26;
pub const DEFAULT_T_MINUS: f64 = 0.1;
pub const DEFAULT_T_END: f64 = 100.0;
pub const DEFAULT_IC_KIND: &str = "eigenmode";
pub const DEFAULT_IC_AMPLITUDE: f64 = 1e-3;
pub const DEFAULT_IC_SEED: u64 = 7;
pub const DEFAULT_IC_K2: u32 = 1;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub domain: Option<DomainSection>,
    pub integrator: Option<IntegratorSection>,
    pub ic: Option<IcSection>,
    pub output: Option<OutputSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    #[serde(rename = "L1")]
    pub l1: Option<f64>,
    #[serde(rename = "L2")]
    pub l2: Option<f64>,
    pub nu: Option<f64>,
    #[serde(rename = "Tplus")]
    pub t_plus: Option<f64>,
    #[serde(rename = "Tminus")]
    pub t_minus: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcSection {
    /// `zero`, `eigenmode`, or `random`.
    pub kind: Option<String>,
    pub amplitude: Option<f64>,
    pub seed: Option<u64>,
    pub k2: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, AppError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            AppError::Usage(format!("cannot read config file {}: {e}", path.display()))
        })?;
        toml::from_str(&text)
            .map_err(|e| AppError::Usage(format!("invalid config file {}: {e}", path.display())))
    }

    fn domain(&self) -> DomainSection {
        DomainSection {
            l1: self.domain.as_ref().and_then(|d| d.l1),
            l2: self.domain.as_ref().and_then(|d| d.l2),
            nu: self.domain.as_ref().and_then(|d| d.nu),
            t_plus: self.domain.as_ref().and_then(|d| d.t_plus),
            t_minus: self.domain.as_ref().and_then(|d| d.t_minus),
        }
    }

    pub fn dt(&self) -> Option<f64> {
        self.integrator.as_ref().and_then(|i| i.dt)
    }

    pub fn t_end(&self) -> Option<f64> {
        self.integrator.as_ref().and_then(|i| i.t_end)
    }

    pub fn ic_kind(&self) -> Option<String> {
        self.ic.as_ref().and_then(|i| i.kind.clone())
    }

    pub fn ic_amplitude(&self) -> Option<f64> {
        self.ic.as_ref().and_then(|i| i.amplitude)
    }

    pub fn ic_seed(&self) -> Option<u64> {
        self.ic.as_ref().and_then(|i| i.seed)
    }

    pub fn ic_k2(&self) -> Option<u32> {
        self.ic.as_ref().and_then(|i| i.k2)
    }

    pub fn out_dir(&self) -> Option<PathBuf> {
        self.output.as_ref().and_then(|o| o.dir.clone())
    }
}

/// Resolve the domain parameters from flags (`Some` wins), file, defaults.
pub fn resolve_domain(
    l1: Option<f64>,
    l2: Option<f64>,
    nu: Option<f64>,
    t_plus: Option<f64>,
    t_minus: Option<f64>,
    file: &FileConfig,
) -> Result<Domain, AppError> {
    let f = file.domain();
    let l1 = l1.or(f.l1).unwrap_or(DEFAULT_L1);
    let l2 = l2.or(f.l2).unwrap_or(DEFAULT_L2);
    let nu = nu.or(f.nu).unwrap_or(DEFAULT_NU);
    let t_plus = t_plus.or(f.t_plus).unwrap_or(DEFAULT_T_PLUS);
    let t_minus = t_minus.or(f.t_minus).unwrap_or(DEFAULT_T_MINUS);
    Domain::new(l1, l2, nu, t_plus, t_minus)
        .map_err(|e| AppError::Usage(format!("invalid domain parameters: {e}")))
}

/// Parse a `start:end:count` range specification into the sample points.
pub fn parse_range(spec: &str, what: &str) -> Result<Vec<f64>, AppError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(AppError::Usage(format!(
            "{what} must be start:end:count, got '{spec}'"
        )));
    }
    let a: f64 = parts[0]
        .parse()
        .map_err(|_| AppError::Usage(format!("{what}: bad start '{}'", parts[0])))?;
    let b: f64 = parts[1]
        .parse()
        .map_err(|_| AppError::Usage(format!("{what}: bad end '{}'", parts[1])))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| AppError::Usage(format!("{what}: bad count '{}'", parts[2])))?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(AppError::Usage(format!(
            "{what}: need finite endpoints and count >= 1"
        )));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n).map(|i| a + step * i as f64).collect())
}
