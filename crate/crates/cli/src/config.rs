//! Experiment configuration: defaults, optional JSON file, command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use berezin_core::range::{GridSpec, VERDICT_GRID, VERDICT_PAIRS};
use berezin_core::{Automorphism, DiskPoint, SpaceParams, SymbolExpr};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Toeplitz sweeps integrate at every grid point, so they default to a
/// lighter grid than the closed-form operators.
pub const TOEPLITZ_GRID: GridSpec = GridSpec {
    n_radii: 40,
    n_angles: 64,
    r_max: 0.95,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub n_r: usize,
    pub n_theta: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            n_r: berezin_core::quadrature::DEFAULT_N_R,
            n_theta: berezin_core::quadrature::DEFAULT_N_THETA,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Outputs {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OperatorConfig {
    Toeplitz { symbol: SymbolExpr },
    Weyl { beta: [f64; 2], eta: [f64; 2] },
    Composition { beta: [f64; 2], eta: [f64; 2] },
}

/// Fully resolved experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub gamma: f64,
    pub operator: OperatorConfig,
    pub grid: GridSpec,
    pub quad: QuadSpec,
    pub outputs: Outputs,
    pub seed: u64,
    pub pairs: usize,
}

/// Optional JSON file; every field may be overridden by a flag.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub gamma: Option<f64>,
    pub symbol: Option<serde_json::Value>,
    pub beta: Option<[f64; 2]>,
    pub eta: Option<[f64; 2]>,
    pub grid: Option<GridSpec>,
    pub quad: Option<QuadSpec>,
    #[serde(default)]
    pub outputs: Outputs,
    pub seed: Option<u64>,
    pub pairs: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Toeplitz,
    Weyl,
    Composition,
}

/// Values taken from the command line.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub gamma: Option<f64>,
    pub beta: Option<Complex64>,
    pub eta: Option<Complex64>,
    pub symbol: Option<String>,
    pub grid: Option<GridSpec>,
    pub quad: Option<QuadSpec>,
    pub outputs: Outputs,
    pub seed: Option<u64>,
    pub pairs: Option<usize>,
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re or re,im, got {s:?}")),
    }
}

/// `n_radii,n_angles,r_max`.
pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [nr, na, rmax] => Ok(GridSpec {
            n_radii: nr.parse().map_err(|e| format!("n_radii {nr:?}: {e}"))?,
            n_angles: na.parse().map_err(|e| format!("n_angles {na:?}: {e}"))?,
            r_max: rmax.parse().map_err(|e| format!("r_max {rmax:?}: {e}"))?,
        }),
        _ => Err(format!("expected nr,na,rmax, got {s:?}")),
    }
}

/// `n_r,n_theta`.
pub fn parse_quad(s: &str) -> Result<QuadSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [nr, nt] => Ok(QuadSpec {
            n_r: nr.parse().map_err(|e| format!("n_r {nr:?}: {e}"))?,
            n_theta: nt.parse().map_err(|e| format!("n_theta {nt:?}: {e}"))?,
        }),
        _ => Err(format!("expected nr,ntheta, got {s:?}")),
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl ExperimentConfig {
    /// Flags override the file, which overrides defaults.
    pub fn resolve(kind: Kind, file: ConfigFile, flags: Flags) -> Result<Self, CliError> {
        let gamma = flags.gamma.or(file.gamma).unwrap_or(0.0);
        let default_grid = match kind {
            Kind::Toeplitz => TOEPLITZ_GRID,
            Kind::Weyl | Kind::Composition => VERDICT_GRID,
        };
        let operator = match kind {
            Kind::Toeplitz => {
                let symbol = match (flags.symbol, file.symbol) {
                    (Some(text), _) => SymbolExpr::from_json(&text),
                    (None, Some(v)) => SymbolExpr::from_json(&v.to_string()),
                    (None, None) => {
                        return Err(CliError::Config("toeplitz needs --symbol or a symbol in the config file".into()))
                    }
                }
                .map_err(|e| CliError::Config(e.to_string()))?;
                OperatorConfig::Toeplitz { symbol }
            }
            Kind::Weyl | Kind::Composition => {
                let beta = flags.beta.map(pair).or(file.beta).unwrap_or([0.0, 0.0]);
                let eta = flags.eta.map(pair).or(file.eta).unwrap_or([1.0, 0.0]);
                if kind == Kind::Weyl {
                    OperatorConfig::Weyl { beta, eta }
                } else {
                    OperatorConfig::Composition { beta, eta }
                }
            }
        };
        let merge = |flag: Option<PathBuf>, file: Option<PathBuf>| flag.or(file);
        let cfg = Self {
            gamma,
            operator,
            grid: flags.grid.or(file.grid).unwrap_or(default_grid),
            quad: flags.quad.or(file.quad).unwrap_or_default(),
            outputs: Outputs {
                csv: merge(flags.outputs.csv, file.outputs.csv),
                json: merge(flags.outputs.json, file.outputs.json),
                svg: merge(flags.outputs.svg, file.outputs.svg),
            },
            seed: flags.seed.or(file.seed).unwrap_or(0),
            pairs: flags.pairs.or(file.pairs).unwrap_or(VERDICT_PAIRS),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |e: berezin_core::Error| CliError::Config(e.to_string());
        self.params()?;
        self.grid.validate().map_err(bad)?;
        if self.quad.n_r == 0 || self.quad.n_theta < 4 {
            return Err(CliError::Config(format!(
                "quadrature needs n_r >= 1 and n_theta >= 4, got {},{}",
                self.quad.n_r, self.quad.n_theta
            )));
        }
        if self.pairs == 0 {
            return Err(CliError::Config("pairs must be positive".into()));
        }
        if let OperatorConfig::Weyl { .. } | OperatorConfig::Composition { .. } = self.operator {
            self.automorphism()?;
        }
        Ok(())
    }

    pub fn params(&self) -> Result<SpaceParams, CliError> {
        SpaceParams::new(self.gamma).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn automorphism(&self) -> Result<Automorphism, CliError> {
        let (beta, eta) = match self.operator {
            OperatorConfig::Weyl { beta, eta } | OperatorConfig::Composition { beta, eta } => (beta, eta),
            OperatorConfig::Toeplitz { .. } => {
                return Err(CliError::Config("toeplitz experiments have no automorphism".into()))
            }
        };
        let beta = DiskPoint::new(complex(beta)).map_err(|e| CliError::Config(format!("beta: {e}")))?;
        // typed decimals such as 0.6,0.8 are unimodular only up to rounding
        let mut eta = complex(eta);
        if (eta.norm() - 1.0).abs() <= 1e-9 {
            eta /= eta.norm();
        }
        Automorphism::new(beta, eta).map_err(|e| CliError::Config(format!("eta: {e}")))
    }
}
