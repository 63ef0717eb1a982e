//! `berezin`: sample Berezin ranges, run verification suites, dump rules.

mod config;
mod svg;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use berezin_core::composition::{comp_berezin, comp_lower_bound, weyl_ber_formula, weyl_berezin, weyl_lower_bound, WeylOperator};
use berezin_core::quadrature::{disk_rule, split_disk_rule};
use berezin_core::range::{convexity_defect, sample_range, GridSpec, RangeSample};
use berezin_core::toeplitz::{berezin_toeplitz_quad, rule_at};
use berezin_core::verify::{run_suite, Suite};
use berezin_core::{Error, SpaceParams, VERSION};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use config::{parse_complex, parse_grid, parse_quad, ConfigFile, ExperimentConfig, Flags, Kind, OperatorConfig, Outputs, QuadSpec};

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or unusable output path (exit 2).
    Config(String),
    /// A numerical routine failed (exit 3).
    Numeric(String),
    /// A verification check failed (exit 1).
    Check(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numeric(m) | CliError::Check(m) => m,
        }
    }
}

fn numeric(e: Error) -> CliError {
    match e {
        Error::Numeric { module, detail, point } => CliError::Numeric(match point {
            Some(z) => format!("numeric failure in {module} at w = {z}: {detail}"),
            None => format!("numeric failure in {module}: {detail}"),
        }),
        other => CliError::Numeric(other.to_string()),
    }
}

#[derive(Parser, Debug)]
#[command(name = "berezin", version, about = "Berezin ranges of Toeplitz and composition operators on weighted Bergman spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// JSON experiment file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Weight exponent γ > -1.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// Sampling grid `n_radii,n_angles,r_max`.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Option<GridSpec>,
    /// Base quadrature resolution `n_r,n_theta`.
    #[arg(long, value_parser = parse_quad)]
    quad: Option<QuadSpec>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    /// Seed for midpoint pair selection.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of midpoint pairs.
    #[arg(long)]
    pairs: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct MapArgs {
    /// `re,im` or `re`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    beta: Option<Complex64>,
    /// Unimodular rotation, `re,im` or `re`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    eta: Option<Complex64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Berezin range of a Toeplitz operator.
    Toeplitz {
        #[command(flatten)]
        common: Common,
        /// Symbol as JSON, e.g. '{"terms":[[1,0,1.0,0.0]]}' or '{"catalog":"modsq"}'.
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Berezin range of the Weyl-type operator k̂_β·(f∘ψ_{β,η}).
    Weyl {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        map: MapArgs,
    },
    /// Berezin range of the composition operator f ↦ f∘ψ_{β,η}.
    Comp {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        map: MapArgs,
    },
    /// Run a verification suite and report each named check.
    Verify {
        #[arg(default_value = "all", value_parser = ["all", "toeplitz", "weyl", "composition", "convexity"])]
        suite: String,
        #[arg(long)]
        out_json: Option<PathBuf>,
    },
    /// Print the radial Gauss-Jacobi rule for a weight.
    RuleDump {
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, value_parser = parse_quad)]
        quad: Option<QuadSpec>,
        /// Radial break |z| = split for discontinuous symbols.
        #[arg(long)]
        split: Option<f64>,
        #[arg(long)]
        out_json: Option<PathBuf>,
    },
}

fn flags(common: &Common, map: Option<&MapArgs>, symbol: Option<String>) -> Flags {
    Flags {
        gamma: common.gamma,
        beta: map.and_then(|m| m.beta),
        eta: map.and_then(|m| m.eta),
        symbol,
        grid: common.grid,
        quad: common.quad,
        outputs: Outputs {
            csv: common.out_csv.clone(),
            json: common.out_json.clone(),
            svg: common.out_svg.clone(),
        },
        seed: common.seed,
        pairs: common.pairs,
    }
}

fn resolve(kind: Kind, common: &Common, fl: Flags) -> Result<ExperimentConfig, CliError> {
    let file = match &common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    ExperimentConfig::resolve(kind, file, fl)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn finish(mut w: BufWriter<File>, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    w.write_all(bytes)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn sample(cfg: &ExperimentConfig, p: SpaceParams) -> Result<RangeSample, CliError> {
    match &cfg.operator {
        OperatorConfig::Toeplitz { symbol } => {
            let cache = berezin_core::quadrature::RuleCache::new(p);
            let (n_r, n_theta) = (cfg.quad.n_r, cfg.quad.n_theta);
            sample_range(
                |w| {
                    let rule = rule_at(symbol, w, &cache, n_r, n_theta)?;
                    berezin_toeplitz_quad(symbol, w, p, &rule)
                },
                cfg.grid,
            )
        }
        OperatorConfig::Weyl { .. } => {
            let a = cfg.automorphism()?;
            let op = WeylOperator::new(a.beta(), a.eta(), p).map_err(|e| CliError::Config(e.to_string()))?;
            sample_range(|w| Ok(weyl_berezin(&op, w)), cfg.grid)
        }
        OperatorConfig::Composition { .. } => {
            let a = cfg.automorphism()?;
            sample_range(|w| comp_berezin(&a, p, w), cfg.grid)
        }
    }
    .map_err(numeric)
}

fn experiment(kind: Kind, cfg: ExperimentConfig) -> Result<Value, CliError> {
    // open every output first so a bad path fails before any work
    let csv = cfg.outputs.csv.as_ref().map(|p| create(p).map(|w| (w, p.clone()))).transpose()?;
    let js = cfg.outputs.json.as_ref().map(|p| create(p).map(|w| (w, p.clone()))).transpose()?;
    let sv = cfg.outputs.svg.as_ref().map(|p| create(p).map(|w| (w, p.clone()))).transpose()?;

    let p = cfg.params()?;
    let s = sample(&cfg, p)?;
    let report = convexity_defect(&s, cfg.pairs, cfg.seed).map_err(numeric)?;
    let values = s.values();

    let fold = |f: fn(&Complex64) -> f64, max: bool| {
        values.iter().map(f).fold(if max { f64::NEG_INFINITY } else { f64::INFINITY }, |a, b| {
            if max {
                a.max(b)
            } else {
                a.min(b)
            }
        })
    };
    let mut out = json!({
        "version": VERSION,
        "command": match kind { Kind::Toeplitz => "toeplitz", Kind::Weyl => "weyl", Kind::Composition => "comp" },
        "config": cfg,
        "report": report,
        "summary": {
            "n_points": values.len(),
            "min_re": fold(|v| v.re, false),
            "max_re": fold(|v| v.re, true),
            "min_im": fold(|v| v.im, false),
            "max_im": fold(|v| v.im, true),
            "min_modulus": fold(|v| v.norm(), false),
            "max_modulus": fold(|v| v.norm(), true),
        },
    });

    match kind {
        Kind::Weyl => {
            let a = cfg.automorphism()?;
            let max = fold(|v| v.norm(), true);
            // ties along a diameter resolve to the point nearest the origin
            let arg = s
                .points
                .iter()
                .filter(|(_, v)| v.norm() >= max * (1.0 - 1e-12))
                .min_by(|x, y| x.0.norm().total_cmp(&y.0.norm()))
                .map(|(w, _)| w.value())
                .unwrap_or_default();
            out["ber"] = json!(max);
            out["ber_argmax"] = json!([arg.re, arg.im]);
            if (a.eta() - Complex64::new(1.0, 0.0)).norm() == 0.0 {
                out["ber_formula"] = json!(weyl_ber_formula(a.beta(), p));
            }
            let ok = s.points.iter().all(|(w, v)| v.norm() > weyl_lower_bound(a.beta(), *w, p));
            out["above_lower_bound"] = json!(ok);
        }
        Kind::Composition => {
            let ok = s.points.iter().all(|(w, v)| v.norm() > comp_lower_bound(*w, p));
            out["above_lower_bound"] = json!(ok);
        }
        Kind::Toeplitz => {}
    }

    if let Some((w, path)) = csv {
        let text = s.to_csv_string().map_err(numeric)?;
        finish(w, &path, text.as_bytes())?;
    }
    if let Some((w, path)) = sv {
        let title = format!("{} γ={} verdict={}", out["command"].as_str().unwrap_or(""), cfg.gamma, report.verdict);
        finish(w, &path, svg::render(&values, &title).as_bytes())?;
    }
    if let Some((w, path)) = js {
        finish(w, &path, serde_json::to_string_pretty(&out).expect("report serializes").as_bytes())?;
    }
    Ok(out)
}

fn verify(suite: &str, out_json: Option<PathBuf>) -> Result<Value, CliError> {
    let suite: Suite = suite.parse().map_err(|e: Error| CliError::Config(e.to_string()))?;
    let file = out_json.as_ref().map(|p| create(p).map(|w| (w, p.clone()))).transpose()?;
    let report = run_suite(suite);
    let value = serde_json::to_value(&report).expect("report serializes");
    if let Some((w, path)) = file {
        finish(w, &path, serde_json::to_string_pretty(&value).expect("json").as_bytes())?;
    }
    emit(&value);
    if report.passed {
        Ok(value)
    } else {
        Err(CliError::Check(format!("failed checks: {}", report.failures().join(", "))))
    }
}

fn rule_dump(gamma: f64, quad: Option<QuadSpec>, split: Option<f64>, out_json: Option<PathBuf>) -> Result<Value, CliError> {
    let p = SpaceParams::new(gamma).map_err(|e| CliError::Config(e.to_string()))?;
    let quad = quad.unwrap_or_default();
    let file = out_json.as_ref().map(|q| create(q).map(|w| (w, q.clone()))).transpose()?;
    let rule = match split {
        Some(r) => split_disk_rule(quad.n_r, quad.n_theta, p, r),
        None => disk_rule(quad.n_r, quad.n_theta, p),
    }
    .map_err(|e| match e {
        Error::Argument { .. } | Error::Domain { .. } => CliError::Config(e.to_string()),
        other => numeric(other),
    })?;
    let radial = rule.radial();
    let value = json!({
        "version": VERSION,
        "config": { "gamma": gamma, "quad": quad, "split": split },
        "variable": "t = |z|^2",
        "n_theta": rule.n_theta(),
        "nodes": radial.nodes(),
        "weights": radial.weights(),
        "mass": radial.weights().iter().sum::<f64>(),
    });
    if let Some((w, path)) = file {
        finish(w, &path, serde_json::to_string_pretty(&value).expect("json").as_bytes())?;
    }
    Ok(value)
}

/// Print to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(v: &Value) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json"));
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (kind, cfg) = match cli.command {
        Command::Verify { suite, out_json } => return verify(&suite, out_json).map(|_| ()),
        Command::RuleDump { gamma, quad, split, out_json } => {
            let v = rule_dump(gamma, quad, split, out_json)?;
            emit(&v);
            return Ok(());
        }
        Command::Toeplitz { common, symbol } => {
            (Kind::Toeplitz, resolve(Kind::Toeplitz, &common, flags(&common, None, symbol))?)
        }
        Command::Weyl { common, map } => (Kind::Weyl, resolve(Kind::Weyl, &common, flags(&common, Some(&map), None))?),
        Command::Comp { common, map } => (
            Kind::Composition,
            resolve(Kind::Composition, &common, flags(&common, Some(&map), None))?,
        ),
    };
    let out = experiment(kind, cfg)?;
    emit(&out);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("berezin: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
