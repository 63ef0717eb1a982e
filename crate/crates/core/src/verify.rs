//! Named verification checks grouped into suites.
//!
//! Every check reports the worst measured quantity next to the bound it is
//! compared with, so a failing run says by how much it failed.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::bergman::{monomial_inner, DiskPoint, SpaceParams};
use crate::composition::{
    blaschke_berezin_parts, blaschke_segment_value, comp_berezin, comp_lower_bound,
    conjugate_partner, weyl_ber_formula, weyl_berezin, weyl_berezin_modulus_squared_form,
    weyl_berezin_number, weyl_isometry_residual, weyl_lower_bound, WeylOperator,
};
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, signed_margin};
use crate::quadrature::{disk_rule, RuleCache};
use crate::range::{
    blaschke_imaginary_crossings, boundary_limit_probe, convexity_defect, sample_range, GridSpec,
    Lcg, Verdict, VERDICT_GRID, VERDICT_PAIRS,
};
use crate::symbols::{blaschke_fixed_point, Automorphism, SymbolExpr};
use crate::toeplitz::{
    berezin_from_matrix, berezin_modsq_series, berezin_toeplitz, berezin_toeplitz_covariant,
    numerical_range_boundary, required_dim, rule_for, toeplitz_matrix, KERNEL_TAIL_TOL,
};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Toeplitz,
    Weyl,
    Composition,
    Convexity,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Toeplitz => "toeplitz",
            Suite::Weyl => "weyl",
            Suite::Composition => "composition",
            Suite::Convexity => "convexity",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "toeplitz" => Ok(Suite::Toeplitz),
            "weyl" => Ok(Suite::Weyl),
            "composition" => Ok(Suite::Composition),
            "convexity" => Ok(Suite::Convexity),
            other => Err(Error::argument(
                "Suite::from_str",
                format!("unknown suite {other:?}; expected all, toeplitz, weyl, composition or convexity"),
            )),
        }
    }
}

/// How `measured` is compared with `bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "<")]
    Below,
}

impl Relation {
    fn holds(self, measured: f64, bound: f64) -> bool {
        match self {
            Relation::AtMost => measured <= bound,
            Relation::AtLeast => measured >= bound,
            Relation::Below => measured < bound,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub relation: Relation,
    pub bound: f64,
    pub detail: String,
}

impl CheckResult {
    fn compare(name: &str, measured: f64, relation: Relation, bound: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: relation.holds(measured, bound),
            measured,
            relation,
            bound,
            detail: detail.into(),
        }
    }

    fn failed(name: &str, relation: Relation, bound: f64, err: Error) -> Self {
        Self {
            name: name.to_string(),
            passed: false,
            measured: f64::NAN,
            relation,
            bound,
            detail: err.to_string(),
        }
    }

    fn flag(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: ok,
            measured: if ok { 1.0 } else { 0.0 },
            relation: Relation::AtLeast,
            bound: 1.0,
            detail: detail.into(),
        }
    }
}

fn run(name: &str, relation: Relation, bound: f64, f: impl FnOnce() -> Result<(f64, String)>) -> CheckResult {
    match f() {
        Ok((m, d)) => CheckResult::compare(name, m, relation, bound, d),
        Err(e) => CheckResult::failed(name, relation, bound, e),
    }
}

/// Behaviour that is recorded but not asserted.
#[derive(Debug, Clone, Serialize)]
pub struct Observation {
    pub name: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub version: String,
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub observations: Vec<Observation>,
}

impl VerifyReport {
    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn run_suite(suite: Suite) -> VerifyReport {
    let mut checks = Vec::new();
    let mut observations = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Toeplitz {
        checks.extend(toeplitz_checks(&mut observations));
    }
    if all || suite == Suite::Weyl {
        checks.extend(weyl_checks());
    }
    if all || suite == Suite::Composition {
        checks.extend(composition_checks(&mut observations));
    }
    if all || suite == Suite::Convexity {
        checks.extend(convexity_checks());
    }
    VerifyReport {
        version: crate::VERSION.to_string(),
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
        observations,
    }
}

fn params(g: f64) -> SpaceParams {
    SpaceParams::new(g).expect("suite gammas exceed -1")
}

fn dp(re: f64, im: f64) -> DiskPoint {
    DiskPoint::from_re_im(re, im).expect("suite points inside the disk")
}

/// Seeded harmonic polynomials `a₀ + Σ_{m≤3} (a_m z^m + b_m z̄^m)` with
/// coefficient components in `[-0.5, 0.5)`.
pub fn harmonic_test_symbols(count: usize, seed: u64) -> Vec<SymbolExpr> {
    let mut rng = Lcg::new(seed);
    let mut coeff = || Complex64::new(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    (0..count)
        .map(|_| {
            let mut terms = vec![((0, 0), coeff())];
            for m in 1..=3 {
                terms.push(((m, 0), coeff()));
                terms.push(((0, m), coeff()));
            }
            SymbolExpr::polynomial(terms)
        })
        .collect()
}

/// Seeded polynomial coefficient lists of degree `0..count`.
pub fn test_polynomials(count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = Lcg::new(seed);
    (0..count)
        .map(|deg| {
            (0..=deg)
                .map(|_| Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------- toeplitz

pub fn toeplitz_checks(observations: &mut Vec<Observation>) -> Vec<CheckResult> {
    let mut out = vec![quadrature_exactness()];
    out.extend(harmonic_routes());
    out.extend(indicator_checks());
    out.extend(modsq_checks(observations));
    out.push(numerical_range_containment());
    out
}

pub fn quadrature_exactness() -> CheckResult {
    run("quadrature-exactness", Relation::AtMost, 1e-11, || {
        let mut worst = 0.0f64;
        for g in [-0.9, -0.5, 0.0, 1.0, 3.0] {
            let p = params(g);
            let rule = disk_rule(64, 8, p)?;
            for n in 0..=20 {
                let v = rule.integrate_real(|z| z.norm_sqr().powi(n as i32))?;
                worst = worst.max((v - monomial_inner(n, n, p)).abs());
            }
        }
        Ok((worst, "max |∫|z|^{2n} dA_γ - 1/c_n|, n ≤ 20, γ ∈ {-0.9, -0.5, 0, 1, 3}".into()))
    })
}

/// Harmonic identity for all three routes plus their pairwise agreement.
pub fn harmonic_routes() -> Vec<CheckResult> {
    const IDENTITY: &str = "thm-2.1-harmonic-identity";
    const AGREEMENT: &str = "toeplitz-route-agreement";
    let result = (|| -> Result<(f64, f64)> {
        let gammas = [-0.5, 0.0, 1.0, 2.5];
        let grid = GridSpec::new(10, 20, 0.8)?;
        let points = grid.points();
        let edge = DiskPoint::from_polar(grid.r_max, 0.0)?;
        let (mut ident, mut pair) = (0.0f64, 0.0f64);
        for (k, sym) in harmonic_test_symbols(10, 2024).iter().enumerate() {
            let p = params(gammas[k % gammas.len()]);
            let cache = RuleCache::new(p);
            let dim = required_dim(edge, p, KERNEL_TAIL_TOL) + 8;
            let m = toeplitz_matrix(sym, p, dim, &*cache.get(8, 8, None)?)?;
            for &w in &points {
                let phi = sym.eval_at(w.value());
                let a = berezin_toeplitz(sym, w, &cache)?;
                let b = berezin_toeplitz_covariant(sym, w, p, &*rule_for(sym, w, &cache)?)?;
                let c = berezin_from_matrix(&m, w, p)?;
                ident = ident.max((a - phi).norm()).max((b - phi).norm()).max((c - phi).norm());
                pair = pair.max((a - b).norm()).max((a - c).norm()).max((b - c).norm());
            }
        }
        Ok((ident, pair))
    })();
    match result {
        Ok((ident, pair)) => vec![
            CheckResult::compare(
                IDENTITY,
                ident,
                Relation::AtMost,
                1e-7,
                "max |T̃_φ(w) - φ(w)| over quadrature, covariant and matrix routes; 10 harmonic symbols, 201 points, |w| ≤ 0.8",
            ),
            CheckResult::compare(AGREEMENT, pair, Relation::AtMost, 1e-7, "max pairwise route disagreement"),
        ],
        Err(e) => vec![
            CheckResult::failed(IDENTITY, Relation::AtMost, 1e-7, e.clone()),
            CheckResult::failed(AGREEMENT, Relation::AtMost, 1e-7, e),
        ],
    }
}

pub fn indicator_checks() -> Vec<CheckResult> {
    let ind = SymbolExpr::indicator_disk(0.5).expect("radius in (0, 1)");
    let disjoint = run("indicator-range-disjoint", Relation::AtLeast, 1e-4, || {
        let grid = GridSpec::new(19, 8, 0.95)?;
        let mut margin = f64::INFINITY;
        for g in [-0.5, 0.0, 1.0] {
            let cache = RuleCache::new(params(g));
            let s = sample_range(|w| berezin_toeplitz(&ind, w, &cache), grid)?;
            for v in s.values() {
                margin = margin.min(v.re).min(1.0 - v.re);
            }
        }
        Ok((margin, "min distance of sampled T̃ to {0, 1}, |w| ≤ 0.95, γ ∈ {-0.5, 0, 1}".into()))
    });
    let origin = run("indicator-origin-value", Relation::AtMost, 1e-8, || {
        let mut worst = 0.0f64;
        for g in [-0.5, 0.0, 1.0] {
            let cache = RuleCache::new(params(g));
            let v = berezin_toeplitz(&ind, DiskPoint::ORIGIN, &cache)?;
            worst = worst.max((v - Complex64::new(1.0 - 0.75f64.powf(g + 1.0), 0.0)).norm());
        }
        Ok((worst, "|T̃(0) - (1 - (3/4)^{γ+1})|".into()))
    });
    vec![disjoint, origin]
}

pub fn modsq_checks(observations: &mut Vec<Observation>) -> Vec<CheckResult> {
    let modsq = SymbolExpr::modulus_squared();
    let gammas = [-0.5, 0.0, 1.0];
    let grid = GridSpec::new(19, 8, 0.95);
    let routes = run("modsq-series-vs-quadrature", Relation::AtMost, 1e-8, || {
        let grid = grid.clone()?;
        let mut worst = 0.0f64;
        for g in gammas {
            let p = params(g);
            let cache = RuleCache::new(p);
            for w in grid.points() {
                let q = berezin_toeplitz(&modsq, w, &cache)?;
                let s = berezin_modsq_series(w, p, 1e-14)?;
                worst = worst.max((q - Complex64::new(s, 0.0)).norm());
            }
        }
        Ok((worst, "max |quadrature - series|, |w| ≤ 0.95".into()))
    });
    let bounds = run("modsq-bounds", Relation::AtLeast, 0.0, || {
        let grid = grid.clone()?;
        let mut margin = f64::INFINITY;
        for g in gammas {
            let p = params(g);
            for w in grid.points() {
                let s = berezin_modsq_series(w, p, 1e-14)?;
                margin = margin.min(s - (1.0 / (g + 2.0) - 1e-9));
                // the upper end is open
                margin = margin.min((1.0 - s) - f64::MIN_POSITIVE);
            }
        }
        Ok((margin, "min over samples of the distance inside [1/(γ+2) - 1e-9, 1)".into()))
    });
    let origin = run("modsq-origin-value", Relation::AtMost, 1e-10, || {
        let mut worst = 0.0f64;
        for g in gammas {
            let p = params(g);
            let q = berezin_toeplitz(&modsq, DiskPoint::ORIGIN, &RuleCache::new(p))?;
            worst = worst.max((q - Complex64::new(1.0 / (g + 2.0), 0.0)).norm());
        }
        Ok((worst, "|T̃(0) - 1/(γ+2)|".into()))
    });

    let monotone: Result<bool> = (|| {
        let mut ok = true;
        for g in [-0.5, 0.0, 1.0, 2.5] {
            let p = params(g);
            let mut last = f64::NEG_INFINITY;
            for k in 0..=19 {
                let r = if k == 19 { 0.95 } else { 0.1 * k as f64 / 2.0 };
                let v = berezin_modsq_series(DiskPoint::from_re_im(r, 0.0)?, p, 1e-14)?;
                ok &= v > last;
                last = v;
            }
        }
        Ok(ok)
    })();
    observations.push(Observation {
        name: "modsq-monotone-in-radius".into(),
        detail: match monotone {
            Ok(true) => "series values increase with |w| on r = 0, 0.05, ..., 0.95 for γ ∈ {-0.5, 0, 1, 2.5}".into(),
            Ok(false) => "series values are not monotone in |w| on the probe radii".into(),
            Err(e) => format!("probe failed: {e}"),
        },
    });
    vec![routes, bounds, origin]
}

pub fn numerical_range_containment() -> CheckResult {
    run("berezin-in-numerical-range", Relation::AtLeast, -1e-6, || {
        let p = params(0.0);
        let cache = RuleCache::new(p);
        let grid = GridSpec::new(10, 32, 0.9)?;
        let symbols = [
            SymbolExpr::identity(),
            SymbolExpr::polynomial([((1, 0), ONE), ((0, 1), ONE)]),
            SymbolExpr::modulus_squared(),
        ];
        let mut worst = f64::INFINITY;
        for s in &symbols {
            let m = toeplitz_matrix(s, p, 64, &*cache.get(64, 256, None)?)?;
            let hull = convex_hull(&numerical_range_boundary(&m, 256)?);
            for v in sample_range(|w| berezin_toeplitz(s, w, &cache), grid)?.values() {
                worst = worst.min(signed_margin(&hull, v));
            }
        }
        Ok((worst, "min signed margin of sampled T̃ inside hull of W(M), N = 64, φ ∈ {z, z+z̄, |z|²}".into()))
    })
}

// ---------------------------------------------------------------- weyl

pub fn weyl_checks() -> Vec<CheckResult> {
    let mut out = vec![unitarity_residual(), eta_one_berezin_number()];
    out.extend(eta_minus_one_checks());
    out.extend(weyl_zero_exclusion());
    out.push(weyl_branch_consistency());
    out
}

pub fn unitarity_residual() -> CheckResult {
    run("unitarity-residual", Relation::AtMost, 1e-8, || {
        let triples = [
            (dp(0.5, 0.0), ONE, 0.0),
            (dp(0.0, 0.3), Complex64::new(0.0, 1.0), 1.0),
            (dp(0.6, 0.0), -ONE, -0.5),
            (dp(-0.2, 0.4), Complex64::from_polar(1.0, PI / 3.0), 2.5),
            (dp(0.0, 0.0), Complex64::from_polar(1.0, 1.0), 0.3),
        ];
        let polys = test_polynomials(10, 77);
        let mut worst = 0.0f64;
        for (b, e, g) in triples {
            let op = WeylOperator::new(b, e, params(g))?;
            let rule = disk_rule(64, 256, op.params)?;
            for f in &polys {
                worst = worst.max(weyl_isometry_residual(&op, f, &rule)?);
            }
        }
        Ok((worst, "max |‖Cf‖² - ‖f‖²|, 10 polynomials of degree 0..9, 5 (β, η, γ) triples".into()))
    })
}

pub fn eta_one_berezin_number() -> CheckResult {
    let name = "eta-one-berezin-number";
    let result = (|| -> Result<(f64, f64)> {
        let grid = GridSpec::new(40, 64, 0.99)?;
        let (mut err, mut arg) = (0.0f64, 0.0f64);
        for b in [dp(0.3, 0.0), dp(0.6, 0.0), dp(0.0, 0.8)] {
            for g in [0.0, 1.0] {
                let p = params(g);
                let (v, at) = weyl_berezin_number(b, p, &grid)?;
                err = err.max((v - weyl_ber_formula(b, p)).abs());
                arg = arg.max(at.norm() / grid.cell());
            }
        }
        Ok((err, arg))
    })();
    match result {
        Ok((err, arg)) => {
            let mut c = CheckResult::compare(
                name,
                err,
                Relation::AtMost,
                1e-6,
                format!(
                    "max |grid max - (1-|β|²)^{{(γ+2)/2}}|, β ∈ {{0.3, 0.6, 0.8i}}, γ ∈ {{0, 1}}; argmax at {arg} grid cells from 0"
                ),
            );
            c.passed &= arg <= 1.0;
            c
        }
        Err(e) => CheckResult::failed(name, Relation::AtMost, 1e-6, e),
    }
}

pub fn eta_minus_one_checks() -> Vec<CheckResult> {
    let betas = [dp(0.6, 0.0), dp(0.3, -0.5), dp(0.0, -0.7)];
    let gammas = [0.0, 1.5];
    let fixed = run("eta-minus-one-fixed-point-value", Relation::AtMost, 1e-10, || {
        let mut worst = 0.0f64;
        for b in betas {
            for g in gammas {
                let op = WeylOperator::new(b, -ONE, params(g))?;
                worst = worst.max((weyl_berezin(&op, blaschke_fixed_point(b)?) - ONE).norm());
            }
        }
        Ok((worst, "|C̃(ξ(β)) - 1| at the interior fixed point".into()))
    });
    let sampled = (|| -> Result<(f64, bool, f64)> {
        let grid = GridSpec::new(40, 64, 0.999)?;
        let (mut im, mut inside, mut min) = (0.0f64, true, f64::INFINITY);
        for b in betas {
            for g in gammas {
                let op = WeylOperator::new(b, -ONE, params(g))?;
                for v in sample_range(|w| Ok(weyl_berezin(&op, w)), grid)?.values() {
                    im = im.max(v.im.abs());
                    inside &= v.re > 0.0 && v.re <= 1.0 + 1e-10;
                    min = min.min(v.re);
                }
            }
        }
        Ok((im, inside, min))
    })();
    match sampled {
        Ok((im, inside, min)) => {
            let mut real = CheckResult::compare(
                "eta-minus-one-real-range",
                im,
                Relation::AtMost,
                1e-10,
                format!("max |Im| over the grid |ξ| ≤ 0.999; all values in (0, 1 + 1e-10]: {inside}"),
            );
            real.passed &= inside;
            vec![
                fixed,
                real,
                CheckResult::compare(
                    "eta-minus-one-infimum",
                    min,
                    Relation::Below,
                    0.01,
                    "min sampled value over |ξ| ≤ 0.999",
                ),
            ]
        }
        Err(e) => vec![
            fixed,
            CheckResult::failed("eta-minus-one-real-range", Relation::AtMost, 1e-10, e.clone()),
            CheckResult::failed("eta-minus-one-infimum", Relation::Below, 0.01, e),
        ],
    }
}

pub fn weyl_zero_exclusion() -> Vec<CheckResult> {
    let bound = run("weyl-zero-exclusion", Relation::AtLeast, 1.0, || {
        let grid = GridSpec::new(40, 64, 0.99)?;
        let mut ratio = f64::INFINITY;
        for b in [dp(0.6, 0.0), dp(0.3, -0.5)] {
            for e in [ONE, Complex64::new(0.0, 1.0), -ONE] {
                for g in [-0.5, 0.0, 1.0] {
                    let op = WeylOperator::new(b, e, params(g))?;
                    for (w, v) in sample_range(|w| Ok(weyl_berezin(&op, w)), grid)?.points {
                        ratio = ratio.min(v.norm() / weyl_lower_bound(b, w, op.params));
                    }
                }
            }
        }
        Ok((ratio, "min |C̃(ξ)| / lower bound over the grid".into()))
    });
    let probe = run("weyl-boundary-limit", Relation::Below, 1e-2, || {
        let op = WeylOperator::new(dp(0.6, 0.0), ONE, params(0.0))?;
        let v = boundary_limit_probe(|w| Ok(weyl_berezin(&op, w)), Complex64::new(0.0, 1.0), &[0.9, 0.99, 0.999])?;
        Ok((v[2].norm(), format!("|C̃(0.999i)| for β = 0.6, η = 1; probe {:?}", v.iter().map(|x| x.norm()).collect::<Vec<_>>())))
    });
    vec![bound, probe]
}

pub fn weyl_branch_consistency() -> CheckResult {
    run("weyl-branch-consistency", Relation::AtMost, 1e-10, || {
        let mut rng = Lcg::new(11);
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let b = DiskPoint::from_polar(rng.uniform(0.0, 0.95), rng.uniform(-PI, PI))?;
            let e = Complex64::from_polar(1.0, rng.uniform(-PI, PI));
            let g = rng.uniform(-0.95, 3.5);
            let xi = DiskPoint::from_polar(rng.uniform(0.0, 0.99), rng.uniform(-PI, PI))?;
            let op = WeylOperator::new(b, e, params(g))?;
            worst = worst.max((weyl_berezin(&op, xi).norm() - weyl_berezin_modulus_squared_form(&op, xi)).abs());
        }
        Ok((worst, "max ||factored form| - |squared form|| on 200 seeded (β, η, γ, ξ)".into()))
    })
}

// ---------------------------------------------------------------- composition

pub fn composition_checks(observations: &mut Vec<Observation>) -> Vec<CheckResult> {
    let mut out = comp_zero_exclusion();
    out.extend(polar_and_partner());
    out.push(real_segment_formula());
    out.push(imaginary_zero_implication());
    for g in [1.0, 3.0] {
        let hits = blaschke_imaginary_crossings(dp(0.5, 0.0), params(g), GridSpec { n_radii: 40, n_angles: 64, r_max: 0.99 });
        observations.push(Observation {
            name: format!("blaschke-imaginary-crossings-gamma-{g}"),
            detail: match hits {
                Ok(h) => format!(
                    "{} sign changes of Im C̃ off the line Im(β̄w) = 0 for β = 0.5 on a 40x64 grid{}",
                    h.len(),
                    h.first().map(|w| format!(", first near {}", w.value())).unwrap_or_default()
                ),
                Err(e) => format!("search failed: {e}"),
            },
        });
    }
    out
}

pub fn comp_zero_exclusion() -> Vec<CheckResult> {
    let bound = run("comp-zero-exclusion", Relation::AtLeast, 1.0, || {
        let grid = GridSpec::new(40, 64, 0.99)?;
        let maps = [
            Automorphism::blaschke(dp(0.5, 0.0)),
            Automorphism::elliptic(Complex64::new(0.0, 1.0))?,
            Automorphism::new(dp(0.3, -0.4), Complex64::from_polar(1.0, 2.0))?,
        ];
        let mut ratio = f64::INFINITY;
        for map in &maps {
            for g in [-0.5, 0.0, 1.0] {
                let p = params(g);
                for (w, v) in sample_range(|w| comp_berezin(map, p, w), grid)?.points {
                    ratio = ratio.min(v.norm() / comp_lower_bound(w, p));
                }
            }
        }
        Ok((ratio, "min |C̃(w)| / ((1-|w|²)^{γ+2} / 2^{γ+2}) over the grid".into()))
    });
    let probe = run("comp-boundary-limit", Relation::Below, 1e-2, || {
        let map = Automorphism::blaschke(dp(0.5, 0.0));
        let p = params(0.0);
        let v = boundary_limit_probe(|w| comp_berezin(&map, p, w), Complex64::new(0.0, 1.0), &[0.9, 0.99, 0.999])?;
        Ok((v[2].norm(), format!("|C̃(0.999i)| for the Blaschke factor β = 0.5; probe {:?}", v.iter().map(|x| x.norm()).collect::<Vec<_>>())))
    });
    vec![bound, probe]
}

pub fn polar_and_partner() -> Vec<CheckResult> {
    let result = (|| -> Result<(f64, f64)> {
        let mut rng = Lcg::new(5);
        let (mut parts, mut partner) = (0.0f64, 0.0f64);
        for _ in 0..200 {
            let b = DiskPoint::from_polar(rng.uniform(0.01, 0.95), rng.uniform(-PI, PI))?;
            let w = DiskPoint::from_polar(rng.uniform(0.0, 0.99), rng.uniform(-PI, PI))?;
            let p = params(rng.uniform(-0.95, 3.0));
            let map = Automorphism::blaschke(b);
            let v = comp_berezin(&map, p, w)?;
            let pp = blaschke_berezin_parts(b, p, w);
            parts = parts.max((Complex64::new(pp.re, pp.im) - v).norm());
            let q = conjugate_partner(b, w)?;
            partner = partner.max((comp_berezin(&map, p, q)? - v.conj()).norm());
        }
        Ok((parts, partner))
    })();
    match result {
        Ok((parts, partner)) => vec![
            CheckResult::compare("polar-parts-reconstruction", parts, Relation::AtMost, 1e-10, "max |re + i·im - C̃(w)| on 200 seeded (β, w)"),
            CheckResult::compare("conjugation-partner", partner, Relation::AtMost, 1e-12, "max |C̃(partner) - conj C̃(w)| on 200 seeded (β, w)"),
        ],
        Err(e) => vec![
            CheckResult::failed("polar-parts-reconstruction", Relation::AtMost, 1e-10, e.clone()),
            CheckResult::failed("conjugation-partner", Relation::AtMost, 1e-12, e),
        ],
    }
}

pub fn real_segment_formula() -> CheckResult {
    run("real-segment-formula", Relation::AtMost, 1e-10, || {
        let mut worst = 0.0f64;
        for (b, g) in [(dp(0.5, 0.0), 0.0), (dp(0.3, 0.0), -0.5), (dp(0.0, 0.5), 1.0), (dp(-0.4, 0.3), 2.5)] {
            let p = params(g);
            let map = Automorphism::blaschke(b);
            let lim = 0.9 / b.norm();
            for k in -20..=20 {
                let r = lim * k as f64 / 20.0;
                let v = comp_berezin(&map, p, DiskPoint::new(b.value() * r)?)?;
                worst = worst.max((v - Complex64::new(blaschke_segment_value(b, r, p), 0.0)).norm());
            }
        }
        Ok((worst, "max |C̃(rβ) - (1 - r|β|²)^{γ+2}|, |rβ| ≤ 0.9".into()))
    })
}

pub fn imaginary_zero_implication() -> CheckResult {
    run("imaginary-zero-implication", Relation::AtMost, 1e-6, || {
        let grid = GridSpec::new(40, 64, 0.99)?;
        let mut worst = 0.0f64;
        let mut hits = 0usize;
        for b in [dp(0.3, 0.0), dp(0.5, 0.0), dp(0.0, 0.5), dp(0.4, 0.4)] {
            let map = Automorphism::blaschke(b);
            for g in [-0.5, 0.0] {
                let p = params(g);
                for (w, v) in sample_range(|w| comp_berezin(&map, p, w), grid)?.points {
                    if v.im.abs() <= 1e-10 {
                        hits += 1;
                        worst = worst.max((b.value().conj() * w.value()).im.abs());
                    }
                }
            }
        }
        Ok((worst, format!("max |Im(β̄w)| over {hits} grid points with |Im C̃| ≤ 1e-10, γ ∈ {{-0.5, 0}}")))
    })
}

// ---------------------------------------------------------------- convexity

/// `(check name, map, γ, expected verdict)` for the convexity table.
pub fn convexity_cases() -> Vec<(&'static str, Automorphism, f64, Verdict)> {
    let ell = |e: Complex64| Automorphism::elliptic(e).expect("unimodular");
    vec![
        ("elliptic-eta-1-point", ell(ONE), 0.0, Verdict::DegeneratePoint),
        ("elliptic-eta-minus-1-segment", ell(-ONE), 0.0, Verdict::DegenerateSegment),
        ("elliptic-eta-i-nonconvex", ell(Complex64::new(0.0, 1.0)), 0.0, Verdict::NonConvex),
        ("elliptic-eta-pi-over-3-nonconvex", ell(Complex64::from_polar(1.0, PI / 3.0)), 0.0, Verdict::NonConvex),
        ("blaschke-beta-0-point", Automorphism::blaschke(DiskPoint::ORIGIN), 0.0, Verdict::DegeneratePoint),
        ("blaschke-beta-0.5-gamma-0-nonconvex", Automorphism::blaschke(dp(0.5, 0.0)), 0.0, Verdict::NonConvex),
        ("blaschke-beta-0.5-gamma-minus-0.5-nonconvex", Automorphism::blaschke(dp(0.5, 0.0)), -0.5, Verdict::NonConvex),
        ("blaschke-beta-0.3-gamma-0-nonconvex", Automorphism::blaschke(dp(0.3, 0.0)), 0.0, Verdict::NonConvex),
        ("blaschke-beta-0.5i-gamma-0-nonconvex", Automorphism::blaschke(dp(0.0, 0.5)), 0.0, Verdict::NonConvex),
    ]
}

pub fn convexity_checks() -> Vec<CheckResult> {
    convexity_cases()
        .into_iter()
        .map(|(name, map, g, expected)| {
            let p = params(g);
            let report = sample_range(|w| comp_berezin(&map, p, w), VERDICT_GRID)
                .and_then(|s| convexity_defect(&s, VERDICT_PAIRS, 0));
            match report {
                Ok(r) => {
                    let mut c = CheckResult::flag(
                        name,
                        r.verdict == expected,
                        format!(
                            "verdict {} (expected {expected}); defect {:.3e}, threshold {:.3e}, diameter {:.3e}",
                            r.verdict, r.defect, r.threshold, r.diameter
                        ),
                    );
                    c.measured = r.defect;
                    c.bound = r.threshold;
                    c.relation = if expected == Verdict::NonConvex { Relation::AtLeast } else { Relation::AtMost };
                    c
                }
                Err(e) => CheckResult::failed(name, Relation::AtLeast, 1.0, e),
            }
        })
        .collect()
}
