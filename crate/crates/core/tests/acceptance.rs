//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use berezin_core::bergman::{DiskPoint, SpaceParams};
use berezin_core::composition::{
    blaschke_berezin_parts, comp_berezin, comp_lower_bound, conjugate_partner, weyl_apply,
    weyl_berezin, weyl_berezin_number, weyl_isometry_residual, weyl_lower_bound, WeylOperator,
};
use berezin_core::geometry::{convex_hull, signed_margin};
use berezin_core::quadrature::{disk_rule, RuleCache};
use berezin_core::range::{boundary_limit_probe, min_modulus, sample_range, GridSpec, Lcg};
use berezin_core::symbols::{Automorphism, SymbolExpr};
use berezin_core::toeplitz::{
    berezin_from_matrix, berezin_modsq_series, berezin_toeplitz, berezin_toeplitz_covariant,
    numerical_range_boundary, required_dim, rule_for, toeplitz_matrix, KERNEL_TAIL_TOL,
};
use berezin_core::verify::{run_suite, Suite};
use num_complex::Complex64;

type Outcome = Result<String, String>;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn params(g: f64) -> SpaceParams {
    SpaceParams::new(g).unwrap()
}

fn dp(re: f64, im: f64) -> DiskPoint {
    DiskPoint::from_re_im(re, im).unwrap()
}

fn within(name: &str, measured: f64, tol: f64) -> Outcome {
    if measured <= tol {
        Ok(format!("{name} {measured:.3e} <= {tol:.0e}"))
    } else {
        Err(format!("{name} {measured:.3e} > {tol:.0e}"))
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for p in parts {
        match p {
            Ok(s) => ok.push(s),
            Err(s) => bad.push(s),
        }
    }
    if bad.is_empty() {
        Ok(ok.join("; "))
    } else {
        Err(bad.join("; "))
    }
}

// ------------------------------------------------------------ oracles

/// Lanczos `ln Γ(x)`, g = 7, n = 9.
fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + G + 0.5;
    let mut a = COEF[0];
    for (i, &ci) in COEF.iter().enumerate().skip(1) {
        a += ci / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// `‖zⁿ‖² = n! Γ(γ+2) / Γ(n+γ+2)`.
fn monomial_norm_sqr(n: usize, g: f64) -> f64 {
    (ln_gamma(n as f64 + 1.0) + ln_gamma(g + 2.0) - ln_gamma(n as f64 + g + 2.0)).exp()
}

/// `(γ+1) ∫₀^a tⁿ (1-t)^γ dt` by the binomial series of `(1-t)^γ`.
fn weighted_moment(n: usize, g: f64, a: f64) -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0; // (-1)^k C(γ, k)
    for k in 0..400 {
        let e = (n + k + 1) as f64;
        sum += binom * a.powf(e) / e;
        binom *= -(g - k as f64) / (k as f64 + 1.0);
    }
    (g + 1.0) * sum
}

/// Indicator of `|z| ≤ 1/2` through the kernel series:
/// `(1-|w|²)^{γ+2} Σ cₙ² |w|^{2n} ‖zⁿ 1_{|z|≤1/2}‖²`.
fn indicator_oracle(r: f64, g: f64) -> f64 {
    let x = r * r;
    let mut sum = 0.0;
    for n in 0..2000 {
        let cn = 1.0 / monomial_norm_sqr(n, g);
        let term = cn * cn * x.powi(n as i32) * weighted_moment(n, g, 0.25);
        sum += term;
        if term < 1e-20 * sum && n > 10 {
            break;
        }
    }
    (1.0 - x).powf(g + 2.0) * sum
}

/// `T̃_{|z|²}(w)` by direct summation with Γ-function coefficients.
fn modsq_oracle(r: f64, g: f64) -> f64 {
    let x = r * r;
    let mut sum = 0.0;
    for n in 0..60_000 {
        let nf = n as f64;
        let ln_term = (nf + 1.0).ln() + ln_gamma(nf + g + 2.0)
            - ln_gamma(nf + 1.0)
            - ln_gamma(g + 2.0)
            - (nf + g + 2.0).ln()
            + if x > 0.0 { nf * x.ln() } else if n == 0 { 0.0 } else { f64::NEG_INFINITY };
        sum += ln_term.exp();
    }
    (1.0 - x).powf(g + 2.0) * sum
}

/// Automorphism `η(w-β)/(1-β̄w)` evaluated from scratch.
fn psi(beta: Complex64, eta: Complex64, w: Complex64) -> Complex64 {
    eta * (w - beta) / (ONE - beta.conj() * w)
}

/// `((1-|w|²)/(1-w̄ψ(w)))^{γ+2}` with num-complex's principal power.
fn comp_oracle(beta: Complex64, eta: Complex64, g: f64, w: Complex64) -> Complex64 {
    let base = c(1.0 - w.norm_sqr(), 0.0) / (ONE - w.conj() * psi(beta, eta, w));
    base.powf(g + 2.0)
}

// ------------------------------------------------------------ criteria

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    for g in [-0.9, -0.5, 0.0, 1.0, 3.0] {
        let rule = disk_rule(64, 256, params(g)).map_err(|e| e.to_string())?;
        for n in 0..=20 {
            let v = rule.integrate_real(|z| z.norm_sqr().powi(n as i32)).map_err(|e| e.to_string())?;
            worst = worst.max((v - monomial_norm_sqr(n, g)).abs());
        }
    }
    within("max |∫|z|^{2n} dA_γ - n!Γ(γ+2)/Γ(n+γ+2)|", worst, 1e-11)
}

/// Independent evaluation of `Σ a_{m0} z^m + Σ a_{0n} z̄^n`.
fn eval_harmonic(coeffs: &[(u32, u32, Complex64)], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .map(|&(m, n, a)| a * z.powi(m as i32) * z.conj().powi(n as i32))
        .sum()
}

fn criterion_2() -> Outcome {
    let mut rng = Lcg::new(314);
    let gammas = [-0.5, 0.0, 1.0, 2.5];
    let grid = GridSpec::new(10, 20, 0.8).unwrap();
    let edge = DiskPoint::from_polar(grid.r_max, 0.0).unwrap();
    let (mut ident, mut pair) = (0.0f64, 0.0f64);
    for k in 0..10 {
        let deg = 1 + k % 4;
        let mut coeffs = vec![(0, 0, c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))];
        for m in 1..=deg as u32 {
            coeffs.push((m, 0, c(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))));
            coeffs.push((0, m, c(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))));
        }
        let sym = SymbolExpr::polynomial(coeffs.iter().map(|&(m, n, a)| ((m, n), a)));
        assert!(sym.is_harmonic());
        let p = params(gammas[k % gammas.len()]);
        let cache = RuleCache::new(p);
        let dim = required_dim(edge, p, KERNEL_TAIL_TOL) + 8;
        let rule = cache.get(8, 8, None).map_err(|e| e.to_string())?;
        let m = toeplitz_matrix(&sym, p, dim, &rule).map_err(|e| e.to_string())?;
        for w in grid.points() {
            let phi = eval_harmonic(&coeffs, w.value());
            let a = berezin_toeplitz(&sym, w, &cache).map_err(|e| e.to_string())?;
            let cov_rule = rule_for(&sym, w, &cache).map_err(|e| e.to_string())?;
            let b = berezin_toeplitz_covariant(&sym, w, p, &cov_rule).map_err(|e| e.to_string())?;
            let mm = berezin_from_matrix(&m, w, p).map_err(|e| e.to_string())?;
            for v in [a, b, mm] {
                ident = ident.max((v - phi).norm());
            }
            pair = pair.max((a - b).norm()).max((a - mm).norm()).max((b - mm).norm());
        }
    }
    all(vec![
        within("max |T̃_φ - φ| (3 routes, 10 symbols, 201 points)", ident, 1e-7),
        within("max route disagreement", pair, 1e-7),
    ])
}

fn criterion_3() -> Outcome {
    let ind = SymbolExpr::indicator_disk(0.5).unwrap();
    let grid = GridSpec::new(19, 8, 0.95).unwrap();
    let (mut delta, mut origin, mut oracle) = (f64::INFINITY, 0.0f64, 0.0f64);
    for g in [-0.5, 0.0, 1.0] {
        let cache = RuleCache::new(params(g));
        let s = sample_range(|w| berezin_toeplitz(&ind, w, &cache), grid).map_err(|e| e.to_string())?;
        for (w, v) in &s.points {
            delta = delta.min(v.re).min(1.0 - v.re);
            if w.value().im == 0.0 && w.value().re >= 0.0 {
                oracle = oracle.max((v.re - indicator_oracle(w.norm(), g)).abs());
            }
        }
        let v0 = berezin_toeplitz(&ind, DiskPoint::ORIGIN, &cache).map_err(|e| e.to_string())?;
        origin = origin.max((v0 - c(1.0 - 0.75f64.powf(g + 1.0), 0.0)).norm());
    }
    let strict = if delta >= 1e-4 {
        Ok(format!("values inside (δ, 1-δ) with δ = {delta:.3e} >= 1e-4"))
    } else {
        Err(format!("δ = {delta:.3e} < 1e-4"))
    };
    all(vec![
        strict,
        within("|T̃(0) - (1-(3/4)^{γ+1})|", origin, 1e-8),
        within("|T̃ - kernel-series oracle| on the positive axis", oracle, 1e-8),
    ])
}

fn criterion_4() -> Outcome {
    let modsq = SymbolExpr::modulus_squared();
    let grid = GridSpec::new(19, 8, 0.95).unwrap();
    let (mut routes, mut lower, mut upper, mut origin, mut oracle) =
        (0.0f64, f64::INFINITY, f64::INFINITY, 0.0f64, 0.0f64);
    for g in [-0.5, 0.0, 1.0] {
        let p = params(g);
        let cache = RuleCache::new(p);
        for w in grid.points() {
            let q = berezin_toeplitz(&modsq, w, &cache).map_err(|e| e.to_string())?;
            let s = berezin_modsq_series(w, p, 1e-14).map_err(|e| e.to_string())?;
            routes = routes.max((q - c(s, 0.0)).norm());
            lower = lower.min(s - 1.0 / (g + 2.0));
            upper = upper.min(1.0 - s);
            if w.value().im == 0.0 && w.value().re >= 0.0 {
                oracle = oracle.max((s - modsq_oracle(w.norm(), g)).abs());
            }
        }
        let v0 = berezin_toeplitz(&modsq, DiskPoint::ORIGIN, &cache).map_err(|e| e.to_string())?;
        origin = origin.max((v0 - c(1.0 / (g + 2.0), 0.0)).norm());
    }
    let bounds = if lower >= -1e-9 && upper > 0.0 {
        Ok(format!("values in [1/(γ+2) - 1e-9, 1): margins {lower:.3e}, {upper:.3e}"))
    } else {
        Err(format!("bounds violated: lower margin {lower:.3e}, upper margin {upper:.3e}"))
    };
    all(vec![
        within("|quadrature - series|", routes, 1e-8),
        bounds,
        within("|T̃(0) - 1/(γ+2)|", origin, 1e-10),
        within("|series - Γ-coefficient oracle|", oracle, 1e-10),
    ])
}

fn criterion_5() -> Outcome {
    let triples = [
        (dp(0.5, 0.0), ONE, 0.0),
        (dp(0.0, 0.3), c(0.0, 1.0), 1.0),
        (dp(0.6, 0.0), -ONE, -0.5),
        (dp(-0.2, 0.4), Complex64::from_polar(1.0, PI / 3.0), 2.5),
        (dp(0.1, -0.7), Complex64::from_polar(1.0, -2.0), 0.3),
    ];
    let mut rng = Lcg::new(55);
    let polys: Vec<Vec<Complex64>> = (0..10)
        .map(|deg| (0..=deg).map(|_| c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))).collect())
        .collect();
    let (mut lib, mut exact) = (0.0f64, 0.0f64);
    for (b, e, g) in triples {
        let op = WeylOperator::new(b, e, params(g)).unwrap();
        let rule = disk_rule(64, 256, op.params).map_err(|e| e.to_string())?;
        for f in &polys {
            lib = lib.max(weyl_isometry_residual(&op, f, &rule).map_err(|e| e.to_string())?);
            let image = rule
                .integrate_real(|z| weyl_apply(&op, f, DiskPoint::new(z).unwrap()).norm_sqr())
                .map_err(|e| e.to_string())?;
            let norm: f64 = f.iter().enumerate().map(|(k, a)| a.norm_sqr() * monomial_norm_sqr(k, g)).sum();
            exact = exact.max((image - norm).abs());
        }
    }
    all(vec![
        within("quadrature isometry residual", lib, 1e-8),
        within("|‖Cf‖² - exact ‖f‖²|", exact, 1e-8),
    ])
}

fn criterion_6() -> Outcome {
    let grid = GridSpec::new(40, 64, 0.99).unwrap();
    let (mut err, mut cells) = (0.0f64, 0.0f64);
    for b in [dp(0.3, 0.0), dp(0.6, 0.0), dp(0.0, 0.8)] {
        for g in [0.0, 1.0] {
            let (v, at) = weyl_berezin_number(b, params(g), &grid).map_err(|e| e.to_string())?;
            err = err.max((v - (1.0 - b.norm_sqr()).powf(0.5 * (g + 2.0))).abs());
            cells = cells.max(at.norm() / grid.cell());
        }
    }
    all(vec![
        within("|grid max - (1-|β|²)^{(γ+2)/2}|", err, 1e-6),
        within("argmax distance from 0 in grid cells", cells, 1.0),
    ])
}

fn criterion_7() -> Outcome {
    let grid = GridSpec::new(40, 64, 0.999).unwrap();
    let (mut fixed, mut im, mut min, mut inside) = (0.0f64, 0.0f64, f64::INFINITY, true);
    for b in [dp(0.6, 0.0), dp(0.3, -0.5), dp(0.0, -0.7)] {
        // β̄ξ² - 2ξ + β = 0, root inside the disk
        let bv = b.value();
        let xi = (1.0 - (1.0 - bv.norm_sqr()).sqrt()) / bv.conj();
        for g in [0.0, 1.5] {
            let op = WeylOperator::new(b, -ONE, params(g)).unwrap();
            fixed = fixed.max((weyl_berezin(&op, DiskPoint::new(xi).unwrap()) - ONE).norm());
            let s = sample_range(|w| Ok(weyl_berezin(&op, w)), grid).map_err(|e| e.to_string())?;
            for v in s.values() {
                im = im.max(v.im.abs());
                min = min.min(v.re);
                inside &= v.re > 0.0 && v.re <= 1.0 + 1e-10;
            }
        }
    }
    let contained = if inside { Ok("values in (0, 1+1e-10]".to_string()) } else { Err("value outside (0, 1+1e-10]".to_string()) };
    let small = if min < 0.01 { Ok(format!("min {min:.3e} < 0.01")) } else { Err(format!("min {min:.3e} >= 0.01")) };
    all(vec![
        within("|C̃(ξ(β)) - 1|", fixed, 1e-10),
        within("max |Im|", im, 1e-10),
        contained,
        small,
    ])
}

fn criterion_8() -> Outcome {
    let grid = GridSpec::new(40, 64, 0.99).unwrap();
    let mut violations = 0usize;
    let mut ratio = f64::INFINITY;
    for g in [-0.5, 0.0, 1.0] {
        let p = params(g);
        for (b, e) in [(dp(0.6, 0.0), ONE), (dp(0.3, -0.5), c(0.0, 1.0)), (dp(0.5, 0.0), -ONE)] {
            let op = WeylOperator::new(b, e, p).unwrap();
            let s = sample_range(|w| Ok(weyl_berezin(&op, w)), grid).map_err(|e| e.to_string())?;
            for (w, v) in &s.points {
                let bound = (1.0 - b.norm_sqr()).powf(0.5 * (g + 2.0)) * (1.0 - w.norm_sqr()).powf(g + 2.0)
                    / 2f64.powf(2.0 * (g + 2.0));
                assert!((bound - weyl_lower_bound(b, *w, p)).abs() <= 1e-15 * bound.max(1.0));
                violations += usize::from(v.norm() <= bound);
                ratio = ratio.min(v.norm() / bound);
            }
            let _ = min_modulus(&s);
            let map = Automorphism::new(b, e).unwrap();
            let s = sample_range(|w| comp_berezin(&map, p, w), grid).map_err(|e| e.to_string())?;
            for (w, v) in &s.points {
                let bound = (1.0 - w.norm_sqr()).powf(g + 2.0) / 2f64.powf(g + 2.0);
                assert!((bound - comp_lower_bound(*w, p)).abs() <= 1e-15);
                violations += usize::from(v.norm() <= bound);
                ratio = ratio.min(v.norm() / bound);
            }
        }
    }
    let blaschke = Automorphism::blaschke(dp(0.5, 0.0));
    let p0 = params(0.0);
    let probe = boundary_limit_probe(|w| comp_berezin(&blaschke, p0, w), c(0.0, 1.0), &[0.9, 0.99, 0.999])
        .map_err(|e| e.to_string())?;
    let last = probe[2].norm();
    let bound = if violations == 0 {
        Ok(format!("all grid values above the lower bounds (min ratio {ratio:.3})"))
    } else {
        Err(format!("{violations} grid values at or below the lower bound"))
    };
    let probe = if last < 1e-2 && probe.windows(2).all(|w| w[1].norm() < w[0].norm()) {
        Ok(format!("|C̃(0.999i)| = {last:.3e} < 1e-2, decreasing"))
    } else {
        Err(format!("probe {probe:?}"))
    };
    all(vec![bound, probe])
}

fn criterion_9() -> Outcome {
    let report = run_suite(Suite::Convexity);
    let names = [
        "elliptic-eta-1-point",
        "elliptic-eta-minus-1-segment",
        "elliptic-eta-i-nonconvex",
        "blaschke-beta-0-point",
        "blaschke-beta-0.5-gamma-0-nonconvex",
        "blaschke-beta-0.5-gamma-minus-0.5-nonconvex",
    ];
    let parts = names
        .iter()
        .map(|n| match report.check(n) {
            Some(c) if c.passed => Ok(format!("{n}: pass")),
            Some(c) => Err(format!("{n}: {}", c.detail)),
            None => Err(format!("{n}: missing")),
        })
        .collect();
    all(parts)
}

fn criterion_10() -> Outcome {
    let mut rng = Lcg::new(1010);
    let (mut parts, mut partner) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let (rb, tb) = (rng.uniform(0.01, 0.95), rng.uniform(-PI, PI));
        let (rw, tw) = (rng.uniform(0.0, 0.99), rng.uniform(-PI, PI));
        let g = rng.uniform(-0.95, 3.0);
        let b = DiskPoint::from_polar(rb, tb).unwrap();
        let w = DiskPoint::from_polar(rw, tw).unwrap();
        let p = params(g);
        let direct = comp_oracle(b.value(), ONE, g, w.value());
        let pp = blaschke_berezin_parts(b, p, w);
        parts = parts.max((c(pp.re, pp.im) - direct).norm());
        let q = Complex64::from_polar(rw, 2.0 * tb - tw);
        let lib_q = conjugate_partner(b, w).unwrap();
        assert!((lib_q.value() - q).norm() < 1e-14);
        let map = Automorphism::blaschke(b);
        let v = comp_berezin(&map, p, w).unwrap();
        partner = partner.max((comp_berezin(&map, p, lib_q).unwrap() - v.conj()).norm());
    }
    all(vec![
        within("PolarParts reconstruction error", parts, 1e-10),
        within("conjugation-partner error", partner, 1e-12),
    ])
}

fn criterion_11() -> Outcome {
    let p = params(0.0);
    let cache = RuleCache::new(p);
    let grid = GridSpec::new(10, 32, 0.9).unwrap();
    let symbols = [
        ("z", SymbolExpr::identity()),
        ("z+z̄", SymbolExpr::polynomial([((1, 0), ONE), ((0, 1), ONE)])),
        ("|z|²", SymbolExpr::modulus_squared()),
    ];
    let mut parts = Vec::new();
    for (label, s) in &symbols {
        let rule = cache.get(64, 256, None).map_err(|e| e.to_string())?;
        let m = toeplitz_matrix(s, p, 64, &rule).map_err(|e| e.to_string())?;
        let hull = convex_hull(&numerical_range_boundary(&m, 256).map_err(|e| e.to_string())?);
        let sample = sample_range(|w| berezin_toeplitz(s, w, &cache), grid).map_err(|e| e.to_string())?;
        let worst = sample.values().iter().map(|&v| signed_margin(&hull, v)).fold(f64::INFINITY, f64::min);
        parts.push(if worst >= -1e-6 {
            Ok(format!("{label}: min margin {worst:.3e}"))
        } else {
            Err(format!("{label}: min margin {worst:.3e} < -1e-6"))
        });
    }
    all(parts)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("quadrature exactness", criterion_1),
        ("harmonic symbols: Berezin range equals φ(𝔻)", criterion_2),
        ("indicator symbol range avoids {0, 1}", criterion_3),
        ("|z|² symbol bounds and routes", criterion_4),
        ("Weyl operator unitarity", criterion_5),
        ("Weyl Berezin number for η = 1", criterion_6),
        ("Weyl Berezin range for η = -1", criterion_7),
        ("zero exclusion and boundary limit", criterion_8),
        ("convexity verdicts", criterion_9),
        ("polar parts and conjugation symmetry", criterion_10),
        ("Berezin range inside numerical range", criterion_11),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {title} [{secs:.1}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title} [{secs:.1}s]: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
