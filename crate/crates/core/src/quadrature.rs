//! Quadrature for the weighted area measure `dA_γ` on the unit disk.
//!
//! With `z = √t · e^{iθ}` the measure factors as
//! `dA_γ = (γ+1)(1-t)^γ dt × dθ/2π`, so a Gauss-Jacobi rule in `t` tensored
//! with the uniform trapezoid rule in `θ` integrates `z^m z̄^n` exactly for
//! `m = n ≤ 2n_r - 1` and `|m - n| < n_θ`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::bergman::SpaceParams;
use crate::error::{Error, Result};

/// Default radial resolution.
pub const DEFAULT_N_R: usize = 64;
/// Default angular resolution.
pub const DEFAULT_N_THETA: usize = 256;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// Radial rule in the variable `t = r²` on `(0, 1)`, normalized to unit mass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ wⱼ q(tⱼ)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, q: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * q(t))
            .sum()
    }
}

/// Gauss rule on `[-1, 1]` for `(1-x)^α (1+x)^β`, with weights normalized to
/// sum to one. Golub-Welsch on the monic Jacobi recurrence.
fn jacobi_unit_mass(n: usize, alpha: f64, beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let ab = alpha + beta;
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jacobi[(k, k)] = diag;
        if k + 1 < n {
            let j = kf + 1.0;
            let s = 2.0 * j + ab;
            let off = (4.0 * j * (j + alpha) * (j + beta) * (j + ab)
                / (s * s * (s + 1.0) * (s - 1.0)))
                .sqrt();
            jacobi[(k, k + 1)] = off;
            jacobi[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::try_new(jacobi, EIGEN_EPS, EIGEN_MAX_ITER).ok_or_else(|| {
        Error::numeric(
            "disk-quadrature",
            format!("Jacobi matrix eigen-iteration did not converge (n = {n})"),
        )
    })?;
    let mut pairs: Vec<(f64, f64)> = eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors.row(0).iter())
        .map(|(&x, &v)| (x, v * v))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs.into_iter().unzip())
}

/// Gauss rule for `(γ+1)(1-t)^γ dt` on `[0, 1]`, exact through degree `2n-1`.
pub fn gauss_jacobi_rule(n: usize, p: SpaceParams) -> Result<RadialRule> {
    if n == 0 {
        return Err(Error::argument(
            "gauss_jacobi_rule",
            "rule needs at least one node",
        ));
    }
    let (xs, weights) = jacobi_unit_mass(n, p.gamma(), 0.0)?;
    let nodes = xs.into_iter().map(|x| 0.5 * (x + 1.0)).collect();
    Ok(RadialRule { nodes, weights })
}

/// Composite radial rule with a break at `t = split`: Gauss-Legendre on
/// `[0, split]` against the (smooth there) Jacobi weight, Gauss-Jacobi on
/// `[split, 1]`. Used for integrands with a jump at `|z|² = split`.
pub fn split_gauss_jacobi_rule(n: usize, p: SpaceParams, split: f64) -> Result<RadialRule> {
    if n == 0 {
        return Err(Error::argument(
            "split_gauss_jacobi_rule",
            "rule needs at least one node per piece",
        ));
    }
    if !(split > 0.0 && split < 1.0) {
        return Err(Error::argument(
            "split_gauss_jacobi_rule",
            format!("split point {split} must lie in (0, 1)"),
        ));
    }
    let g = p.gamma();
    let (lx, lw) = jacobi_unit_mass(n, 0.0, 0.0)?;
    let (jx, jw) = jacobi_unit_mass(n, g, 0.0)?;
    let tail_mass = (1.0 - split).powf(g + 1.0);

    let mut nodes = Vec::with_capacity(2 * n);
    let mut weights = Vec::with_capacity(2 * n);
    for (x, w) in lx.into_iter().zip(lw) {
        let t = 0.5 * split * (x + 1.0);
        nodes.push(t);
        weights.push(w * split * (g + 1.0) * (1.0 - t).powf(g));
    }
    for (x, w) in jx.into_iter().zip(jw) {
        let s = 0.5 * (x + 1.0);
        nodes.push(split + (1.0 - split) * s);
        weights.push(w * tail_mass);
    }
    Ok(RadialRule { nodes, weights })
}

/// Tensor rule on the disk: radial rule in `t = r²` times `n_theta`
/// equispaced angles `θ_k = 2πk/n_theta`, each of weight `1/n_theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskRule {
    radial: RadialRule,
    n_theta: usize,
    radii: Vec<f64>,
    unit: Vec<Complex64>,
}

impl DiskRule {
    pub fn new(radial: RadialRule, n_theta: usize) -> Result<Self> {
        if n_theta < 4 {
            return Err(Error::argument(
                "disk_rule",
                format!("need at least 4 angular nodes, got {n_theta}"),
            ));
        }
        let radii = radial.nodes.iter().map(|t| t.sqrt()).collect();
        let unit = (0..n_theta)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n_theta as f64))
            .collect();
        Ok(Self {
            radial,
            n_theta,
            radii,
            unit,
        })
    }

    pub fn radial(&self) -> &RadialRule {
        &self.radial
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    /// Node radii `√tⱼ`.
    pub(crate) fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Unit phases `e^{iθ_k}`.
    pub(crate) fn phases(&self) -> &[Complex64] {
        &self.unit
    }

    pub fn len(&self) -> usize {
        self.radial.len() * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `Σ_{j,k} wⱼ (1/n_θ) f(√tⱼ e^{iθ_k})`.
    pub fn integrate<F>(&self, f: F) -> Result<Complex64>
    where
        F: Fn(Complex64) -> Complex64,
    {
        let inv = 1.0 / self.n_theta as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for (&r, &w) in self.radii.iter().zip(&self.radial.weights) {
            let mut ring = Complex64::new(0.0, 0.0);
            for &u in &self.unit {
                let z = u * r;
                let v = f(z);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::numeric_at(
                        "disk-quadrature",
                        format!("integrand is not finite at node {z}"),
                        z,
                    ));
                }
                ring += v;
            }
            total += ring * (w * inv);
        }
        Ok(total)
    }

    /// Real-valued variant of [`DiskRule::integrate`].
    pub fn integrate_real<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(Complex64) -> f64,
    {
        self.integrate(|z| Complex64::new(f(z), 0.0)).map(|v| v.re)
    }
}

/// Tensor rule built on [`gauss_jacobi_rule`].
pub fn disk_rule(n_r: usize, n_theta: usize, p: SpaceParams) -> Result<DiskRule> {
    DiskRule::new(gauss_jacobi_rule(n_r, p)?, n_theta)
}

/// Tensor rule with a radial break at `|z| = radius`.
pub fn split_disk_rule(
    n_r: usize,
    n_theta: usize,
    p: SpaceParams,
    radius: f64,
) -> Result<DiskRule> {
    DiskRule::new(split_gauss_jacobi_rule(n_r, p, radius * radius)?, n_theta)
}

/// `integrate(f, rule)`.
pub fn integrate<F>(f: F, rule: &DiskRule) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    rule.integrate(f)
}

/// Resolution needed for kernel-weighted integrands centred at `|w|`.
///
/// Angular aliasing decays like `|w|^{n_θ}` and the radial Gauss error like
/// `ρ^{-2n_r}` with `ρ` the Bernstein parameter of the pole at `t = 1/|w|²`,
/// so both counts grow like `1/(1-|w|)`.
pub fn resolution_for(modulus: f64, base_n_r: usize, base_n_theta: usize) -> (usize, usize) {
    let gap = (1.0 - modulus).max(1e-6);
    let n_theta = ((48.0 / gap).ceil() as usize).div_ceil(8) * 8;
    let n_r = (0.25 / gap).ceil() as usize;
    (base_n_r.max(n_r), base_n_theta.max(n_theta))
}

/// Memoizes disk rules by resolution and optional radial break.
#[derive(Debug)]
pub struct RuleCache {
    p: SpaceParams,
    rules: Mutex<HashMap<(usize, usize, u64), Arc<DiskRule>>>,
}

impl RuleCache {
    pub fn new(p: SpaceParams) -> Self {
        Self {
            p,
            rules: Mutex::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> SpaceParams {
        self.p
    }

    /// Rule with `n_r` radial and `n_theta` angular nodes, with a radial
    /// break at `|z| = radius` when one is given.
    pub fn get(&self, n_r: usize, n_theta: usize, split: Option<f64>) -> Result<Arc<DiskRule>> {
        let key = (n_r, n_theta, split.map_or(0, f64::to_bits));
        if let Some(rule) = self.rules.lock().expect("rule cache poisoned").get(&key) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(match split {
            Some(radius) => split_disk_rule(n_r, n_theta, self.p, radius)?,
            None => disk_rule(n_r, n_theta, self.p)?,
        });
        self.rules
            .lock()
            .expect("rule cache poisoned")
            .insert(key, Arc::clone(&rule));
        Ok(rule)
    }
}
