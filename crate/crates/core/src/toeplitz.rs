//! Berezin transforms of Toeplitz operators `T_φ f = P_γ(φf)`.
//!
//! Three independent routes compute `T̃_φ(w) = ⟨T_φ k̂_w, k̂_w⟩`:
//!
//! * direct quadrature of `φ(z) |k̂_w(z)|²` against `dA_γ`,
//! * the Möbius change of variables `∫ φ∘φ_w dA_γ`,
//! * a Rayleigh quotient of the compression of `T_φ` to the first `N`
//!   orthonormal monomials `eₙ = √cₙ zⁿ`.
//!
//! `|z|²` additionally has a closed power series.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::bergman::{basis_coeffs, normalized_kernel_sqr, DiskPoint, SpaceParams};
use crate::error::{Error, Result};
use crate::quadrature::{resolution_for, DiskRule, RuleCache, DEFAULT_N_R, DEFAULT_N_THETA};
use crate::symbols::{covariant_mobius_value, CatalogSymbol, SymbolExpr};

/// Default truncation dimension.
pub const DEFAULT_DIM: usize = 64;

/// Relative kernel tail allowed by [`berezin_from_matrix`].
pub const KERNEL_TAIL_TOL: f64 = 1e-10;

const SERIES_MAX_TERMS: usize = 1_000_000;

/// `∫ φ(z) |k̂_w(z)|² dA_γ(z)`.
pub fn berezin_toeplitz_quad(
    s: &SymbolExpr,
    w: DiskPoint,
    p: SpaceParams,
    rule: &DiskRule,
) -> Result<Complex64> {
    let wv = w.value();
    rule.integrate(|z| s.eval_at(z) * normalized_kernel_sqr(wv, z, p))
}

/// `∫ φ(φ_w(z)) dA_γ(z)`.
pub fn berezin_toeplitz_covariant(
    s: &SymbolExpr,
    w: DiskPoint,
    _p: SpaceParams,
    rule: &DiskRule,
) -> Result<Complex64> {
    let wv = w.value();
    rule.integrate(|z| s.eval_at(covariant_mobius_value(wv, z)))
}

/// Rule resolved for the kernel peak at `w`; indicator symbols get a radial
/// break at their discontinuity.
pub fn rule_for(s: &SymbolExpr, w: DiskPoint, cache: &RuleCache) -> Result<Arc<DiskRule>> {
    rule_at(s, w, cache, DEFAULT_N_R, DEFAULT_N_THETA)
}

/// [`rule_for`] with explicit base resolution.
pub fn rule_at(
    s: &SymbolExpr,
    w: DiskPoint,
    cache: &RuleCache,
    base_n_r: usize,
    base_n_theta: usize,
) -> Result<Arc<DiskRule>> {
    let (n_r, n_theta) = resolution_for(w.norm(), base_n_r, base_n_theta);
    let split = match s.catalog() {
        Some(CatalogSymbol::IndicatorDisk { radius }) => Some(radius),
        _ => None,
    };
    cache.get(n_r, n_theta, split)
}

/// Direct-quadrature transform at a resolution adapted to `|w|`.
pub fn berezin_toeplitz(s: &SymbolExpr, w: DiskPoint, cache: &RuleCache) -> Result<Complex64> {
    let rule = rule_for(s, w, cache)?;
    berezin_toeplitz_quad(s, w, cache.params(), &rule)
}

/// `T̃_{|z|²}(w) = (1-|w|²)^{γ+2} Σₙ (n+1)cₙ/(n+γ+2) |w|^{2n}`.
///
/// Summation stops once the terms decrease geometrically and the bound
/// `term · q/(1-q)` on the remaining tail, scaled by the prefactor, drops
/// below `tol`.
pub fn berezin_modsq_series(w: DiskPoint, p: SpaceParams, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::argument(
            "berezin_modsq_series",
            format!("tolerance must be positive, got {tol}"),
        ));
    }
    let x = w.norm_sqr();
    if w.norm() > 1.0 - 1e-6 {
        return Err(Error::argument(
            "berezin_modsq_series",
            format!("|w| = {} exceeds 1 - 1e-6", w.norm()),
        ));
    }
    let s = p.kernel_exponent();
    let prefactor = (1.0 - x).powf(s);
    if x == 0.0 {
        return Ok(1.0 / s);
    }
    let mut coeff = 1.0; // cₙ
    let mut xn = 1.0; // |w|^{2n}
    let mut sum = 0.0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        let term = (nf + 1.0) * coeff / (nf + s) * xn;
        sum += term;
        let next_coeff = coeff * (nf + s) / (nf + 1.0);
        let next_term = (nf + 2.0) * next_coeff / (nf + 1.0 + s) * xn * x;
        let q = next_term / term;
        if q < 1.0 && prefactor * next_term / (1.0 - q) < tol {
            return Ok(prefactor * sum);
        }
        coeff = next_coeff;
        xn *= x;
    }
    Err(Error::numeric(
        "toeplitz",
        format!("modulus-squared series did not converge within {SERIES_MAX_TERMS} terms at |w| = {}", w.norm()),
    ))
}

/// Compression of `T_φ` to `span{e₀, …, e_{N-1}}`:
/// `M[p][q] = ⟨T_φ e_q, e_p⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    entries: DMatrix<Complex64>,
}

impl TruncatedOperator {
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::argument(
                "TruncatedOperator::from_matrix",
                format!("need a non-empty square matrix, got {}x{}", entries.nrows(), entries.ncols()),
            ));
        }
        if entries.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::numeric("toeplitz", "matrix has non-finite entries"));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// `max |M - M†|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `u† M u` for a unit vector `u`.
    pub fn quadratic_form(&self, u: &[Complex64]) -> Complex64 {
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..n {
                row += self.entries[(i, j)] * u[j];
            }
            acc += u[i].conj() * row;
        }
        acc
    }
}

/// Assembles the `N × N` compression of `T_φ`.
///
/// Polynomial symbols use the closed form
/// `⟨z^m z̄^n e_q, e_p⟩ = √(c_p c_q)/c_{m+q} · [m+q = n+p]`; catalog symbols
/// are integrated with `rule` through the angular Fourier coefficients of `φ`
/// on each quadrature ring.
pub fn toeplitz_matrix(
    s: &SymbolExpr,
    p: SpaceParams,
    dim: usize,
    rule: &DiskRule,
) -> Result<TruncatedOperator> {
    if dim == 0 {
        return Err(Error::argument("toeplitz_matrix", "dimension must be positive"));
    }
    match s.terms() {
        Some(terms) => {
            let max_shift = terms.keys().map(|&(m, n)| m.max(n) as usize).max().unwrap_or(0);
            let c = basis_coeffs(dim + max_shift, p);
            let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
            for (&(zm, zn), &a) in terms {
                let (zm, zn) = (zm as usize, zn as usize);
                // m + q = n + p  ⇒  q = p + n - m
                for row in 0..dim {
                    let Some(col) = (row + zn).checked_sub(zm) else {
                        continue;
                    };
                    if col >= dim {
                        continue;
                    }
                    m[(row, col)] += a * ((c[row] * c[col]).sqrt() / c[zm + col]);
                }
            }
            TruncatedOperator::from_matrix(m)
        }
        None => quadrature_matrix(s, p, dim, rule),
    }
}

fn quadrature_matrix(
    s: &SymbolExpr,
    p: SpaceParams,
    dim: usize,
    rule: &DiskRule,
) -> Result<TruncatedOperator> {
    let c = basis_coeffs(dim, p);
    let n_theta = rule.n_theta();
    let phases = rule.phases();
    let max_d = dim - 1;
    let inv = 1.0 / n_theta as f64;
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));

    for (&r, &w) in rule.radii().iter().zip(rule.radial().weights()) {
        let ring: Vec<Complex64> = phases.iter().map(|&u| s.eval_at(u * r)).collect();
        if let Some((k, _)) = ring
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.re.is_finite() && v.im.is_finite()))
        {
            let z = phases[k] * r;
            return Err(Error::numeric_at(
                "toeplitz",
                format!("symbol is not finite at node {z}"),
                z,
            ));
        }
        // fourier[max_d + d] = (1/n_θ) Σ_k φ(z_k) e^{i d θ_k}
        let fourier: Vec<Complex64> = (0..=2 * max_d)
            .map(|idx| {
                let d = idx as i64 - max_d as i64;
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, v) in ring.iter().enumerate() {
                    let j = (d * k as i64).rem_euclid(n_theta as i64) as usize;
                    acc += v * phases[j];
                }
                acc * inv
            })
            .collect();
        let mut rpow = vec![1.0; 2 * dim - 1];
        for k in 1..rpow.len() {
            rpow[k] = rpow[k - 1] * r;
        }
        for row in 0..dim {
            for col in 0..dim {
                let d = max_d + col - row;
                m[(row, col)] += fourier[d] * (w * (c[row] * c[col]).sqrt() * rpow[row + col]);
            }
        }
    }
    TruncatedOperator::from_matrix(m)
}

/// Smallest `N` whose kernel tail `Σ_{n≥N} cₙ|w|^{2n}` is below
/// `rel_tol · ‖k_w‖²`.
pub fn required_dim(w: DiskPoint, p: SpaceParams, rel_tol: f64) -> usize {
    let x = w.norm_sqr();
    let total = (1.0 - x).powf(-p.kernel_exponent());
    let s = p.kernel_exponent();
    let mut partial = 0.0;
    let mut term = 1.0;
    let mut n = 0usize;
    while total - partial >= rel_tol * total && n < 10_000_000 {
        partial += term;
        term *= x * (n as f64 + s) / (n as f64 + 1.0);
        n += 1;
    }
    n.max(1)
}

/// Rayleigh quotient `v†Mv / v†v` with `vₙ = √cₙ w̄ⁿ`, the coordinates of
/// `k_w` truncated to the first `N` basis vectors.
pub fn berezin_from_matrix(
    op: &TruncatedOperator,
    w: DiskPoint,
    p: SpaceParams,
) -> Result<Complex64> {
    let dim = op.dim();
    let c = basis_coeffs(dim, p);
    let wb = w.value().conj();
    let mut v = Vec::with_capacity(dim);
    let mut pow = Complex64::new(1.0, 0.0);
    let mut norm2 = 0.0;
    for &cn in &c {
        let vn = pow * cn.sqrt();
        norm2 += vn.norm_sqr();
        v.push(vn);
        pow *= wb;
    }
    let total = (1.0 - w.norm_sqr()).powf(-p.kernel_exponent());
    let tail = total - norm2;
    if tail >= KERNEL_TAIL_TOL * total {
        return Err(Error::Resolution {
            op: "berezin_from_matrix",
            detail: format!(
                "kernel tail {:.3e} of ‖k_w‖² at |w| = {} needs N ≥ {} (have {dim})",
                tail / total,
                w.norm(),
                required_dim(w, p, KERNEL_TAIL_TOL)
            ),
        });
    }
    Ok(op.quadratic_form(&v) / norm2)
}

/// Support points of the numerical range `W(M)`.
///
/// For `θ_k = 2πk/n_angles` the top eigenvector `u_k` of the Hermitian part
/// of `e^{iθ_k} M` maximizes `Re(e^{iθ_k} ⟨Mu, u⟩)`, so `u_k† M u_k` lies on
/// the boundary of `W(M)` in direction `e^{-iθ_k}`.
pub fn numerical_range_boundary(op: &TruncatedOperator, n_angles: usize) -> Result<Vec<Complex64>> {
    if n_angles < 8 {
        return Err(Error::argument(
            "numerical_range_boundary",
            format!("need at least 8 directions, got {n_angles}"),
        ));
    }
    let m = op.entries();
    let adj = m.adjoint();
    (0..n_angles)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n_angles as f64;
            let rot = Complex64::from_polar(1.0, theta);
            let h = (m * rot + &adj * rot.conj()) * Complex64::new(0.5, 0.0);
            let eig = SymmetricEigen::try_new(h, 1e-15, 10_000).ok_or_else(|| {
                Error::numeric(
                    "toeplitz",
                    format!("Hermitian eigen-iteration did not converge at angle {theta}"),
                )
            })?;
            let top = eig
                .eigenvalues
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .expect("non-empty spectrum");
            let u: Vec<Complex64> = eig.eigenvectors.column(top).iter().copied().collect();
            Ok(op.quadratic_form(&u))
        })
        .collect()
}
