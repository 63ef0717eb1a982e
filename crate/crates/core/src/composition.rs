//! Weyl-type weighted composition operators `C f = k̂_β · (f∘ψ_{β,η})` and
//! unweighted composition operators `C_ψ f = f∘ψ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bergman::{right_half_pow, DiskPoint, SpaceParams};
use crate::error::{Error, Result};
use crate::quadrature::DiskRule;
use crate::range::GridSpec;
use crate::symbols::{Automorphism, SelfMap};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `C_{k̂_β, ψ_{β,η}}` on `A²_γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylOperator {
    pub map: Automorphism,
    pub params: SpaceParams,
}

impl WeylOperator {
    pub fn new(beta: DiskPoint, eta: Complex64, params: SpaceParams) -> Result<Self> {
        Ok(Self {
            map: Automorphism::new(beta, eta)?,
            params,
        })
    }

    pub fn beta(&self) -> DiskPoint {
        self.map.beta()
    }

    pub fn eta(&self) -> Complex64 {
        self.map.eta()
    }

    /// `k̂_β(z)`.
    pub fn weight(&self, z: Complex64) -> Complex64 {
        let b = self.beta().value();
        let s = self.params.kernel_exponent();
        right_half_pow(ONE - b.conj() * z, -s) * (1.0 - b.norm_sqr()).powf(0.5 * s)
    }
}

fn horner(f: &[Complex64], z: Complex64) -> Complex64 {
    f.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// `(C f)(w) = k̂_β(w) f(ψ(w))` for `f = Σ f[k] zᵏ`.
pub fn weyl_apply(op: &WeylOperator, f: &[Complex64], w: DiskPoint) -> Complex64 {
    let z = w.value();
    op.weight(z) * horner(f, op.map.eval(z))
}

/// `|‖Cf‖² - ‖f‖²|`, both norms by quadrature.
pub fn weyl_isometry_residual(op: &WeylOperator, f: &[Complex64], rule: &DiskRule) -> Result<f64> {
    let image = rule.integrate_real(|z| (op.weight(z) * horner(f, op.map.eval(z))).norm_sqr())?;
    let plain = rule.integrate_real(|z| horner(f, z).norm_sqr())?;
    Ok((image - plain).abs())
}

/// Closed-form Berezin transform
/// `(1-|β|²)^{(γ+2)/2} (1-|ξ|²)^{γ+2} / ((1-β̄ξ)^{γ+2} (1-ξ̄ψ(ξ))^{γ+2})`,
/// each factor raised separately with the principal branch.
pub fn weyl_berezin(op: &WeylOperator, xi: DiskPoint) -> Complex64 {
    let s = op.params.kernel_exponent();
    let b = op.beta().value();
    let x = xi.value();
    let scale = (1.0 - b.norm_sqr()).powf(0.5 * s) * (1.0 - xi.norm_sqr()).powf(s);
    let d1 = right_half_pow(ONE - b.conj() * x, -s);
    let d2 = right_half_pow(ONE - x.conj() * op.map.eval(x), -s);
    d1 * d2 * scale
}

/// `|(1-|β|²)(1-|ξ|²)² / D²|^{(γ+2)/2}` with the expanded denominator
/// `D = 1 - β̄ξ - η|ξ|² + ηξ̄β`.
pub fn weyl_berezin_modulus_squared_form(op: &WeylOperator, xi: DiskPoint) -> f64 {
    let s = op.params.kernel_exponent();
    let b = op.beta().value();
    let e = op.eta();
    let x = xi.value();
    let den = ONE - b.conj() * x - e * xi.norm_sqr() + e * x.conj() * b;
    let ratio = (1.0 - b.norm_sqr()) * (1.0 - xi.norm_sqr()).powi(2) / den.norm_sqr();
    ratio.powf(0.5 * s)
}

/// `⟨C k̂_ξ, k̂_ξ⟩ = ∫ k̂_β(z) k̂_ξ(ψ(z)) conj(k̂_ξ(z)) dA_γ` by quadrature.
pub fn weyl_berezin_quadrature(op: &WeylOperator, xi: DiskPoint, rule: &DiskRule) -> Result<Complex64> {
    let s = op.params.kernel_exponent();
    let x = xi.value();
    let scale = (1.0 - xi.norm_sqr()).powf(s);
    rule.integrate(|z| {
        let a = right_half_pow(ONE - x.conj() * op.map.eval(z), -s);
        let b = right_half_pow(ONE - x * z.conj(), -s);
        op.weight(z) * a * b * scale
    })
}

/// `(1-|β|²)^{(γ+2)/2} (1-|ξ|²)^{γ+2} / 2^{2(γ+2)}`.
pub fn weyl_lower_bound(beta: DiskPoint, xi: DiskPoint, p: SpaceParams) -> f64 {
    let s = p.kernel_exponent();
    (1.0 - beta.norm_sqr()).powf(0.5 * s) * (1.0 - xi.norm_sqr()).powf(s) / 2f64.powf(2.0 * s)
}

/// `(1-|β|²)^{(γ+2)/2}`, the Berezin number for `η = 1`.
pub fn weyl_ber_formula(beta: DiskPoint, p: SpaceParams) -> f64 {
    (1.0 - beta.norm_sqr()).powf(0.5 * p.kernel_exponent())
}

/// Grid maximum of `|weyl_berezin|` for `η = 1`.
///
/// The maximum is attained along a whole diameter, so among values within a
/// relative `1e-12` of the maximum the point closest to the origin is returned.
pub fn weyl_berezin_number(beta: DiskPoint, p: SpaceParams, grid: &GridSpec) -> Result<(f64, DiskPoint)> {
    let op = WeylOperator::new(beta, ONE, p)?;
    let values: Vec<(DiskPoint, f64)> = grid
        .points()
        .into_iter()
        .map(|xi| (xi, weyl_berezin(&op, xi).norm()))
        .collect();
    let max = values.iter().map(|v| v.1).fold(0.0, f64::max);
    let argmax = values
        .iter()
        .filter(|v| v.1 >= max * (1.0 - 1e-12))
        .min_by(|a, b| a.0.norm().total_cmp(&b.0.norm()))
        .map(|v| v.0)
        .ok_or_else(|| Error::argument("weyl_berezin_number", "empty grid"))?;
    Ok((max, argmax))
}

/// `C̃_ψ(w) = ((1-|w|²)/(1-w̄ψ(w)))^{γ+2}`.
pub fn comp_berezin<M: SelfMap + ?Sized>(psi: &M, p: SpaceParams, w: DiskPoint) -> Result<Complex64> {
    let z = w.value();
    let image = psi.map(z);
    if !(image.norm() < 1.0) {
        return Err(Error::numeric_at(
            "composition",
            format!("self-map sends {z} to {image}, outside the disk"),
            z,
        ));
    }
    let base = Complex64::new(1.0 - w.norm_sqr(), 0.0) / (ONE - z.conj() * image);
    Ok(right_half_pow(base, p.kernel_exponent()))
}

/// `(1-|w|²)^{γ+2} / 2^{γ+2}`.
pub fn comp_lower_bound(w: DiskPoint, p: SpaceParams) -> f64 {
    let s = p.kernel_exponent();
    (1.0 - w.norm_sqr()).powf(s) / 2f64.powf(s)
}

/// `(1 - r|β|²)^{γ+2}`, the value of `C̃` for the Blaschke factor at `w = rβ`.
pub fn blaschke_segment_value(beta: DiskPoint, r: f64, p: SpaceParams) -> f64 {
    (1.0 - r * beta.norm_sqr()).powf(p.kernel_exponent())
}

/// Polar decomposition of `C̃` for the Blaschke factor `ψ_{β,1}`:
/// `C̃(w) = (r c)^{γ+2} e^{i(γ+2)θ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarParts {
    pub c: f64,
    pub r: f64,
    pub theta: f64,
    pub re: f64,
    pub im: f64,
}

pub fn blaschke_berezin_parts(beta: DiskPoint, p: SpaceParams, w: DiskPoint) -> PolarParts {
    let s = beta.value().conj() * w.value();
    let a = 1.0 - w.norm_sqr();
    let c = a / (a * a + 4.0 * s.im * s.im);
    let x = a * (1.0 - s.re) + 2.0 * s.im * s.im;
    let y = s.im * (1.0 + w.norm_sqr() - 2.0 * s.re);
    assert!(x > 0.0, "cosine component {x} not positive at w = {}", w.value());
    let r = x.hypot(y);
    let theta = (y / x).atan();
    let e = p.kernel_exponent();
    let m = (r * c).powf(e);
    PolarParts {
        c,
        r,
        theta,
        re: m * (e * theta).cos(),
        im: m * (e * theta).sin(),
    }
}

/// `(β/β̄) w̄`: the point whose Blaschke Berezin value is the conjugate of
/// the value at `w`.
pub fn conjugate_partner(beta: DiskPoint, w: DiskPoint) -> Result<DiskPoint> {
    let b = beta.value();
    if b == Complex64::new(0.0, 0.0) {
        return Err(Error::argument("conjugate_partner", "beta = 0 has no argument"));
    }
    let rot = b / b.conj();
    let rot = rot / rot.norm();
    DiskPoint::new(rot * w.value().conj())
}
