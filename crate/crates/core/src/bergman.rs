//! Weighted Bergman space substrate: the weight parameter, points of the open
//! unit disk, reproducing kernels and the monomial orthonormal basis.
//!
//! The space `A²_γ(𝔻)` carries the probability measure
//! `dA_γ(w) = (γ+1)(1-|w|²)^γ dA(w)`, under which the monomials are
//! orthogonal with `‖zⁿ‖² = 1/cₙ`, where `cₙ = Γ(n+γ+2) / (n! Γ(γ+2))`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points closer than this to the unit circle are rejected.
pub const DISK_MARGIN: f64 = 1e-14;

/// Weight parameter of `A²_γ(𝔻)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SpaceParams {
    gamma: f64,
}

impl SpaceParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= -1.0 {
            return Err(Error::argument(
                "SpaceParams::new",
                format!("weight exponent must satisfy gamma > -1, got {gamma}"),
            ));
        }
        Ok(Self { gamma })
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The kernel exponent `γ + 2`.
    #[inline]
    pub fn kernel_exponent(&self) -> f64 {
        self.gamma + 2.0
    }
}

impl TryFrom<f64> for SpaceParams {
    type Error = Error;

    fn try_from(gamma: f64) -> Result<Self> {
        Self::new(gamma)
    }
}

impl From<SpaceParams> for f64 {
    fn from(p: SpaceParams) -> f64 {
        p.gamma
    }
}

/// A point of the open unit disk, `|z| < 1 - DISK_MARGIN`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint(Complex64::new(0.0, 0.0));

    pub fn new(value: Complex64) -> Result<Self> {
        let modulus = value.norm();
        if !modulus.is_finite() || modulus >= 1.0 - DISK_MARGIN {
            return Err(Error::argument(
                "DiskPoint::new",
                format!("point {value} is not strictly inside the unit disk"),
            ));
        }
        Ok(Self(value))
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(r, theta))
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        self.0
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }
}

impl TryFrom<Complex64> for DiskPoint {
    type Error = Error;

    fn try_from(z: Complex64) -> Result<Self> {
        Self::new(z)
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Complex64 {
        p.0
    }
}

/// `exp(exponent · Log base)` with the principal logarithm, `Im Log ∈ (-π, π]`.
pub fn principal_pow(base: Complex64, exponent: f64) -> Result<Complex64> {
    if base.re == 0.0 && base.im == 0.0 {
        return Err(Error::Domain {
            op: "principal_pow",
            detail: "zero base has no logarithm".into(),
        });
    }
    if !(base.re.is_finite() && base.im.is_finite() && exponent.is_finite()) {
        return Err(Error::Domain {
            op: "principal_pow",
            detail: format!("non-finite input {base}^{exponent}"),
        });
    }
    let mut arg = base.im.atan2(base.re);
    if arg == -PI {
        arg = PI;
    }
    // Polar assembly keeps positive real bases exactly real.
    Ok(Complex64::from_polar(base.norm().powf(exponent), arg * exponent))
}

/// Principal power for bases already known to lie in the open right half-plane.
#[inline]
pub(crate) fn right_half_pow(base: Complex64, exponent: f64) -> Complex64 {
    debug_assert!(base.re > 0.0, "base {base} outside the right half-plane");
    Complex64::from_polar(base.norm().powf(exponent), base.im.atan2(base.re) * exponent)
}

/// Reproducing kernel `k_ξ(w) = (1 - ξ̄w)^{-(γ+2)}`.
pub fn kernel_eval(xi: DiskPoint, w: DiskPoint, p: SpaceParams) -> Complex64 {
    let base = Complex64::new(1.0, 0.0) - xi.value().conj() * w.value();
    right_half_pow(base, -p.kernel_exponent())
}

/// Unit-norm kernel `k̂_ξ(w) = (1-|ξ|²)^{(γ+2)/2} k_ξ(w)`.
pub fn normalized_kernel_eval(xi: DiskPoint, w: DiskPoint, p: SpaceParams) -> Complex64 {
    let scale = (1.0 - xi.norm_sqr()).powf(0.5 * p.kernel_exponent());
    kernel_eval(xi, w, p) * scale
}

/// `|k̂_ξ(z)|²` evaluated in real arithmetic.
#[inline]
pub(crate) fn normalized_kernel_sqr(xi: Complex64, z: Complex64, p: SpaceParams) -> f64 {
    let s = p.kernel_exponent();
    let num = 1.0 - xi.norm_sqr();
    let den = (Complex64::new(1.0, 0.0) - xi.conj() * z).norm_sqr();
    (num / den).powf(s)
}

/// Kernel power-series coefficient `cₙ = Γ(n+γ+2)/(n! Γ(γ+2))`, so that
/// `k_ξ(w) = Σ cₙ (ξ̄w)ⁿ` and `eₙ = √cₙ zⁿ` is orthonormal.
pub fn basis_coeff(n: usize, p: SpaceParams) -> f64 {
    let s = p.kernel_exponent();
    (0..n).fold(1.0, |c, k| c * (k as f64 + s) / (k as f64 + 1.0))
}

/// `[c₀, …, c_{len-1}]`.
pub fn basis_coeffs(len: usize, p: SpaceParams) -> Vec<f64> {
    let s = p.kernel_exponent();
    let mut out = Vec::with_capacity(len);
    let mut c = 1.0;
    for k in 0..len {
        out.push(c);
        c *= (k as f64 + s) / (k as f64 + 1.0);
    }
    out
}

/// `⟨zⁿ, zᵐ⟩` in `A²_γ`.
pub fn monomial_inner(n: usize, m: usize, p: SpaceParams) -> f64 {
    if n == m {
        1.0 / basis_coeff(n, p)
    } else {
        0.0
    }
}
