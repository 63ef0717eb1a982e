//! Symbols of Toeplitz operators and automorphisms of the disk.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bergman::DiskPoint;
use crate::error::{Error, Result};

/// Tolerance on `|η| = 1`.
pub const UNIMODULAR_TOL: f64 = 1e-14;

/// Named symbols outside the polynomial family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogSymbol {
    /// `1` on `|z| ≤ radius`, `0` elsewhere.
    IndicatorDisk { radius: f64 },
    /// `|z|²`.
    ModulusSquared,
}

/// A bounded symbol `φ` on the disk: either a finite sum `Σ a_{mn} z^m z̄^n`
/// or a catalog entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymbolLiteral", into = "SymbolLiteral")]
pub enum SymbolExpr {
    Terms(BTreeMap<(u32, u32), Complex64>),
    Catalog(CatalogSymbol),
}

impl SymbolExpr {
    /// Builds `Σ a_{mn} z^m z̄^n`; repeated bidegrees are summed and zero
    /// coefficients dropped.
    pub fn polynomial<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (k, a) in terms {
            *map.entry(k).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        map.retain(|_, a| *a != Complex64::new(0.0, 0.0));
        SymbolExpr::Terms(map)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial([((0, 0), c)])
    }

    /// `φ(z) = z`.
    pub fn identity() -> Self {
        Self::polynomial([((1, 0), Complex64::new(1.0, 0.0))])
    }

    pub fn indicator_disk(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::argument(
                "SymbolExpr::indicator_disk",
                format!("radius must lie in (0, 1), got {radius}"),
            ));
        }
        Ok(SymbolExpr::Catalog(CatalogSymbol::IndicatorDisk { radius }))
    }

    pub fn modulus_squared() -> Self {
        SymbolExpr::Catalog(CatalogSymbol::ModulusSquared)
    }

    pub fn terms(&self) -> Option<&BTreeMap<(u32, u32), Complex64>> {
        match self {
            SymbolExpr::Terms(t) => Some(t),
            SymbolExpr::Catalog(_) => None,
        }
    }

    pub fn catalog(&self) -> Option<CatalogSymbol> {
        match self {
            SymbolExpr::Catalog(c) => Some(*c),
            SymbolExpr::Terms(_) => None,
        }
    }

    /// `φ(z)` for any complex `z`.
    pub fn eval_at(&self, z: Complex64) -> Complex64 {
        match self {
            SymbolExpr::Terms(terms) => {
                let zb = z.conj();
                terms
                    .iter()
                    .map(|(&(m, n), &a)| a * z.powu(m) * zb.powu(n))
                    .sum()
            }
            SymbolExpr::Catalog(CatalogSymbol::IndicatorDisk { radius }) => {
                if z.norm() <= *radius {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            SymbolExpr::Catalog(CatalogSymbol::ModulusSquared) => {
                Complex64::new(z.norm_sqr(), 0.0)
            }
        }
    }

    /// Harmonic iff no mixed term `z^m z̄^n` with `m, n ≥ 1` survives, since
    /// `Δ(z^m z̄^n) = 4mn z^{m-1} z̄^{n-1}`. Catalog entries are not harmonic.
    pub fn is_harmonic(&self) -> bool {
        match self {
            SymbolExpr::Terms(terms) => terms.keys().all(|&(m, n)| m == 0 || n == 0),
            SymbolExpr::Catalog(_) => false,
        }
    }

    /// Real-valued symbols: `a_{mn} = conj(a_{nm})`. Their Toeplitz
    /// operators are self-adjoint.
    pub fn is_hermitian(&self) -> bool {
        match self {
            SymbolExpr::Terms(terms) => terms.iter().all(|(&(m, n), &a)| {
                let b = terms
                    .get(&(n, m))
                    .copied()
                    .unwrap_or(Complex64::new(0.0, 0.0));
                (a - b.conj()).norm() <= 1e-14 * a.norm().max(1.0)
            }),
            SymbolExpr::Catalog(_) => true,
        }
    }

    /// `Σ|a_{mn}|`, or 1 for catalog entries; dominates `sup |φ|` on 𝔻.
    pub fn norm_bound(&self) -> f64 {
        match self {
            SymbolExpr::Terms(terms) => terms.values().map(|a| a.norm()).sum(),
            SymbolExpr::Catalog(_) => 1.0,
        }
    }

    /// Parses the JSON literal `{"terms": [[m, n, re, im], ...]}`,
    /// `{"catalog": "indicator", "radius": R}` or `{"catalog": "modsq"}`.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::argument("SymbolExpr::from_json", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("symbol literal serializes")
    }
}

/// `eval_symbol(s, z)`.
pub fn eval_symbol(s: &SymbolExpr, z: DiskPoint) -> Complex64 {
    s.eval_at(z.value())
}

/// JSON wire form of a symbol.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolLiteral {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<(u32, u32, f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    catalog: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
}

impl TryFrom<SymbolLiteral> for SymbolExpr {
    type Error = Error;

    fn try_from(lit: SymbolLiteral) -> Result<Self> {
        match (lit.terms, lit.catalog.as_deref()) {
            (Some(terms), None) => {
                if lit.radius.is_some() {
                    return Err(Error::argument(
                        "SymbolExpr::from_json",
                        "radius is only valid with the indicator catalog entry",
                    ));
                }
                if terms
                    .iter()
                    .any(|&(_, _, re, im)| !(re.is_finite() && im.is_finite()))
                {
                    return Err(Error::argument(
                        "SymbolExpr::from_json",
                        "coefficients must be finite",
                    ));
                }
                Ok(SymbolExpr::polynomial(
                    terms
                        .into_iter()
                        .map(|(m, n, re, im)| ((m, n), Complex64::new(re, im))),
                ))
            }
            (None, Some("indicator")) => match lit.radius {
                Some(r) => SymbolExpr::indicator_disk(r),
                None => Err(Error::argument(
                    "SymbolExpr::from_json",
                    "indicator catalog entry needs a radius",
                )),
            },
            (None, Some("modsq")) if lit.radius.is_none() => Ok(SymbolExpr::modulus_squared()),
            (None, Some(other)) => Err(Error::argument(
                "SymbolExpr::from_json",
                format!("unknown catalog entry {other:?}"),
            )),
            (Some(_), Some(_)) => Err(Error::argument(
                "SymbolExpr::from_json",
                "exactly one of terms and catalog may be given",
            )),
            (None, None) => Err(Error::argument(
                "SymbolExpr::from_json",
                "symbol needs terms or a catalog entry",
            )),
        }
    }
}

impl From<SymbolExpr> for SymbolLiteral {
    fn from(s: SymbolExpr) -> Self {
        match s {
            SymbolExpr::Terms(terms) => SymbolLiteral {
                terms: Some(
                    terms
                        .into_iter()
                        .map(|((m, n), a)| (m, n, a.re, a.im))
                        .collect(),
                ),
                catalog: None,
                radius: None,
            },
            SymbolExpr::Catalog(CatalogSymbol::IndicatorDisk { radius }) => SymbolLiteral {
                terms: None,
                catalog: Some("indicator".into()),
                radius: Some(radius),
            },
            SymbolExpr::Catalog(CatalogSymbol::ModulusSquared) => SymbolLiteral {
                terms: None,
                catalog: Some("modsq".into()),
                radius: None,
            },
        }
    }
}

/// A holomorphic self-map of the disk.
pub trait SelfMap: Sync {
    fn map(&self, w: Complex64) -> Complex64;
}

/// The identity self-map.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityMap;

impl SelfMap for IdentityMap {
    fn map(&self, w: Complex64) -> Complex64 {
        w
    }
}

/// Any closure `𝔻 → 𝔻` as a [`SelfMap`]. The caller guarantees the image
/// stays inside the disk.
pub struct FnSelfMap<F>(pub F);

impl<F: Fn(Complex64) -> Complex64 + Sync> SelfMap for FnSelfMap<F> {
    fn map(&self, w: Complex64) -> Complex64 {
        (self.0)(w)
    }
}

/// Disk automorphism `ψ_{β,η}(w) = η (w - β)/(1 - β̄w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Automorphism {
    beta: DiskPoint,
    eta: Complex64,
}

impl Automorphism {
    pub fn new(beta: DiskPoint, eta: Complex64) -> Result<Self> {
        if !((eta.norm() - 1.0).abs() <= UNIMODULAR_TOL) {
            return Err(Error::argument(
                "Automorphism::new",
                format!("eta must be unimodular, |{eta}| = {}", eta.norm()),
            ));
        }
        Ok(Self { beta, eta })
    }

    /// Elliptic rotation `w ↦ ηw`.
    pub fn elliptic(eta: Complex64) -> Result<Self> {
        Self::new(DiskPoint::ORIGIN, eta)
    }

    /// Blaschke factor `w ↦ (w - β)/(1 - β̄w)`.
    pub fn blaschke(beta: DiskPoint) -> Self {
        Self {
            beta,
            eta: Complex64::new(1.0, 0.0),
        }
    }

    pub fn identity() -> Self {
        Self::blaschke(DiskPoint::ORIGIN)
    }

    pub fn beta(&self) -> DiskPoint {
        self.beta
    }

    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    /// `ψ_{β,η}⁻¹ = ψ_{-ηβ, η̄}`.
    pub fn inverse(&self) -> Self {
        let beta = DiskPoint::new(-self.eta * self.beta.value())
            .expect("rotation preserves the disk margin");
        Self {
            beta,
            eta: self.eta.conj(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.beta.value() == Complex64::new(0.0, 0.0) && self.eta == Complex64::new(1.0, 0.0)
    }

    /// Raw evaluation at any `w` with `β̄w ≠ 1`.
    #[inline]
    pub fn eval(&self, w: Complex64) -> Complex64 {
        let b = self.beta.value();
        self.eta * (w - b) / (Complex64::new(1.0, 0.0) - b.conj() * w)
    }
}

impl SelfMap for Automorphism {
    fn map(&self, w: Complex64) -> Complex64 {
        self.eval(w)
    }
}

/// `ψ_{β,η}(w)`.
pub fn apply_automorphism(a: &Automorphism, w: DiskPoint) -> Result<DiskPoint> {
    DiskPoint::new(a.eval(w.value()))
}

/// `φ_w(z) = (w - z)/(1 - w̄z)`, the involutive automorphism swapping `0`
/// and `w`.
#[inline]
pub fn covariant_mobius_value(w: Complex64, z: Complex64) -> Complex64 {
    (w - z) / (Complex64::new(1.0, 0.0) - w.conj() * z)
}

pub fn covariant_mobius(w: DiskPoint, z: DiskPoint) -> Result<DiskPoint> {
    DiskPoint::new(covariant_mobius_value(w.value(), z.value()))
}

/// Interior fixed point `(1 - √(1-|β|²))/β̄` of `ψ_{β,-1}`.
pub fn blaschke_fixed_point(beta: DiskPoint) -> Result<DiskPoint> {
    let b = beta.value();
    if b == Complex64::new(0.0, 0.0) {
        return Err(Error::argument(
            "blaschke_fixed_point",
            "beta = 0 has no isolated fixed point",
        ));
    }
    // 1 - √(1-s) = s / (1 + √(1-s)) avoids cancellation for small |β|.
    let s = beta.norm_sqr();
    DiskPoint::new(Complex64::new(s / (1.0 + (1.0 - s).sqrt()), 0.0) / b.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dp(re: f64, im: f64) -> DiskPoint {
        DiskPoint::from_re_im(re, im).unwrap()
    }

    #[test]
    fn eval_examples() {
        let z = SymbolExpr::identity();
        assert_eq!(eval_symbol(&z, dp(0.0, 0.3)), c(0.0, 0.3));
        let m = SymbolExpr::modulus_squared();
        assert_eq!(eval_symbol(&m, dp(0.5, 0.0)), c(0.25, 0.0));
        let ind = SymbolExpr::indicator_disk(0.5).unwrap();
        assert_eq!(eval_symbol(&ind, dp(0.7, 0.0)), c(0.0, 0.0));
        assert_eq!(eval_symbol(&ind, dp(0.0, 0.5)), c(1.0, 0.0));
    }

    #[test]
    fn harmonicity_examples() {
        let s = SymbolExpr::polynomial([((1, 0), c(1.0, 0.0)), ((0, 2), c(3.0, 0.0))]);
        assert!(s.is_harmonic());
        assert!(!SymbolExpr::modulus_squared().is_harmonic());
        assert!(SymbolExpr::constant(c(1.0, 0.0)).is_harmonic());
        assert!(!SymbolExpr::indicator_disk(0.5).unwrap().is_harmonic());
        let zzb = SymbolExpr::polynomial([((1, 1), c(1.0, 0.0))]);
        assert!(!zzb.is_harmonic());
    }

    #[test]
    fn polynomial_drops_cancelled_terms() {
        let s = SymbolExpr::polynomial([
            ((1, 1), c(1.0, 0.0)),
            ((1, 1), c(-1.0, 0.0)),
            ((2, 0), c(0.5, 0.0)),
        ]);
        assert!(s.is_harmonic());
        assert_eq!(s.terms().unwrap().len(), 1);
        assert_abs_diff_eq!(s.norm_bound(), 0.5);
    }

    #[test]
    fn hermitian_detection() {
        let re_z = SymbolExpr::polynomial([((1, 0), c(1.0, 0.0)), ((0, 1), c(1.0, 0.0))]);
        assert!(re_z.is_hermitian());
        assert!(!SymbolExpr::identity().is_hermitian());
        let im_z = SymbolExpr::polynomial([((1, 0), c(0.0, -0.5)), ((0, 1), c(0.0, 0.5))]);
        assert!(im_z.is_hermitian());
    }

    #[test]
    fn json_literals() {
        let s = SymbolExpr::from_json(r#"{"terms": [[1, 0, 1.0, 0.0], [0, 2, 0.0, -2.0]]}"#)
            .unwrap();
        assert_eq!(s.eval_at(c(0.5, 0.0)), c(0.5, -0.5));
        assert_eq!(
            SymbolExpr::from_json(r#"{"catalog": "modsq"}"#).unwrap(),
            SymbolExpr::modulus_squared()
        );
        assert_eq!(
            SymbolExpr::from_json(r#"{"catalog": "indicator", "radius": 0.5}"#).unwrap(),
            SymbolExpr::indicator_disk(0.5).unwrap()
        );
        for bad in [
            r#"{}"#,
            r#"{"catalog": "indicator"}"#,
            r#"{"catalog": "indicator", "radius": 1.5}"#,
            r#"{"catalog": "sinh"}"#,
            r#"{"catalog": "modsq", "terms": []}"#,
            r#"{"terms": [[1, 0, 1.0]]}"#,
        ] {
            assert!(SymbolExpr::from_json(bad).is_err(), "{bad} accepted");
        }
        let back = SymbolExpr::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn automorphism_examples() {
        let id = Automorphism::identity();
        let w = dp(0.3, -0.2);
        assert_eq!(apply_automorphism(&id, w).unwrap(), w);

        let a = Automorphism::blaschke(dp(0.5, 0.0));
        assert_abs_diff_eq!(apply_automorphism(&a, dp(0.5, 0.0)).unwrap().norm(), 0.0);

        let a = Automorphism::new(dp(0.6, 0.0), c(-1.0, 0.0)).unwrap();
        let v = apply_automorphism(&a, dp(1.0 / 3.0, 0.0)).unwrap();
        assert!((v.value() - c(1.0 / 3.0, 0.0)).norm() < 1e-15);

        assert!(Automorphism::new(dp(0.1, 0.0), c(1.1, 0.0)).is_err());
    }

    #[test]
    fn automorphism_inverse_round_trip() {
        let betas = [dp(0.0, 0.0), dp(0.5, 0.1), dp(-0.3, 0.7), dp(0.0, -0.9)];
        let etas = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), Complex64::from_polar(1.0, 2.0)];
        for &b in &betas {
            for &e in &etas {
                let a = Automorphism::new(b, e).unwrap();
                let inv = a.inverse();
                for k in 0..25 {
                    let w = Complex64::from_polar(0.95 * (k as f64 / 25.0), 0.7 * k as f64);
                    assert!((a.eval(inv.eval(w)) - w).norm() < 1e-12);
                    assert!((inv.eval(a.eval(w)) - w).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn covariant_mobius_examples() {
        let z = dp(0.2, 0.1);
        assert_eq!(covariant_mobius(DiskPoint::ORIGIN, z).unwrap().value(), -z.value());
        assert_abs_diff_eq!(covariant_mobius(z, z).unwrap().norm(), 0.0);
        let v = covariant_mobius(dp(0.5, 0.0), dp(0.2, 0.0)).unwrap();
        assert!((v.value() - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn covariant_mobius_is_an_involution() {
        for k in 0..100 {
            let w = Complex64::from_polar(0.9 * ((k * 37 % 100) as f64 / 100.0), 0.31 * k as f64);
            let z = Complex64::from_polar(0.95 * ((k * 61 % 100) as f64 / 100.0), 1.7 * k as f64);
            let back = covariant_mobius_value(w, covariant_mobius_value(w, z));
            assert!((back - z).norm() < 1e-12);
        }
    }

    #[test]
    fn fixed_point_examples() {
        let minus = c(-1.0, 0.0);
        for (beta, expected) in [
            (dp(0.6, 0.0), c(1.0 / 3.0, 0.0)),
            (dp(0.8, 0.0), c(0.5, 0.0)),
            (dp(0.0, 0.6), c(0.0, 1.0 / 3.0)),
        ] {
            let xi = blaschke_fixed_point(beta).unwrap();
            assert!((xi.value() - expected).norm() < 1e-14);
            let a = Automorphism::new(beta, minus).unwrap();
            assert!((a.eval(xi.value()) - xi.value()).norm() < 1e-12);
        }
        assert!(blaschke_fixed_point(DiskPoint::ORIGIN).is_err());
    }

    /// 5-point Laplacian of a symbol at `z`.
    fn stencil_laplacian(s: &SymbolExpr, z: Complex64, h: f64) -> f64 {
        let f = |dz: Complex64| s.eval_at(z + dz);
        let lap = f(c(h, 0.0)) + f(c(-h, 0.0)) + f(c(0.0, h)) + f(c(0.0, -h))
            - f(c(0.0, 0.0)) * 4.0;
        (lap / (h * h)).norm()
    }

    #[test]
    fn harmonicity_agrees_with_stencil() {
        // deterministic pseudo-random symbols of bidegree ≤ 3
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = move || {
            state = state
                .wrapping_mul(6_364_136_223_846_793_005)
                .wrapping_add(1_442_695_040_888_963_407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64)
        };
        let probes: Vec<Complex64> = (0..16)
            .map(|k| Complex64::from_polar(0.1 + 0.05 * k as f64, 0.9 * k as f64))
            .collect();
        for i in 0..20 {
            let mixed = i % 2 == 0;
            let mut terms = Vec::new();
            for m in 0..=3u32 {
                for n in 0..=3u32 {
                    if (m > 0 && n > 0) && !mixed {
                        continue;
                    }
                    let a = c(next() * 2.0 - 1.0, next() * 2.0 - 1.0);
                    terms.push(((m, n), a));
                }
            }
            // guarantee a sizeable mixed coefficient
            if mixed {
                terms.push(((1, 1), c(0.5, 0.0)));
            }
            let s = SymbolExpr::polynomial(terms);
            let worst = probes
                .iter()
                .map(|&z| stencil_laplacian(&s, z, 1e-4))
                .fold(0.0, f64::max);
            assert_eq!(s.is_harmonic(), !mixed);
            if mixed {
                assert!(worst > 1e-2, "mixed symbol {i}: stencil {worst}");
            } else {
                assert!(worst < 1e-6, "harmonic symbol {i}: stencil {worst}");
            }
        }
    }
}
