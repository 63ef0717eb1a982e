//! Sampled Berezin ranges and their geometry.

use std::collections::HashSet;
use std::io::{BufRead, BufReader, Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bergman::{DiskPoint, SpaceParams};
use crate::composition::comp_berezin;
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, diameter, line_fit_residual, polygon_area, BucketIndex};
use crate::symbols::{Automorphism, UNIMODULAR_TOL};

/// Polar sampling grid: the origin plus `n_radii × n_angles` points at radii
/// `r_max·i/n_radii` (`i = 1..=n_radii`) and angles `2πj/n_angles`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_radii: usize,
    pub n_angles: usize,
    pub r_max: f64,
}

/// Grid used for convexity verdicts.
pub const VERDICT_GRID: GridSpec = GridSpec {
    n_radii: 160,
    n_angles: 192,
    r_max: 0.99,
};

/// Midpoint pairs drawn for convexity verdicts.
pub const VERDICT_PAIRS: usize = 4000;

/// Verdict threshold in units of the median nearest-neighbour spacing.
pub const DEFECT_FACTOR: f64 = 10.0;

impl GridSpec {
    pub fn new(n_radii: usize, n_angles: usize, r_max: f64) -> Result<Self> {
        let g = Self {
            n_radii,
            n_angles,
            r_max,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_radii == 0 || self.n_angles == 0 {
            return Err(Error::argument(
                "GridSpec",
                format!("need positive counts, got {}x{}", self.n_radii, self.n_angles),
            ));
        }
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(Error::argument(
                "GridSpec",
                format!("r_max must lie in (0, 1), got {}", self.r_max),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        1 + self.n_radii * self.n_angles
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Radial spacing `r_max / n_radii`.
    pub fn cell(&self) -> f64 {
        self.r_max / self.n_radii as f64
    }

    pub fn points(&self) -> Vec<DiskPoint> {
        let mut out = Vec::with_capacity(self.len());
        out.push(DiskPoint::ORIGIN);
        for i in 1..=self.n_radii {
            let r = self.r_max * i as f64 / self.n_radii as f64;
            for j in 0..self.n_angles {
                let t = 2.0 * std::f64::consts::PI * j as f64 / self.n_angles as f64;
                out.push(DiskPoint::from_polar(r, t).expect("grid radius below 1"));
            }
        }
        out
    }
}

/// Berezin values over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeSample {
    pub points: Vec<(DiskPoint, Complex64)>,
    pub grid: GridSpec,
}

impl RangeSample {
    pub fn values(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.1).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// CSV with columns `w_re,w_im,val_re,val_im`, preceded by a
    /// `# grid n_radii,n_angles,r_max` comment line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e: std::io::Error| Error::argument("RangeSample::write_csv", e.to_string());
        writeln!(out, "# grid {},{},{}", self.grid.n_radii, self.grid.n_angles, self.grid.r_max)
            .map_err(io)?;
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::argument("RangeSample::write_csv", e.to_string());
        w.write_record(["w_re", "w_im", "val_re", "val_im"]).map_err(csv_err)?;
        for (p, v) in &self.points {
            w.serialize((p.value().re, p.value().im, v.re, v.im)).map_err(csv_err)?;
        }
        w.flush().map_err(io)
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let bad = |d: String| Error::argument("RangeSample::read_csv", d);
        let mut reader = BufReader::new(input);
        let mut first = String::new();
        reader.read_line(&mut first).map_err(|e| bad(e.to_string()))?;
        let spec = first
            .trim()
            .strip_prefix("# grid ")
            .ok_or_else(|| bad(format!("missing grid comment, found {first:?}")))?;
        let fields: Vec<&str> = spec.split(',').collect();
        if fields.len() != 3 {
            return Err(bad(format!("malformed grid comment {spec:?}")));
        }
        let grid = GridSpec::new(
            fields[0].parse().map_err(|e| bad(format!("n_radii: {e}")))?,
            fields[1].parse().map_err(|e| bad(format!("n_angles: {e}")))?,
            fields[2].parse().map_err(|e| bad(format!("r_max: {e}")))?,
        )?;
        let mut csv = csv::Reader::from_reader(reader);
        let headers = csv.headers().map_err(|e| bad(e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["w_re", "w_im", "val_re", "val_im"] {
            return Err(bad(format!("unexpected header {headers:?}")));
        }
        let mut points = Vec::new();
        for rec in csv.deserialize::<(f64, f64, f64, f64)>() {
            let (wr, wi, vr, vi) = rec.map_err(|e| bad(e.to_string()))?;
            points.push((DiskPoint::from_re_im(wr, wi)?, Complex64::new(vr, vi)));
        }
        Ok(Self { points, grid })
    }
}

fn attach_point(e: Error, w: DiskPoint) -> Error {
    match e {
        Error::Numeric {
            module,
            detail,
            point: None,
        } => Error::Numeric {
            module,
            detail,
            point: Some(w.value()),
        },
        other => other,
    }
}

/// Evaluates `transform` on every grid point, in parallel, in grid order.
pub fn sample_range<F>(transform: F, grid: GridSpec) -> Result<RangeSample>
where
    F: Fn(DiskPoint) -> Result<Complex64> + Sync,
{
    grid.validate()?;
    let points = grid
        .points()
        .into_par_iter()
        .map(|w| {
            let v = transform(w).map_err(|e| attach_point(e, w))?;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::numeric_at("range", format!("non-finite value {v}"), w.value()));
            }
            Ok((w, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RangeSample { points, grid })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConvexAtResolution,
    NonConvex,
    DegeneratePoint,
    DegenerateSegment,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ConvexAtResolution => "convex-at-resolution",
            Verdict::NonConvex => "non-convex",
            Verdict::DegeneratePoint => "degenerate-point",
            Verdict::DegenerateSegment => "degenerate-segment",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Convexity diagnostics of a sampled range.
///
/// `spacing` is the median nearest-neighbour distance among distinct values
/// and `threshold = 10 · spacing`; a midpoint farther than `threshold` from
/// the cloud makes the sample non-convex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub n_values: usize,
    pub n_distinct: usize,
    pub n_pairs: usize,
    pub seed: u64,
    pub defect: f64,
    pub spacing: f64,
    pub threshold: f64,
    pub hull_area: f64,
    pub diameter: f64,
    pub line_residual: f64,
    pub collinear: bool,
    pub min_modulus: f64,
    pub verdict: Verdict,
}

const POINT_DIAMETER: f64 = 1e-10;
const DEDUP_QUANTUM: f64 = 1e-12;

/// Deterministic 64-bit linear congruential stream.
#[derive(Debug, Clone)]
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        let mut g = Lcg(seed ^ 0x9E37_79B9_7F4A_7C15);
        g.next_u64();
        g
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Index in `0..n` from the high bits.
    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u64() >> 32) % n as u64) as usize
    }
}

fn distinct(values: &[Complex64]) -> Vec<Complex64> {
    let mut seen = HashSet::new();
    values
        .iter()
        .copied()
        .filter(|v| {
            seen.insert((
                (v.re / DEDUP_QUANTUM).round() as i64,
                (v.im / DEDUP_QUANTUM).round() as i64,
            ))
        })
        .collect()
}

fn collinear_tol(diam: f64) -> f64 {
    1e-9 * diam.max(1.0)
}

/// Midpoint-defect convexity report over `n_pairs` seeded pairs.
pub fn convexity_defect(s: &RangeSample, n_pairs: usize, seed: u64) -> Result<ConvexityReport> {
    let values = s.values();
    if values.len() < 3 {
        return Err(Error::argument(
            "convexity_defect",
            format!("need at least 3 points, got {}", values.len()),
        ));
    }
    if n_pairs == 0 {
        return Err(Error::argument("convexity_defect", "n_pairs must be positive"));
    }
    let uniq = distinct(&values);
    let hull = convex_hull(&uniq);
    let hull_area = polygon_area(&hull);
    let diam = diameter(&uniq);
    let line_residual = line_fit_residual(&uniq);
    let collinear = line_residual <= collinear_tol(diam);
    let index = BucketIndex::new(&uniq);

    let spacing = if uniq.len() < 2 {
        0.0
    } else {
        let mut nn: Vec<f64> = (0..uniq.len()).map(|i| index.nearest_other(i)).collect();
        nn.sort_by(f64::total_cmp);
        nn[nn.len() / 2]
    };

    let mut rng = Lcg::new(seed);
    let mut defect = 0.0f64;
    for _ in 0..n_pairs {
        let a = uniq[rng.below(uniq.len())];
        let b = uniq[rng.below(uniq.len())];
        defect = defect.max(index.nearest_distance((a + b) * 0.5));
    }
    let threshold = DEFECT_FACTOR * spacing;

    let verdict = if diam <= POINT_DIAMETER {
        Verdict::DegeneratePoint
    } else if collinear {
        Verdict::DegenerateSegment
    } else if defect > threshold {
        Verdict::NonConvex
    } else {
        Verdict::ConvexAtResolution
    };

    Ok(ConvexityReport {
        n_values: values.len(),
        n_distinct: uniq.len(),
        n_pairs,
        seed,
        defect,
        spacing,
        threshold,
        hull_area,
        diameter: diam,
        line_residual,
        collinear,
        min_modulus: min_modulus(s),
        verdict,
    })
}

/// True iff every value lies within `tol` of the least-squares line.
pub fn collinearity(s: &RangeSample, tol: f64) -> bool {
    line_fit_residual(&s.values()) <= tol
}

/// `min |value|` over the sample.
pub fn min_modulus(s: &RangeSample) -> f64 {
    s.points.iter().map(|p| p.1.norm()).fold(f64::INFINITY, f64::min)
}

/// Values along the ray `w = r · direction`.
pub fn boundary_limit_probe<F>(transform: F, direction: Complex64, radii: &[f64]) -> Result<Vec<Complex64>>
where
    F: Fn(DiskPoint) -> Result<Complex64>,
{
    if (direction.norm() - 1.0).abs() > UNIMODULAR_TOL * 100.0 {
        return Err(Error::argument(
            "boundary_limit_probe",
            format!("direction {direction} is not unimodular"),
        ));
    }
    if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::argument(
            "boundary_limit_probe",
            "radii must be strictly increasing in (0, 1)",
        ));
    }
    radii
        .iter()
        .map(|&r| {
            let w = DiskPoint::new(direction * r)?;
            transform(w).map_err(|e| attach_point(e, w))
        })
        .collect()
}

/// Grid points, adjacent along a ring, between which `Im C̃` changes sign for
/// the Blaschke factor although `Im(β̄w)` keeps a strict sign. Each entry is
/// the angular midpoint of such a pair.
pub fn blaschke_imaginary_crossings(beta: DiskPoint, p: SpaceParams, grid: GridSpec) -> Result<Vec<DiskPoint>> {
    grid.validate()?;
    let map = Automorphism::blaschke(beta);
    let b = beta.value();
    let mut out = Vec::new();
    for i in 1..=grid.n_radii {
        let r = grid.r_max * i as f64 / grid.n_radii as f64;
        let at = |j: usize| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / grid.n_angles as f64;
            DiskPoint::from_polar(r, t)
        };
        for j in 0..grid.n_angles {
            let (w0, w1) = (at(j)?, at(j + 1)?);
            let (v0, v1) = (comp_berezin(&map, p, w0)?, comp_berezin(&map, p, w1)?);
            let (l0, l1) = ((b.conj() * w0.value()).im, (b.conj() * w1.value()).im);
            let same_side = l0 * l1 > 0.0;
            if same_side && v0.im * v1.im < 0.0 {
                let t = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / grid.n_angles as f64;
                out.push(DiskPoint::from_polar(r, t)?);
            }
        }
    }
    Ok(out)
}
