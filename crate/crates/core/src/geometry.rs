//! Planar geometry on complex point clouds.

use std::collections::HashMap;

use num_complex::Complex64;

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex hull by Andrew's monotone chain, counter-clockwise, without
/// collinear vertices. Degenerate inputs give one or two vertices.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Shoelace area of a simple polygon.
pub fn polygon_area(poly: &[Complex64]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        twice += a.re * b.im - b.re * a.im;
    }
    0.5 * twice.abs()
}

/// Largest pairwise distance.
pub fn diameter(points: &[Complex64]) -> f64 {
    let hull = convex_hull(points);
    let mut best = 0.0f64;
    for i in 0..hull.len() {
        for j in i + 1..hull.len() {
            best = best.max((hull[i] - hull[j]).norm());
        }
    }
    best
}

fn segment_distance(q: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (q - a).norm();
    }
    let t = (((q - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (q - (a + ab * t)).norm()
}

/// Distance from `q` to the boundary of the convex polygon `hull`
/// (counter-clockwise), positive inside and negative outside. Hulls with
/// fewer than three vertices have empty interior, so the margin is never
/// positive.
pub fn signed_margin(hull: &[Complex64], q: Complex64) -> f64 {
    match hull.len() {
        0 => f64::NEG_INFINITY,
        1 => -(q - hull[0]).norm(),
        2 => -segment_distance(q, hull[0], hull[1]),
        n => {
            let mut dist = f64::INFINITY;
            let mut inside = true;
            for i in 0..n {
                let a = hull[i];
                let b = hull[(i + 1) % n];
                dist = dist.min(segment_distance(q, a, b));
                if cross(a, b, q) < 0.0 {
                    inside = false;
                }
            }
            if inside {
                dist
            } else {
                -dist
            }
        }
    }
}

/// Maximum perpendicular distance of the points from their total
/// least-squares line.
pub fn line_fit_residual(points: &[Complex64]) -> f64 {
    if points.len() <= 2 {
        return 0.0;
    }
    let n = points.len() as f64;
    let mean = points.iter().sum::<Complex64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in points {
        let d = p - mean;
        sxx += d.re * d.re;
        syy += d.im * d.im;
        sxy += d.re * d.im;
    }
    // principal direction of the 2×2 scatter matrix
    let angle = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let normal = Complex64::new(-angle.sin(), angle.cos());
    points
        .iter()
        .map(|p| ((p - mean) * normal.conj()).re.abs())
        .fold(0.0, f64::max)
}

/// Uniform bucket grid for nearest-neighbour queries.
#[derive(Debug, Clone)]
pub struct BucketIndex {
    points: Vec<Complex64>,
    cell: f64,
    origin: Complex64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    max_ring: i64,
}

impl BucketIndex {
    pub fn new(points: &[Complex64]) -> Self {
        let (mut lo, mut hi) = (
            Complex64::new(f64::INFINITY, f64::INFINITY),
            Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for p in points {
            lo.re = lo.re.min(p.re);
            lo.im = lo.im.min(p.im);
            hi.re = hi.re.max(p.re);
            hi.im = hi.im.max(p.im);
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im);
        let cell = if span > 0.0 {
            span / (points.len() as f64).sqrt().max(1.0)
        } else {
            1.0
        };
        let origin = if points.is_empty() { Complex64::new(0.0, 0.0) } else { lo };
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, &p) in points.iter().enumerate() {
            buckets.entry(Self::key(origin, cell, p)).or_default().push(i);
        }
        let max_ring = if span > 0.0 { (span / cell).ceil() as i64 + 2 } else { 2 };
        Self {
            points: points.to_vec(),
            cell,
            origin,
            buckets,
            max_ring,
        }
    }

    fn key(origin: Complex64, cell: f64, p: Complex64) -> (i64, i64) {
        (
            ((p.re - origin.re) / cell).floor() as i64,
            ((p.im - origin.im) / cell).floor() as i64,
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn search(&self, q: Complex64, skip: Option<usize>) -> f64 {
        let (cx, cy) = Self::key(self.origin, self.cell, q);
        // rings beyond the occupied box cannot help once the query is inside it
        let outside = {
            let dx = (q.re - self.origin.re) / self.cell;
            let dy = (q.im - self.origin.im) / self.cell;
            (-dx).max(-dy).max(dx - self.max_ring as f64).max(dy - self.max_ring as f64).max(0.0)
        };
        let limit = self.max_ring + outside.ceil() as i64 + 1;
        let mut best = f64::INFINITY;
        for ring in 0..=limit {
            for ix in cx - ring..=cx + ring {
                for iy in cy - ring..=cy + ring {
                    if (ix - cx).abs() != ring && (iy - cy).abs() != ring {
                        continue;
                    }
                    if let Some(ids) = self.buckets.get(&(ix, iy)) {
                        for &i in ids {
                            if Some(i) != skip {
                                best = best.min((self.points[i] - q).norm());
                            }
                        }
                    }
                }
            }
            if best <= ring as f64 * self.cell {
                break;
            }
        }
        best
    }

    /// Distance from `q` to the closest indexed point.
    pub fn nearest_distance(&self, q: Complex64) -> f64 {
        self.search(q, None)
    }

    /// Distance from point `i` to the closest other indexed point.
    pub fn nearest_other(&self, i: usize) -> f64 {
        self.search(self.points[i], Some(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_hull() {
        let pts = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(0.5, 0.5), c(0.5, 0.0)];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert_abs_diff_eq!(polygon_area(&hull), 1.0);
        assert_abs_diff_eq!(diameter(&pts), 2f64.sqrt());
        assert_abs_diff_eq!(signed_margin(&hull, c(0.5, 0.5)), 0.5);
        assert_abs_diff_eq!(signed_margin(&hull, c(2.0, 0.5)), -1.0);
    }

    #[test]
    fn collinear_hull_is_a_segment() {
        let pts = [c(0.0, 0.0), c(0.5, 0.5), c(1.0, 1.0)];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 2);
        assert_eq!(polygon_area(&hull), 0.0);
        assert!(signed_margin(&hull, c(0.5, 0.5)) <= 0.0);
        assert_abs_diff_eq!(line_fit_residual(&pts), 0.0, epsilon = 1e-15);
        assert!(line_fit_residual(&[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.1)]) > 0.01);
    }

    #[test]
    fn single_point_hull() {
        let pts = [c(0.3, 0.3); 5];
        assert_eq!(convex_hull(&pts).len(), 1);
        assert_eq!(diameter(&pts), 0.0);
    }

    fn brute_nearest(pts: &[Complex64], q: Complex64, skip: Option<usize>) -> f64 {
        pts.iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .map(|(_, p)| (p - q).norm())
            .fold(f64::INFINITY, f64::min)
    }

    proptest! {
        #[test]
        fn bucket_index_matches_brute_force(
            raw in proptest::collection::vec((-3.0..3.0f64, -1.0..1.0f64), 2..200),
            q in (-6.0..6.0f64, -6.0..6.0f64),
        ) {
            let pts: Vec<Complex64> = raw.iter().map(|&(x, y)| c(x, y)).collect();
            let idx = BucketIndex::new(&pts);
            let q = c(q.0, q.1);
            prop_assert!((idx.nearest_distance(q) - brute_nearest(&pts, q, None)).abs() < 1e-12);
            prop_assert!((idx.nearest_other(0) - brute_nearest(&pts, pts[0], Some(0))).abs() < 1e-12);
        }

        #[test]
        fn hull_contains_inputs(raw in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 3..100)) {
            let pts: Vec<Complex64> = raw.iter().map(|&(x, y)| c(x, y)).collect();
            let hull = convex_hull(&pts);
            if hull.len() >= 3 {
                for p in &pts {
                    prop_assert!(signed_margin(&hull, *p) >= -1e-12);
                }
            }
        }
    }
}
