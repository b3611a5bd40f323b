//! Spectral sets: field of values (Johnson's sweep), ε-pseudospectra by a
//! σ_min grid with marching squares, and the prefactors that turn a bound on
//! a scalar function into a bound on the matrix function.

use std::collections::HashMap;
use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{largest_eigpair, sigma_min_from_lu, LuFactorization};
use crate::matrix::{dot, ComplexMatrix, C64};

pub const DEFAULT_FOV_ANGLES: usize = 64;
/// Upper bound of the Crouzeix-Palencia constant.
pub const CROUZEIX_CONSTANT: f64 = 1.0 + SQRT_2;
const RESOLVENT_CAP: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SetKind {
    Fov,
    Pseudo(f64),
    /// Real interval standing in for the field of values (Toeplitz symbol range).
    Interval,
}

/// Closed polygon (or union of polygons) approximating the boundary of a
/// spectral set.
///
/// Within a component one point stands for a scalar set and two points for a
/// flat segment (Hermitian or real-interval case); otherwise the vertices are
/// listed in order and the last connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSet {
    kind: SetKind,
    boundary: Vec<C64>,
    source_dimension: usize,
    /// Start offsets of the components in `boundary`; always begins with 0.
    starts: Vec<usize>,
}

impl SpectralSet {
    pub fn new(kind: SetKind, boundary: Vec<C64>, source_dimension: usize) -> Result<Self> {
        Self::from_components(kind, vec![boundary], source_dimension)
    }

    /// Union of several closed curves, e.g. a disconnected pseudospectrum.
    pub fn from_components(kind: SetKind, components: Vec<Vec<C64>>, source_dimension: usize) -> Result<Self> {
        if components.is_empty() || components.iter().any(Vec::is_empty) {
            return Err(Error::InvalidParams("spectral set components need at least one point".into()));
        }
        let mut boundary = Vec::new();
        let mut starts = Vec::new();
        for c in components {
            starts.push(boundary.len());
            boundary.extend(c);
        }
        if boundary.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParams("spectral set has non-finite points".into()));
        }
        Ok(Self { kind, boundary, source_dimension, starts })
    }

    /// The real interval `[lo, hi]` as a flat set.
    pub fn interval(lo: f64, hi: f64, source_dimension: usize) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::InvalidParams(format!("empty interval [{lo}, {hi}]")));
        }
        let pts = if lo == hi { vec![C64::new(lo, 0.0)] } else { vec![C64::new(lo, 0.0), C64::new(hi, 0.0)] };
        Self::new(SetKind::Interval, pts, source_dimension)
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    /// All vertices, components concatenated.
    pub fn boundary(&self) -> &[C64] {
        &self.boundary
    }

    pub fn source_dimension(&self) -> usize {
        self.source_dimension
    }

    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = &[C64]> + '_ {
        let ends = self.starts.iter().skip(1).copied().chain(std::iter::once(self.boundary.len()));
        self.starts.iter().zip(ends).map(|(&a, b)| &self.boundary[a..b])
    }

    /// A single point or segment.
    pub fn is_flat(&self) -> bool {
        self.starts.len() == 1 && self.boundary.len() <= 2
    }

    /// Image of the set under `z -> alpha z + beta`.
    pub fn affine(&self, alpha: C64, beta: C64) -> Self {
        Self { boundary: self.boundary.iter().map(|&z| alpha * z + beta).collect(), ..self.clone() }
    }

    pub fn edges(&self) -> impl Iterator<Item = (C64, C64)> + '_ {
        self.components().flat_map(|c| {
            let n = c.len();
            let count = match n {
                1 => 0,
                2 => 1,
                _ => n,
            };
            (0..count).map(move |i| (c[i], c[(i + 1) % n]))
        })
    }

    /// Vertices followed by edge midpoints; the points on which bounds are maximised.
    pub fn sample_points(&self) -> Vec<C64> {
        let mut pts = self.boundary.clone();
        pts.extend(self.edges().map(|(a, b)| (a + b) * 0.5));
        pts
    }

    /// Total boundary length; a flat segment is traversed there and back.
    pub fn perimeter(&self) -> f64 {
        self.components()
            .map(|c| {
                let n = c.len();
                match n {
                    1 => 0.0,
                    2 => 2.0 * (c[1] - c[0]).norm(),
                    _ => (0..n).map(|i| (c[(i + 1) % n] - c[i]).norm()).sum(),
                }
            })
            .sum()
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.boundary.iter().enumerate() {
            for b in &self.boundary[i + 1..] {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    /// Largest outward deviation from convexity relative to the diameter,
    /// over all components; zero for counter-clockwise convex polygons.
    pub fn convexity_defect(&self) -> f64 {
        let diam = self.diameter().max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for c in self.components() {
            let n = c.len();
            if n < 3 {
                continue;
            }
            for i in 0..n {
                let (a, b, p) = (c[i], c[(i + 1) % n], c[(i + 2) % n]);
                let ab = b - a;
                let len = ab.norm();
                if len == 0.0 {
                    continue;
                }
                // distance of p to the right of the line through a, b
                worst = worst.max(-cross(ab, p - a) / len);
            }
        }
        worst / diam
    }

    /// Distance from `z` to the boundary.
    pub fn boundary_distance(&self, z: C64) -> f64 {
        let point_dist =
            self.components().filter(|c| c.len() == 1).map(|c| (z - c[0]).norm()).fold(f64::INFINITY, f64::min);
        self.edges().map(|(a, b)| point_segment_distance(z, a, b)).fold(point_dist, f64::min)
    }

    /// Whether `z` lies in the set (interiors included) or within `tol` of it.
    pub fn contains(&self, z: C64, tol: f64) -> bool {
        if self.boundary_distance(z) <= tol {
            return true;
        }
        self.components().filter(|c| c.len() >= 3).fold(false, |acc, c| acc ^ winding_inside(c, z))
    }
}

fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn point_segment_distance(z: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    // anchor at the nearer endpoint so that a tiny distance to an endpoint
    // of a huge edge survives
    let foot = if t <= 0.5 { a + ab * t } else { b - ab * (1.0 - t) };
    (z - foot).norm()
}

/// Abscissa where segment `a`-`b` meets the horizontal line `Im = y`,
/// interpolated from the endpoint nearer the line to avoid cancellation.
fn level_crossing(a: C64, b: C64, y: f64) -> f64 {
    let (near, far) = if (a.im - y).abs() <= (b.im - y).abs() { (a, b) } else { (b, a) };
    near.re + (far.re - near.re) * (y - near.im) / (far.im - near.im)
}

/// Even-odd rule.
fn winding_inside(poly: &[C64], z: C64) -> bool {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a.im > z.im) != (b.im > z.im) {
            if level_crossing(a, b, z.im) > z.re {
                inside = !inside;
            }
        }
    }
    inside
}

/// Convex hull by Andrew's monotone chain, counter-clockwise, collinear
/// points dropped.
fn convex_hull(mut pts: Vec<C64>) -> Vec<C64> {
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<C64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &C64>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 1] - hull[hull.len() - 2], p - hull[hull.len() - 2]) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Field-of-values boundary by Johnson's sweep over `m` equispaced angles.
///
/// For `theta_j = 2 pi j / m` write `e^{i theta} A = H + i S` with `H`, `S`
/// Hermitian; if `v` is a unit eigenvector for the largest eigenvalue
/// `lambda` of `H`, then `e^{-i theta} (lambda + i v^H S v)` is a boundary
/// point. Using `lambda` itself rather than the Rayleigh quotient keeps the
/// eigensolver's relative accuracy in the supporting line.
///
/// Points are returned as their convex hull, counter-clockwise. A set that
/// collapses to a segment within `1e-12` of its diameter is stored as its two
/// endpoints.
pub fn fov_boundary(a: &ComplexMatrix, m: usize) -> Result<SpectralSet> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::DimensionMismatch("field of values needs a nonempty square matrix".into()));
    }
    if m < 8 {
        return Err(Error::InvalidParams(format!("need at least 8 angles, got {m}")));
    }
    let n = a.rows();
    let points: Vec<C64> = (0..m)
        .into_par_iter()
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / m as f64;
            let rot = C64::from_polar(1.0, theta);
            let ra = a.scale(rot);
            let h = ra.hermitian_part();
            let (lambda, v) = largest_eigpair(&h)?;
            let av = ra.matvec(&v);
            let vv = dot(&v, &v).re;
            let mu = dot(&v, &av).im / vv;
            Ok(rot.conj() * C64::new(lambda, mu))
        })
        .collect::<Result<_>>()?;
    SpectralSet::new(SetKind::Fov, flatten_degenerate(convex_hull(points)), n)
}

fn flatten_degenerate(hull: Vec<C64>) -> Vec<C64> {
    if hull.len() < 3 {
        return hull;
    }
    // farthest pair
    let (mut ia, mut ib, mut best) = (0, 0, -1.0);
    for i in 0..hull.len() {
        for j in i + 1..hull.len() {
            let d = (hull[i] - hull[j]).norm();
            if d > best {
                (ia, ib, best) = (i, j, d);
            }
        }
    }
    let (a, b) = (hull[ia], hull[ib]);
    if best == 0.0 {
        return vec![a];
    }
    let width = hull.iter().map(|&p| (cross(b - a, p - a) / best).abs()).fold(0.0, f64::max);
    if width <= 1e-12 * best {
        vec![a, b]
    } else {
        hull
    }
}

/// Signed distance from the set (interior included) to the ray `(-inf, 0]`.
///
/// Positive values are the gap; when the set meets the ray the result is
/// minus the length of the ray covered by the set (zero for a touch).
pub fn branch_cut_clearance(set: &SpectralSet) -> f64 {
    let ray_dist = |z: C64| if z.re <= 0.0 { z.im.abs() } else { z.norm() };
    let origin = C64::new(0.0, 0.0);
    let mut gap = f64::INFINITY;
    let mut crossing = false;
    for c in set.components().filter(|c| c.len() == 1) {
        let d = ray_dist(c[0]);
        crossing |= d == 0.0;
        gap = gap.min(d);
    }
    for (a, b) in set.edges() {
        let d = ray_dist(a).min(ray_dist(b)).min(point_segment_distance(origin, a, b));
        let crosses = (a.im > 0.0) != (b.im > 0.0) && level_crossing(a, b, 0.0) <= 0.0;
        if crosses || d == 0.0 {
            crossing = true;
        }
        gap = gap.min(d);
    }
    if !crossing && gap > 0.0 {
        return gap;
    }
    -set.components().map(covered_ray_length).sum::<f64>()
}

fn covered_ray_length(pts: &[C64]) -> f64 {
    let n = pts.len();
    if n < 3 {
        let (a, b) = (pts[0], pts[n - 1]);
        if a.im == 0.0 && b.im == 0.0 {
            let lo = a.re.min(b.re);
            let hi = a.re.max(b.re).min(0.0);
            return (hi - lo).max(0.0);
        }
        return 0.0;
    }
    let mut xs: Vec<f64> = (0..n)
        .map(|i| (pts[i], pts[(i + 1) % n]))
        .filter(|(a, b)| (a.im > 0.0) != (b.im > 0.0))
        .map(|(a, b)| level_crossing(a, b, 0.0))
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.chunks(2).filter(|c| c.len() == 2).map(|c| (c[1].min(0.0) - c[0]).max(0.0)).sum()
}

/// `1 / sigma_min(zI - A)` sampled on a rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventGrid {
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub source_dimension: usize,
    /// Row-major in the imaginary index: `values[j * nx + i]`.
    pub values: Vec<f64>,
}

impl ResolventGrid {
    pub fn point(&self, i: usize, j: usize) -> C64 {
        let t = |lo: f64, hi: f64, k: usize, n: usize| lo + (hi - lo) * k as f64 / (n - 1) as f64;
        C64::new(t(self.re_range.0, self.re_range.1, i, self.nx), t(self.im_range.0, self.im_range.1, j, self.ny))
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn range(&self) -> (f64, f64) {
        self.values.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}

/// Resolvent norm `||(zI - A)^{-1}||_2` on the box `re_range x im_range`,
/// `nx` by `ny` points including the corners. Exactly singular points are
/// reported as `1e300`.
pub fn resolvent_grid(
    a: &ComplexMatrix,
    re_range: (f64, f64),
    im_range: (f64, f64),
    nx: usize,
    ny: usize,
) -> Result<ResolventGrid> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("resolvent needs a square matrix".into()));
    }
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidParams(format!("grid needs at least 2x2 points, got {nx}x{ny}")));
    }
    let mut grid = ResolventGrid { re_range, im_range, nx, ny, source_dimension: a.rows(), values: Vec::new() };
    let neg = a.scale_real(-1.0);
    grid.values = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let z = grid.point(idx % nx, idx / nx);
            let lu = LuFactorization::factor(&neg.shift(z))?;
            let smin = sigma_min_from_lu(&lu);
            Ok(if smin * RESOLVENT_CAP <= 1.0 { RESOLVENT_CAP } else { 1.0 / smin })
        })
        .collect::<Result<_>>()?;
    Ok(grid)
}

/// Level curves `||(zI - A)^{-1}|| = 1/eps` by marching squares.
///
/// The interpolated quantity is `sigma_min = 1/value`, which is Lipschitz in
/// `z`. Saddle cells are split by the value at the cell centre (mean of the
/// corners). Curves leaving the box are closed by the straight chord between
/// their end points.
pub fn pseudo_contour(grid: &ResolventGrid, eps: f64) -> Result<Vec<SpectralSet>> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParams(format!("eps must be positive, got {eps}")));
    }
    let (nx, ny) = (grid.nx, grid.ny);
    let f = |i: usize, j: usize| 1.0 / grid.value(i, j) - eps;
    // Edge ids: horizontal (i,j)-(i+1,j) is 2*(j*nx+i), vertical (i,j)-(i,j+1) is 2*(j*nx+i)+1.
    let h_edge = |i: usize, j: usize| 2 * (j * nx + i);
    let v_edge = |i: usize, j: usize| 2 * (j * nx + i) + 1;
    let crossing = |p: (usize, usize), q: (usize, usize)| {
        let (fp, fq) = (f(p.0, p.1), f(q.0, q.1));
        let t = fp / (fp - fq);
        let (zp, zq) = (grid.point(p.0, p.1), grid.point(q.0, q.1));
        zp + (zq - zp) * t
    };

    let mut points: HashMap<usize, C64> = HashMap::new();
    let mut segments: Vec<(usize, usize)> = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            // corners counter-clockwise from bottom-left
            let c = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let inside: Vec<bool> = c.iter().map(|&(a, b)| f(a, b) < 0.0).collect();
            // edges: bottom, right, top, left
            let e = [h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)];
            let cut: Vec<usize> = (0..4).filter(|&k| inside[k] != inside[(k + 1) % 4]).collect();
            for &k in &cut {
                points.entry(e[k]).or_insert_with(|| crossing(c[k], c[(k + 1) % 4]));
            }
            match cut.len() {
                2 => segments.push((e[cut[0]], e[cut[1]])),
                4 => {
                    let centre = c.iter().map(|&(a, b)| f(a, b)).sum::<f64>() / 4.0;
                    if (centre < 0.0) == inside[0] {
                        // corner 0's region connects across the centre
                        segments.push((e[0], e[1]));
                        segments.push((e[2], e[3]));
                    } else {
                        segments.push((e[3], e[0]));
                        segments.push((e[1], e[2]));
                    }
                }
                _ => {}
            }
        }
    }
    if segments.is_empty() {
        return Err(Error::EmptyLevel);
    }

    let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        adjacency.entry(a).or_default().push(s);
        adjacency.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut curves = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let mut chain = std::collections::VecDeque::from([a, b]);
        // extend forward then backward
        for forward in [true, false] {
            loop {
                let end = if forward { *chain.back().unwrap() } else { *chain.front().unwrap() };
                let next = adjacency[&end].iter().copied().find(|&s| !used[s]);
                let Some(s) = next else { break };
                used[s] = true;
                let (p, q) = segments[s];
                let other = if p == end { q } else { p };
                if forward {
                    chain.push_back(other);
                } else {
                    chain.push_front(other);
                }
            }
        }
        if chain.len() > 2 && chain.front() == chain.back() {
            chain.pop_back();
        }
        let boundary: Vec<C64> = chain.iter().map(|e| points[e]).collect();
        curves.push(SpectralSet::new(SetKind::Pseudo(eps), boundary, grid.source_dimension)?);
    }
    Ok(curves)
}

/// Pseudospectral set of `a` at level `eps` on an `nx` by `ny` grid over the
/// given box. Only valid when the level set is a single curve.
pub fn pseudo_set(
    a: &ComplexMatrix,
    eps: f64,
    re_range: (f64, f64),
    im_range: (f64, f64),
    nx: usize,
    ny: usize,
) -> Result<SpectralSet> {
    let grid = resolvent_grid(a, re_range, im_range, nx, ny)?;
    let curves = pseudo_contour(&grid, eps)?;
    let comps = curves.into_iter().map(|c| c.boundary).collect();
    SpectralSet::from_components(SetKind::Pseudo(eps), comps, a.rows())
}

/// Right-hand side of the Crouzeix-Palencia inequality, `(1 + sqrt 2) max|g|`.
pub fn crouzeix_bound(max_abs: f64) -> f64 {
    CROUZEIX_CONSTANT * max_abs
}

/// `L(boundary of Lambda_eps) / (2 pi eps)` from the polygonal contours.
pub fn pseudo_prefactor(contours: &[SpectralSet], eps: f64) -> Result<f64> {
    if contours.is_empty() {
        return Err(Error::EmptyLevel);
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidParams(format!("eps must be positive, got {eps}")));
    }
    let length: f64 = contours.iter().map(SpectralSet::perimeter).sum();
    Ok(length / (2.0 * PI * eps))
}
