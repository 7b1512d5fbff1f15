//! Polygon geometry and exact integrals of scaled monomials.
//!
//! Every polynomial integral over a polygon is reduced to edge integrals:
//! for a function `f` homogeneous of degree `d` about the centroid `x_E`,
//! `div((x - x_E) f) = (d + 2) f`, and `(x - x_E) . n` is constant along each
//! straight edge, so
//!
//! ```text
//! ∫_E f dx = 1/(d+2) Σ_e ((x_e - x_E) . n_e) ∫_e f ds
//! ```
//!
//! with each edge integral done by Gauss–Legendre. No triangulation is
//! involved; triangulation is only used for non-polynomial integrands.

use nalgebra::DMatrix;

use crate::quadrature::{gauss_legendre, points_for_degree};
use crate::{Error, Point, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub start: Point,
    pub end: Point,
    pub length: f64,
    /// Outward unit normal (for a CCW polygon).
    pub normal: Point,
}

impl Edge {
    pub fn new(start: Point, end: Point) -> Self {
        let d = [end[0] - start[0], end[1] - start[1]];
        let length = d[0].hypot(d[1]);
        let normal = [d[1] / length, -d[0] / length];
        Edge {
            start,
            end,
            length,
            normal,
        }
    }

    /// Point at arclength fraction `t ∈ [0, 1]`.
    #[inline]
    pub fn point_at(&self, t: f64) -> Point {
        [
            self.start[0] + t * (self.end[0] - self.start[0]),
            self.start[1] + t * (self.end[1] - self.start[1]),
        ]
    }
}

/// Per-element geometric data.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementGeometry {
    pub vertices: Vec<Point>,
    pub area: f64,
    pub centroid: Point,
    pub diameter: f64,
    /// Edge `i` runs from vertex `i` to vertex `i + 1` (cyclically).
    pub edges: Vec<Edge>,
}

pub(crate) fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    let mut a = 0.0;
    for i in 0..n {
        let p = pts[i];
        let q = pts[(i + 1) % n];
        a += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * a
}

#[inline]
fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point, tol: f64) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol))
        && ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol))
    {
        return true;
    }
    let on_segment = |a: Point, b: Point, p: Point, d: f64| {
        d.abs() <= tol
            && p[0] >= a[0].min(b[0]) - tol
            && p[0] <= a[0].max(b[0]) + tol
            && p[1] >= a[1].min(b[1]) - tol
            && p[1] <= a[1].max(b[1]) + tol
    };
    on_segment(q1, q2, p1, d1)
        || on_segment(q1, q2, p2, d2)
        || on_segment(p1, p2, q1, d3)
        || on_segment(p1, p2, q2, d4)
}

/// True if two non-adjacent edges of the closed polygon touch or cross.
pub(crate) fn is_self_intersecting(pts: &[Point]) -> bool {
    let n = pts.len();
    if n < 4 {
        return false;
    }
    let scale = pts
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, &c| m.max(c.abs()))
        .max(1.0);
    let tol = 1e-14 * scale * scale;
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n], tol) {
                return true;
            }
        }
    }
    false
}

impl ElementGeometry {
    /// Geometry of a simple CCW polygon.
    pub fn new(vertices: &[Point]) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Geometry(format!("polygon has {n} vertices")));
        }
        // shoelace sums relative to the first vertex; absolute coordinates
        // cancel badly for small elements far from the origin
        let o = vertices[0];
        let local: Vec<Point> = vertices.iter().map(|p| [p[0] - o[0], p[1] - o[1]]).collect();
        let area = signed_area(&local);
        if !(area > 0.0) {
            return Err(Error::Geometry(format!(
                "polygon is clockwise or degenerate (signed area {area:e})"
            )));
        }
        if is_self_intersecting(vertices) {
            return Err(Error::Geometry("polygon is self-intersecting".into()));
        }
        let (mut cx, mut cy) = (0.0, 0.0);
        for i in 0..n {
            let p = local[i];
            let q = local[(i + 1) % n];
            let c = p[0] * q[1] - q[0] * p[1];
            cx += (p[0] + q[0]) * c;
            cy += (p[1] + q[1]) * c;
        }
        let centroid = [o[0] + cx / (6.0 * area), o[1] + cy / (6.0 * area)];
        let mut diameter = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (vertices[i][0] - vertices[j][0]).hypot(vertices[i][1] - vertices[j][1]);
                diameter = diameter.max(d);
            }
        }
        let edges = (0..n)
            .map(|i| Edge::new(vertices[i], vertices[(i + 1) % n]))
            .collect();
        Ok(ElementGeometry {
            vertices: vertices.to_vec(),
            area,
            centroid,
            diameter,
            edges,
        })
    }

    pub fn perimeter(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
}

/// Scaled monomials `m_α(x) = ((x - x_E) / h_E)^α`, `|α| <= degree`, in
/// graded lexicographic order: `1, ξ, η, ξ², ξη, η², ξ³, ...`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMonomialBasis {
    pub degree: usize,
    pub center: Point,
    pub h: f64,
}

/// `dim P_k = (k + 1)(k + 2) / 2`.
#[inline]
pub const fn poly_dim(k: usize) -> usize {
    (k + 1) * (k + 2) / 2
}

/// Position of the exponent pair `(a, b)` in graded lexicographic order.
#[inline]
pub const fn monomial_index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

/// Exponent pairs in graded lexicographic order up to total degree `k`.
pub fn exponents(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(poly_dim(k));
    for d in 0..=k {
        for b in 0..=d {
            out.push((d - b, b));
        }
    }
    out
}

fn powers(x: f64, n: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    let mut v = 1.0;
    for _ in 0..=n {
        p.push(v);
        v *= x;
    }
    p
}

impl ScaledMonomialBasis {
    pub fn new(geom: &ElementGeometry, degree: usize) -> Self {
        ScaledMonomialBasis {
            degree,
            center: geom.centroid,
            h: geom.diameter,
        }
    }

    pub fn dim(&self) -> usize {
        poly_dim(self.degree)
    }

    #[inline]
    pub fn scaled(&self, x: Point) -> (f64, f64) {
        ((x[0] - self.center[0]) / self.h, (x[1] - self.center[1]) / self.h)
    }

    /// Values of all basis monomials at `x`.
    pub fn eval(&self, x: Point) -> Vec<f64> {
        let (xi, eta) = self.scaled(x);
        let px = powers(xi, self.degree);
        let py = powers(eta, self.degree);
        exponents(self.degree)
            .into_iter()
            .map(|(a, b)| px[a] * py[b])
            .collect()
    }

    /// Physical gradients of all basis monomials at `x`.
    pub fn grad(&self, x: Point) -> Vec<Point> {
        let (xi, eta) = self.scaled(x);
        let px = powers(xi, self.degree);
        let py = powers(eta, self.degree);
        exponents(self.degree)
            .into_iter()
            .map(|(a, b)| {
                let gx = if a > 0 { a as f64 * px[a - 1] * py[b] } else { 0.0 };
                let gy = if b > 0 { b as f64 * px[a] * py[b - 1] } else { 0.0 };
                [gx / self.h, gy / self.h]
            })
            .collect()
    }
}

/// `∫_E ξ^a η^b dx` for all `(a, b)` with `a + b <= max_degree`, indexed by
/// [`monomial_index`], where `(ξ, η) = (x - center) / h`.
pub fn monomial_integrals_about(
    geom: &ElementGeometry,
    center: Point,
    h: f64,
    max_degree: usize,
) -> Vec<f64> {
    let mut out = vec![0.0; poly_dim(max_degree)];
    let rule = gauss_legendre(points_for_degree(max_degree));
    for edge in &geom.edges {
        // (x - x_E) . n is constant on a straight edge; measured in scaled units
        let lever = ((edge.start[0] - center[0]) * edge.normal[0]
            + (edge.start[1] - center[1]) * edge.normal[1])
            / h;
        if lever == 0.0 {
            continue;
        }
        for (t, w) in rule.unit_interval() {
            let p = edge.point_at(t);
            let px = powers((p[0] - center[0]) / h, max_degree);
            let py = powers((p[1] - center[1]) / h, max_degree);
            let ws = w * edge.length * lever * h;
            for d in 0..=max_degree {
                let factor = ws / (d + 2) as f64;
                for b in 0..=d {
                    out[monomial_index(d - b, b)] += factor * px[d - b] * py[b];
                }
            }
        }
    }
    out
}

/// Integrals of scaled monomials about the element centroid and diameter.
pub fn monomial_integrals(geom: &ElementGeometry, max_degree: usize) -> Vec<f64> {
    monomial_integrals_about(geom, geom.centroid, geom.diameter, max_degree)
}

/// Precomputed element integrals of the degree-`k` scaled monomial basis.
#[derive(Debug, Clone)]
pub struct MomentTable {
    pub k: usize,
    /// `∫_E m_α` for `|α| <= 2k`.
    pub integrals: Vec<f64>,
    /// `H[α][β] = ∫_E m_α m_β`.
    pub h: DMatrix<f64>,
    /// `G̃[α][β] = ∫_E ∇m_α · ∇m_β`.
    pub g_tilde: DMatrix<f64>,
    /// Points per edge used for the Gauss–Legendre edge rule.
    pub edge_rule_points: usize,
}

pub fn monomial_moments(geom: &ElementGeometry, k: usize) -> MomentTable {
    let integrals = monomial_integrals(geom, 2 * k);
    let ex = exponents(k);
    let nk = ex.len();
    let hd = geom.diameter;
    let mut h = DMatrix::zeros(nk, nk);
    let mut g = DMatrix::zeros(nk, nk);
    for (i, &(a1, b1)) in ex.iter().enumerate() {
        for (j, &(a2, b2)) in ex.iter().enumerate() {
            h[(i, j)] = integrals[monomial_index(a1 + a2, b1 + b2)];
            let mut v = 0.0;
            if a1 > 0 && a2 > 0 {
                v += (a1 * a2) as f64 * integrals[monomial_index(a1 + a2 - 2, b1 + b2)];
            }
            if b1 > 0 && b2 > 0 {
                v += (b1 * b2) as f64 * integrals[monomial_index(a1 + a2, b1 + b2 - 2)];
            }
            g[(i, j)] = v / (hd * hd);
        }
    }
    MomentTable {
        k,
        integrals,
        h,
        g_tilde: g,
        edge_rule_points: points_for_degree(2 * k),
    }
}

/// `∫_e f(s) ds` for `f(s) = Σ_j coeffs[j] s^j`, `s` the arclength from `edge.start`.
pub fn edge_polynomial_integral(edge: &Edge, coeffs: &[f64]) -> f64 {
    if coeffs.is_empty() {
        return 0.0;
    }
    let rule = gauss_legendre(points_for_degree(coeffs.len() - 1));
    rule.unit_interval()
        .map(|(t, w)| {
            let s = t * edge.length;
            let f = coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c);
            w * f
        })
        .sum::<f64>()
        * edge.length
}

fn point_in_triangle(p: Point, a: Point, b: Point, c: Point, tol: f64) -> bool {
    cross(a, b, p) >= -tol && cross(b, c, p) >= -tol && cross(c, a, p) >= -tol
}

/// Ear-clipping triangulation of a simple CCW polygon. Collinear vertices are
/// dropped without emitting zero-area triangles.
pub fn triangulate(pts: &[Point]) -> Vec<[usize; 3]> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    let mut tris = Vec::with_capacity(pts.len().saturating_sub(2));
    let scale = signed_area(pts).abs().max(f64::MIN_POSITIVE);
    let tol = 1e-13 * scale;
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for i in 0..m {
            let (a, b, c) = (idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]);
            if cross(pts[a], pts[b], pts[c]) <= tol {
                continue;
            }
            let blocked = idx.iter().any(|&v| {
                v != a
                    && v != b
                    && v != c
                    && pts[v] != pts[a]
                    && pts[v] != pts[b]
                    && pts[v] != pts[c]
                    && point_in_triangle(pts[v], pts[a], pts[b], pts[c], tol)
            });
            if !blocked {
                tris.push([a, b, c]);
                idx.remove(i);
                clipped = true;
                break;
            }
        }
        if !clipped {
            // only flat (collinear) vertices remain clippable
            let flat = (0..m)
                .min_by(|&i, &j| {
                    let ci = cross(pts[idx[(i + m - 1) % m]], pts[idx[i]], pts[idx[(i + 1) % m]]).abs();
                    let cj = cross(pts[idx[(j + m - 1) % m]], pts[idx[j]], pts[idx[(j + 1) % m]]).abs();
                    ci.total_cmp(&cj)
                })
                .unwrap();
            idx.remove(flat);
        }
    }
    if idx.len() == 3 && cross(pts[idx[0]], pts[idx[1]], pts[idx[2]]) > tol {
        tris.push([idx[0], idx[1], idx[2]]);
    }
    tris
}

/// Collapsed-coordinate rule on the reference triangle `(0,0),(1,0),(0,1)`
/// with `n` Gauss points per direction; exact for degree `2n - 2`.
pub fn triangle_rule(n: usize) -> Vec<([f64; 2], f64)> {
    let g = gauss_legendre(n);
    let mut out = Vec::with_capacity(n * n);
    for (u, wu) in g.unit_interval() {
        for (v, wv) in g.unit_interval() {
            out.push(([u * (1.0 - v), u * v], wu * wv * u));
        }
    }
    out
}

/// Quadrature points and weights covering the polygon, exact for
/// polynomials up to `degree`.
pub fn polygon_quadrature(geom: &ElementGeometry, degree: usize) -> Vec<(Point, f64)> {
    let rule = triangle_rule(degree / 2 + 1);
    let mut out = Vec::new();
    for [a, b, c] in triangulate(&geom.vertices) {
        let (p0, p1, p2) = (geom.vertices[a], geom.vertices[b], geom.vertices[c]);
        let jac = cross(p0, p1, p2);
        for &([s, t], w) in &rule {
            let x = [
                p0[0] + s * (p1[0] - p0[0]) + t * (p2[0] - p0[0]),
                p0[1] + s * (p1[1] - p0[1]) + t * (p2[1] - p0[1]),
            ];
            out.push((x, w * jac));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Vec<Point> {
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
    }

    #[test]
    fn square_geometry() {
        let g = ElementGeometry::new(&unit_square()).unwrap();
        assert!((g.area - 1.0).abs() < 1e-15);
        assert_eq!(g.centroid, [0.5, 0.5]);
        assert!((g.diameter - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn triangle_geometry() {
        let g = ElementGeometry::new(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!((g.area - 0.5).abs() < 1e-15);
        assert!((g.centroid[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((g.centroid[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn regular_hexagon_geometry() {
        let pts: Vec<Point> = (0..6)
            .map(|i| {
                let t = std::f64::consts::PI / 3.0 * i as f64;
                [t.cos(), t.sin()]
            })
            .collect();
        let g = ElementGeometry::new(&pts).unwrap();
        assert!((g.area - 1.5 * 3f64.sqrt()).abs() < 1e-14);
        assert!(g.centroid[0].abs() < 1e-15 && g.centroid[1].abs() < 1e-15);
        let sx: f64 = g.edges.iter().map(|e| e.normal[0] * e.length).sum();
        let sy: f64 = g.edges.iter().map(|e| e.normal[1] * e.length).sum();
        assert!(sx.abs() < 1e-13 * g.perimeter() && sy.abs() < 1e-13 * g.perimeter());
    }

    #[test]
    fn rejects_clockwise_and_bowtie() {
        let mut cw = unit_square();
        cw.reverse();
        assert!(matches!(ElementGeometry::new(&cw), Err(Error::Geometry(_))));
        // the bow-tie below has positive signed area but crosses itself
        let bowtie = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [1.0, -1.0], [0.0, 2.0]];
        assert!(matches!(ElementGeometry::new(&bowtie), Err(Error::Geometry(_))));
    }

    #[test]
    fn square_moments() {
        let g = ElementGeometry::new(&unit_square()).unwrap();
        let m = monomial_moments(&g, 1);
        assert!((m.h[(0, 0)] - 1.0).abs() < 1e-15);
        // ∫ x = h ∫ m_(1,0) + x_E ∫ 1
        let ix = g.diameter * m.integrals[monomial_index(1, 0)] + g.centroid[0] * g.area;
        assert!((ix - 0.5).abs() < 1e-15);
        // G̃ kills constants, is PSD
        for j in 0..3 {
            assert_eq!(m.g_tilde[(0, j)], 0.0);
        }
        // ∫ ξ² over [-1/2,1/2]^2 scaled by h^-2 = 1/12 / 2
        assert!((m.integrals[monomial_index(2, 0)] - 1.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn edge_integrals() {
        let e = Edge::new([0.0, 0.0], [1.0, 0.0]);
        assert!((edge_polynomial_integral(&e, &[1.0]) - 1.0).abs() < 1e-15);
        let e = Edge::new([0.0, 0.0], [0.0, 2.0]);
        assert!((edge_polynomial_integral(&e, &[0.0, 1.0]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn triangulation_covers_area() {
        let oct = [
            [0.0, 0.0],
            [0.5, 0.0],
            [1.0, 0.0],
            [1.0, 0.5],
            [1.0, 1.0],
            [0.5, 1.0],
            [0.0, 1.0],
            [0.0, 0.5],
        ];
        let tris = triangulate(&oct);
        let total: f64 = tris
            .iter()
            .map(|t| signed_area(&[oct[t[0]], oct[t[1]], oct[t[2]]]))
            .sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(tris.iter().all(|t| signed_area(&[oct[t[0]], oct[t[1]], oct[t[2]]]) > 0.0));
        // a non-convex L shape
        let l = [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]];
        let total: f64 = triangulate(&l)
            .iter()
            .map(|t| signed_area(&[l[t[0]], l[t[1]], l[t[2]]]))
            .sum();
        assert!((total - 3.0).abs() < 1e-14);
    }

    #[test]
    fn polygon_quadrature_matches_moments() {
        let pts = [[0.1, 0.0], [1.0, 0.2], [1.2, 0.9], [0.5, 1.3], [-0.2, 0.7]];
        let g = ElementGeometry::new(&pts).unwrap();
        let basis = ScaledMonomialBasis::new(&g, 4);
        let q = polygon_quadrature(&g, 4);
        let exact = monomial_integrals(&g, 4);
        let mut approx = vec![0.0; exact.len()];
        for (x, w) in q {
            for (a, v) in approx.iter_mut().zip(basis.eval(x)) {
                *a += w * v;
            }
        }
        for (a, e) in approx.iter().zip(&exact) {
            assert!((a - e).abs() < 1e-14 * g.area, "{a} vs {e}");
        }
    }
}
