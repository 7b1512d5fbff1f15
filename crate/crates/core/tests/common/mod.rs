//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::Rng;

use vemeig::mesh::PolygonalMesh;
use vemeig::Point;

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Collapsed (Duffy) tensor rule on a triangle, exact to degree `2n - 2`.
pub fn triangle_rule(a: Point, b: Point, c: Point, n: usize) -> Vec<(Point, f64)> {
    let g = gauss_legendre(n);
    let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    let mut out = Vec::with_capacity(n * n);
    for &(u, wu) in &g {
        let s = 0.5 * (u + 1.0);
        for &(v, wv) in &g {
            let t = 0.5 * (v + 1.0) * (1.0 - s);
            let w = 0.25 * wu * wv * (1.0 - s) * det;
            out.push(([a[0] + s * (b[0] - a[0]) + t * (c[0] - a[0]), a[1] + s * (b[1] - a[1]) + t * (c[1] - a[1])], w));
        }
    }
    out
}

/// `∫ ((x - center)/h)^a ((y - center)/h)^b` for `a + b <= max_degree`, in
/// graded-lex order, by fan triangulation from `kernel_point`.
pub fn fan_moments(pts: &[Point], kernel_point: Point, center: Point, h: f64, max_degree: usize) -> Vec<f64> {
    let mut out = vec![0.0; (max_degree + 1) * (max_degree + 2) / 2];
    let n = pts.len();
    for i in 0..n {
        for (x, w) in triangle_rule(kernel_point, pts[i], pts[(i + 1) % n], max_degree / 2 + 3) {
            let xi = (x[0] - center[0]) / h;
            let eta = (x[1] - center[1]) / h;
            let mut idx = 0;
            for d in 0..=max_degree {
                for bb in 0..=d {
                    out[idx] += w * xi.powi((d - bb) as i32) * eta.powi(bb as i32);
                    idx += 1;
                }
            }
        }
    }
    out
}

/// Random polygon star-shaped about the returned kernel point: jittered
/// angles, random radii (all equal for convex ones), random scale and shift.
pub fn random_star_polygon(rng: &mut impl Rng) -> (Vec<Point>, Point) {
    let n: usize = rng.gen_range(3..=12);
    // jittered equispaced angles; every angular gap stays below 0.9π
    let jitter = if n == 3 { 0.15 } else { 0.4 };
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    let angles: Vec<f64> = (0..n)
        .map(|i| phase + std::f64::consts::TAU * (i as f64 + 0.5 + rng.gen_range(-jitter..jitter)) / n as f64)
        .collect();
    let convex = rng.gen_bool(0.3);
    let scale = 10f64.powf(rng.gen_range(-2.0..1.0));
    let shift = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
    let pts = angles
        .iter()
        .map(|&t| {
            let r = if convex { 1.0 } else { rng.gen_range(0.3..1.0) };
            [shift[0] + scale * r * t.cos(), shift[1] + scale * r * t.sin()]
        })
        .collect();
    (pts, shift)
}

/// Standard P1 stiffness and mass on mesh vertices (triangles only), as
/// `(i, j) -> (a_ij, m_ij)` for all vertex pairs sharing a triangle.
pub fn p1_fem(mesh: &PolygonalMesh) -> BTreeMap<(usize, usize), (f64, f64)> {
    let mut out = BTreeMap::new();
    let v = mesh.vertices();
    for cell in mesh.cells() {
        assert_eq!(cell.len(), 3);
        let p: Vec<Point> = cell.iter().map(|&i| v[i]).collect();
        let area = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]));
        // gradient of the hat at vertex i is the rotated opposite edge over 2|T|
        let grads: Vec<Point> = (0..3)
            .map(|i| {
                let (q, r) = (p[(i + 1) % 3], p[(i + 2) % 3]);
                [(q[1] - r[1]) / (2.0 * area), (r[0] - q[0]) / (2.0 * area)]
            })
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                let e = out.entry((cell[i], cell[j])).or_insert((0.0, 0.0));
                e.0 += area * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
                e.1 += area / 12.0 * if i == j { 2.0 } else { 1.0 };
            }
        }
    }
    out
}

/// Finite eigenvalues of `A x = λ B x`, ascending, from the eigenvalues
/// `μ = 1/λ` of the nonsymmetric `A⁻¹ B` (Hessenberg QR, no use of symmetry);
/// `|μ| <= cut · max |μ|` counts as infinite.
pub fn brute_force_finite(a: &DMatrix<f64>, b: &DMatrix<f64>, cut: f64) -> Vec<f64> {
    let m = a.clone().lu().solve(b).expect("A is invertible");
    let m = faer::Mat::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let mu = m.eigenvalues().expect("nonsymmetric eigenvalues converge");
    let max = mu.iter().map(|z| z.re.hypot(z.im)).fold(0.0, f64::max);
    let mut lam: Vec<f64> = mu
        .iter()
        .filter(|z| z.re.hypot(z.im) > cut * max)
        .map(|z| {
            assert!(z.im.abs() <= 1e-8 * max, "complex eigenvalue {} + {}i", z.re, z.im);
            1.0 / z.re
        })
        .collect();
    lam.sort_by(f64::total_cmp);
    lam
}

/// Distance from `l` to the nearest `i² + j²` with `i, j >= 1`.
pub fn distance_to_exact(l: f64) -> f64 {
    let mut best = f64::INFINITY;
    let m = (l.max(2.0).sqrt() as usize) + 2;
    for i in 1..=m {
        for j in 1..=m {
            best = best.min((l - (i * i + j * j) as f64).abs());
        }
    }
    best
}

/// Round to `digits` significant digits.
pub fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let e = x.abs().log10().floor() as i32;
    let f = 10f64.powi(digits - 1 - e);
    (x * f).round() / f
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}
