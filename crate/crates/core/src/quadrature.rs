//! One-dimensional Gauss rules on the reference interval `[-1, 1]`.

/// Evaluate the Legendre polynomial `P_n` and its derivative at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    // derivative from the standard recurrence, valid for |x| < 1
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// A quadrature rule: nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[0, 1]`.
    pub fn unit_interval(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (0.5 * (x + 1.0), 0.5 * w))
    }
}

/// Gauss–Legendre rule with `n` points, exact for degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// Number of Gauss–Legendre points integrating polynomials of `degree` exactly.
pub fn points_for_degree(degree: usize) -> usize {
    degree / 2 + 1
}

/// Gauss–Lobatto–Legendre rule with `n >= 2` points (endpoints included),
/// exact for degree `2n - 3`. Nodes are sorted ascending and symmetric.
pub fn gauss_lobatto(n: usize) -> Rule {
    assert!(n >= 2, "Gauss-Lobatto rule needs at least two points");
    let m = n - 1;
    let mut nodes = vec![0.0; n];
    nodes[0] = -1.0;
    nodes[m] = 1.0;
    // interior nodes are the roots of P'_m; Newton on P'_m using
    // (1 - x^2) P''_m = 2x P'_m - m(m+1) P_m
    for i in 1..m {
        let mut x = -(std::f64::consts::PI * i as f64 / m as f64).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(m, x);
            let d2p = (2.0 * x * dp - (m * (m + 1)) as f64 * p) / (1.0 - x * x);
            let dx = dp / d2p;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
    }
    for i in 1..n.div_ceil(2) {
        let s = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -s;
        nodes[n - 1 - i] = s;
    }
    if n % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    let scale = 2.0 / (m * n) as f64;
    let weights = nodes
        .iter()
        .map(|&x| {
            let p = if x.abs() == 1.0 { 1.0 } else { legendre(m, x).0 };
            scale / (p * p)
        })
        .collect();
    Rule { nodes, weights }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate(rule: &Rule, p: u32) -> f64 {
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x.powi(p as i32))
            .sum()
    }

    fn exact(p: u32) -> f64 {
        if p % 2 == 1 {
            0.0
        } else {
            2.0 / (p as f64 + 1.0)
        }
    }

    #[test]
    fn gauss_legendre_exactness() {
        for n in 1..=12 {
            let r = gauss_legendre(n);
            for p in 0..(2 * n as u32) {
                assert!((integrate(&r, p) - exact(p)).abs() < 1e-14, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn gauss_lobatto_exactness_and_symmetry() {
        for n in 2..=8 {
            let r = gauss_lobatto(n);
            assert_eq!(r.nodes[0], -1.0);
            assert_eq!(r.nodes[n - 1], 1.0);
            for i in 0..n {
                assert_eq!(r.nodes[i], -r.nodes[n - 1 - i]);
            }
            for p in 0..=(2 * n as u32 - 3) {
                assert!((integrate(&r, p) - exact(p)).abs() < 1e-14, "n={n} p={p}");
            }
        }
        // five-point rule: interior nodes +-sqrt(3/7)
        let r = gauss_lobatto(5);
        assert!((r.nodes[3] - (3.0f64 / 7.0).sqrt()).abs() < 1e-15);
        assert!((r.weights[2] - 32.0 / 45.0).abs() < 1e-15);
    }
}
