//! Composite Gauss–Legendre quadrature.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes per panel; panels are at most one length unit wide.
pub const NODES_PER_PANEL: usize = 64;

/// Gauss–Legendre rule on `[-1, 1]` with `n` nodes, by Newton iteration on
/// `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            derivative = dp;
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        derivative = if dp != 0.0 { dp } else { derivative };
        let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn standard_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(NODES_PER_PANEL))
}

/// Nodes and weights covering `[a, b]` with equal panels no wider than one
/// unit.
pub fn composite_rule(a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    if b <= a {
        return (Vec::new(), Vec::new());
    }
    let (nodes, weights) = standard_rule();
    let panels = (b - a).ceil().max(1.0) as usize;
    let width = (b - a) / panels as f64;
    let mut xs = Vec::with_capacity(panels * nodes.len());
    let mut ws = Vec::with_capacity(panels * nodes.len());
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let mid = lo + 0.5 * width;
        for (x, w) in nodes.iter().zip(weights) {
            xs.push(mid + 0.5 * width * x);
            ws.push(0.5 * width * w);
        }
    }
    (xs, ws)
}

/// `∫_a^b f`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let (xs, ws) = composite_rule(a, b);
    crate::linalg::compensated_sum(xs.iter().zip(&ws).map(|(&x, &w)| w * f(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rules_are_exact_for_polynomials() {
        let (x, w) = gauss_legendre(5);
        // exact through degree 9
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((integral - 2.0 / 9.0).abs() < 1e-15);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn standard_rule_weights_sum_to_two() {
        let (x, w) = standard_rule();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn gaussian_integral() {
        let v = integrate(|r| 2.0 * r * (-r * r).exp(), 0.0, 12.0);
        assert!((v - 1.0).abs() < 1e-14);
        let v = integrate(|x| x.sin(), 0.0, PI);
        assert!((v - 2.0).abs() < 1e-14);
    }
}
