//! Gauss–Legendre quadrature on panels.

use super::sum::Neumaier;
use std::sync::OnceLock;

#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes on [-1, 1] by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        let mut acc = Neumaier::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(c + h * x));
        }
        h * acc.value()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub fn gl16() -> &'static GaussLegendre {
    static R: OnceLock<GaussLegendre> = OnceLock::new();
    R.get_or_init(|| GaussLegendre::new(16))
}

pub fn gl10() -> &'static GaussLegendre {
    static R: OnceLock<GaussLegendre> = OnceLock::new();
    R.get_or_init(|| GaussLegendre::new(10))
}

/// Integral over consecutive panels `edges[i]..edges[i+1]`; the error proxy is the
/// 16-point minus 10-point discrepancy.
pub fn panels<F: FnMut(f64) -> f64>(mut f: F, edges: &[f64]) -> (f64, f64) {
    let mut hi = Neumaier::new();
    let mut err = 0.0;
    for w in edges.windows(2) {
        let a = gl16().integrate(&mut f, w[0], w[1]);
        let b = gl10().integrate(&mut f, w[0], w[1]);
        hi.add(a);
        err += (a - b).abs();
    }
    (hi.value(), err)
}

/// Panel edges from `a` to `b` that shrink geometrically (ratio 1/2) toward `a`, starting at width `h0`.
pub fn graded_edges(a: f64, b: f64, h0: f64) -> Vec<f64> {
    let mut e = vec![a];
    let mut w = h0.min(b - a);
    let mut x = a;
    while x < b {
        x = (x + w).min(b);
        e.push(x);
        w *= 2.0;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 10, 16, 20] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let g = gl10();
        let v = g.integrate(|x| x.powi(19) + 3.0 * x.powi(6), -1.0, 2.0);
        let want = (2f64.powi(20) - 1.0) / 20.0 + 3.0 * (2f64.powi(7) + 1.0) / 7.0;
        assert!((v - want).abs() < 1e-9 * want);
    }

    #[test]
    fn graded_panels_handle_log_singularity() {
        let e = graded_edges(0.0, 1.0, 1e-12);
        let (v, err) = panels(|x| x.ln(), &e);
        assert!((v + 1.0).abs() < 1e-10, "{v}");
        assert!(err < 1e-8);
    }
}
