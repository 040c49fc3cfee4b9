//! Euler–Maclaurin tails Σ_{n>N} h(n) for smooth, decaying summands.

use super::quad::{gl10, gl16};
use super::sum::NeumaierC;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug)]
pub struct Tail {
    pub value: Complex64,
    /// Quadrature discrepancy plus the magnitude of the last correction term.
    pub err: f64,
}

/// Σ_{n=N+1}^∞ h(n) ≈ ∫_N^∞ h − h(N)/2 − h′(N)/12 + h‴(N)/720 − h⁽⁵⁾(N)/30240.
///
/// h must be analytic in the disc of radius `sing_dist` about N and O(x^{-2}) on the
/// ray; derivatives come from the Cauchy integral on a circle of radius sing_dist/4.
pub fn tail_sum<F: Fn(Complex64) -> Complex64>(h: F, n: f64, sing_dist: f64) -> Tail {
    assert!(n > 0.0 && sing_dist > 0.0);
    let (integral, qerr) = integral_to_infinity(&|x: f64| h(Complex64::new(x, 0.0)), n);
    let r = 0.25 * sing_dist.min(n);
    let d = cauchy_derivatives(&h, n, r);
    let value = integral - d[0] * 0.5 - d[1] / 12.0 + d[3] / 720.0 - d[5] / 30240.0;
    // next Euler–Maclaurin term (B_8/8!) as the truncation proxy, floored by a ring error
    let next = d[5].norm() / (30240.0 * r * r);
    Tail { value, err: qerr + next + 1e-16 * value.norm() }
}

/// h, h′, …, h⁽⁵⁾ at x by the trapezoid rule on |z − x| = r.
fn cauchy_derivatives<F: Fn(Complex64) -> Complex64>(h: &F, x: f64, r: f64) -> [Complex64; 6] {
    const M: usize = 48;
    let mut acc = [Complex64::new(0.0, 0.0); 6];
    for j in 0..M {
        let th = 2.0 * std::f64::consts::PI * j as f64 / M as f64;
        let w = Complex64::from_polar(1.0, th);
        let v = h(Complex64::new(x, 0.0) + w * r);
        let mut wk = Complex64::new(1.0, 0.0);
        for a in acc.iter_mut() {
            *a += v / wk;
            wk *= w;
        }
    }
    let mut fact = 1.0;
    let mut rk = 1.0;
    let mut out = [Complex64::new(0.0, 0.0); 6];
    for (k, a) in acc.iter().enumerate() {
        if k > 0 {
            fact *= k as f64;
            rk *= r;
        }
        out[k] = *a * (fact / (rk * M as f64));
    }
    out
}

/// ∫_N^∞ h(x) dx via x = N·e^u on unit panels in u.
fn integral_to_infinity<F: Fn(f64) -> Complex64>(h: &F, n: f64) -> (Complex64, f64) {
    let g = |u: f64| {
        let x = n * u.exp();
        h(x) * x
    };
    let mut acc = NeumaierC::new();
    let mut err = 0.0;
    let mut a = 0.0;
    let mut width = 0.25;
    for _ in 0..200 {
        let b = a + width;
        let hi = panel(&g, a, b, true);
        let lo = panel(&g, a, b, false);
        acc.add(hi);
        err += (hi - lo).norm();
        a = b;
        width = (width * 2.0).min(1.0);
        if hi.norm() <= 1e-18 * acc.value().norm().max(1e-300) && a > 4.0 {
            // remaining mass decays at least geometrically from here
            err += hi.norm();
            break;
        }
    }
    (acc.value(), err)
}

fn panel<G: Fn(f64) -> Complex64>(g: &G, a: f64, b: f64, high: bool) -> Complex64 {
    let re = |u: f64| g(u).re;
    let im = |u: f64| g(u).im;
    let q = if high { gl16() } else { gl10() };
    Complex64::new(q.integrate(re, a, b), q.integrate(im, a, b))
}
