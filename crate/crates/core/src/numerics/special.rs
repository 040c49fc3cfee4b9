//! Hurwitz zeta and digamma for the lattice tails of canonical products.

use num_complex::Complex64;

/// B_2, B_4, ..., B_20.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// ζ(s, q) = Σ_{k≥0} (q+k)^{-s} for real s > 1, q > 0, via Euler–Maclaurin after
/// shifting q past max(12, s).
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    assert!(s > 1.0 && q > 0.0, "hurwitz_zeta needs s > 1, q > 0");
    let shift = ((s.max(12.0) - q).ceil().max(0.0)) as usize + 4;
    let mut head = super::Neumaier::new();
    for k in (0..shift).rev() {
        head.add((q + k as f64).powf(-s));
    }
    let x = q + shift as f64;
    let xs = x.powf(-s);
    let mut tail = x * xs / (s - 1.0) + 0.5 * xs;
    // term_j = B_2j/(2j)! · s(s+1)…(s+2j−2) · x^{−s−2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut pw = xs / x;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let t = b / fact * rising * pw;
        tail += t;
        if t.abs() < 1e-18 * tail.abs() {
            break;
        }
        let m = 2.0 * (j as f64 + 1.0);
        rising *= (s + m - 1.0) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        pw /= x * x;
    }
    head.value() + tail
}

/// Digamma ψ(x) for x > 0.
pub fn digamma(x: f64) -> f64 {
    assert!(x > 0.0, "digamma needs x > 0");
    let mut acc = 0.0;
    let mut y = x;
    while y < 12.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let y2 = 1.0 / (y * y);
    let mut s = y.ln() - 0.5 / y;
    let mut p = y2;
    for (j, b) in BERNOULLI.iter().take(8).enumerate() {
        s -= b / (2.0 * (j as f64 + 1.0)) * p;
        p *= y2;
    }
    acc + s
}

/// ln(1 − w), accurate for tiny |w| where 1 − w would round away w.
pub fn ln_1m(w: Complex64) -> Complex64 {
    if w.norm() < 1e-3 {
        let mut term = w;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=7 {
            acc -= term / k as f64;
            term *= w;
        }
        acc
    } else {
        (1.0 - w).ln()
    }
}
