//! Trigonometry in units of π with exact argument reduction.

use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

/// Splits `x = k + r` with integer `k` and `|r| ≤ 1/2`.
#[inline]
fn reduce(x: f64) -> (f64, f64) {
    let k = x.round();
    (k, x - k)
}

#[inline]
fn parity_sign(k: f64) -> f64 {
    if (k * 0.5).fract() == 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// sin(πx), exact zeros at integers.
pub fn sin_pi(x: f64) -> f64 {
    let (k, r) = reduce(x);
    parity_sign(k) * (PI * r).sin()
}

/// cos(πx), exact zeros at half-integers.
pub fn cos_pi(x: f64) -> f64 {
    let (k, r) = reduce(x);
    if r.abs() == 0.5 {
        return 0.0;
    }
    parity_sign(k) * (PI * r).cos()
}

/// log sin(πz) with the magnitude factored as e^{π|Im z|}/2, so it never overflows.
/// Returns -inf real part at integers.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    let ay = z.im.abs();
    let eps = (-2.0 * PI * ay).exp();
    let sgn = if z.im < 0.0 { -1.0 } else { 1.0 };
    let m = Complex64::new(sin_pi(z.re) * (1.0 + eps), sgn * cos_pi(z.re) * (1.0 - eps));
    Complex64::new(PI * ay - LN_2, 0.0) + m.ln()
}

/// sin(πz) directly; overflows for |Im z| beyond about 225.
pub fn sin_pi_c(z: Complex64) -> Complex64 {
    ln_sin_pi(z).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_zeros() {
        for n in -50..=50 {
            assert_eq!(sin_pi(n as f64), 0.0);
            assert_eq!(cos_pi(n as f64 + 0.5), 0.0);
        }
        assert_eq!(sin_pi(0.5), 1.0);
        assert_eq!(cos_pi(1.0), -1.0);
    }

    #[test]
    fn complex_matches_std() {
        for &(x, y) in &[(0.3, 0.2), (-1.7, 0.5), (12.25, -3.0), (0.5, 1.0)] {
            let z = Complex64::new(x, y);
            let want = (z * PI).sin();
            let got = sin_pi_c(z);
            assert!((got - want).norm() <= 1e-13 * want.norm(), "{z}");
        }
    }

    #[test]
    fn log_form_survives_large_imaginary_part() {
        let l = ln_sin_pi(Complex64::new(0.25, 1e4));
        assert!((l.re - (PI * 1e4 - LN_2)).abs() < 1e-9);
    }
}
