//! Canonical systems JY′ = zHY on [0, L], J = [[0, −1], [1, 0]], with piecewise-constant H.

use crate::entire::{type_from_samples, TypeEstimate};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type Mat2 = [[Complex64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub length: f64,
    /// Real symmetric positive semi-definite.
    pub h: [[f64; 2]; 2],
}

impl Segment {
    pub fn new(length: f64, h: [[f64; 2]; 2]) -> Result<Self> {
        let s = Segment { length, h };
        s.validate()?;
        Ok(s)
    }

    pub fn det(&self) -> f64 {
        self.h[0][0] * self.h[1][1] - self.h[0][1] * self.h[1][0]
    }

    fn norm(&self) -> f64 {
        self.h.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn validate(&self) -> Result<()> {
        let h = self.h;
        if !(self.length > 0.0) || !self.length.is_finite() {
            return Err(Error::Invalid(format!("segment length {} must be positive", self.length)));
        }
        if h.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("Hamiltonian entries must be finite".into()));
        }
        if h[0][1] != h[1][0] {
            return Err(Error::Invalid("Hamiltonian must be symmetric".into()));
        }
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::Invalid("Hamiltonian vanishes on a segment".into()));
        }
        // both eigenvalues ≥ 0 ⇔ trace ≥ 0 and det ≥ 0 (up to round-off)
        if h[0][0] < -1e-12 * n || h[1][1] < -1e-12 * n || self.det() < -1e-12 * n * n {
            return Err(Error::Invalid("Hamiltonian must be positive semi-definite".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseHamiltonian {
    pub segments: Vec<Segment>,
}

impl PiecewiseHamiltonian {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Invalid("a Hamiltonian needs at least one segment".into()));
        }
        for s in &segments {
            s.validate()?;
        }
        Ok(Self { segments })
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// exp(−zℓJH) scaled by e^{−|Im s|}, s = zℓ√det H, with the exponent returned separately.
/// JH is trace-free, so (zℓJH)² = −s²·I and exp(−zℓJH) = cos s·I − (sin s/s)·zℓJH.
fn transfer_scaled(h: &[[f64; 2]; 2], l: f64, z: Complex64) -> (Mat2, f64) {
    let det = (h[0][0] * h[1][1] - h[0][1] * h[1][0]).max(0.0);
    let s = z * l * det.sqrt();
    let a = s.im.abs();
    let i = Complex64::i();
    let (ep, em) = ((i * s - a).exp(), (-i * s - a).exp());
    let cos = 0.5 * (ep + em);
    // sin s/s, by its series near 0
    let sinc = if s.norm() < 1e-4 { 1.0 - s * s / 6.0 } else { (ep - em) / (2.0 * i * s) };
    // JH = [[−h10, −h11], [h00, h01]]
    let jh = [[-h[1][0], -h[1][1]], [h[0][0], h[0][1]]];
    let w = -sinc * z * l;
    let m = [
        [cos + w * jh[0][0], w * jh[0][1]],
        [w * jh[1][0], cos + w * jh[1][1]],
    ];
    (m, a)
}

/// Transfer matrix exp(−zJHℓ) of one constant segment. Entries overflow once |Im z|ℓ√det H
/// passes about 700; [`monodromy_scaled`] works in scaled form.
pub fn transfer_matrix(h: &[[f64; 2]; 2], length: f64, z: Complex64) -> Mat2 {
    let (m, a) = transfer_scaled(h, length, z);
    let e = a.exp();
    [[m[0][0] * e, m[0][1] * e], [m[1][0] * e, m[1][1] * e]]
}

pub fn mat_det(m: &Mat2) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// (A(z), B(z)) = Y(L) from Y(0) = (0, 1), as a unit-scale pair times e^{scale}.
pub fn monodromy_scaled(h: &PiecewiseHamiltonian, z: Complex64) -> ((Complex64, Complex64), f64) {
    let (mut y0, mut y1) = (c(0.0), c(1.0));
    let mut scale = 0.0;
    for seg in &h.segments {
        let (m, a) = transfer_scaled(&seg.h, seg.length, z);
        let n0 = m[0][0] * y0 + m[0][1] * y1;
        let n1 = m[1][0] * y0 + m[1][1] * y1;
        let r = n0.norm().max(n1.norm());
        scale += a;
        if r > 0.0 && r.is_finite() {
            y0 = n0 / r;
            y1 = n1 / r;
            scale += r.ln();
        } else {
            y0 = n0;
            y1 = n1;
        }
    }
    ((y0, y1), scale)
}

pub fn monodromy(h: &PiecewiseHamiltonian, z: Complex64) -> (Complex64, Complex64) {
    let ((a, b), s) = monodromy_scaled(h, z);
    let e = s.exp();
    (a * e, b * e)
}

/// Krein–de Branges type Σ ℓ_j √det H_j.
pub fn kdb_type(h: &PiecewiseHamiltonian) -> f64 {
    h.segments.iter().map(|s| s.length * s.det().max(0.0).sqrt()).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndivisibleInterval {
    /// Consecutive segment indices sharing one rank-one direction.
    pub segments: Vec<usize>,
    pub start: f64,
    pub end: f64,
    /// Unit vector e with H = tr(H)·e eᵀ on the interval.
    pub direction: (f64, f64),
}

/// Unit vector spanning the range of a rank-one PSD matrix, first nonzero entry positive.
fn direction(h: &[[f64; 2]; 2]) -> (f64, f64) {
    let (x, y) = if h[0][0] >= h[1][1] { (h[0][0], h[0][1]) } else { (h[1][0], h[1][1]) };
    let n = x.hypot(y);
    let (x, y) = (x / n, y / n);
    if x < 0.0 || (x == 0.0 && y < 0.0) {
        (-x, -y)
    } else {
        (x, y)
    }
}

/// Degenerate segments (det H_j < tol·‖H_j‖², default tol 10⁻¹²), with adjacent segments of the
/// same direction merged into one interval.
pub fn detect_indivisible(h: &PiecewiseHamiltonian, tol: Option<f64>) -> Vec<IndivisibleInterval> {
    let tol = tol.unwrap_or(1e-12);
    let mut out: Vec<IndivisibleInterval> = Vec::new();
    let mut at = 0.0;
    let mut prev_degenerate = false;
    for (i, seg) in h.segments.iter().enumerate() {
        let (start, end) = (at, at + seg.length);
        at = end;
        let n = seg.norm();
        if seg.det() >= tol * n * n {
            prev_degenerate = false;
            continue;
        }
        let d = direction(&seg.h);
        match out.last_mut() {
            Some(last) if prev_degenerate && (last.direction.0 * d.1 - last.direction.1 * d.0).abs() < 1e-9 => {
                last.segments.push(i);
                last.end = end;
            }
            _ => out.push(IndivisibleInterval { segments: vec![i], start, end, direction: d }),
        }
        prev_degenerate = true;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct TypeCrossCheck {
    pub kdb: f64,
    pub numeric: TypeEstimate,
}

/// kdb_type against the growth of |A(iy)| sampled through the monodromy.
pub fn cross_check_type(h: &PiecewiseHamiltonian, y_grid: &[f64]) -> Result<TypeCrossCheck> {
    let logs: Vec<f64> = y_grid
        .iter()
        .map(|&y| {
            let ((a, _), s) = monodromy_scaled(h, Complex64::new(0.0, y));
            a.norm().ln() + s
        })
        .collect();
    if logs.iter().any(|l| *l == f64::NEG_INFINITY) {
        return Err(Error::Invalid("A vanishes identically for this Hamiltonian".into()));
    }
    Ok(TypeCrossCheck { kdb: kdb_type(h), numeric: type_from_samples(y_grid, &logs)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entire::dyadic_grid;
    use std::f64::consts::PI;

    const I2: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 1.0]];
    const E1: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 0.0]];
    const E2: [[f64; 2]; 2] = [[0.0, 0.0], [0.0, 1.0]];

    fn ham(segs: &[(f64, [[f64; 2]; 2])]) -> PiecewiseHamiltonian {
        PiecewiseHamiltonian::new(segs.iter().map(|&(l, h)| Segment::new(l, h).unwrap()).collect()).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    /// exp by Taylor series with squaring, as an independent oracle.
    fn expm_series(h: &[[f64; 2]; 2], l: f64, z: Complex64) -> Mat2 {
        let jh = [[-h[1][0], -h[1][1]], [h[0][0], h[0][1]]];
        let k = 10;
        let f = -z * l / 2f64.powi(k);
        let m = [[f * jh[0][0], f * jh[0][1]], [f * jh[1][0], f * jh[1][1]]];
        let mul = |a: &Mat2, b: &Mat2| -> Mat2 {
            let mut r = [[c(0.0); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                }
            }
            r
        };
        let mut sum = [[c(1.0), c(0.0)], [c(0.0), c(1.0)]];
        let mut term = sum;
        for n in 1..30 {
            term = mul(&term, &m);
            for row in term.iter_mut() {
                for x in row.iter_mut() {
                    *x /= n as f64;
                }
            }
            for i in 0..2 {
                for j in 0..2 {
                    sum[i][j] += term[i][j];
                }
            }
        }
        for _ in 0..k {
            sum = mul(&sum, &sum);
        }
        sum
    }

    #[test]
    fn identity_segment_rotates() {
        let z = c(1.0);
        let m = transfer_matrix(&I2, 1.0, z);
        let want = [[c(1f64.cos()), c(1f64.sin())], [c(-1f64.sin()), c(1f64.cos())]];
        let series = expm_series(&I2, 1.0, z);
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(m[i][j], want[i][j], 1e-14));
                assert!(close(m[i][j], series[i][j], 1e-12));
            }
        }
    }

    #[test]
    fn degenerate_segment_is_nilpotent() {
        let z = Complex64::new(0.7, -1.3);
        let m = transfer_matrix(&E1, 2.5, z);
        let want = [[c(1.0), c(0.0)], [-z * 2.5, c(1.0)]];
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(m[i][j], want[i][j], 1e-15));
            }
        }
    }

    #[test]
    fn zero_parameter_gives_identity() {
        let h = [[2.0, 0.5], [0.5, 1.0]];
        let m = transfer_matrix(&h, 3.0, c(0.0));
        assert_eq!(m, [[c(1.0), c(0.0)], [c(0.0), c(1.0)]]);
        let (a, b) = monodromy(&ham(&[(1.0, h), (2.0, E1)]), c(0.0));
        assert_eq!((a, b), (c(0.0), c(1.0)));
    }

    #[test]
    fn general_segment_matches_series() {
        let h = [[2.0, 0.5], [0.5, 1.0]];
        for z in [Complex64::new(0.3, 0.2), Complex64::new(-1.5, 0.7), Complex64::new(2.0, -0.4)] {
            let m = transfer_matrix(&h, 0.8, z);
            let s = expm_series(&h, 0.8, z);
            for i in 0..2 {
                for j in 0..2 {
                    assert!(close(m[i][j], s[i][j], 1e-12), "{z}: {} vs {}", m[i][j], s[i][j]);
                }
            }
            assert!((mat_det(&m) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn sine_system() {
        let h = ham(&[(PI, I2)]);
        for z in [c(0.3), Complex64::new(1.2, 0.5), Complex64::new(-2.7, -1.1)] {
            let (a, b) = monodromy(&h, z);
            assert!(close(a, (PI * z).sin(), 1e-12));
            assert!(close(b, (PI * z).cos(), 1e-12));
        }
        assert!(monodromy(&h, c(1.0)).0.norm() < 1e-10);
        assert_eq!(kdb_type(&h), PI);
    }

    #[test]
    fn degenerate_insertion_keeps_a_at_the_junction() {
        let z = Complex64::new(0.9, 0.3);
        let before = monodromy(&ham(&[(1.0, I2)]), z);
        let after = monodromy(&ham(&[(1.0, I2), (0.6, E1)]), z);
        assert!(close(after.0, before.0, 1e-15));
        assert!(close(after.1, before.1 - z * 0.6 * before.0, 1e-14));
        let h = ham(&[(1.0, I2), (0.6, E1), (1.0, I2)]);
        assert_eq!(kdb_type(&h), 2.0);
    }

    #[test]
    fn type_arithmetic() {
        assert_eq!(kdb_type(&ham(&[(1.0, I2), (1.0, [[4.0, 0.0], [0.0, 4.0]])])), 5.0);
        assert_eq!(kdb_type(&ham(&[(3.0, E1)])), 0.0);
    }

    #[test]
    fn indivisible_detection() {
        let d = detect_indivisible(&ham(&[(1.0, I2), (0.5, E1), (1.0, I2)]), None);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].segments, vec![1]);
        assert_eq!((d[0].start, d[0].end), (1.0, 1.5));

        let d = detect_indivisible(&ham(&[(1.0, E1), (2.0, [[3.0, 0.0], [0.0, 0.0]])]), None);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].segments, vec![0, 1]);

        let d = detect_indivisible(&ham(&[(1.0, E1), (1.0, E2)]), None);
        assert_eq!(d.len(), 2);
        assert_eq!(d[1].direction, (0.0, 1.0));

        // same direction but separated by a regular segment stays two intervals
        let d = detect_indivisible(&ham(&[(1.0, E1), (1.0, I2), (1.0, E1)]), None);
        assert_eq!(d.len(), 2);
        // a rotated rank-one direction
        let d = detect_indivisible(&ham(&[(1.0, [[0.5, 0.5], [0.5, 0.5]])]), None);
        assert!((d[0].direction.0 - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn type_cross_checks() {
        let grid = dyadic_grid(1.0, 64.0);
        let t = cross_check_type(&ham(&[(PI, I2)]), &grid).unwrap();
        assert!((t.numeric.value / t.kdb - 1.0).abs() < 0.02);
        let t = cross_check_type(&ham(&[(1.0, I2), (1.0, E1), (1.0, I2)]), &grid).unwrap();
        assert!((t.numeric.value / 2.0 - 1.0).abs() < 0.02, "{t:?}");
        let t = cross_check_type(&ham(&[(1.0, E1), (1.0, E2)]), &grid).unwrap();
        assert_eq!(t.kdb, 0.0);
        assert!(t.numeric.band.0 == 0.0 && t.numeric.value < 0.1, "{t:?}");
        assert!(cross_check_type(&ham(&[(1.0, E1)]), &grid).is_err());
        // large y stays finite in scaled form
        let t = cross_check_type(&ham(&[(PI, I2)]), &dyadic_grid(64.0, 4096.0)).unwrap();
        assert!((t.numeric.value / PI - 1.0).abs() < 1e-3);
    }
}
