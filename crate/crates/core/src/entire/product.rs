//! Entire-function models and their evaluation.
//!
//! Zeros within 3|z| + 16 are multiplied out; the rest enter through
//! log(1 − z/t) = −Σ (z/t)^k/k with power sums of the remaining zeros (suffix sums for
//! stored zeros, Hurwitz zeta and digamma for lattice continuations, Euler–Maclaurin
//! for the perturbed lattice).

use super::scaled::{Reduced, Scaled};
use super::zeros::{SymmetricZeroSet, SERIES_TERMS};
use crate::error::{Error, Result};
use crate::numerics::em::tail_sum;
use crate::numerics::special::ln_1m;
use crate::numerics::trig::{cos_pi, ln_sin_pi, sin_pi};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// How far out zeros are multiplied explicitly: up to `ratio·|z| + pad`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalPolicy {
    pub ratio: f64,
    pub pad: f64,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        EvalPolicy { ratio: 3.0, pad: 16.0 }
    }
}

#[derive(Clone, Debug)]
pub enum ProductModel {
    /// sin(πz).
    SinPi,
    /// ∏ over a zero set, symmetric pairs (1 − z²/t²) or index-paired factors.
    Canonical(Arc<SymmetricZeroSet>),
    /// Zeros at n + (2 + |n|)^{−β}, n ∈ ℤ.
    ShiftedLattice { beta: f64 },
    /// ∏ (1 − z²/λ_j²) over a lacunary sequence with ratio q.
    Lacunary { q: f64, zeros: Arc<SymmetricZeroSet> },
    /// scale · ∏ model^power · ∏ (z − c)^k.
    Compose(Arc<Composite>),
}

#[derive(Clone, Debug)]
pub struct Composite {
    pub factors: Vec<(ProductModel, i32)>,
    pub poly: Vec<(f64, i32)>,
    pub scale: f64,
}

/// Result of an evaluation; `value` is zero at a zero and may be infinite past 10^308,
/// `reduced` always holds the finite local form.
#[derive(Clone, Copy, Debug)]
pub struct Evaluation {
    pub value: Complex64,
    pub ln_abs: f64,
    pub reduced: Reduced,
    /// Bound on the relative error of the value.
    pub error: f64,
}

impl ProductModel {
    pub fn canonical(zs: SymmetricZeroSet) -> Self {
        ProductModel::Canonical(Arc::new(zs))
    }

    /// λ_j = round(q^j) + 1/2 for j ≥ 1 up to 10^15, duplicates dropped.
    pub fn lacunary(q: f64) -> Result<Self> {
        if !(q > 1.0) {
            return Err(Error::Invalid("lacunary ratio must exceed 1".into()));
        }
        let mut v: Vec<f64> = Vec::new();
        let mut p = q;
        while p < 1e15 {
            let l = p.round() + 0.5;
            if v.last().map_or(true, |&x| l > x) {
                v.push(l);
            }
            p *= q;
        }
        Self::lacunary_from(q, v)
    }

    /// Lacunary product over explicit positive zeros that grow at least like q^j.
    pub fn lacunary_from(q: f64, seeds: Vec<f64>) -> Result<Self> {
        if seeds.is_empty() {
            return Err(Error::Invalid("lacunary product needs zeros".into()));
        }
        Ok(ProductModel::Lacunary { q, zeros: Arc::new(SymmetricZeroSet::symmetric(seeds, None)?) })
    }

    pub fn compose(factors: Vec<(ProductModel, i32)>, poly: Vec<(f64, i32)>, scale: f64) -> Self {
        ProductModel::Compose(Arc::new(Composite { factors, poly, scale }))
    }

    /// ∏ model^power reduced by cancelling identical leaf factors: Some((roots with net
    /// multiplicity, scale)) when the product is a rational function, None otherwise.
    /// Leaves match when they share their zero set; nothing is evaluated.
    pub fn rational_part(parts: &[(&ProductModel, i32)]) -> Option<(Vec<(f64, i32)>, f64)> {
        let mut leaves: Vec<(ProductModel, i32)> = Vec::new();
        let mut poly: Vec<(f64, i32)> = Vec::new();
        let mut scale = 1.0;
        fn walk(m: &ProductModel, p: i32, leaves: &mut Vec<(ProductModel, i32)>, poly: &mut Vec<(f64, i32)>, scale: &mut f64) {
            if let ProductModel::Compose(c) = m {
                *scale *= c.scale.powi(p);
                poly.extend(c.poly.iter().map(|&(x, k)| (x, k * p)));
                for (f, k) in &c.factors {
                    walk(f, k * p, leaves, poly, scale);
                }
            } else if let Some(e) = leaves.iter_mut().find(|(l, _)| l.same_leaf(m)) {
                e.1 += p;
            } else {
                leaves.push((m.clone(), p));
            }
        }
        for (m, p) in parts {
            walk(m, *p, &mut leaves, &mut poly, &mut scale);
        }
        if leaves.iter().any(|(_, p)| *p != 0) {
            return None;
        }
        let mut roots: Vec<(f64, i32)> = Vec::new();
        for (x, k) in poly {
            match roots.iter_mut().find(|(y, _)| *y == x) {
                Some(r) => r.1 += k,
                None => roots.push((x, k)),
            }
        }
        roots.retain(|r| r.1 != 0);
        Some((roots, scale))
    }

    fn same_leaf(&self, other: &ProductModel) -> bool {
        match (self, other) {
            (ProductModel::SinPi, ProductModel::SinPi) => true,
            (ProductModel::ShiftedLattice { beta: a }, ProductModel::ShiftedLattice { beta: b }) => a == b,
            (ProductModel::Canonical(a), ProductModel::Canonical(b)) => Arc::ptr_eq(a, b),
            (ProductModel::Lacunary { zeros: a, .. }, ProductModel::Lacunary { zeros: b, .. }) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }

    pub fn shifted_zero(beta: f64, n: i64) -> f64 {
        n as f64 + (2.0 + n.unsigned_abs() as f64).powf(-beta)
    }

    pub fn describe(&self) -> String {
        match self {
            ProductModel::SinPi => "sin(pi z)".into(),
            ProductModel::Canonical(zs) => match zs.asymptotics() {
                Some((a, b)) => format!("canonical product (a={a}, b={b}, {} stored zeros)", zs.positive().stored().len()),
                None => format!("canonical product ({} stored zeros)", zs.positive().stored().len()),
            },
            ProductModel::ShiftedLattice { beta } => format!("shifted lattice (beta={beta})"),
            ProductModel::Lacunary { q, .. } => format!("lacunary product (q={q})"),
            ProductModel::Compose(c) => {
                let parts: Vec<String> =
                    c.factors.iter().map(|(m, k)| format!("[{}]^{k}", m.describe())).collect();
                format!("{} * {} * poly({} roots)", c.scale, parts.join(" * "), c.poly.len())
            }
        }
    }

    /// Local form at z with a relative error estimate.
    pub fn reduced(&self, z: Complex64, pol: &EvalPolicy) -> (Reduced, f64) {
        match self {
            ProductModel::SinPi => (sin_pi_reduced(z), 4e-16),
            ProductModel::Canonical(zs) => zero_set_reduced(zs, z, pol),
            ProductModel::ShiftedLattice { beta } => shifted_reduced(*beta, z, pol),
            ProductModel::Lacunary { q, zeros } => {
                let (r, e) = zero_set_reduced(zeros, z, pol);
                let last = *zeros.positive().stored().last().expect("nonempty");
                let w = z.norm() / last;
                let tail = if w < 0.5 { 1.5 * w * w / (q * q - 1.0) } else { f64::INFINITY };
                (r, e + tail)
            }
            ProductModel::Compose(c) => {
                let mut acc = Reduced::value(0, Scaled::from_real(c.scale));
                let mut err = 0.0;
                for (m, k) in &c.factors {
                    let (r, e) = m.reduced(z, pol);
                    acc = acc.mul(r.powi(*k));
                    err += e * k.unsigned_abs() as f64;
                }
                for &(root, k) in &c.poly {
                    let d = z - root;
                    let r = if d == Complex64::new(0.0, 0.0) {
                        Reduced::value(1, Scaled::ONE)
                    } else {
                        Reduced::value(0, Scaled::from_complex(d))
                    };
                    acc = acc.mul(r.powi(k));
                    err += 2e-16 * k.unsigned_abs() as f64;
                }
                (acc, err)
            }
        }
    }

    /// Zero set within [−r, r] with net multiplicities (negative for poles), increasing.
    pub fn divisor_in(&self, r: f64) -> Vec<(f64, i32)> {
        let mut v: Vec<(f64, i32)> = match self {
            ProductModel::SinPi => {
                let m = r.floor() as i64;
                (-m..=m).map(|n| (n as f64, 1)).collect()
            }
            ProductModel::Canonical(zs) | ProductModel::Lacunary { zeros: zs, .. } => {
                zs.all_up_to(r).into_iter().map(|t| (t, 1)).collect()
            }
            ProductModel::ShiftedLattice { beta } => {
                let m = r.ceil() as i64 + 1;
                (-m..=m)
                    .map(|n| Self::shifted_zero(*beta, n))
                    .filter(|t| t.abs() <= r)
                    .map(|t| (t, 1))
                    .collect()
            }
            ProductModel::Compose(c) => {
                let mut all = Vec::new();
                for (m, k) in &c.factors {
                    all.extend(m.divisor_in(r).into_iter().map(|(t, o)| (t, o * k)));
                }
                all.extend(c.poly.iter().filter(|(t, _)| t.abs() <= r).copied());
                all
            }
        };
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, i32)> = Vec::with_capacity(v.len());
        for (t, o) in v {
            match out.last_mut() {
                Some(last) if last.0 == t => last.1 += o,
                _ => out.push((t, o)),
            }
        }
        out.retain(|(_, o)| *o != 0);
        out
    }

    /// Zeros (positive net order) within [−r, r].
    pub fn zeros_in(&self, r: f64) -> Vec<f64> {
        self.divisor_in(r).into_iter().filter(|(_, o)| *o > 0).map(|(t, _)| t).collect()
    }

    /// Radius within which evaluation error is controlled.
    pub fn window(&self) -> f64 {
        match self {
            ProductModel::Lacunary { zeros, .. } => zeros.stored_extent() / 10.0,
            ProductModel::Compose(c) => c.factors.iter().map(|(m, _)| m.window()).fold(f64::INFINITY, f64::min),
            _ => f64::INFINITY,
        }
    }
}

/// Evaluate a model at z; fails when the estimated relative error exceeds `tol`.
pub fn eval_product(model: &ProductModel, z: Complex64, tol: f64) -> Result<Evaluation> {
    eval_with(model, z, tol, &EvalPolicy::default())
}

pub fn eval_with(model: &ProductModel, z: Complex64, tol: f64, pol: &EvalPolicy) -> Result<Evaluation> {
    let (reduced, error) = model.reduced(z, pol);
    if !(error <= tol) {
        return Err(Error::WindowTooSmall { tol, required: required_window(model, z, tol) });
    }
    let at = reduced.at_point();
    let ln_abs = if reduced.order > 0 { f64::NEG_INFINITY } else { at.ln_abs() };
    Ok(Evaluation { value: at.value(), ln_abs, reduced, error })
}

fn required_window(model: &ProductModel, z: Complex64, tol: f64) -> f64 {
    match model {
        ProductModel::Lacunary { q, .. } => z.norm() * (1.5 / (tol * (q * q - 1.0))).sqrt().max(2.0) * 10.0,
        ProductModel::Compose(c) => c
            .factors
            .iter()
            .map(|(m, _)| required_window(m, z, tol))
            .fold(0.0, f64::max),
        _ => 10.0 * z.norm(),
    }
}

/// A′(t) at a simple zero t.
pub fn derivative_at_zero(model: &ProductModel, t: f64) -> Result<f64> {
    let (r, _) = model.reduced(Complex64::new(t, 0.0), &EvalPolicy::default());
    match r.order {
        1 => Ok(r.lead.value().re),
        0 => Err(Error::NotAZero(t)),
        _ => Err(Error::NonSimpleZero(t)),
    }
}

fn sin_pi_reduced(z: Complex64) -> Reduced {
    if z.im == 0.0 {
        let x = z.re;
        if x == x.round() {
            return Reduced::value(1, Scaled::from_real(PI * cos_pi(x)));
        }
        return Reduced::value(0, Scaled::from_real(sin_pi(x)));
    }
    Reduced::value(0, Scaled::exp(ln_sin_pi(z)))
}

/// Running product with periodic renormalization and exact-zero bookkeeping.
struct Acc {
    z: Complex64,
    real: bool,
    m: f64,
    mc: Complex64,
    scale: f64,
    order: i32,
    n: u32,
}

impl Acc {
    fn new(z: Complex64) -> Self {
        Acc { z, real: z.im == 0.0, m: 1.0, mc: Complex64::new(1.0, 0.0), scale: 0.0, order: 0, n: 0 }
    }

    #[inline]
    fn push_real(&mut self, f: f64) {
        self.m *= f;
        self.tick();
    }

    #[inline]
    fn push(&mut self, f: Complex64) {
        self.mc *= f;
        self.tick();
    }

    #[inline]
    fn tick(&mut self) {
        self.n += 1;
        if self.n & 15 == 0 {
            self.renorm();
        }
    }

    fn renorm(&mut self) {
        if self.real {
            let a = self.m.abs();
            if a > 0.0 && a.is_finite() {
                self.scale += a.ln();
                self.m /= a;
            }
        } else {
            let a = self.mc.norm();
            if a > 0.0 && a.is_finite() {
                self.scale += a.ln();
                self.mc /= a;
            }
        }
    }

    /// Factor (1 − z/t).
    #[inline]
    fn lin(&mut self, t: f64) {
        if self.real {
            if self.z.re == t {
                self.order += 1;
                self.push_real(-1.0 / t);
            } else {
                self.push_real(1.0 - self.z.re / t);
            }
        } else {
            self.push(Complex64::new(1.0 - self.z.re / t, -self.z.im / t));
        }
    }

    /// Factor (1 − z²/p²).
    #[inline]
    fn sym(&mut self, p: f64) {
        if self.real {
            let x = self.z.re;
            if x == p || x == -p {
                self.order += 1;
                self.push_real(if x == p { -2.0 / p } else { 2.0 / p });
            } else {
                let w = x / p;
                self.push_real((1.0 - w) * (1.0 + w));
            }
        } else {
            let w = self.z / p;
            self.push((1.0 - w) * (1.0 + w));
        }
    }

    fn finish(mut self, mut log_tail: Complex64) -> Reduced {
        self.renorm();
        if self.real {
            // far factors are positive on the real line
            log_tail.im = 0.0;
        }
        let mant = if self.real { Complex64::new(self.m, 0.0) } else { self.mc };
        let s = Scaled { mant, scale: self.scale }.mul(Scaled::exp(log_tail));
        Reduced::value(self.order, s)
    }
}

fn zero_set_reduced(zs: &SymmetricZeroSet, z: Complex64, pol: &EvalPolicy) -> (Reduced, f64) {
    let r = z.norm();
    let x_exp = pol.ratio * r + pol.pad;
    let pos = zs.positive();
    let neg = zs.negative();
    let jj = pos.count_le(x_exp).max(neg.count_le(x_exp));
    let mut acc = Acc::new(z);
    if zs.is_symmetric() {
        for j in 1..=jj {
            if let Some(p) = pos.zero(j) {
                acc.sym(p);
            }
        }
    } else {
        for j in 1..=jj {
            if let Some(p) = pos.zero(j) {
                acc.lin(p);
            }
            if let Some(q) = neg.zero(j) {
                acc.lin(-q);
            }
        }
    }

    let finite = pos.continuation().is_none()
        && neg.continuation().is_none()
        && jj >= pos.stored().len()
        && jj >= neg.stored().len();
    let mut tail = Complex64::new(0.0, 0.0);
    let mut last = 0.0;
    let mut mag = 0.0;
    if !finite && r > 0.0 {
        let lnz = z.ln();
        let term = |k: usize, t: f64| -> Complex64 {
            if t <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            -(lnz * k as f64 + t.ln()).exp() / k as f64
        };
        if zs.is_symmetric() {
            for k in (2..=SERIES_TERMS).step_by(2) {
                let c = term(k, 2.0 * pos.power_tail(jj, k));
                tail += c;
                last = c.norm();
                mag += last;
            }
        } else {
            tail -= z * zs.first_order_difference(jj);
            mag += tail.norm();
            for k in 2..=SERIES_TERMS {
                let tp = pos.power_tail(jj, k);
                let tn = neg.power_tail(jj, k);
                let t = if k % 2 == 0 { tp + tn } else { tp - tn };
                let c = if t >= 0.0 { term(k, t) } else { -term(k, -t) };
                tail += c;
                last = c.norm();
                mag += last;
            }
        }
    }
    let err = 2.0 * last + 1e-16 * (mag + 4.0 * jj as f64 + 1.0);
    (acc.finish(tail), err)
}

fn shifted_reduced(beta: f64, z: Complex64, pol: &EvalPolicy) -> (Reduced, f64) {
    let r = z.norm();
    let jj = (pol.ratio * r + pol.pad).ceil() as i64;
    let mut acc = Acc::new(z);
    acc.lin(ProductModel::shifted_zero(beta, 0));
    for n in 1..=jj {
        acc.lin(ProductModel::shifted_zero(beta, n));
        acc.lin(ProductModel::shifted_zero(beta, -n));
    }
    let h = |n: Complex64| -> Complex64 {
        let eps = (n + 2.0).powf(-beta);
        ln_1m(z / (n + eps)) + ln_1m(z / (eps - n))
    };
    let n0 = jj as f64;
    let t = tail_sum(h, n0, n0 - r - 2.0);
    let err = t.err + 1e-16 * (4.0 * n0 + 1.0);
    (acc.finish(t.value), err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_part_cancels_shared_factors() {
        let g = ProductModel::canonical(SymmetricZeroSet::lattice(2.0, 0.5).unwrap());
        let s = ProductModel::compose(vec![(ProductModel::SinPi, 1), (g.clone(), -1)], vec![(0.0, -1)], 2.0);
        let (roots, scale) = ProductModel::rational_part(&[(&g, 1), (&s, 1), (&ProductModel::SinPi, -1)]).unwrap();
        assert_eq!((roots, scale), (vec![(0.0, -1)], 2.0));
        // an equal but separately built zero set is not recognised
        let g2 = ProductModel::canonical(SymmetricZeroSet::lattice(2.0, 0.5).unwrap());
        assert!(ProductModel::rational_part(&[(&g2, 1), (&s, 1), (&ProductModel::SinPi, -1)]).is_none());
        let p = ProductModel::compose(vec![], vec![(1.5, 2), (0.0, 1)], 1.0);
        let q = ProductModel::compose(vec![], vec![(1.5, 1)], 1.0);
        assert_eq!(ProductModel::rational_part(&[(&p, 1), (&q, -1)]).unwrap().0, vec![(1.5, 1), (0.0, 1)]);
    }
    use crate::numerics::trig::sin_pi_c;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ints() -> ProductModel {
        ProductModel::canonical(SymmetricZeroSet::integers())
    }

    /// Brute-force partial product, paired by |n|.
    fn brute(zeros_pos: impl Fn(i64) -> f64, zeros_neg: impl Fn(i64) -> f64, n: i64, z: Complex64) -> Complex64 {
        let mut p = c(1.0, 0.0);
        for j in 1..=n {
            p *= (1.0 - z / zeros_pos(j)) * (1.0 - z / zeros_neg(j));
        }
        p
    }

    #[test]
    fn sin_pi_values() {
        let e = eval_product(&ProductModel::SinPi, c(0.5, 0.0), 1e-12).unwrap();
        assert!((e.value - c(1.0, 0.0)).norm() < 1e-15);
        let e = eval_product(&ProductModel::SinPi, c(0.0, 1.0), 1e-12).unwrap();
        assert!((e.value - c(0.0, PI.sinh())).norm() < 1e-12 * PI.sinh());
        for n in -5..=5 {
            let d = derivative_at_zero(&ProductModel::SinPi, n as f64).unwrap();
            assert_eq!(d, PI * if n % 2 == 0 { 1.0 } else { -1.0 });
        }
    }

    #[test]
    fn integer_product_is_sinc() {
        let e = eval_product(&ints(), c(0.5, 0.0), 1e-12).unwrap();
        assert!((e.value.re - 2.0 / PI).abs() < 1e-14);
        assert_eq!(e.value.im, 0.0);
        // a brute product at 10^6 agrees to its truncation error, about z²/10^6
        let b = brute(|j| j as f64, |j| -(j as f64), 1_000_000, c(0.5, 0.0));
        assert!((b.re - 2.0 / PI).abs() < 1e-6);
        for z in [c(3.7, 2.2), c(-12.3, 0.4), c(0.1, -19.0), c(19.5, 5.0)] {
            let want = sin_pi_c(z) / (PI * z);
            let got = eval_product(&ints(), z, 1e-10).unwrap().value;
            assert!((got - want).norm() < 1e-12 * want.norm(), "{z}: {got} vs {want}");
        }
    }

    #[test]
    fn integer_derivatives() {
        assert!((derivative_at_zero(&ints(), 1.0).unwrap() + 1.0).abs() < 1e-13);
        // d/dz sin(πz)/(πz) at n is (−1)^n/n
        assert!((derivative_at_zero(&ints(), -4.0).unwrap() + 0.25).abs() < 1e-13);
        assert!(matches!(derivative_at_zero(&ints(), 0.5), Err(Error::NotAZero(_))));
        let q = ProductModel::compose(vec![(ProductModel::SinPi, 1)], vec![(0.0, -1)], 1.0);
        assert!((derivative_at_zero(&q, 1.0).unwrap() + PI).abs() < 1e-14);
    }

    #[test]
    fn quotient_removes_the_origin() {
        let q = ProductModel::compose(vec![(ProductModel::SinPi, 1)], vec![(0.0, -1)], 1.0 / PI);
        let e = eval_product(&q, c(0.0, 0.0), 1e-12).unwrap();
        assert!((e.value.re - 1.0).abs() < 1e-15);
        assert_eq!(q.zeros_in(2.0), vec![-2.0, -1.0, 1.0, 2.0]);
    }

    #[test]
    fn lattice_product_against_brute_force() {
        let (a, b) = (0.5, 0.1);
        let m = ProductModel::canonical(SymmetricZeroSet::lattice(a, b).unwrap());
        let z = c(2.3, 1.7);
        let n = 400_000;
        let t = |j: i64| (j as f64 - b) / a;
        let br = brute(t, |j| -t(j), n, z);
        // remaining log tail ≈ −z² Σ_{j>n} 1/t_j² ≈ −z² a²/n
        let corr = (-(z * z) * a * a / n as f64).exp();
        let got = eval_product(&m, z, 1e-10).unwrap().value;
        assert!((got - br * corr).norm() < 1e-9 * got.norm());
    }

    #[test]
    fn paired_nonsymmetric_product() {
        // zeros 2j−1 and −2j: √π / (Γ(1 + z/2) Γ(1/2 − z/2))
        let zs = SymmetricZeroSet::general(vec![], vec![], Some((0.5, 0.5)), Some((0.5, 0.0))).unwrap();
        let m = ProductModel::canonical(zs);
        let g = eval_product(&m, c(0.0, 0.0), 1e-12).unwrap().value;
        assert!((g.re - 1.0).abs() < 1e-14);
        let z = c(2.0, 0.0); // Γ(2)Γ(−1/2) = −2√π → −1/2
        let g = eval_product(&m, z, 1e-12).unwrap().value;
        assert!((g.re + 0.5).abs() < 1e-12, "{g}");
        // 1/Γ(w) ≈ w near w = 0 with w = 1/2 − z/2, so G′(1) = −(1/2)·√π/Γ(3/2) = −1
        assert!((derivative_at_zero(&m, 1.0).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn shifted_lattice_against_brute_force() {
        let beta = 0.5;
        let m = ProductModel::ShiftedLattice { beta };
        let z = c(1.3, 0.8);
        let n = 200_000i64;
        let zp = |j: i64| ProductModel::shifted_zero(beta, j);
        let br = brute(zp, |j| zp(-j), n, z) * (1.0 - z / zp(0));
        // tail: Σ_{j>n} [−z(1/ζ_j + 1/ζ_{−j}) − z²(1/ζ_j² + 1/ζ_{−j}²)/2]
        let mut tl = c(0.0, 0.0);
        for j in (n + 1)..(200 * n) {
            let (p, q) = (zp(j), zp(-j));
            tl -= z * (1.0 / p + 1.0 / q) + z * z * 0.5 * (1.0 / (p * p) + 1.0 / (q * q));
        }
        let want = br * tl.exp();
        let got = eval_product(&m, z, 1e-10).unwrap().value;
        assert!((got - want).norm() < 1e-6 * want.norm(), "{got} vs {want}");
        let t = zp(3);
        let d = derivative_at_zero(&m, t).unwrap();
        let h = 1e-6;
        let fd = (eval_product(&m, c(t + h, 0.0), 1e-8).unwrap().value.re
            - eval_product(&m, c(t - h, 0.0), 1e-8).unwrap().value.re)
            / (2.0 * h);
        assert!((d - fd).abs() < 1e-6 * d.abs());
    }

    #[test]
    fn lacunary_window() {
        let m = ProductModel::lacunary(2.0).unwrap();
        let e = eval_product(&m, c(0.0, 30.0), 1e-12).unwrap();
        assert!(e.value.re > 1.0);
        let small = ProductModel::lacunary_from(2.0, vec![2.5, 4.5, 8.5]).unwrap();
        match eval_product(&small, c(3.0, 0.0), 1e-6) {
            Err(Error::WindowTooSmall { required, .. }) => assert!(required > 8.5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn huge_arguments_stay_finite_in_log_form() {
        let e = eval_product(&ints(), c(0.0, 400.0), 1e-10).unwrap();
        let want = PI * 400.0 - (2.0 * PI * 400.0).ln();
        assert!((e.ln_abs - want).abs() < 1e-10);
    }
}
