//! Re-representation of ℋ𝒞(sin πz, μ), μ on ℤ, on a level set ψ = u: the roots x_n ∈ (n, n+1)
//! of T = sin(πz)(ψ − u) carry an orthogonal kernel basis with masses ν_n.

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::numerics::trig::sin_pi;
use crate::numerics::Neumaier;
use crate::par;
use crate::space::{eval_member, psi_transform, support_tail, CoefficientVector, SpaceModel};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct AtomizedRepresentation {
    pub u: f64,
    /// x_n for n = −m..m−1, in order.
    pub roots: Vec<f64>,
    pub first_index: i64,
    pub nu: DiscreteMeasure,
    /// max |ψ(x_n) − u| over the roots.
    pub residual: f64,
    mu: DiscreteMeasure,
}

impl AtomizedRepresentation {
    /// T(z) = sin(πz)(ψ(z) − u), evaluated through ψ.
    pub fn t_at(&self, z: Complex64) -> Result<Complex64> {
        let psi = psi_transform(&self.mu, z)?.value;
        Ok(crate::numerics::trig::sin_pi_c(z) * (psi - self.u))
    }

    pub fn index_of_root(&self, n: i64) -> Option<usize> {
        let i = n - self.first_index;
        (0..self.roots.len() as i64).contains(&i).then_some(i as usize)
    }
}

/// ψ′(x) = −Σ μ_m/(x − m)², tail included.
pub fn psi_slope(mu: &DiscreteMeasure, x: f64) -> Result<f64> {
    Ok(psi_and_slope(mu, x)?.1)
}

/// (ψ(x), ψ′(x)) at a real point off the support, in one pass.
fn psi_and_slope(mu: &DiscreteMeasure, x: f64) -> Result<(f64, f64)> {
    if mu.index_of(x).is_some() {
        return Err(Error::Pole(x));
    }
    let (s, m) = (mu.support(), mu.masses());
    let (mut v, mut d) = (Neumaier::new(), Neumaier::new());
    for i in mu.symmetric_order() {
        let (t, r) = (s[i], 1.0 / (x - s[i]));
        v.add(m[i] * (r + t / (t * t + 1.0)));
        d.add(m[i] * r * r);
    }
    // same envelopes as the complex transform; 1/(x − t)² ≤ 4(1+|t|)^{−2} once |t| ≥ 2|x| + 1
    let from = 2.0 * x.abs() + 1.0;
    let (tv, _) = support_tail(mu, |t| (1.0 + x * t) / ((x - t) * (t * t + 1.0)), 8.0 * (1.0 + x.abs()), -2.0, from);
    let (td, _) = support_tail(mu, |t| 1.0 / ((x - t) * (x - t)), 4.0, -2.0, from);
    Ok((v.value() + tv.re, -(d.value() + td.re)))
}

fn check_integer_window(mu: &DiscreteMeasure, m: i64) -> Result<()> {
    if m < 1 {
        return Err(Error::Invalid("root window must contain at least one interval".into()));
    }
    for n in -m..=m {
        if mu.index_of(n as f64).is_none() {
            return Err(Error::Invalid(format!("the measure has no mass at {n}")));
        }
    }
    if mu.support().iter().any(|t| t.fract() != 0.0) {
        return Err(Error::Invalid("atomization needs a measure on the integers".into()));
    }
    Ok(())
}

/// The root of ψ(x) = u in (n, n+1): ψ decreases there from +∞ to −∞. Bracketed Newton,
/// stopping at |ψ − u| ≤ 10⁻¹²·max(1, |u|) or when the bracket closes to a few ulps.
fn level_root(mu: &DiscreteMeasure, u: f64, n: i64) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (n as f64, n as f64 + 1.0);
    let tol = 1e-12 * u.abs().max(1.0);
    let mut x = 0.5 * (lo + hi);
    let mut best = (x, f64::INFINITY);
    for _ in 0..200 {
        let (psi, slope) = psi_and_slope(mu, x)?;
        let f = psi - u;
        if f.abs() < best.1 {
            best = (x, f.abs());
        }
        if f.abs() <= tol {
            break;
        }
        if f > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
        let step = f / slope;
        if step.abs() <= 2.0 * f64::EPSILON * x.abs().max(1.0) {
            break;
        }
        // bisect when Newton leaves the bracket
        let next = x - step;
        x = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
    }
    Ok(best)
}

/// x_n ∈ (n, n+1) with ψ(x_n) = u for n = −m..m−1.
pub fn level_roots(mu: &DiscreteMeasure, u: f64, m: i64) -> Result<Vec<f64>> {
    Ok(level_roots_with_residual(mu, u, m)?.0)
}

fn level_roots_with_residual(mu: &DiscreteMeasure, u: f64, m: i64) -> Result<(Vec<f64>, f64)> {
    check_integer_window(mu, m)?;
    if !u.is_finite() {
        return Err(Error::Invalid("level u must be finite".into()));
    }
    let idx: Vec<i64> = (-m..m).collect();
    let out = par::map(&idx, |&n| level_root(mu, u, n));
    let mut roots = Vec::with_capacity(out.len());
    let mut residual: f64 = 0.0;
    for r in out {
        let (x, res) = r?;
        roots.push(x);
        residual = residual.max(res);
    }
    Ok((roots, residual))
}

/// ν_n = (Σ_m μ_m/(m − x_n)²)⁻¹ = −1/ψ′(x_n), the inverse squared norm of T/(· − x_n).
pub fn atomized_masses(mu: &DiscreteMeasure, roots: &[f64]) -> Result<DiscreteMeasure> {
    let slopes = par::map(roots, |&x| psi_slope(mu, x));
    let masses = slopes.into_iter().map(|s| s.map(|s| -1.0 / s)).collect::<Result<Vec<_>>>()?;
    DiscreteMeasure::new(roots.to_vec(), masses, None)
}

pub fn atomize(mu: &DiscreteMeasure, u: f64, m: i64) -> Result<AtomizedRepresentation> {
    let (roots, residual) = level_roots_with_residual(mu, u, m)?;
    let nu = atomized_masses(mu, &roots)?;
    Ok(AtomizedRepresentation { u, roots, first_index: -m, nu, residual, mu: mu.clone() })
}

#[derive(Clone, Debug, Serialize)]
pub struct Transport {
    /// ã_n per root, in root order.
    pub coefficients: Vec<f64>,
    pub norm_sq: f64,
    /// Σ ã_n² over the root window.
    pub transported_truncated: f64,
    /// The same sum extrapolated past the window from the dyadic sub-window sums.
    pub transported: f64,
    pub isometry_defect: f64,
}

/// ã_n = f(x_n)/(T′(x_n)ν_n^{1/2}) with T′(x_n) = sin(πx_n)ψ′(x_n) = −sin(πx_n)/ν_n.
pub fn transport_coefficients(space: &SpaceModel, a: &CoefficientVector, rep: &AtomizedRepresentation) -> Result<Transport> {
    let nu = rep.nu.masses();
    let vals = par::map(&rep.roots, |&x| eval_member(space, a, Complex64::new(x, 0.0)));
    let mut coefficients = Vec::with_capacity(vals.len());
    for ((f, x), v) in vals.into_iter().zip(&rep.roots).zip(nu) {
        coefficients.push(-f?.re * v.sqrt() / sin_pi(*x));
    }
    let norm_sq = {
        let mut idx: Vec<usize> = a.entries.iter().map(|e| e.0).collect();
        idx.sort_unstable();
        idx.dedup();
        let mut acc = Neumaier::new();
        for i in idx {
            acc.add(a.get(i).powi(2));
        }
        acc.value()
    };
    let m = -rep.first_index;
    let partial = |w: i64| {
        let mut acc = Neumaier::new();
        for n in -w..w {
            let c = coefficients[(n - rep.first_index) as usize];
            acc.add(c * c);
        }
        acc.value()
    };
    let s3 = partial(m);
    let mut transported = s3;
    if m >= 8 {
        // Aitken on the sums over m/4, m/2, m: exact for a tail c·w^{−s}
        let (s1, s2) = (partial(m / 4), partial(m / 2));
        let (d1, d2) = (s2 - s1, s3 - s2);
        if d1 > 0.0 && d2 > 0.0 && d2 < d1 {
            transported = s3 + d2 * d2 / (d1 - d2);
        }
    }
    Ok(Transport { coefficients, norm_sq, transported_truncated: s3, transported, isometry_defect: (norm_sq - transported).abs() })
}

#[derive(Clone, Debug, Serialize)]
pub struct Avoidance {
    pub u: f64,
    /// Σ |J_k| over the windows that are avoided, in the arctan scale.
    pub excluded_length: f64,
    /// Windows with |n| below this are exempt (they straddle a support point).
    pub threshold: i64,
    /// Every non-exempt y_k keeps its root outside [y_k ± |n|^{−p}] when re-solved at u.
    pub verified: bool,
}

/// A level u = tan θ whose roots avoid the windows [y_k ± |n_k|^{−p}], n_k the integer part
/// of y_k. The image J_k of [y_k ± 2|n_k|^{−p}] under h = arctan∘ψ is excluded for every
/// window that contains no support point; θ = 0 is kept when admissible, else the middle
/// of the widest remaining gap in (−1.5, 1.5).
pub fn select_avoiding_u(mu: &DiscreteMeasure, ys: &[f64], p: f64) -> Result<Avoidance> {
    if p < 2.0 {
        return Err(Error::Invalid("the avoidance exponent must be at least 2".into()));
    }
    let h = |x: f64| -> Result<f64> { Ok(psi_transform(mu, Complex64::new(x, 0.0))?.value.re.atan()) };
    let (pos, neg) = mu.extents();
    let mut threshold = 0;
    let mut windows = Vec::new();
    for &y in ys {
        let n = y.trunc() as i64;
        let r = if n == 0 { f64::INFINITY } else { 2.0 * (n.unsigned_abs() as f64).powf(-p) };
        let (a, b) = (y - r, y + r);
        let pole_inside = n == 0 || a.floor() != b.floor() || a.fract() == 0.0 || mu.index_of(y).is_some();
        if pole_inside || b >= pos || a <= -neg {
            threshold = threshold.max(n.abs() + 1);
        }
        windows.push((n, a, b));
    }
    let mut excluded: Vec<(f64, f64)> = Vec::new();
    for &(n, a, b) in &windows {
        if n.abs() < threshold {
            continue;
        }
        // h decreases between poles
        excluded.push((h(b)?, h(a)?));
    }
    let excluded_length: f64 = excluded.iter().map(|(l, r)| r - l).sum();
    excluded.sort_by(|x, y| x.0.total_cmp(&y.0));
    let theta = if excluded.iter().all(|&(l, r)| !(l..=r).contains(&0.0)) {
        0.0
    } else {
        let mut best: Option<(f64, f64)> = None;
        let mut cursor = -1.5;
        for &(l, r) in excluded.iter().chain(std::iter::once(&(1.5, 1.5))) {
            let (lo, hi) = (cursor, l.min(1.5));
            if hi > lo && best.is_none_or(|(w, _)| hi - lo > w) {
                best = Some((hi - lo, 0.5 * (lo + hi)));
            }
            cursor = cursor.max(r);
        }
        best.ok_or(Error::NoAdmissibleU { excluded: excluded_length })?.1
    };
    let u = theta.tan();
    let mut verified = true;
    for &(n, _, _) in windows.iter().filter(|w| w.0.abs() >= threshold) {
        let y = ys[windows.iter().position(|w| w.0 == n).expect("present")];
        let x = level_root(mu, u, y.floor() as i64)?.0;
        if (x - y).abs() <= (n.unsigned_abs() as f64).powf(-p) {
            verified = false;
        }
    }
    Ok(Avoidance { u, excluded_length, threshold, verified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entire::ProductModel;
    use std::f64::consts::PI;

    fn unit_space(n: i64) -> SpaceModel {
        SpaceModel::new(ProductModel::SinPi, DiscreteMeasure::unit_lattice(n), Some((PI, 0.0))).unwrap()
    }

    #[test]
    fn half_integers_at_level_zero() {
        let mu = DiscreteMeasure::unit_lattice(2000);
        let rep = atomize(&mu, 0.0, 50).unwrap();
        for (i, x) in rep.roots.iter().enumerate() {
            let n = i as i64 - 50;
            assert!((x - (n as f64 + 0.5)).abs() < 1e-10, "{n}: {x}");
            assert!((rep.nu.masses()[i] - 1.0 / (PI * PI)).abs() < 1e-8);
        }
        assert!(rep.residual < 1e-12);
    }

    #[test]
    fn roots_follow_the_cotangent_at_any_level() {
        // π cot πx = u ⇒ x = n + arccot(u/π)/π, and Σ 1/(m − x)² = π²/sin²(πx)
        let mu = DiscreteMeasure::unit_lattice(2000);
        for u in [-7.0, 3.0, 1e3] {
            let rep = atomize(&mu, u, 20).unwrap();
            let frac = (PI / u).atan().rem_euclid(PI) / PI;
            for (i, x) in rep.roots.iter().enumerate() {
                let n = i as f64 - 20.0;
                assert!((x - n - frac).abs() < 1e-10, "u={u}: {x} vs {}", n + frac);
                let want = sin_pi(*x).powi(2) / (PI * PI);
                assert!((rep.nu.masses()[i] / want - 1.0).abs() < 1e-8);
            }
        }
        let hi = level_roots(&mu, 1e3, 3).unwrap();
        assert!(hi.iter().enumerate().all(|(i, x)| x - (i as f64 - 3.0) < 1e-3));
    }

    #[test]
    fn heavy_atom_stays_bracketed() {
        let mu = DiscreteMeasure::on_integers(500, |k| if k == 0 { 1e6 } else { 1.0 }, None).unwrap();
        let x = level_roots(&mu, 0.0, 2).unwrap();
        assert!(x[2] > 0.0 && x[2] < 1.0);
        assert!(x.windows(2).all(|w| w[1] - w[0] > 0.0));
    }

    #[test]
    fn mass_scaling() {
        let mu = DiscreteMeasure::on_integers(300, |k| 1.0 + (k as f64).abs().sqrt(), None).unwrap();
        let mu4 = DiscreteMeasure::on_integers(300, |k| 4.0 * (1.0 + (k as f64).abs().sqrt()), None).unwrap();
        let roots = level_roots(&mu, 0.0, 5).unwrap();
        let a = atomized_masses(&mu, &roots).unwrap();
        let b = atomized_masses(&mu4, &roots).unwrap();
        for (x, y) in a.masses().iter().zip(b.masses()) {
            assert!((x / y - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn masses_match_coefficient_expansion() {
        // T/(z − x_n) = sin(πz)Σ b_m μ_m^{1/2}/(z − m) with b_m = μ_m^{1/2}/(m − x_n); the
        // member built from b must agree with T/(z − x_n) and have norm Σ b_m² = 1/ν_n
        let n = 400;
        let mu = DiscreteMeasure::finite(
            (-n..=n).map(|k| k as f64).collect(),
            (-n..=n).map(|k| 1.0 / (1.0 + (k * k) as f64)).collect(),
        )
        .unwrap();
        let space = SpaceModel::new(ProductModel::SinPi, mu.clone(), None).unwrap();
        let rep = atomize(&mu, 0.7, 4).unwrap();
        for (i, &x) in rep.roots.iter().enumerate() {
            let b = CoefficientVector {
                entries: mu.support().iter().zip(mu.masses()).enumerate().map(|(j, (t, m))| (j, m.sqrt() / (t - x))).collect(),
            };
            let norm: f64 = b.entries.iter().map(|(_, c)| c * c).sum();
            assert!((norm * rep.nu.masses()[i] - 1.0).abs() < 1e-10);
            for z in [Complex64::new(0.3, 1.0), Complex64::new(-2.2, 0.4)] {
                let lhs = eval_member(&space, &b, z).unwrap();
                let rhs = rep.t_at(z).unwrap() / (z - x);
                assert!((lhs - rhs).norm() < 1e-10 * rhs.norm(), "{lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn node_kernels_are_orthogonal() {
        let space = unit_space(2000);
        let rep = atomize(space.mu(), 1.3, 30).unwrap();
        let norm = |x: f64| crate::space::kernel_series(&space, Complex64::new(x, 0.0), Complex64::new(x, 0.0)).unwrap().value.re.sqrt();
        for (i, j) in [(0, 1), (3, 17), (10, 59), (25, 26), (40, 2)] {
            let (x, y) = (rep.roots[i], rep.roots[j]);
            let k = crate::space::kernel_closed(&space, Complex64::new(x, 0.0), Complex64::new(y, 0.0)).unwrap().value;
            assert!(k.norm() < 1e-8 * norm(x) * norm(y), "{i},{j}: {k}");
        }
    }

    #[test]
    fn kernel_at_zero_is_transported_isometrically() {
        let space = unit_space(10_000);
        let rep = atomize(space.mu(), 0.0, 2000).unwrap();
        let a = CoefficientVector { entries: vec![(10_000, PI)] };
        let t = transport_coefficients(&space, &a, &rep).unwrap();
        assert!((t.norm_sq - PI * PI).abs() < 1e-12);
        assert!(t.isometry_defect < 1e-6, "{t:?}");
        assert!(t.transported_truncated < t.transported);

        let zero = transport_coefficients(&space, &CoefficientVector::default(), &rep).unwrap();
        assert_eq!(zero.isometry_defect, 0.0);
        assert!(zero.coefficients.iter().all(|c| *c == 0.0));
    }

    #[test]
    fn avoidance_excludes_level_zero_for_half_integers() {
        let mu = DiscreteMeasure::unit_lattice(2000);
        let ys: Vec<f64> = (1..=100).map(|k| k as f64 + 0.5).collect();
        let a10 = select_avoiding_u(&mu, &ys, 10.0).unwrap();
        assert!(a10.u != 0.0 && a10.verified, "{a10:?}");
        let a6 = select_avoiding_u(&mu, &ys, 6.0).unwrap();
        assert!(a6.excluded_length > a10.excluded_length);
        assert!(a10.excluded_length.is_finite());
        let none = select_avoiding_u(&mu, &[], 10.0).unwrap();
        assert_eq!(none.u, 0.0);
    }
}
