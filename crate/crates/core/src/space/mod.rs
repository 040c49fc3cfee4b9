//! The space ℋ𝒞(A, μ) of functions f = A·Σ a_n μ_n^{1/2}/(z − t_n).

mod tail;
pub mod weight;

pub use tail::support_tail;
pub use weight::{weight_diagnostics, WeightDiagnostics, WeightGrid, WeightSpec};

use crate::entire::{derivative_at_zero, EvalPolicy, ProductModel, Reduced, Scaled};
use crate::error::{Error, Result};
use crate::measure::{check_mu1, check_mu2_with, DiscreteMeasure, SumEstimate, TailLaw, Verdict};
use crate::numerics::NeumaierC;
use crate::par;
use num_complex::Complex64;
use serde::Serialize;

/// A value with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bounded {
    pub value: Complex64,
    pub err: f64,
}

/// ψ(z) = Σ μ_n (1/(z − t_n) + t_n/(t_n² + 1)), summed in ±t pairs.
pub fn psi_transform(mu: &DiscreteMeasure, z: Complex64) -> Result<Bounded> {
    if mu.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    if z.im == 0.0 && mu.index_of(z.re).is_some() {
        return Err(Error::Pole(z.re));
    }
    let (s, m) = (mu.support(), mu.masses());
    let mut acc = NeumaierC::new();
    for i in mu.symmetric_order() {
        let t = s[i];
        acc.add(m[i] * (1.0 / (z - t) + t / (t * t + 1.0)));
    }
    // |1/(z−t) + t/(t²+1)| = |1 + zt|/(|z − t|(t²+1)) ≤ 8(1+|z|)(1+|t|)^{-2} for |t| ≥ 2|z|+1
    let r = z.norm();
    let (tail, err) = support_tail(
        mu,
        // combined form: the two pieces cancel to O(t⁻²) far out
        |t| (1.0 + z * t) / ((z - t) * (t * t + 1.0)),
        8.0 * (1.0 + r),
        -2.0,
        2.0 * r + 1.0,
    );
    let mut value = acc.value() + tail;
    if z.im == 0.0 {
        value.im = 0.0;
    }
    Ok(Bounded { value, err: err + 1e-16 * (mu.len() as f64) * value.norm().max(1.0) })
}

/// Finitely many coefficients a_n keyed by support index.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CoefficientVector {
    pub entries: Vec<(usize, f64)>,
}

impl CoefficientVector {
    pub fn unit(index: usize) -> Self {
        Self { entries: vec![(index, 1.0)] }
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries.iter().filter(|(i, _)| *i == index).map(|(_, a)| a).sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Regularity {
    pub mu1: SumEstimate,
    pub mu2: SumEstimate,
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        self.mu1.verdict == Verdict::Convergent && self.mu2.verdict == Verdict::Convergent
    }
}

/// ℋ𝒞(A, μ) with A′ cached on the support.
#[derive(Clone, Debug)]
pub struct SpaceModel {
    a: ProductModel,
    mu: DiscreteMeasure,
    aprime: Vec<f64>,
    aprime_law: Option<(f64, f64)>,
    regularity: Regularity,
}

impl SpaceModel {
    /// `aprime_law` is a lower envelope |A′(t)| ≥ c·(1+|t|)^e on the unstored support.
    pub fn new(a: ProductModel, mu: DiscreteMeasure, aprime_law: Option<(f64, f64)>) -> Result<Self> {
        let aprime = support_derivatives(&a, &mu)?;
        let regularity = Regularity { mu1: check_mu1(&mu)?, mu2: check_mu2_with(&mu, &aprime, aprime_law)? };
        Ok(Self { a, mu, aprime, aprime_law, regularity })
    }

    pub fn a(&self) -> &ProductModel {
        &self.a
    }

    pub fn mu(&self) -> &DiscreteMeasure {
        &self.mu
    }

    /// A′ at each support point.
    pub fn aprime(&self) -> &[f64] {
        &self.aprime
    }

    /// Lower envelope c·(1+|t|)^e for |A′| beyond the window, when declared.
    pub fn aprime_law(&self) -> Option<(f64, f64)> {
        self.aprime_law
    }

    pub fn regularity(&self) -> &Regularity {
        &self.regularity
    }

    pub fn check_mu2(&self) -> &SumEstimate {
        &self.regularity.mu2
    }

    fn a_at(&self, z: Complex64) -> Reduced {
        self.a.reduced(z, &EvalPolicy::default()).0
    }
}

/// A′ on the support of μ, after checking that the support is exactly the zero set of A
/// inside the window.
pub fn support_derivatives(a: &ProductModel, mu: &DiscreteMeasure) -> Result<Vec<f64>> {
    if mu.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    let (pos, neg) = mu.extents();
    let zeros: Vec<f64> = a
        .zeros_in(pos.max(neg))
        .into_iter()
        .filter(|t| *t <= pos && *t >= -neg)
        .collect();
    if zeros.len() != mu.len() || zeros.iter().zip(mu.support()).any(|(x, y)| x != y) {
        let missing = mu.support().iter().find(|t| zeros.binary_search_by(|z| z.total_cmp(t)).is_err());
        let extra = zeros.iter().find(|t| mu.index_of(**t).is_none());
        return Err(Error::SupportMismatch(format!(
            "{} support points vs {} zeros of A in the window; first unmatched support point {:?}, first unmatched zero {:?}",
            mu.len(),
            zeros.len(),
            missing,
            extra
        )));
    }
    let d = par::map(mu.support(), |t| derivative_at_zero(a, *t));
    d.into_iter()
        .zip(mu.support())
        .map(|(r, t)| match r {
            Ok(v) if v != 0.0 && v.is_finite() => Ok(v),
            Ok(_) => Err(Error::ZeroDerivative(*t)),
            Err(e) => Err(e),
        })
        .collect()
}

/// f(z) = A(z)·Σ a_n μ_n^{1/2}/(z − t_n); at a node the residue limit a_n μ_n^{1/2} A′(t_n).
pub fn eval_member(space: &SpaceModel, a: &CoefficientVector, z: Complex64) -> Result<Complex64> {
    let (s, m) = (space.mu.support(), space.mu.masses());
    if let Some(&(i, _)) = a.entries.iter().find(|(i, _)| *i >= s.len()) {
        return Err(Error::Invalid(format!("coefficient index {i} outside the support")));
    }
    let az = space.a_at(z);
    if az.order > 0 {
        if z.im == 0.0 {
            if let Some(k) = space.mu.index_of(z.re) {
                return Ok(Complex64::new(a.get(k) * m[k].sqrt() * space.aprime[k], 0.0));
            }
        }
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut acc = NeumaierC::new();
    for &(i, c) in &a.entries {
        acc.add(c * m[i].sqrt() / (z - s[i]));
    }
    Ok(az.lead.mul(Scaled::from_complex(acc.value())).value())
}

/// K_w(z) = A(z)·conj(A(w))·Σ μ_n/((z − t_n)(w̄ − t_n)).
pub fn kernel_series(space: &SpaceModel, w: Complex64, z: Complex64) -> Result<Bounded> {
    let (s, m) = (space.mu.support(), space.mu.masses());
    let wb = w.conj();
    let az = space.a_at(z);
    let aw = space.a_at(w).lead.conj();
    let node = |x: Complex64| if x.im == 0.0 { space.mu.index_of(x.re) } else { None };
    let (nz, nw) = (node(z), node(wb));
    // at nodes only the matching term survives against the vanishing A
    match (nz, nw) {
        (Some(k), Some(j)) => {
            let v = if k == j { m[k] * space.aprime[k] * space.aprime[k] } else { 0.0 };
            return Ok(Bounded { value: Complex64::new(v, 0.0), err: 1e-15 * v.abs() });
        }
        (Some(k), None) => {
            let v = az.lead.mul(Scaled::from_complex(m[k] / (wb - s[k]))).mul(a_conj(space, w));
            return Ok(Bounded { value: v.value(), err: 1e-15 * v.value().norm() });
        }
        (None, Some(j)) => {
            let v = az.lead.mul(Scaled::from_complex(m[j] / (z - s[j]))).mul(Scaled::from_real(space.aprime[j]));
            return Ok(Bounded { value: v.value(), err: 1e-15 * v.value().norm() });
        }
        (None, None) => {}
    }
    let mut acc = NeumaierC::new();
    for i in space.mu.symmetric_order() {
        acc.add(m[i] / ((z - s[i]) * (wb - s[i])));
    }
    let r = z.norm().max(w.norm());
    let (tail, terr) = support_tail(&space.mu, |t| 1.0 / ((z - t) * (wb - t)), 16.0, -2.0, 2.0 * r + 1.0);
    let sum = acc.value() + tail;
    let scale = az.lead.mul(Scaled { mant: aw.mant, scale: aw.scale });
    let value = scale.mul(Scaled::from_complex(sum)).value();
    let f = scale.value().norm();
    Ok(Bounded { value, err: f * (terr + 1e-15 * sum.norm() * (space.mu.len() as f64).sqrt()) })
}

fn a_conj(space: &SpaceModel, w: Complex64) -> Scaled {
    space.a_at(w).at_point().conj()
}

/// K_w(z) = A(z)·conj(A(w))·(ψ(z) − conj ψ(w))/(w̄ − z), falling back to the series on
/// the diagonal w̄ = z or at support points.
pub fn kernel_closed(space: &SpaceModel, w: Complex64, z: Complex64) -> Result<Bounded> {
    let wb = w.conj();
    let on_support = |x: Complex64| x.im == 0.0 && space.mu.index_of(x.re).is_some();
    if (wb - z).norm() < 1e-8 * (1.0 + z.norm()) || on_support(z) || on_support(w) {
        return kernel_series(space, w, z);
    }
    let pz = psi_transform(&space.mu, z)?;
    let pw = psi_transform(&space.mu, w)?;
    let az = space.a_at(z).at_point();
    let aw = a_conj(space, w);
    let d = (pz.value - pw.value.conj()) / (wb - z);
    let scale = az.mul(aw);
    let value = scale.mul(Scaled::from_complex(d)).value();
    let err = scale.value().norm() * (pz.err + pw.err) / (wb - z).norm() + 1e-15 * value.norm();
    Ok(Bounded { value, err })
}

/// ‖K_{t_n}‖ = μ_n^{1/2}|A′(t_n)|.
pub fn node_kernel_norm(space: &SpaceModel, t: f64) -> Result<f64> {
    let k = space.mu.index_of(t).ok_or(Error::NotAZero(t))?;
    Ok(space.mu.masses()[k].sqrt() * space.aprime[k].abs())
}

/// ν*_t = 1/(ν_t·A′(t)²) on the same support.
pub fn dualize(nu: &DiscreteMeasure, a: &ProductModel, dual_law: Option<TailLaw>) -> Result<DiscreteMeasure> {
    let d = support_derivatives(a, nu)?;
    dualize_with(nu, &d, dual_law)
}

/// Dualization with A′ already known on the support.
pub fn dualize_with(nu: &DiscreteMeasure, aprime: &[f64], dual_law: Option<TailLaw>) -> Result<DiscreteMeasure> {
    if aprime.len() != nu.len() {
        return Err(Error::Invalid("derivative count differs from the support size".into()));
    }
    let masses = nu
        .masses()
        .iter()
        .zip(aprime)
        .zip(nu.support())
        .map(|((v, d), t)| {
            if *d == 0.0 {
                Err(Error::ZeroDerivative(*t))
            } else {
                Ok(1.0 / (v * d * d))
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    nu.with_masses(masses, dual_law)
}
