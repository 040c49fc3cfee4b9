//! Generators for the constructive examples: each produces a space together with the pair
//! (G, S) that should certify indivisible intervals in it, plus the decay exponents the
//! construction asserts for the certificate sums. The asserted magnitudes are checked on
//! the window with [`band`] rather than assumed.

use crate::chain::{certify_indivisible_with, Certificate, CertifyOptions};
use crate::entire::{interleave, EvalPolicy, InterleaveOptions, ProductModel, SymmetricZeroSet};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::par;
use crate::space::SpaceModel;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub space: SpaceModel,
    pub g: ProductModel,
    pub s: ProductModel,
    /// Asserted decay exponent of S(t)²μ_t on the support; None leaves the sum to regression.
    pub s_term_exponent: Option<f64>,
    /// Asserted decay exponent of (G(t)/A′(t))²/μ_t (the k = 1 sum).
    pub g_term_exponent: Option<f64>,
}

impl Instance {
    pub fn options(&self, k: u32) -> CertifyOptions {
        CertifyOptions {
            s_term_exponent: self.s_term_exponent,
            g_term_exponent: self.g_term_exponent.map(|e| e + 2.0 * (k as f64 - 1.0)),
            ..CertifyOptions::default()
        }
    }

    pub fn certify(&self, k: u32) -> Result<Certificate> {
        certify_indivisible_with(&self.space, &self.g, &self.s, k, &self.options(k))
    }
}

/// Spread of a family of values that should stay within constant multiples of each other.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Band {
    pub min: f64,
    pub max: f64,
    pub ratio: f64,
    pub count: usize,
}

pub fn band(values: impl IntoIterator<Item = f64>) -> Band {
    let mut b = Band { min: f64::INFINITY, max: 0.0, ratio: f64::INFINITY, count: 0 };
    for v in values {
        let v = v.abs();
        b.min = b.min.min(v);
        b.max = b.max.max(v);
        b.count += 1;
    }
    if b.count > 0 && b.min > 0.0 {
        b.ratio = b.max / b.min;
    }
    b
}

/// Values of a model at real points that are not its zeros (zero at its zeros).
pub fn values_at(model: &ProductModel, ts: &[f64]) -> Vec<f64> {
    let pol = EvalPolicy::default();
    par::map(ts, |&t| {
        let r = model.reduced(Complex64::new(t, 0.0), &pol).0;
        r.at_point().value().re
    })
}

fn empty_set() -> Result<SymmetricZeroSet> {
    SymmetricZeroSet::symmetric(vec![], None)
}

/// sin(πz)/(z·G): the partner of a factor G of sin(πz)/z.
fn sine_over(g: &ProductModel, extra: Vec<(ProductModel, i32)>) -> ProductModel {
    let mut factors = vec![(ProductModel::SinPi, 1), (g.clone(), -1)];
    factors.extend(extra);
    ProductModel::compose(factors, vec![(0.0, -1)], 1.0)
}

fn integer_support(n: i64) -> Vec<f64> {
    (-n..=n).map(|k| k as f64).collect()
}

/// G = ∏(1 − z/(2n−1))(1 + z/(2n)) = √π/(Γ(1+z/2)Γ(1/2−z/2)), zeros 1, 3, 5, … and −2, −4, ….
pub fn thm1_g() -> ProductModel {
    let zs = SymmetricZeroSet::general(vec![], vec![], Some((0.5, 0.5)), Some((0.5, 0.0))).expect("valid continuation");
    ProductModel::canonical(zs)
}

/// Unit spectrum ℤ ∩ [−n, n] with μ = |n|^{−1/2} on the zeros of G, |n|^{1/2} on those of
/// S = sin(πz)/(zG), μ_0 = 1.
pub fn thm1_instance(n: i64) -> Result<Instance> {
    if n < 100 {
        return Err(Error::Invalid("the thm1 window needs N ≥ 100".into()));
    }
    let g = thm1_g();
    let s = sine_over(&g, vec![]);
    let in_zg = |k: i64| (k > 0 && k % 2 == 1) || (k < 0 && k % 2 == 0);
    let mu = DiscreteMeasure::on_integers(
        n,
        |k| match k {
            0 => 1.0,
            k if in_zg(k) => (k.abs() as f64).powf(-0.5),
            k => (k.abs() as f64).sqrt(),
        },
        None,
    )?;
    let space = SpaceModel::new(ProductModel::SinPi, mu, Some((PI, 0.0)))?;
    Ok(Instance {
        name: "thm1".into(),
        space,
        g,
        s,
        // |S|² ≍ |n|^{−1} against μ = |n|^{−1/2} on 𝒵_G; symmetrically for G on 𝒵_S
        s_term_exponent: Some(-1.5),
        g_term_exponent: Some(-1.5),
    })
}

/// Finite Σ = {πs_k} with disjoint parameter intervals (a_k, b_k) ordered like s_k.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thm2Config {
    pub s_list: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
    pub window: i64,
}

impl Thm2Config {
    /// Equal-width intervals in (0.01, 0.99) separated by gaps of 0.01, in the order of s.
    pub fn equal_gaps(s_list: Vec<f64>, window: i64) -> Self {
        let k = s_list.len().max(1) as f64;
        let gap = 0.01;
        let w = (0.98 - gap * (k - 1.0)) / k;
        let intervals = (0..s_list.len())
            .map(|i| {
                let a = 0.01 + i as f64 * (w + gap);
                (a, a + w)
            })
            .collect();
        Thm2Config { s_list, intervals, window }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Invalid(m.to_string()));
        if self.s_list.is_empty() {
            return bad("s_list is empty");
        }
        if self.s_list.len() != self.intervals.len() {
            return bad("s_list and intervals differ in length");
        }
        if self.s_list.iter().any(|s| !(*s > 0.0 && *s < 1.0)) {
            return bad("every s must lie in (0, 1)");
        }
        if self.s_list.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("s_list must be strictly increasing");
        }
        if self.intervals.iter().any(|(a, b)| !(0.0 < *a && a < b && *b < 1.0)) {
            return bad("intervals must satisfy 0 < a < b < 1");
        }
        // with s increasing, order compatibility and disjointness both read b_k < a_{k+1}
        if self.intervals.windows(2).any(|w| !(w[0].1 < w[1].0)) {
            return bad("intervals must be disjoint and ordered like s");
        }
        if self.window < 100 {
            return bad("window must be at least 100");
        }
        Ok(())
    }

    pub fn midpoints(&self) -> Vec<f64> {
        self.intervals.iter().map(|(a, b)| 0.5 * (a + b)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Thm2Member {
    pub s: f64,
    pub interval: (f64, f64),
    pub r: f64,
    /// Λ_k with strong asymptotics s_k x + (1 + r_k)/6.
    pub lambda: Arc<SymmetricZeroSet>,
    pub g: ProductModel,
    pub s_fn: ProductModel,
    pub s_term_exponent: f64,
    pub g_term_exponent: f64,
}

#[derive(Clone, Debug)]
pub struct Thm2Instance {
    pub config: Thm2Config,
    pub space: SpaceModel,
    pub members: Vec<Thm2Member>,
    /// u(n) for n = 1..=N.
    pub u: Vec<f64>,
}

impl Thm2Instance {
    pub fn instance(&self, k: usize) -> Instance {
        let m = &self.members[k];
        Instance {
            name: format!("thm2[s={}]", m.s),
            space: self.space.clone(),
            g: m.g.clone(),
            s: m.s_fn.clone(),
            s_term_exponent: Some(m.s_term_exponent),
            g_term_exponent: Some(m.g_term_exponent),
        }
    }
}

/// Λ_1 ⊂ … ⊂ Λ_K inside ℤ∖{0} by successive interleaving, G_k = 𝒞_{Λ_k}, S_k = sin(πz)/(zG_k),
/// μ_n = (1+|n|)^{(2u(n)−1)/3}.
///
/// The offset is +(1 + r_k)/6: with the minus sign the products would grow on ℤ∖Λ_k
/// instead of decaying like (1+|n|)^{(r_k−2)/3}. For finite Σ, u(n) is the midpoint of the
/// gap [b_j, a_{j+1}] where j is the last set missing n (b_0 = 0, a_{K+1} = 1), which keeps
/// u ≤ a_k on Λ_k and u ≥ b_k off it.
pub fn thm2_instance(cfg: &Thm2Config) -> Result<Thm2Instance> {
    cfg.validate()?;
    let n = cfg.window;
    let r = n as f64;
    let kk = cfg.s_list.len();
    let mids = cfg.midpoints();
    let outer = SymmetricZeroSet::integers();
    let mut sets: Vec<Arc<SymmetricZeroSet>> = Vec::with_capacity(kk);
    let mut inner = empty_set()?;
    for k in 0..kk {
        let b = (1.0 + mids[k]) / 6.0;
        let l = interleave(&inner, &outer, cfg.s_list[k], b, InterleaveOptions::new(r))?;
        inner = l.clone();
        sets.push(Arc::new(l));
    }

    let gap_mid = |j: usize| {
        let lo = if j == 0 { 0.0 } else { cfg.intervals[j - 1].1 };
        let hi = if j == kk { 1.0 } else { cfg.intervals[j].0 };
        0.5 * (lo + hi)
    };
    let u: Vec<f64> = (1..=n)
        .map(|m| {
            let t = m as f64;
            let j = (0..kk).rev().find(|&k| !sets[k].contains(t)).map_or(0, |k| k + 1);
            gap_mid(j)
        })
        .collect();
    let mu = DiscreteMeasure::on_integers(
        n,
        |m| if m == 0 { 1.0 } else { (1.0 + m.abs() as f64).powf((2.0 * u[m.unsigned_abs() as usize - 1] - 1.0) / 3.0) },
        None,
    )?;
    let space = SpaceModel::new(ProductModel::SinPi, mu, Some((PI, 0.0)))?;

    let members = (0..kk)
        .map(|k| {
            let g = ProductModel::Canonical(sets[k].clone());
            let s_fn = sine_over(&g, vec![]);
            // on Λ_k, u ≤ gap_mid(k); off it, u ≥ gap_mid(k + 1)
            let rk = mids[k];
            Thm2Member {
                s: cfg.s_list[k],
                interval: cfg.intervals[k],
                r: rk,
                lambda: sets[k].clone(),
                g,
                s_fn,
                s_term_exponent: -1.0 + 2.0 * (gap_mid(k) - rk) / 3.0,
                g_term_exponent: -1.0 + 2.0 * (rk - gap_mid(k + 1)) / 3.0,
            }
        })
        .collect();
    Ok(Thm2Instance { config: cfg.clone(), space, members, u })
}

/// Midpoints of the admissible ranges for (α, β, δ) at given γ and k.
pub fn power_weight_parameters(gamma: f64, k: u32) -> Result<(f64, f64, f64)> {
    let k = k as f64;
    let open = |lo: f64, hi: f64, what: &str| {
        if lo < hi {
            Ok(0.5 * (lo + hi))
        } else {
            Err(Error::Infeasible(format!("no admissible {what} at gamma = {gamma}, k = {k} (needs k < 2 + gamma)")))
        }
    };
    if k < 1.0 {
        return Err(Error::Invalid("k must be positive".into()));
    }
    let alpha = open(k - gamma - 1.0, 1.0, "alpha")?;
    let beta = open(-1.0 - 2.0 * gamma, 1f64.min(1.0 - 2.0 * alpha - 2.0 * gamma), "beta")?;
    let delta = open((-1.0 - 2.0 * gamma).max(2.0 * k - 2.0 * alpha - 2.0 * gamma - 1.0), 1.0, "delta")?;
    Ok((alpha, beta, delta))
}

/// A = P·𝒞_Λ with Λ = {±(n − b)}, b = (γ + 1 − d)/2 ∈ [0, 1/2) and P(z) = z·∏_{j<d−1}(z − j − 1/4)
/// of degree d = ⌊γ⌋ + 1, so |A(z)| ≍ min(1, dist(z, T))(1+|z|)^γ e^{π|Im z|}.
/// G = 𝒞_{Λ_G} for a density-1/2 subset with offset (1 − α)/2, and GS = A/z.
pub fn power_weight_instance(gamma: f64, k: u32, n: i64) -> Result<Instance> {
    let (alpha, beta, delta) = power_weight_parameters(gamma, k)?;
    if n < 100 {
        return Err(Error::Invalid("window must be at least 100".into()));
    }
    let d = gamma.floor() as i64 + 1;
    let b = (gamma + 1.0 - d as f64) / 2.0;
    let lam = SymmetricZeroSet::lattice(1.0, b)?;
    let c_lam = ProductModel::canonical(lam.clone());
    let roots: Vec<f64> = (0..d - 1).map(|j| j as f64 + 0.25).collect();
    let mut poly = vec![(0.0, 1)];
    poly.extend(roots.iter().map(|&x| (x, 1)));
    let a = ProductModel::compose(vec![(c_lam.clone(), 1)], poly, 1.0);

    let r = n as f64;
    let lg = interleave(&empty_set()?, &lam, 0.5, (1.0 - alpha) / 2.0, InterleaveOptions::new(r))?;
    let g = ProductModel::canonical(lg.clone());
    let s = ProductModel::compose(vec![(c_lam, 1), (g.clone(), -1)], roots.iter().map(|&x| (x, 1)).collect(), 1.0);

    let support = a.zeros_in(r);
    let masses: Vec<f64> = support
        .iter()
        .map(|&t| {
            let w = 1.0 + t.abs();
            if t == 0.0 {
                1.0
            } else if lg.contains(t.abs()) {
                w.powf(beta)
            } else {
                w.powf(delta)
            }
        })
        .collect();
    let mu = DiscreteMeasure::new(support, masses, None)?;
    let space = SpaceModel::new(a, mu, None)?;
    Ok(Instance {
        name: format!("power_weight[gamma={gamma}]"),
        space,
        g,
        s,
        s_term_exponent: Some(2.0 * (gamma - 1.0 + alpha) + beta),
        g_term_exponent: Some(-2.0 * alpha - 2.0 * gamma - delta),
    })
}

/// T = ℤ ∪ {n + (2+|n|)^{−β}}, A = sin(πz)·∏(1 − z/n*). S = 𝒞_Λ for Λ ⊂ ℤ∖{0} of density 1/2
/// and offset (1 − β)/4, so |S| ≍ (1+|x|)^{−(β+1)/2} on ℤ∖Λ; G = A/(zS).
pub fn perturbed_lattice_instance(beta: f64, n: i64) -> Result<Instance> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Invalid(format!("beta = {beta} is outside (0, 1); regularity forces beta < 1")));
    }
    if n < 100 {
        return Err(Error::Invalid("window must be at least 100".into()));
    }
    let r = n as f64;
    let shifted = ProductModel::ShiftedLattice { beta };
    let a = ProductModel::compose(vec![(ProductModel::SinPi, 1), (shifted.clone(), 1)], vec![], 1.0);
    let lam = interleave(&empty_set()?, &SymmetricZeroSet::integers(), 0.5, (1.0 - beta) / 4.0, InterleaveOptions::new(r))?;
    let s = ProductModel::canonical(lam.clone());
    let g = sine_over(&s, vec![(shifted, 1)]);

    let support = a.zeros_in(r);
    let masses: Vec<f64> = support
        .iter()
        .map(|&t| {
            let w = 1.0 + t.abs();
            if t == 0.0 || (t == t.round() && lam.contains(t.abs())) {
                w.powf((beta + 1.0) / 2.0)
            } else {
                w.powf((3.0 * beta - 1.0) / 2.0)
            }
        })
        .collect();
    let mu = DiscreteMeasure::new(support, masses, None)?;
    let space = SpaceModel::new(a, mu, None)?;
    Ok(Instance {
        name: format!("perturbed_lattice[beta={beta}]"),
        space,
        g,
        s,
        s_term_exponent: Some((beta - 3.0) / 2.0),
        g_term_exponent: Some((beta - 3.0) / 2.0),
    })
}

#[derive(Clone, Debug)]
pub struct LacunaryInstance {
    pub instance: Instance,
    /// U with zeros ±λ_j.
    pub u: ProductModel,
    /// Largest k ≤ the probe limit for which every certificate up to k passes.
    pub k_max: u32,
    pub certificates: Vec<Certificate>,
}

/// ψ(t) = 1 + max_{|z|=t}|U(z)|^{1/2}; for real zeros the maximum sits at z = ±it.
pub fn lacunary_psi(u: &ProductModel, t: f64) -> f64 {
    let r = u.reduced(Complex64::new(0.0, t.abs()), &EvalPolicy::default()).0;
    1.0 + (0.5 * r.lead.ln_abs()).exp()
}

/// A = sin(πz)·U, T = ℤ ∪ Λ with the default Λ = {±(round(q^j) + 1/2)}.
pub fn lacunary_instance(q: f64, n: i64, k_probe: u32) -> Result<LacunaryInstance> {
    let ProductModel::Lacunary { zeros, .. } = ProductModel::lacunary(q)? else { unreachable!() };
    lacunary_instance_from(q, zeros.positive().stored().to_vec(), n, k_probe)
}

/// G = G₁·U_G and S = S₁·U_S, with (G₁, S₁) the thm1 pair and the zeros of U split
/// alternately, so |G|, |S| ≍ dist·ψ(t)(1+|t|)^{−1/2}; μ = ψ^{−3} on 𝒵_G and 1 elsewhere.
pub fn lacunary_instance_from(q: f64, zeros: Vec<f64>, n: i64, k_probe: u32) -> Result<LacunaryInstance> {
    if zeros.iter().any(|z| (z - z.round()).abs() < 1e-9) {
        return Err(Error::Invalid("lacunary zeros must keep a positive distance from the integers".into()));
    }
    if zeros.len() < 2 {
        return Err(Error::Invalid("need at least two lacunary zeros".into()));
    }
    if n < 100 {
        return Err(Error::Invalid("window must be at least 100".into()));
    }
    let even: Vec<f64> = zeros.iter().step_by(2).copied().collect();
    let odd: Vec<f64> = zeros.iter().skip(1).step_by(2).copied().collect();
    let ug = ProductModel::lacunary_from(q * q, even.clone())?;
    let us = ProductModel::lacunary_from(q * q, odd)?;
    // U kept as the product of its halves so that GS/A cancels factor by factor
    let u = ProductModel::compose(vec![(ug.clone(), 1), (us.clone(), 1)], vec![], 1.0);
    let g1 = thm1_g();
    let a = ProductModel::compose(vec![(ProductModel::SinPi, 1), (u.clone(), 1)], vec![], 1.0);
    let g = ProductModel::compose(vec![(g1.clone(), 1), (ug, 1)], vec![], 1.0);
    let s = sine_over(&g1, vec![(us, 1)]);

    let r = n as f64;
    let mut support = integer_support(n);
    support.extend(zeros.iter().filter(|z| **z <= r).flat_map(|z| [*z, -*z]));
    support.sort_by(f64::total_cmp);
    let in_zg = |t: f64| {
        if t == t.round() {
            let k = t as i64;
            (k > 0 && k % 2 == 1) || (k < 0 && k % 2 == 0)
        } else {
            even.contains(&t.abs())
        }
    };
    let masses: Vec<f64> =
        support.iter().map(|&t| if in_zg(t) { lacunary_psi(&u, t).powi(-3) } else { 1.0 }).collect();
    let mu = DiscreteMeasure::new(support, masses, None)?;
    let space = SpaceModel::new(a, mu, None)?;
    let instance = Instance { name: format!("lacunary[q={q}]"), space, g, s, s_term_exponent: None, g_term_exponent: None };
    let mut certificates = Vec::new();
    let mut k_max = 0;
    for k in 1..=k_probe {
        let c = instance.certify(k)?;
        let pass = c.pass;
        certificates.push(c);
        if !pass {
            break;
        }
        k_max = k;
    }
    Ok(LacunaryInstance { instance, u, k_max, certificates })
}
