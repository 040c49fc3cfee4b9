//! Certificates for k contiguous indivisible intervals from a pair G, S real on the line,
//! and the sums deciding whether the chain starts or ends with indivisible intervals.
//!
//! A passing certificate is a numerical witness for the constructive direction only: a
//! failing one does not prove absence.

use crate::entire::{dyadic_grid, estimate_type, EvalPolicy, ProductModel, Reduced, TypeEstimate};
use crate::error::{Error, Result};
use crate::measure::{
    coverage, series_estimate, symmetric_order, weighted_l2_sum, DiscreteMeasure, SumEstimate, SupportLaw, TermLaw,
    Verdict,
};
use crate::numerics::NeumaierC;
use crate::par;
use crate::space::SpaceModel;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertifyOptions {
    pub seed: u64,
    /// Exponent e of the asserted decay S(t)²μ_t ≲ (1+|t|)^e; the constant is calibrated
    /// on the outer half of the window and the law then bounds the tail.
    pub s_term_exponent: Option<f64>,
    /// The same for (t^{k−1}G(t)/A′(t))²/μ_t.
    pub g_term_exponent: Option<f64>,
    pub pf_points: usize,
    pub pf_radius: f64,
    /// Minimal distance from a test point to the support.
    pub pf_clearance: f64,
    pub pf_tol: f64,
    /// y = 2^j for j in this range.
    pub limit_levels: (i32, i32),
    pub limit_tol: f64,
    /// |Σc_n| must exceed max(sum_floor, 10·tail).
    pub sum_floor: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            seed: 42,
            s_term_exponent: None,
            g_term_exponent: None,
            pf_points: 20,
            pf_radius: 20.0,
            pf_clearance: 0.3,
            pf_tol: 1e-6,
            limit_levels: (3, 14),
            limit_tol: 1e-3,
            sum_floor: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueCheck {
    /// c_n = G(t_n)S(t_n)/A′(t_n) on the support; reports list only the nonzero ones.
    #[serde(skip)]
    pub c: Vec<f64>,
    pub nonzero: Vec<(f64, f64)>,
    pub l1_partial: f64,
    /// Bound on Σ_{|t|>R}|c_n|: zero when GS/A reduces to a rational function whose poles
    /// all lie in the window, else (tail of Σ S²μ)^{1/2}·(tail of Σ G²/(A′²μ))^{1/2}.
    pub l1_tail: Option<f64>,
    pub tail_source: TailSource,
    pub sum: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailSource {
    Rational,
    CauchySchwarz,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitCheck {
    /// (y, ln(|G(iy)/A(iy)|·y^{k−1})).
    pub samples: Vec<(f64, f64)>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    /// (z, |GS/A(z) − Σc_n/(z − t_n)|).
    pub samples: Vec<(Complex64, f64)>,
    pub max_defect: f64,
    /// Bound on the omitted Σ_{|t|>R} c_n/(z − t_n) over the test points.
    pub tail: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedCheck {
    pub name: &'static str,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub k: u32,
    pub s_ell2: SumEstimate,
    pub g_ell2_inv: SumEstimate,
    pub residues_c: ResidueCheck,
    pub limit_check: LimitCheck,
    pub pf_identity_defect: IdentityCheck,
    pub checks: Vec<NamedCheck>,
    pub pass: bool,
    /// None when G vanishes identically.
    pub type_of_interval: Option<TypeEstimate>,
}

/// Local forms of G and S at every support point, and the residues c_n.
struct NodeValues {
    g: Vec<f64>,
    s: Vec<f64>,
    c: Vec<f64>,
}

fn finite_at(r: &Reduced, t: f64, what: &str) -> Result<f64> {
    if r.order < 0 {
        return Err(Error::Invalid(format!("{what} has a pole at t = {t}")));
    }
    Ok(r.at_point().value().re)
}

fn node_values(space: &SpaceModel, g: &ProductModel, s: &ProductModel) -> Result<NodeValues> {
    let pol = EvalPolicy::default();
    let support = space.mu().support();
    let items: Vec<(f64, f64)> = support.iter().copied().zip(space.aprime().iter().copied()).collect();
    let rows = par::map(&items, |&(t, d)| -> Result<(f64, f64, f64)> {
        if d == 0.0 {
            return Err(Error::ZeroDerivative(t));
        }
        let z = Complex64::new(t, 0.0);
        let rg = g.reduced(z, &pol).0;
        let rs = s.reduced(z, &pol).0;
        let gv = finite_at(&rg, t, "G")?;
        let sv = finite_at(&rs, t, "S")?;
        let gs = rg.mul(rs);
        // A has a simple zero at t with lead A′(t), so GS/A has residue lead(GS)/A′ or none
        let c = if gs.order == 0 { gs.lead.value().re / d } else { 0.0 };
        Ok((gv, sv, c))
    });
    let mut out = NodeValues { g: Vec::with_capacity(items.len()), s: Vec::new(), c: Vec::new() };
    for r in rows {
        let (gv, sv, c) = r?;
        out.g.push(gv);
        out.s.push(sv);
        out.c.push(c);
    }
    Ok(out)
}

/// c_n = G(t_n)S(t_n)/A′(t_n) on the support of the space.
pub fn residues(space: &SpaceModel, g: &ProductModel, s: &ProductModel) -> Result<Vec<f64>> {
    Ok(node_values(space, g, s)?.c)
}

fn lookup<'a>(space: &'a SpaceModel, v: &'a [f64]) -> impl Fn(f64) -> f64 + 'a {
    move |t| space.mu().index_of(t).map_or(0.0, |i| v[i])
}

/// Support law of μ beyond the window: the declared one, else the observed density.
fn support_law(mu: &DiscreteMeasure) -> SupportLaw {
    match mu.tail_law() {
        Some(l) => l.support,
        None => {
            let (p, n) = mu.extents();
            SupportLaw::Density { per_unit: mu.len() as f64 / (p + n).max(1.0) }
        }
    }
}

/// Σ terms with the tail law calibrated at exponent e on the outer half of the window.
fn sum_with_law(mu: &DiscreteMeasure, terms: &[f64], e: Option<f64>) -> SumEstimate {
    let (p, n) = mu.extents();
    let cov = coverage(p, n);
    let law = e.map(|e| TermLaw::calibrate(mu.support(), terms, e, cov / 2.0, support_law(mu)));
    series_estimate(mu.support(), terms, cov, law)
}

pub fn certify_indivisible(space: &SpaceModel, g: &ProductModel, s: &ProductModel, k: u32) -> Result<Certificate> {
    certify_indivisible_with(space, g, s, k, &CertifyOptions::default())
}

pub fn certify_indivisible_with(
    space: &SpaceModel,
    g: &ProductModel,
    s: &ProductModel,
    k: u32,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    if k == 0 {
        return Err(Error::Invalid("k must be positive".into()));
    }
    let mu = space.mu();
    let nv = node_values(space, g, s)?;
    let aprime = space.aprime();
    let quotient: Vec<f64> = nv.g.iter().zip(aprime).map(|(g, d)| g / d).collect();
    let kq: Vec<f64> = quotient
        .iter()
        .zip(mu.support())
        .map(|(q, t)| q * t.powi(k as i32 - 1))
        .collect();

    let masses = mu.masses();
    let s_terms: Vec<f64> = nv.s.iter().zip(masses).map(|(s, m)| s * s * m).collect();
    let g_terms = |q: &[f64]| -> Vec<f64> { q.iter().zip(masses).map(|(q, m)| q * q / m).collect() };
    let s_ell2 = sum_with_law(mu, &s_terms, opts.s_term_exponent);
    let g_ell2_inv = sum_with_law(mu, &g_terms(&kq), opts.g_term_exponent);
    let g1 = if k == 1 {
        g_ell2_inv.clone()
    } else {
        let e = opts.g_term_exponent.map(|e| e - 2.0 * (k as f64 - 1.0));
        sum_with_law(mu, &g_terms(&quotient), e)
    };

    // c ∈ ℓ¹ follows from the two ℓ² memberships by Cauchy–Schwarz, which also bounds its tail
    let order = symmetric_order(mu.support());
    let mut l1 = crate::numerics::Neumaier::new();
    let mut sum = crate::numerics::Neumaier::new();
    for &i in &order {
        l1.add(nv.c[i].abs());
        sum.add(nv.c[i]);
    }
    let in_l1 = s_ell2.verdict == Verdict::Convergent && g1.verdict == Verdict::Convergent;
    let (pos, neg) = mu.extents();
    let rational = ProductModel::rational_part(&[(g, 1), (s, 1), (space.a(), -1)])
        .is_some_and(|(roots, _)| roots.iter().all(|&(x, m)| m > 0 || (-neg..=pos).contains(&x)));
    let (l1_tail, tail_source) = match (s_ell2.tail_estimate(), g1.tail_estimate()) {
        _ if in_l1 && rational => (Some(0.0), TailSource::Rational),
        (Some(a), Some(b)) if in_l1 => (Some((a * b).sqrt()), TailSource::CauchySchwarz),
        _ => (None, TailSource::CauchySchwarz),
    };
    let threshold = opts.sum_floor.max(10.0 * l1_tail.unwrap_or(f64::INFINITY));
    let sum = sum.value();
    let residues_c = ResidueCheck {
        nonzero: mu.support().iter().zip(&nv.c).filter(|(_, c)| **c != 0.0).map(|(t, c)| (*t, *c)).collect(),
        c: nv.c,
        l1_partial: l1.value(),
        l1_tail,
        tail_source,
        sum,
        threshold,
        pass: in_l1 && sum.abs() > threshold,
    };

    let limit_check = limit_check(space.a(), g, k, opts)?;
    let pf_identity_defect = identity_check(space, g, s, &residues_c, opts)?;
    let ymax = 4096f64.min(g.window() / 4.0).max(256.0);
    let type_of_interval = estimate_type(g, &dyadic_grid(64.0, ymax)).ok();

    let checks = vec![
        NamedCheck { name: "S_ell2", pass: s_ell2.verdict == Verdict::Convergent },
        NamedCheck { name: "G_ell2_inv", pass: g_ell2_inv.verdict == Verdict::Convergent },
        NamedCheck { name: "residues_c", pass: residues_c.pass },
        NamedCheck { name: "limit_check", pass: limit_check.pass },
        NamedCheck { name: "pf_identity_defect", pass: pf_identity_defect.pass },
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(Certificate {
        k,
        s_ell2,
        g_ell2_inv,
        residues_c,
        limit_check,
        pf_identity_defect,
        checks,
        pass,
        type_of_interval,
    })
}

fn limit_check(a: &ProductModel, g: &ProductModel, k: u32, opts: &CertifyOptions) -> Result<LimitCheck> {
    let pol = EvalPolicy::default();
    let (j0, j1) = opts.limit_levels;
    let mut samples = Vec::new();
    for j in j0..=j1 {
        let y = 2f64.powi(j);
        let z = Complex64::new(0.0, y);
        let rg = g.reduced(z, &pol).0;
        let ra = a.reduced(z, &pol).0;
        let lg = if rg.order > 0 { f64::NEG_INFINITY } else { rg.lead.ln_abs() };
        samples.push((y, lg - ra.lead.ln_abs() + (k as f64 - 1.0) * y.ln()));
    }
    let tail = &samples[samples.len().saturating_sub(5)..];
    let cap = opts.limit_tol.ln();
    let decreasing = tail.windows(2).all(|w| w[1].1 < w[0].1 || w[1].1 == f64::NEG_INFINITY);
    let pass = tail.len() == 5 && decreasing && tail.iter().all(|s| s.1 < cap);
    Ok(LimitCheck { samples, pass })
}

/// Seeded points with |z| ≤ radius at distance ≥ clearance from the support.
pub fn test_points(space: &SpaceModel, n: usize, radius: f64, clearance: f64, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let support = space.mu().support();
    let dist = |z: Complex64| {
        let i = support.partition_point(|t| *t < z.re);
        [i.checked_sub(1), Some(i)]
            .into_iter()
            .flatten()
            .filter_map(|j| support.get(j))
            .map(|t| (z - t).norm())
            .fold(f64::INFINITY, f64::min)
    };
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let z = Complex64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius));
        if z.norm() <= radius && dist(z) >= clearance {
            out.push(z);
        }
    }
    out
}

fn identity_check(
    space: &SpaceModel,
    g: &ProductModel,
    s: &ProductModel,
    res: &ResidueCheck,
    opts: &CertifyOptions,
) -> Result<IdentityCheck> {
    let pol = EvalPolicy::default();
    let pts = test_points(space, opts.pf_points, opts.pf_radius, opts.pf_clearance, opts.seed);
    let mut samples = Vec::with_capacity(pts.len());
    for z in pts {
        let rg = g.reduced(z, &pol).0;
        let rs = s.reduced(z, &pol).0;
        let ra = space.a().reduced(z, &pol).0;
        let q = rg.mul(rs).mul(ra.powi(-1));
        if q.order < 0 {
            return Err(Error::Pole(z.re));
        }
        let lhs = q.at_point().value();
        let mut acc = NeumaierC::new();
        for &(t, c) in &res.nonzero {
            acc.add(c / (z - t));
        }
        samples.push((z, (lhs - acc.value()).norm()));
    }
    let max_defect = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    let (pos, neg) = space.mu().extents();
    let r = pos.min(neg) - opts.pf_radius;
    let tail = res.l1_tail.filter(|_| r > 0.0).map(|t| t / r);
    Ok(IdentityCheck { samples, max_defect, tail, pass: max_defect < opts.pf_tol })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityDefect {
    /// (λ, Σ a_n²/(λ − t_n)) over the window.
    pub values: Vec<(f64, f64)>,
    pub max_defect: f64,
    /// Bound on the omitted part of each sum.
    pub tail: Option<f64>,
}

/// max over λ of |Σ a_n²/(λ − t_n)| with a_n = μ_n^{−1/2}G(t_n)/A′(t_n); zero exactly when
/// G is orthogonal to every G/(· − λ).
pub fn orthogonality_defect(space: &SpaceModel, g: &ProductModel, lambdas: &[f64]) -> Result<OrthogonalityDefect> {
    let mu = space.mu();
    if let Some(l) = lambdas.iter().find(|l| mu.index_of(**l).is_some()) {
        return Err(Error::Pole(*l));
    }
    if lambdas.is_empty() {
        return Ok(OrthogonalityDefect { values: vec![], max_defect: 0.0, tail: Some(0.0) });
    }
    let pol = EvalPolicy::default();
    let items: Vec<(f64, f64)> = mu.support().iter().copied().zip(space.aprime().iter().copied()).collect();
    let q: Vec<f64> = par::map(&items, |&(t, d)| {
        let r = g.reduced(Complex64::new(t, 0.0), &pol).0;
        finite_at(&r, t, "G").map(|v| v / d)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let a2: Vec<f64> = q.iter().zip(mu.masses()).map(|(q, m)| q * q / m).collect();
    let order = symmetric_order(mu.support());
    let values: Vec<(f64, f64)> = lambdas
        .iter()
        .map(|&l| {
            let mut acc = crate::numerics::Neumaier::new();
            for &i in &order {
                acc.add(a2[i] / (l - mu.support()[i]));
            }
            (l, acc.value())
        })
        .collect();
    let max_defect = values.iter().map(|v| v.1.abs()).fold(0.0, f64::max);
    let est = weighted_l2_sum(lookup(space, &q), mu, -1, None);
    let (pos, neg) = mu.extents();
    let lmax = lambdas.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let r = pos.min(neg) - lmax;
    let tail = est.tail_estimate().filter(|_| r > 0.0).map(|t| t / r);
    Ok(OrthogonalityDefect { values, max_defect, tail })
}

#[derive(Clone, Debug, Serialize)]
pub struct EndIntervals {
    /// Σ t_n^{2(k−1)}/(μ_n A′(t_n)²): convergent means the chain starts with k indivisible intervals.
    pub start: SumEstimate,
    /// Σ μ_n t_n^{2(k−1)}: convergent means the chain ends with k indivisible intervals.
    pub end: SumEstimate,
}

pub fn end_interval_count(space: &SpaceModel, k: u32) -> EndIntervals {
    let p = k.max(1) as i32 - 1;
    let inv: Vec<f64> = space.aprime().iter().map(|d| 1.0 / d).collect();
    let start_env = space.aprime_law().map(|(c, e)| (1.0 / c, p as f64 - e));
    let start = weighted_l2_sum(
        |t| lookup(space, &inv)(t) * t.powi(p),
        space.mu(),
        -1,
        start_env,
    );
    let end = weighted_l2_sum(|t| t.powi(p), space.mu(), 1, Some((1.0, p as f64)));
    EndIntervals { start, end }
}
