//! Executes a validated configuration and assembles its report.

use crate::config::*;
use debranges::atomize::{atomize, select_avoiding_u, transport_coefficients};
use debranges::canonical::{cross_check_type, detect_indivisible, kdb_type, PiecewiseHamiltonian};
use debranges::chain::{Certificate, CertifyOptions};
use debranges::construct::{
    band, lacunary_instance, perturbed_lattice_instance, power_weight_instance, thm1_instance, thm2_instance, values_at,
    Band, Instance, Thm2Config,
};
use debranges::entire::{dyadic_grid, estimate_type, eval_product, ProductModel, SymmetricZeroSet, TypeEstimate};
use debranges::measure::{DiscreteMeasure, SupportLaw, TailLaw};
use debranges::space::{weight_diagnostics, CoefficientVector, SpaceModel, WeightGrid};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::PI;

/// One CSV row: index, value, error bound (0 where no bound is computed).
pub type Row = (i64, f64, f64);

pub struct Outcome {
    pub result: Value,
    pub pass: bool,
    pub rows: Vec<Row>,
}

pub type RunResult = Result<Outcome, String>;

fn lib(e: debranges::Error) -> String {
    e.to_string()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

pub fn execute(cfg: &RunConfig) -> RunResult {
    match &cfg.command {
        Command::Certify(p) => certify(p),
        Command::Construct(p) => construct(p),
        Command::Atomize(p) => run_atomize(p),
        Command::Canonical(p) => canonical(p),
        Command::TypeEstimate(p) => type_estimate(p),
        Command::DiagnoseWeight(p) => diagnose_weight(p),
    }
}

/// The configuration as it will run, with generator defaults filled in.
pub fn resolve(cfg: &RunConfig) -> RunConfig {
    let mut out = cfg.clone();
    match &mut out.command {
        Command::Certify(p) | Command::Construct(p) => *p = p.resolved(),
        _ => {}
    }
    out
}

fn instances(p: &GeneratorParams) -> Result<Vec<Instance>, String> {
    let p = p.resolved();
    Ok(match p.generator {
        Generator::Thm1 => vec![thm1_instance(p.n).map_err(lib)?],
        Generator::Thm2 => {
            let cfg = Thm2Config::equal_gaps(p.s_list.clone().expect("resolved"), p.n);
            let t = thm2_instance(&cfg).map_err(lib)?;
            (0..t.members.len()).map(|k| t.instance(k)).collect()
        }
        Generator::PowerWeight => vec![power_weight_instance(p.gamma.expect("validated"), p.k, p.n).map_err(lib)?],
        Generator::PerturbedLattice => vec![perturbed_lattice_instance(p.beta.expect("validated"), p.n).map_err(lib)?],
        Generator::Lacunary => vec![lacunary_instance(p.q.expect("resolved"), p.n, 0).map_err(lib)?.instance],
    })
}

fn options(inst: &Instance, p: &GeneratorParams) -> CertifyOptions {
    let mut o = inst.options(p.k);
    o.seed = p.seed;
    if let Some(v) = p.pf_tol {
        o.pf_tol = v;
    }
    if let Some(v) = p.limit_tol {
        o.limit_tol = v;
    }
    if let Some(v) = p.sum_floor {
        o.sum_floor = v;
    }
    o
}

#[derive(Serialize)]
struct CertifiedInstance<'a> {
    name: &'a str,
    options: CertifyOptions,
    certificate: &'a Certificate,
}

fn certify(p: &GeneratorParams) -> RunResult {
    let insts = instances(p)?;
    let mut certs = Vec::new();
    let mut rows = Vec::new();
    for (m, inst) in insts.iter().enumerate() {
        let opts = options(inst, p);
        let c = debranges::chain::certify_indivisible_with(&inst.space, &inst.g, &inst.s, p.k, &opts).map_err(lib)?;
        // G-sum block sums, levels of member m offset by 100·m
        rows.extend(c.g_ell2_inv.block_sums.iter().enumerate().map(|(j, b)| (100 * m as i64 + j as i64, *b, 0.0)));
        certs.push((inst.name.clone(), opts, c));
    }
    let pass = certs.iter().all(|c| c.2.pass);
    let list: Vec<Value> = certs
        .iter()
        .map(|(name, opts, c)| to_value(&CertifiedInstance { name, options: *opts, certificate: c }))
        .collect();
    Ok(Outcome { result: json!({ "k": p.k, "certificates": list }), pass, rows })
}

#[derive(Serialize)]
struct InstanceSummary {
    name: String,
    support_points: usize,
    extents: (f64, f64),
    a: String,
    g: String,
    s: String,
    regularity: debranges::space::Regularity,
    regular: bool,
    s_term_exponent: Option<f64>,
    g_term_exponent: Option<f64>,
    type_of_g: Option<TypeEstimate>,
    /// |G(t)|/(dist(t, 𝒵_G)·envelope) over the support points where G ≠ 0.
    g_band: Option<Band>,
}

fn summary(inst: &Instance, g_envelope: Option<&dyn Fn(f64) -> f64>) -> InstanceSummary {
    let mu = inst.space.mu();
    let ymax = 4096f64.min(inst.g.window() / 4.0).max(256.0);
    let g_band = g_envelope.map(|env| {
        let pts: Vec<f64> = mu.support().to_vec();
        let gv = values_at(&inst.g, &pts);
        band(gv.iter().zip(&pts).filter(|(g, _)| **g != 0.0).map(|(g, t)| g / env(*t)))
    });
    let reg = inst.space.regularity().clone();
    InstanceSummary {
        name: inst.name.clone(),
        support_points: mu.len(),
        extents: mu.extents(),
        a: inst.space.a().describe(),
        g: inst.g.describe(),
        s: inst.s.describe(),
        regular: reg.is_regular(),
        regularity: reg,
        s_term_exponent: inst.s_term_exponent,
        g_term_exponent: inst.g_term_exponent,
        type_of_g: estimate_type(&inst.g, &dyadic_grid(64.0, ymax)).ok(),
        g_band,
    }
}

fn construct(p: &GeneratorParams) -> RunResult {
    let r = p.resolved();
    let mut extra = json!({});
    let summaries: Vec<InstanceSummary> = match r.generator {
        Generator::Thm1 => {
            let inst = thm1_instance(r.n).map_err(lib)?;
            vec![summary(&inst, Some(&|t: f64| (1.0 + t.abs()).powf(-0.5)))]
        }
        Generator::Thm2 => {
            let cfg = Thm2Config::equal_gaps(r.s_list.clone().expect("resolved"), r.n);
            let t = thm2_instance(&cfg).map_err(lib)?;
            extra = json!({ "intervals": cfg.intervals, "midpoints": cfg.midpoints() });
            t.members
                .iter()
                .enumerate()
                .map(|(k, m)| {
                    let e = (m.r - 2.0) / 3.0;
                    summary(&t.instance(k), Some(&move |x: f64| (1.0 + x.abs()).powf(e)))
                })
                .collect()
        }
        Generator::PowerWeight => vec![summary(&power_weight_instance(r.gamma.expect("validated"), r.k, r.n).map_err(lib)?, None)],
        Generator::PerturbedLattice => {
            let beta = r.beta.expect("validated");
            let inst = perturbed_lattice_instance(beta, r.n).map_err(lib)?;
            let sup = inst.space.mu().support();
            let ap = band(sup.iter().zip(inst.space.aprime()).map(|(t, a)| a * (1.0 + t.abs()).powf(beta)));
            extra = json!({ "aprime_band": ap });
            vec![summary(&inst, None)]
        }
        Generator::Lacunary => {
            let l = lacunary_instance(r.q.expect("resolved"), r.n, r.k_probe.expect("resolved")).map_err(lib)?;
            let passes: Vec<bool> = l.certificates.iter().map(|c| c.pass).collect();
            extra = json!({ "k_max": l.k_max, "probe_passes": passes });
            vec![summary(&l.instance, None)]
        }
    };
    let mut rows = Vec::new();
    let pass = summaries.iter().all(|s| s.regular && s.g_band.is_none_or(|b| b.ratio.is_finite()));
    // masses of the (shared) measure
    if let Ok(insts) = instances(&r).map(|v| v.into_iter().next()) {
        if let Some(inst) = insts {
            rows = inst.space.mu().masses().iter().enumerate().map(|(i, m)| (i as i64, *m, 0.0)).collect();
        }
    }
    Ok(Outcome { result: json!({ "instances": to_value(&summaries), "details": extra }), pass, rows })
}

fn run_atomize(p: &AtomizeParams) -> RunResult {
    let e = p.mass_exponent;
    let law = TailLaw::power(1.0, e, SupportLaw::Lattice { step: 1.0, offset: 0.0 });
    let mu = DiscreteMeasure::on_integers(p.n, |k| (1.0 + k.unsigned_abs() as f64).powf(e), Some(law)).map_err(lib)?;
    let avoidance = match &p.avoid {
        Some(ys) => Some(select_avoiding_u(&mu, ys, p.p).map_err(lib)?),
        None => None,
    };
    let u = avoidance.as_ref().map_or(p.u, |a| a.u);
    let rep = atomize(&mu, u, p.window).map_err(lib)?;
    let nu = rep.nu.masses();
    let interlaced = rep.roots.iter().enumerate().all(|(i, x)| {
        let n = (i as i64 + rep.first_index) as f64;
        n < *x && *x < n + 1.0
    });
    let mut defects = Vec::new();
    if p.isometry_trials > 0 {
        let space = SpaceModel::new(ProductModel::SinPi, mu.clone(), (e == 0.0).then_some((PI, 0.0))).map_err(lib)?;
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        let centre = p.n as usize;
        for _ in 0..p.isometry_trials {
            let len = rng.gen_range(1..=6);
            let entries = (0..len).map(|_| (centre + rng.gen_range(0..41) - 20, rng.gen_range(-1.0..1.0))).collect();
            let t = transport_coefficients(&space, &CoefficientVector { entries }, &rep).map_err(lib)?;
            defects.push(t.isometry_defect);
        }
    }
    let tol = 1e-12 * u.abs().max(1.0);
    let pass = interlaced
        && rep.residual <= tol
        && avoidance.as_ref().is_none_or(|a| a.verified)
        && defects.iter().all(|d| *d < p.isometry_tol);
    let rows = rep
        .roots
        .iter()
        .zip(nu)
        .enumerate()
        .map(|(i, (x, v))| (i as i64 + rep.first_index, *x, rep.residual * v))
        .collect();
    let result = json!({
        "u": u,
        "first_index": rep.first_index,
        "roots": rep.roots,
        "nu": nu,
        "residual": rep.residual,
        "interlaced": interlaced,
        "avoidance": avoidance.map(|a| to_value(&a)),
        "isometry_defects": defects,
    });
    Ok(Outcome { result, pass, rows })
}

fn ln_grid(lo: f64, hi: f64) -> Vec<f64> {
    dyadic_grid(lo, hi)
}

fn canonical(p: &CanonicalParams) -> RunResult {
    let h = PiecewiseHamiltonian::new(p.segments.clone()).map_err(lib)?;
    let grid = ln_grid(p.y_min, p.y_max);
    let kdb = kdb_type(&h);
    let indivisible = detect_indivisible(&h, p.tol);
    let check = cross_check_type(&h, &grid);
    let mut rows = Vec::new();
    for &y in &grid {
        let ((a, _), s) = debranges::canonical::monodromy_scaled(&h, Complex64::new(0.0, y));
        rows.push((y.log2().round() as i64, a.norm().ln() + s, 0.0));
    }
    let (numeric, pass) = match &check {
        Ok(c) => {
            let (lo, hi) = c.numeric.band;
            let close = (c.numeric.value - kdb).abs() <= p.type_tol * kdb.max(1.0) || (lo <= kdb && kdb <= hi);
            (Some(c.numeric), close)
        }
        Err(_) => (None, false),
    };
    let (a1, b1) = debranges::canonical::monodromy(&h, Complex64::new(1.0, 0.0));
    let result = json!({
        "length": h.length(),
        "kdb_type": kdb,
        "numeric_type": numeric,
        "numeric_error": check.err().map(|e| e.to_string()),
        "indivisible": indivisible,
        "monodromy_at_1": { "a": [a1.re, a1.im], "b": [b1.re, b1.im] },
    });
    Ok(Outcome { result, pass, rows })
}

fn model(spec: &ModelSpec) -> Result<ProductModel, String> {
    Ok(match spec {
        ModelSpec::Sin => ProductModel::SinPi,
        ModelSpec::Lattice { a, b } => ProductModel::canonical(SymmetricZeroSet::lattice(*a, *b).map_err(lib)?),
        ModelSpec::Thm1G => debranges::construct::thm1_g(),
        ModelSpec::ShiftedLattice { beta } => ProductModel::ShiftedLattice { beta: *beta },
        ModelSpec::Lacunary { q } => ProductModel::lacunary(*q).map_err(lib)?,
    })
}

fn type_estimate(p: &TypeParams) -> RunResult {
    let m = model(&p.model)?;
    let grid = ln_grid(p.y_min, p.y_max);
    let t = estimate_type(&m, &grid).map_err(lib)?;
    let mut rows = Vec::new();
    for &y in &grid {
        let e = eval_product(&m, Complex64::new(0.0, y), 1e-8).map_err(lib)?;
        rows.push((y.log2().round() as i64, e.ln_abs, e.error));
    }
    let pass = p.expected.is_none_or(|x| (t.value - x).abs() <= p.rel_tol * x.abs());
    Ok(Outcome { result: json!({ "model": m.describe(), "grid": grid, "type": t }), pass, rows })
}

fn diagnose_weight(p: &WeightParams) -> RunResult {
    let grid = WeightGrid { radius: p.radius, ht_levels: p.ht_levels };
    let w = p.weight;
    let d = weight_diagnostics(move |x| w.ln_w(x), &grid).map_err(lib)?;
    let rows = d.ht_samples.iter().enumerate().map(|(i, s)| (i as i64, s.2, 0.0)).collect();
    Ok(Outcome { result: to_value(&d), pass: d.verdict, rows })
}
