use debranges::chain::Certificate;
use debranges::construct::*;
use debranges::entire::{dyadic_grid, estimate_type};
use debranges::Error;
use std::f64::consts::PI;

fn summary(c: &Certificate) -> String {
    format!(
        "checks {:?}; S {:?} {:?}; G {:?} {:?}",
        c.checks, c.s_ell2.verdict, c.s_ell2.fitted_exponent, c.g_ell2_inv.verdict, c.g_ell2_inv.fitted_exponent
    )
}

#[test]
fn thm2_three_types() {
    let cfg = Thm2Config::equal_gaps(vec![0.3, 0.5, 0.7], 10_000);
    let inst = thm2_instance(&cfg).unwrap();
    assert!(inst.space.regularity().is_regular());
    let n = cfg.window;
    let grid = dyadic_grid(64.0, 2048.0);
    let mut last_type = 0.0;
    for (k, m) in inst.members.iter().enumerate() {
        // nesting
        if k > 0 {
            let prev = &inst.members[k - 1].lambda;
            for t in prev.positive_up_to(n as f64) {
                assert!(m.lambda.contains(t), "{t} in Λ_{k} but not Λ_{}", k + 1);
            }
        }
        let ints: Vec<f64> = (1..=n).map(|j| j as f64).collect();
        let (on, off): (Vec<f64>, Vec<f64>) = ints.iter().partition(|t| m.lambda.contains(**t));
        let gv = values_at(&m.g, &off);
        let bg = band(gv.iter().zip(&off).map(|(g, t)| g * (1.0 + t).powf((2.0 - m.r) / 3.0)));
        let sv = values_at(&m.s_fn, &on);
        let bs = band(sv.iter().zip(&on).map(|(s, t)| s * (1.0 + t).powf((m.r + 1.0) / 3.0)));
        // no drift across the last two decades, and a bounded overall spread
        let decade = |xs: &[f64], vs: &[f64], p: f64, lo: f64| {
            band(xs.iter().zip(vs).filter(|(t, _)| **t >= lo && **t < 10.0 * lo).map(|(t, v)| v * (1.0 + t).powf(p)))
        };
        for (xs, vs, p) in [(&off, &gv, (2.0 - m.r) / 3.0), (&on, &sv, (m.r + 1.0) / 3.0)] {
            let (a, b) = (decade(xs, vs, p, 100.0), decade(xs, vs, p, 1000.0));
            assert!(b.max < 1.5 * a.max && b.min > a.min / 1.5, "s={} drift {a:?} {b:?}", m.s);
        }
        assert!(bg.ratio < 100.0 && bs.ratio < 100.0, "s={} G {bg:?} S {bs:?}", m.s);
        let ty = estimate_type(&m.g, &grid).unwrap().value;
        assert!((ty / (PI * m.s) - 1.0).abs() < 0.1, "s={} type {ty}", m.s);
        let c = inst.instance(k).certify(1).unwrap();
        assert!(c.pass, "s={} {}", m.s, summary(&c));
        assert!(ty > last_type);
        last_type = ty;
    }
}

#[test]
fn power_weight_examples() {
    for (gamma, k) in [(0.0, 1), (1.0, 2), (0.5, 1)] {
        let inst = power_weight_instance(gamma, k, 4096).unwrap();
        assert!(inst.space.regularity().is_regular());
        let c = inst.certify(k).unwrap();
        assert!(c.pass, "gamma={gamma} k={k}: {}", summary(&c));
    }
    assert!(matches!(power_weight_instance(0.0, 2, 4096), Err(Error::Infeasible(_))));
}

#[test]
fn perturbed_lattice_one_interval_only() {
    let beta = 0.5;
    let inst = perturbed_lattice_instance(beta, 4096).unwrap();
    assert!(inst.space.regularity().is_regular());
    let sup = inst.space.mu().support().to_vec();
    let ap: Vec<f64> = sup.iter().zip(inst.space.aprime()).map(|(&t, a)| a.abs() * (1.0 + t.abs()).powf(beta)).collect();
    let b = band(ap);
    assert!(b.ratio < 20.0, "{b:?}");
    let c1 = inst.certify(1).unwrap();
    assert!(c1.pass, "{}", summary(&c1));
    let c2 = inst.certify(2).unwrap();
    assert!(!c2.pass);
    assert!(perturbed_lattice_instance(1.0, 4096).is_err());
    assert!(perturbed_lattice_instance(0.0, 4096).is_err());
}

#[test]
fn lacunary_contiguous_intervals() {
    let l = lacunary_instance(2.0, 4096, 3).unwrap();
    assert!(l.instance.space.regularity().is_regular());
    assert!(l.k_max >= 2, "k_max {}", l.k_max);
}

#[test]
fn thm2_builds_at_any_window() {
    // the previous stage's continuation may start inside the next window
    for n in [1000, 2048, 4096, 5000] {
        let cfg = Thm2Config::equal_gaps(vec![0.3, 0.5, 0.7], n);
        let inst = thm2_instance(&cfg).unwrap();
        for w in inst.members.windows(2) {
            for t in w[0].lambda.positive().stored() {
                assert!(w[1].lambda.contains(*t), "N={n}: {t}");
            }
        }
    }
}
