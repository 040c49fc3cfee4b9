use debranges::chain::{certify_indivisible_with, residues, CertifyOptions};
use debranges::construct::thm1_instance;
use debranges::entire::{EvalPolicy, ProductModel};
use debranges::measure::{block_exponent, check_mu1, weighted_l2_sum, DiscreteMeasure, SupportLaw, TailLaw, Verdict};
use debranges::space::{dualize_with, eval_member, CoefficientVector, SpaceModel};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mu1_verdict_is_stable_under_window_growth(e in -2.5f64..1.5, n in 64i64..512) {
        let law = TailLaw::power(1.0, e, SupportLaw::Lattice { step: 1.0, offset: 0.0 });
        let mass = |k: i64| (1.0 + (k as f64).abs()).powf(e);
        let small = check_mu1(&DiscreteMeasure::on_integers(n, mass, Some(law.clone())).unwrap()).unwrap();
        let large = check_mu1(&DiscreteMeasure::on_integers(4 * n, mass, Some(law)).unwrap()).unwrap();
        if small.verdict == Verdict::Convergent {
            prop_assert_eq!(large.verdict, Verdict::Convergent);
        }
    }

    #[test]
    fn constant_values_give_scaled_mass_sum(c in -3.0f64..3.0, n in 1i64..200) {
        let mu = DiscreteMeasure::finite((-n..=n).map(|k| k as f64).collect(), (-n..=n).map(|k| 1.0 / (1 + k.abs()) as f64).collect()).unwrap();
        let s = weighted_l2_sum(|_| c, &mu, 1, None);
        let mut want = 0.0;
        for i in mu.symmetric_order() {
            want += c * c * mu.masses()[i];
        }
        prop_assert!((s.partial_sum - want).abs() <= 1e-13 * want.max(1e-300));
    }

    #[test]
    fn block_exponent_is_exact_on_power_data(q in -3.0f64..3.0, first in 0i32..8, len in 4usize..12) {
        let blocks: Vec<f64> = (0..len).map(|i| 3.0 * 2f64.powf(q * (first as f64 + i as f64 + 0.5))).collect();
        let e = block_exponent(&blocks, first).unwrap();
        prop_assert!((e.value - q).abs() < 1e-6);
    }

    #[test]
    fn node_values_reproduce_coefficients(i in 0usize..41, c in -2.0f64..2.0, j in 0usize..41) {
        let mu = DiscreteMeasure::on_integers(20, |k| 1.0 + 0.1 * k as f64 * k as f64, None).unwrap();
        let space = SpaceModel::new(ProductModel::SinPi, mu, None).unwrap();
        let a = CoefficientVector { entries: vec![(i, c), (j, 0.5)] };
        for (k, t) in space.mu().support().iter().enumerate() {
            let f = eval_member(&space, &a, Complex64::new(*t, 0.0)).unwrap().re;
            let want = a.get(k) * space.mu().masses()[k].sqrt() * space.aprime()[k];
            prop_assert!((f - want).abs() <= 1e-14 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn dualize_is_an_involution(seed in prop::collection::vec(0.01f64..100.0, 21)) {
        let nu = DiscreteMeasure::on_integers(10, |k| seed[(k + 10) as usize], None).unwrap();
        let aprime: Vec<f64> = (-10..=10).map(|k| if k % 2 == 0 { PI } else { -PI }).collect();
        let back = dualize_with(&dualize_with(&nu, &aprime, None).unwrap(), &aprime, None).unwrap();
        for (x, y) in nu.masses().iter().zip(back.masses()) {
            prop_assert!((x - y).abs() <= 4.0 * f64::EPSILON * x);
        }
    }
}

#[test]
fn certificate_is_scale_invariant() {
    let inst = thm1_instance(1024).unwrap();
    let g2 = ProductModel::compose(vec![(inst.g.clone(), 1)], vec![], 2.0);
    let s2 = ProductModel::compose(vec![(inst.s.clone(), 1)], vec![], 0.5);
    for k in [1, 2] {
        let opts = inst.options(k);
        let a = certify_indivisible_with(&inst.space, &inst.g, &inst.s, k, &opts).unwrap();
        let b = certify_indivisible_with(&inst.space, &g2, &s2, k, &opts).unwrap();
        let verdicts = |c: &debranges::chain::Certificate| c.checks.iter().map(|c| c.pass).collect::<Vec<_>>();
        assert_eq!(verdicts(&a), verdicts(&b));
        assert_eq!(a.pass, b.pass);
        assert_eq!(a.residues_c.nonzero, b.residues_c.nonzero);
    }
}

#[test]
fn residues_match_the_limit_form() {
    // c_n against (t − t_n)G(t)S(t)/A(t) at t = t_n + h, extrapolated in h
    let inst = thm1_instance(200).unwrap();
    let c = residues(&inst.space, &inst.g, &inst.s).unwrap();
    let pol = EvalPolicy::default();
    let val = |m: &ProductModel, x: f64| m.reduced(Complex64::new(x, 0.0), &pol).0.at_point().value().re;
    let q = |t: f64| val(&inst.g, t) * val(&inst.s, t) / val(inst.space.a(), t);
    for (i, t) in inst.space.mu().support().iter().enumerate().filter(|(_, t)| t.abs() <= 12.0) {
        let h = 1e-4;
        let r1 = h * q(t + h);
        let r2 = 0.5 * h * q(t + 0.5 * h);
        let lim = 2.0 * r2 - r1;
        assert!((lim - c[i]).abs() < 1e-8, "t={t}: {lim} vs {}", c[i]);
    }
}

#[test]
fn degenerate_pair_fails_with_zero_sum() {
    let inst = thm1_instance(200).unwrap();
    let zero = ProductModel::compose(vec![], vec![], 0.0);
    let c = certify_indivisible_with(&inst.space, &zero, &zero, 1, &CertifyOptions::default()).unwrap();
    assert!(!c.pass);
    assert_eq!(c.residues_c.sum, 0.0);
}
