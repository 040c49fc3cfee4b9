//! Entire functions of exponential type given by their real zeros.

pub mod asymptotics;
pub mod growth;
pub mod interleave;
pub mod product;
pub mod scaled;
pub mod zeros;

pub use asymptotics::{
    band_ratio, counting_function, floor_integral, log_grid, psi_lambda, psi_profile, verify_dfs1_band,
    verify_strong_asymptotics, BandCheck, BandConvention, StrongAsymptotics,
};
pub use growth::{dyadic_grid, estimate_type, type_from_samples, TypeEstimate};
pub use interleave::{interleave, InterleaveOptions};
pub use product::{derivative_at_zero, eval_product, eval_with, EvalPolicy, Evaluation, ProductModel};
pub use scaled::{Reduced, Scaled};
pub use zeros::{Continuation, SymmetricZeroSet};

#[cfg(test)]
mod props {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn models() -> Vec<ProductModel> {
        vec![
            ProductModel::SinPi,
            ProductModel::canonical(SymmetricZeroSet::integers()),
            ProductModel::canonical(SymmetricZeroSet::lattice(0.5, 0.1).unwrap()),
            ProductModel::ShiftedLattice { beta: 0.5 },
            ProductModel::lacunary(2.0).unwrap(),
            ProductModel::canonical(
                SymmetricZeroSet::general(vec![], vec![], Some((0.5, 0.5)), Some((0.5, 0.0))).unwrap(),
            ),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn conjugate_symmetry(re in -20.0f64..20.0, im in -20.0f64..20.0) {
            let z = Complex64::new(re, im);
            for m in models() {
                let a = eval_product(&m, z, 1e-8).unwrap();
                let b = eval_product(&m, z.conj(), 1e-8).unwrap();
                let d = (a.reduced.lead.mant - b.reduced.lead.mant.conj()).norm()
                    + (a.reduced.lead.scale - b.reduced.lead.scale).abs();
                prop_assert!(d < 1e-10, "{}: {:?} {:?}", m.describe(), a, b);
            }
        }

        #[test]
        fn real_on_the_real_line(x in -20.0f64..20.0) {
            for m in models() {
                let a = eval_product(&m, Complex64::new(x, 0.0), 1e-8).unwrap();
                prop_assert_eq!(a.value.im, 0.0);
            }
        }

        #[test]
        fn sine_matches_analytic(re in -20.0f64..20.0, im in -14.0f64..14.0) {
            let z = Complex64::new(re, im);
            let want = (z * std::f64::consts::PI).sin();
            let got = eval_product(&ProductModel::SinPi, z, 1e-12).unwrap().value;
            prop_assert!((got - want).norm() <= 1e-13 * want.norm().max(1.0));
        }

        #[test]
        fn integers_match_sinc(re in -20.0f64..20.0, im in -14.0f64..14.0) {
            let z = Complex64::new(re, im);
            prop_assume!((re - re.round()).abs() >= 0.1 || im.abs() >= 0.1);
            let pi = std::f64::consts::PI;
            let want = (z * pi).sin() / (z * pi);
            let got = eval_product(&ProductModel::canonical(SymmetricZeroSet::integers()), z, 1e-12).unwrap().value;
            prop_assert!((got - want).norm() <= 1e-12 * want.norm());
        }
    }
}
