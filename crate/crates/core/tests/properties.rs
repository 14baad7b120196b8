use num_bigint::BigInt;
use proptest::prelude::*;

use sarkisov_core::chamber::mori_decomposition;
use sarkisov_core::io::{parse_json, to_json, InputDocument};
use sarkisov_core::oracle::{brute_force_decomposition, decomposition_difference, verify_factorization};
use sarkisov_core::poly::rat::{self, QVector, Rat};
use sarkisov_core::sarkisov::{factor_in, FactorOptions};
use sarkisov_core::slice::discover_mfs;
use sarkisov_core::toric::{Fan, ToricVariety};

/// `F_a` blown up at the fixed points named by `picks`, each an index into
/// the current cyclic list of rays.
fn blown_up_surface(a: i64, picks: &[usize]) -> Fan {
    let mut rays: Vec<Vec<i64>> = vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]];
    for &p in picks {
        let i = p % rays.len();
        let j = (i + 1) % rays.len();
        let new = vec![rays[i][0] + rays[j][0], rays[i][1] + rays[j][1]];
        rays.insert(i + 1, new);
    }
    let n = rays.len();
    Fan::new(2, rays, (0..n).map(|i| vec![i, (i + 1) % n]).collect()).expect("smooth complete surface")
}

fn surface() -> impl Strategy<Value = Fan> {
    (0i64..3, prop::collection::vec(0usize..8, 0..3)).prop_map(|(a, picks)| blown_up_surface(a, &picks))
}

fn positive_combination(vs: &[QVector], weights: &[u32]) -> QVector {
    let dim = vs[0].len();
    vs.iter().zip(weights.iter().cycle()).fold(rat::zeros(dim), |acc, (v, &w)| {
        rat::add(&acc, &rat::scale(v, &Rat::from_integer(BigInt::from(w))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn engine_agrees_with_brute_force(fan in surface()) {
        let z = ToricVariety::new(&fan).unwrap();
        let engine = mori_decomposition(&z).unwrap();
        let oracle = brute_force_decomposition(&fan).unwrap();
        prop_assert!(decomposition_difference(&engine, &oracle).is_empty());
    }

    #[test]
    fn located_cells_carry_the_ample_model(fan in surface(), weights in prop::collection::vec(0u32..4, 1..6)) {
        let z = ToricVariety::new(&fan).unwrap();
        let d = mori_decomposition(&z).unwrap();
        let theta = positive_combination(&z.ray_classes, &weights);
        prop_assume!(!rat::is_zero(&theta));
        let cell = d.locate(&theta).unwrap();
        prop_assert_eq!(&cell.model, &z.ample_model(&theta).unwrap());
        prop_assert!(cell.region.contains_relint(&theta));
    }

    #[test]
    fn input_documents_round_trip(fan in surface(), seed in any::<u64>()) {
        let mut doc = InputDocument::from_fan(fan);
        doc.seed = Some(seed);
        let back: InputDocument = parse_json(&to_json(&doc)).unwrap();
        prop_assert_eq!(back, doc);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn factorisations_verify_and_ignore_the_seed(fan in surface(), pick in any::<(usize, usize)>(), seeds in any::<(u64, u64)>()) {
        let z = ToricVariety::new(&fan).unwrap();
        let d = mori_decomposition(&z).unwrap();
        let mfs = discover_mfs(&d);
        let (a, b) = (&mfs[pick.0 % mfs.len()], &mfs[pick.1 % mfs.len()]);
        prop_assume!(a != b);
        let f = factor_in(&d, a, b, seeds.0, &FactorOptions::default()).unwrap();
        let report = verify_factorization(&f);
        prop_assert!(report.passed, "{:?}", report.failures().collect::<Vec<_>>());
        let g = factor_in(&d, a, b, seeds.1, &FactorOptions::default()).unwrap();
        prop_assert_eq!(f.link_types(), g.link_types());
    }
}
