mod common;

use monosupport::graphs::{GcdGraph, TaylorGraph};
use monosupport::support::{analyze_support, membership_by_blocks, shortcut_full, SupportOracle};
use monosupport::{FieldPoint, FieldSpec, Membership, SamplingConfig, VarietyDescription};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> FieldPoint {
    let t = rng.gen_range(0..(1u64 << n));
    let coords: Vec<i64> = (0..n)
        .map(|i| if t & (1 << i) == 0 { 0 } else { rng.gen_range(1..=30) * if rng.gen_bool(0.5) { 1 } else { -1 } })
        .collect();
    FieldPoint::from_integers(FieldSpec::Rational, &coords)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn basis_vectors_follow_isolated_vertices(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_presentation(&mut rng, 6, 6, 3, None);
        let isolated = GcdGraph::build(&p).isolated_vertices();
        let oracle = SupportOracle::new(&p).unwrap();
        for i in 0..p.n() {
            let e = FieldPoint::basis_vector(FieldSpec::Rational, p.n(), i);
            let inside = oracle.membership(&e).unwrap().verdict == Membership::InVariety;
            prop_assert_eq!(inside, !isolated.contains(i), "{} e_{}", p.render(), i + 1);
        }
    }

    #[test]
    fn shortcut_means_every_point(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_presentation(&mut rng, 6, 6, 3, None);
        let g = GcdGraph::build(&p);
        let tg = TaylorGraph::build(&p).unwrap();
        if shortcut_full(&g, Some(&tg)).is_some() {
            let oracle = SupportOracle::new(&p).unwrap();
            for _ in 0..100 {
                let a = random_point(&mut rng, p.n());
                prop_assert_eq!(oracle.membership(&a).unwrap().verdict, Membership::InVariety);
            }
        }
    }

    #[test]
    fn description_matches_points(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_presentation(&mut rng, 5, 6, 3, None);
        let desc = analyze_support(&p, &SamplingConfig::default()).unwrap().description;
        let oracle = SupportOracle::new(&p).unwrap();
        for _ in 0..200 {
            let a = random_point(&mut rng, p.n());
            let inside = oracle.membership(&a).unwrap().verdict == Membership::InVariety;
            prop_assert_eq!(desc.contains(&a), Some(inside), "{} at {}: {}", p.render(), a, desc.render());
        }
    }

    #[test]
    fn blocks_multiply(seed in any::<u64>()) {
        // V of I + J in disjoint irreducibles is the product of the two varieties
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_presentation(&mut rng, 6, 6, 3, None);
        let oracle = SupportOracle::new(&p).unwrap();
        for _ in 0..30 {
            let a = random_point(&mut rng, p.n());
            prop_assert_eq!(membership_by_blocks(&p, &a).unwrap(), oracle.membership(&a).unwrap().verdict);
        }
    }
}

#[test]
fn origin_always_in_variety() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let p = common::random_presentation(&mut rng, 6, 6, 3, None);
        let zero = FieldPoint::zero(FieldSpec::Rational, p.n());
        assert_eq!(SupportOracle::new(&p).unwrap().membership(&zero).unwrap().verdict, Membership::InVariety);
        let d = analyze_support(&p, &SamplingConfig::default()).unwrap().description;
        assert_eq!(d.contains(&zero), Some(true));
        assert!(!matches!(d, VarietyDescription::Unresolved(_)) || p.n() > 5);
    }
}
