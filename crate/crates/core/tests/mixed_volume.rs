mod common;

use common::*;
use equidim::lattice::{hall_condition, simplex_delta, Monomial, SupportSet};
use equidim::oracle::mixed_volume_oracle;
use equidim::subdivision::{
    mixed_volume, mixed_volume_with, random_lifting, random_subdivision, stable_mixed_volume, MixedVolumeOptions,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn with_origin(a: &[SupportSet]) -> Vec<SupportSet> {
    let n = a[0].dim();
    a.iter().map(|s| s.union(&SupportSet::new(n, [Monomial::zero(n)]).unwrap()).unwrap()).collect()
}

#[test]
fn worked_example_volumes() {
    let e1 = ejemplo1([1; 6]).supports();
    assert_eq!(mixed_volume(&e1).unwrap(), 1);
    assert_eq!(mixed_volume(&with_origin(&e1)).unwrap(), 4);
    assert_eq!(mixed_volume_oracle(&with_origin(&e1)).unwrap(), 4);
    assert_eq!(mixed_volume(&ejemplo2().supports()).unwrap(), 2);
    assert_eq!(mixed_volume(&genericdecomp_supports()).unwrap(), 19);
}

#[test]
fn seeds_change_cells_not_volume() {
    let a = ejemplo2().supports();
    for seed in [1u64, 2, 3, 99] {
        let opts = MixedVolumeOptions { seed, ..Default::default() };
        assert_eq!(random_subdivision(&a, &opts).unwrap().mixed_volume(), 2);
    }
    assert_ne!(random_lifting(&a, 1, 1 << 20).unwrap(), random_lifting(&a, 2, 1 << 20).unwrap());
}

#[test]
fn bilinear_matches_oracle() {
    let b = rows(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
    let a = vec![b.clone(), b];
    assert_eq!(mixed_volume(&a).unwrap(), 2);
    assert_eq!(mixed_volume_oracle(&a).unwrap(), 2);
}

#[test]
fn oracle_agrees_on_random_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..40 {
        let n = 1 + trial % 3;
        let a = random_family(&mut rng, n, 6, 4);
        let oracle = mixed_volume_oracle(&a).unwrap();
        for seed in [11u64, 12, 13] {
            let opts = MixedVolumeOptions { seed, ..Default::default() };
            assert_eq!(mixed_volume_with(&a, &opts).unwrap(), oracle, "family {a:?}");
        }
        assert_eq!(oracle == 0, !hall_condition(&a), "zero criterion on {a:?}");
    }
}

#[test]
fn stable_volume_is_sandwiched() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..15 {
        let n = 1 + trial % 3;
        let a = random_family(&mut rng, n, 4, 3);
        let mv = mixed_volume(&a).unwrap();
        let sm = stable_mixed_volume(&a).unwrap();
        let mv0 = mixed_volume(&with_origin(&a)).unwrap();
        assert!(mv <= sm && sm <= mv0, "{mv} {sm} {mv0} for {a:?}");
        if a.iter().all(SupportSet::contains_origin) {
            assert_eq!(sm, mv);
        }
    }
}

#[test]
fn multilinear_on_segments() {
    // [0, e1] ⊕ [0, 2 e1] = [0, 3 e1]; second support a generic triangle
    let s1 = rows(2, &[&[0, 0], &[1, 0]]);
    let s2 = rows(2, &[&[0, 0], &[2, 0]]);
    let s3 = rows(2, &[&[0, 0], &[3, 0]]);
    let t = rows(2, &[&[0, 0], &[1, 2], &[0, 3]]);
    let lhs = mixed_volume(&[s3, t.clone()]).unwrap();
    assert_eq!(lhs, mixed_volume(&[s1, t.clone()]).unwrap() + mixed_volume(&[s2, t]).unwrap());
}

#[test]
fn simplices_normalize_to_one() {
    for n in 1..=5 {
        assert_eq!(mixed_volume(&vec![simplex_delta(n).unwrap(); n]).unwrap(), 1);
    }
}

fn family(n: usize) -> impl Strategy<Value = Vec<SupportSet>> {
    let point = proptest::collection::vec(0u32..4, n);
    let support = proptest::collection::btree_set(point, 1..5)
        .prop_map(move |s| SupportSet::new(n, s.into_iter().map(Monomial::new)).unwrap());
    proptest::collection::vec(support, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn permutation_invariant(a in family(3)) {
        let mut b = a.clone();
        b.rotate_left(1);
        prop_assert_eq!(mixed_volume(&a).unwrap(), mixed_volume(&b).unwrap());
    }

    #[test]
    fn translation_invariant(a in family(3), shift in proptest::collection::vec(0u32..3, 3)) {
        let mut b = a.clone();
        b[0] = SupportSet::new(3, a[0].iter().map(|p| p.checked_add(&Monomial::new(shift.clone())).unwrap())).unwrap();
        prop_assert_eq!(mixed_volume(&a).unwrap(), mixed_volume(&b).unwrap());
    }

    #[test]
    fn monotone_under_inclusion(a in family(2), extra in family(2)) {
        let b: Vec<SupportSet> = a.iter().zip(&extra).map(|(x, y)| x.union(y).unwrap()).collect();
        prop_assert!(mixed_volume(&a).unwrap() <= mixed_volume(&b).unwrap());
    }
}
