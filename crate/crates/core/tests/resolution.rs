mod common;

use common::*;
use equidim::lattice::{Monomial, SparsePoly, SparseSystem};
use equidim::resolution::{is_separating, GeometricResolution, Resolution};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn w0() -> Vec<Vec<BigRational>> {
    ints(&[&[1, -2, 1], &[1, 1, 1], &[1, 1, 2]])
}

fn w1() -> Vec<Vec<BigRational>> {
    ints(&[&[-3, 1, 1], &[1, 1, -1], &[1, -3, 1]])
}

#[test]
fn reference_resolutions_are_consistent() {
    for res in [rh0(), rh1(), rh2(), r1()] {
        assert!(res.is_consistent());
    }
}

#[test]
fn clean_against_three_lines() {
    let f = ejemplo2();
    assert_eq!(rh0().clean(&f).unwrap(), Resolution::Points(rh0()));
    assert_eq!(rh1().clean(&f).unwrap(), Resolution::Points(r1()));
    assert_eq!(rh2().clean(&f).unwrap(), Resolution::Empty);
    // string-level canonical form
    let Resolution::Points(c) = rh1().clean(&f).unwrap() else { panic!() };
    assert_eq!(c.q().to_strings(), vec!["0", "-8", "2", "1"]);
    assert_eq!(c.v()[0].to_strings(), vec!["-3", "1", "1/2"]);
    assert_eq!(c.q().to_string(), "u^3 + 2*u^2 - 8*u");
}

#[test]
fn clean_is_idempotent_and_divides() {
    let f = ejemplo2();
    let Resolution::Points(once) = rh1().clean(&f).unwrap() else { panic!() };
    assert_eq!(once.clean(&f).unwrap(), Resolution::Points(once.clone()));
    assert!(rh1().q().rem(once.q()).is_zero());
}

#[test]
fn zero_system_keeps_everything() {
    let zero = SparseSystem::new(3, vec![SparsePoly::zero(3)]).unwrap();
    assert_eq!(rh2().clean(&zero).unwrap(), Resolution::Points(rh2()));
}

#[test]
fn roots_give_witness_points() {
    assert_eq!(rh0().points_at(&[q(-2), q(4), q(5)]).unwrap(), w0());
    assert_eq!(r1().points_at(&[q(0), q(2), q(-4)]).unwrap(), w1());
}

#[test]
fn resolutions_from_points() {
    let ell = ell121();
    assert!(is_separating(&ell, &w0()));
    assert_eq!(GeometricResolution::from_points(&w0(), &ell).unwrap(), rh0());
    assert_eq!(GeometricResolution::from_points(&w1(), &ell).unwrap(), r1());
    let r = GeometricResolution::from_points(&w1(), &ell).unwrap();
    let back = r.points_at(&[q(0), q(2), q(-4)]).unwrap();
    assert_eq!(GeometricResolution::from_points(&back, &ell).unwrap(), r);
}

#[test]
fn kronecker_round_trips() {
    for res in [rh0(), rh1(), rh2(), r1()] {
        assert_eq!(GeometricResolution::from_kronecker(&res.to_kronecker(), res.ell()).unwrap(), res);
    }
}

/// Random rational points and a product of linear forms vanishing on a
/// chosen subset; cleaning must keep exactly that subset.
#[test]
fn clean_selects_exact_subsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=5);
        let pts: Vec<Vec<BigRational>> = (0..k)
            .map(|_| (0..n).map(|_| BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=3).into())).collect())
            .collect();
        let mut uniq = pts.clone();
        uniq.sort();
        uniq.dedup();
        let ell: Vec<BigRational> = (0..n).map(|_| q(rng.gen_range(-20..=20))).collect();
        if !is_separating(&ell, &uniq) {
            continue;
        }
        let res = GeometricResolution::from_points(&uniq, &ell).unwrap();
        let keep: Vec<bool> = uniq.iter().map(|_| rng.gen_bool(0.5)).collect();
        // Π over kept points of (ℓ·X − ℓ·p): vanishes exactly on kept points among uniq
        let mut prod = SparsePoly::from_terms(n, [(Monomial::zero(n), q(1))]).unwrap();
        for (p, _) in uniq.iter().zip(&keep).filter(|(_, &k)| k) {
            let c: BigRational = ell.iter().zip(p).map(|(a, b)| a * b).sum();
            let mut lin = SparsePoly::from_terms(
                n,
                (1..=n).map(|i| (Monomial::unit(n, i), ell[i - 1].clone())),
            )
            .unwrap();
            lin.add_term(Monomial::zero(n), -c).unwrap();
            prod = mul(&prod, &lin);
        }
        let f = SparseSystem::new(n, vec![prod]).unwrap();
        let expected: Vec<Vec<BigRational>> = uniq.iter().zip(&keep).filter(|(_, &k)| k).map(|(x, _)| x.clone()).collect();
        match res.clean(&f).unwrap() {
            Resolution::Empty => assert!(expected.is_empty()),
            Resolution::Points(c) => {
                assert_eq!(c, GeometricResolution::from_points(&expected, &ell).unwrap());
            }
        }
    }
}

fn mul(a: &equidim::lattice::RationalPoly, b: &equidim::lattice::RationalPoly) -> equidim::lattice::RationalPoly {
    let n = a.nvars();
    let mut out = SparsePoly::zero(n);
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            out.add_term(ma.checked_add(mb).unwrap(), ca * cb).unwrap();
        }
    }
    out
}
