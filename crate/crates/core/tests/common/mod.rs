#![allow(dead_code)]

use equidim::combinatorics::SpecialSetEntry;
use equidim::lattice::{specialize_supports, IndexSet, Monomial, RationalPoly, RationalSystem, SparsePoly, SparseSystem, SupportSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn poly(n: usize, terms: &[(&[u32], i64)]) -> RationalPoly {
    SparsePoly::from_terms(n, terms.iter().map(|(e, c)| (Monomial::new(e.to_vec()), q(*c)))).unwrap()
}

pub fn rows(n: usize, r: &[&[u32]]) -> SupportSet {
    SupportSet::from_rows(n, r).unwrap()
}

/// `a X1X2X3² + b X1X2X3, c X1²X3 + d X1X3, e X2²X3 + f X2X3`.
pub fn ejemplo1(c: [i64; 6]) -> RationalSystem {
    SparseSystem::new(
        3,
        vec![
            poly(3, &[(&[1, 1, 2], c[0]), (&[1, 1, 1], c[1])]),
            poly(3, &[(&[2, 0, 1], c[2]), (&[1, 0, 1], c[3])]),
            poly(3, &[(&[0, 2, 1], c[4]), (&[0, 1, 1], c[5])]),
        ],
    )
    .unwrap()
}

/// Three lines: `(X1−1)(X2−1), (X1−1)(X3−1), (X2−1)(X3−1)`.
pub fn ejemplo2() -> RationalSystem {
    SparseSystem::new(
        3,
        vec![
            poly(3, &[(&[1, 1, 0], 1), (&[1, 0, 0], -1), (&[0, 1, 0], -1), (&[0, 0, 0], 1)]),
            poly(3, &[(&[1, 0, 1], 1), (&[1, 0, 0], -1), (&[0, 0, 1], -1), (&[0, 0, 0], 1)]),
            poly(3, &[(&[0, 1, 1], 1), (&[0, 1, 0], -1), (&[0, 0, 1], -1), (&[0, 0, 0], 1)]),
        ],
    )
    .unwrap()
}

pub const GENERICDECOMP_TERMS: [&[[u32; 4]]; 4] = [
    &[[1, 0, 0, 1], [2, 0, 0, 2], [1, 1, 1, 0], [0, 1, 1, 0]],
    &[[1, 1, 0, 0], [1, 2, 0, 0], [1, 0, 1, 1], [0, 0, 1, 1], [0, 0, 1, 2]],
    &[[1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 0], [0, 1, 1, 1]],
    &[[1, 0, 0, 0], [2, 0, 0, 0], [1, 1, 0, 0], [0, 0, 2, 0], [0, 0, 1, 1]],
];

/// The four-variable system with coefficients drawn from `±[1, bound]`.
pub fn genericdecomp(seed: u64, bound: i64) -> RationalSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys = GENERICDECOMP_TERMS
        .iter()
        .map(|terms| {
            SparsePoly::from_terms(
                4,
                terms.iter().map(|e| {
                    let mut c = rng.gen_range(1..=bound);
                    if rng.gen_bool(0.5) {
                        c = -c;
                    }
                    (Monomial::new(e.to_vec()), q(c))
                }),
            )
            .unwrap()
        })
        .collect();
    SparseSystem::new(4, polys).unwrap()
}

pub fn genericdecomp_supports() -> Vec<SupportSet> {
    GENERICDECOMP_TERMS
        .iter()
        .map(|t| SupportSet::new(4, t.iter().map(|e| Monomial::new(e.to_vec()))).unwrap())
        .collect()
}

/// `n` random supports with `1..=max_points` points and exponents `< max_exp`.
pub fn random_family(rng: &mut ChaCha8Rng, n: usize, max_points: usize, max_exp: u32) -> Vec<SupportSet> {
    (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=max_points);
            SupportSet::new(n, (0..k).map(|_| Monomial::new((0..n).map(|_| rng.gen_range(0..max_exp)).collect()))).unwrap()
        })
        .collect()
}

/// Polynomial with the given support and random nonzero integer coefficients.
pub fn random_system(rng: &mut ChaCha8Rng, supports: &[SupportSet], bound: i64) -> RationalSystem {
    let n = supports[0].dim();
    let polys = supports
        .iter()
        .map(|a| {
            SparsePoly::from_terms(
                n,
                a.iter().map(|m| {
                    let c = rng.gen_range(1..=bound) * if rng.gen_bool(0.5) { 1 } else { -1 };
                    (m.clone(), q(c))
                }),
            )
            .unwrap()
        })
        .collect();
    SparseSystem::new(n, polys).unwrap()
}

pub fn r(s: &str) -> BigRational {
    s.parse().unwrap()
}

pub fn upoly(c: &[&str]) -> equidim::unipoly::UniPoly {
    equidim::unipoly::UniPoly::new(c.iter().map(|x| r(x)).collect())
}

pub fn ell121() -> Vec<BigRational> {
    vec![q(1), q(2), q(1)]
}

/// Reference resolution of the isolated roots of `h^(0) = f`; also the
/// cleaned `R^(0)`.
pub fn rh0() -> equidim::resolution::GeometricResolution {
    equidim::resolution::GeometricResolution::new(
        ell121(),
        upoly(&["40", "2", "-7", "1"]),
        vec![upoly(&["1"]), upoly(&["-3/7", "9/14", "-1/14"]), upoly(&["-1/7", "-2/7", "1/7"])],
    )
    .unwrap()
}

pub fn rh1() -> equidim::resolution::GeometricResolution {
    equidim::resolution::GeometricResolution::new(
        ell121(),
        upoly(&["0", "-64", "68", "-13", "-9/2", "1"]),
        vec![
            upoly(&["-3", "647/50", "-953/200", "-369/400", "57/200"]),
            upoly(&["1", "-2599/150", "1567/200", "1573/1200", "-269/600"]),
            upoly(&["1", "3407/150", "-2181/200", "-2039/1200", "367/600"]),
        ],
    )
    .unwrap()
}

pub fn rh2() -> equidim::resolution::GeometricResolution {
    equidim::resolution::GeometricResolution::new(
        ell121(),
        upoly(&["-769/18", "679/6", "538/9", "-1549/9", "49/2", "1"]),
        vec![
            upoly(&["-7719426/1803049", "3986650/1803049", "15987545/1803049", "-2537721/1803049", "-101214/1803049"]),
            upoly(&["8036523/9015245", "5343077/9015245", "-11347628/9015245", "277533/1803049", "58338/9015245"]),
            upoly(&["22524084/9015245", "-21604159/9015245", "-57242469/9015245", "1982655/1803049", "389394/9015245"]),
        ],
    )
    .unwrap()
}

pub fn r1() -> equidim::resolution::GeometricResolution {
    equidim::resolution::GeometricResolution::new(
        ell121(),
        upoly(&["0", "-8", "2", "1"]),
        vec![upoly(&["-3", "1", "1/2"]), upoly(&["1", "1/3", "-1/6"]), upoly(&["1", "-2/3", "-1/6"])],
    )
    .unwrap()
}

pub fn ints(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect()
}

pub type C = num_complex::Complex64;

/// A fixed generic system `g` supported on the ejemplo2 supports ∪ Δ.
pub fn three_lines_start() -> RationalSystem {
    SparseSystem::new(
        3,
        vec![
            poly(3, &[(&[1, 1, 0], 2), (&[1, 0, 0], -2), (&[0, 1, 0], 1), (&[0, 0, 1], -1), (&[0, 0, 0], 1)]),
            poly(3, &[(&[1, 0, 1], 1), (&[1, 0, 0], -1), (&[0, 1, 0], 2), (&[0, 0, 1], 2), (&[0, 0, 0], 2)]),
            poly(3, &[(&[0, 1, 1], 1), (&[1, 0, 0], 1), (&[0, 1, 0], -2), (&[0, 0, 1], 1), (&[0, 0, 0], -1)]),
        ],
    )
    .unwrap()
}

pub fn w0_f64() -> Vec<[f64; 3]> {
    vec![[1.0, -2.0, 1.0], [1.0, 1.0, 1.0], [1.0, 1.0, 2.0]]
}

/// All exponent vectors of total degree `≤ d` in `n` variables.
pub fn dense(n: usize, d: u32) -> SupportSet {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() == n {
            out.push(Monomial::new(prefix.clone()));
            return;
        }
        for e in 0..=d {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    SupportSet::new(n, out).unwrap()
}

/// Support families for root-count checks: bilinear pair, dense plane
/// quadrics, dense space quadrics.
pub fn bkk_families() -> Vec<(&'static str, Vec<SupportSet>)> {
    let bilinear = rows(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
    vec![
        ("bilinear", vec![bilinear.clone(), bilinear]),
        ("plane quadrics", vec![dense(2, 2), dense(2, 2)]),
        ("space quadrics", vec![dense(3, 2), dense(3, 2), dense(3, 2)]),
    ]
}

/// Eigenvalues of the companion matrix of a monic polynomial, coefficients
/// low to high.
pub fn companion_roots(q: &[C]) -> Vec<C> {
    let d = q.len() - 1;
    let mut m = nalgebra::DMatrix::<C>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = C::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -q[i] / q[d];
    }
    m.schur().eigenvalues().expect("complex Schur form").iter().copied().collect()
}

/// Resultant of two plane polynomials with respect to `X2`, as an exact
/// polynomial in `X1` (Sylvester matrix, fraction-free elimination).
pub fn sylvester_resultant(f1: &RationalPoly, f2: &RationalPoly) -> equidim::unipoly::UniPoly {
    use equidim::unipoly::UniPoly;
    let in_y = |f: &RationalPoly| -> Vec<UniPoly> {
        let d = f.terms().map(|(m, _)| m.exponents()[1]).max().unwrap() as usize;
        let mut out = vec![UniPoly::zero(); d + 1];
        for (m, c) in f.terms() {
            let (i, k) = (m.exponents()[0] as usize, m.exponents()[1] as usize);
            let mut coeffs = vec![q(0); i + 1];
            coeffs[i] = c.clone();
            out[k] = &out[k] + &UniPoly::new(coeffs);
        }
        out
    };
    let (a, b) = (in_y(f1), in_y(f2));
    let (da, db) = (a.len() - 1, b.len() - 1);
    let size = da + db;
    let mut mat = vec![vec![UniPoly::zero(); size]; size];
    for r in 0..db {
        for (k, c) in a.iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..da {
        for (k, c) in b.iter().rev().enumerate() {
            mat[db + r][r + k] = c.clone();
        }
    }
    // Bareiss over Q[x]
    let mut sign = 1i64;
    let mut prev = UniPoly::one();
    for k in 0..size {
        let Some(p) = (k..size).find(|&r| !mat[r][k].is_zero()) else { return UniPoly::zero() };
        if p != k {
            mat.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                let (quot, rem) = num.div_rem(&prev);
                assert!(rem.is_zero());
                mat[i][j] = quot;
            }
            mat[i][k] = UniPoly::zero();
        }
        prev = mat[k][k].clone();
    }
    mat[size - 1][size - 1].scale(&q(sign))
}

/// `f_i = X_i · L_i` with `L_i` affine: support `{e_i} ∪ {e_i + e_l}`.
pub fn example7(n: usize) -> Vec<SupportSet> {
    (1..=n)
        .map(|i| {
            let ei = Monomial::unit(n, i);
            let pts = std::iter::once(ei.clone()).chain((1..=n).map(|l| ei.checked_add(&Monomial::unit(n, l)).unwrap()));
            SupportSet::new(n, pts).unwrap()
        })
        .collect()
}

/// `2n` polynomials in `2n` variables supported on `{e_{2k−1} + e_{2k}}`.
pub fn quadratic_pairs(n: usize) -> Vec<SupportSet> {
    let m = 2 * n;
    let a = SupportSet::new(
        m,
        (1..=n).map(|k| Monomial::unit(m, 2 * k - 1).checked_add(&Monomial::unit(m, 2 * k)).unwrap()),
    )
    .unwrap();
    vec![a; m]
}

/// Every support contains a pure power `d·e_i` of every variable, with
/// `d = 0` (the constant term) allowed for the first variable.
pub fn coordinate_powers(rng: &mut ChaCha8Rng, n: usize, with_constant: bool) -> Vec<SupportSet> {
    (0..n)
        .map(|_| {
            let mut pts: Vec<Monomial> = (1..=n)
                .map(|i| {
                    let mut e = vec![0; n];
                    e[i - 1] = if with_constant && i == 1 { 0 } else { rng.gen_range(1..4) };
                    Monomial::new(e)
                })
                .collect();
            pts.extend((0..2).map(|_| Monomial::new((0..n).map(|_| rng.gen_range(1..3)).collect())));
            SupportSet::new(n, pts).unwrap()
        })
        .collect()
}

pub fn brute_special_sets(a: &[SupportSet]) -> Vec<SpecialSetEntry> {
    let n = a[0].dim();
    let size = |mask: u64| {
        let i = IndexSet::from_mask(n, mask);
        mask.count_ones() as usize + specialize_supports(a, &i).0.len()
    };
    let mut out = Vec::new();
    for mask in 0u64..(1 << n) {
        let v = size(mask);
        let mut minimal = v <= n;
        let mut sub = mask;
        while minimal && sub != 0 {
            sub = (sub - 1) & mask;
            minimal = size(sub) >= v;
        }
        if minimal {
            let i = IndexSet::from_mask(n, mask);
            out.push(SpecialSetEntry { surviving: specialize_supports(a, &i).0, index_set: i });
        }
    }
    out.sort_by(|x, y| (x.index_set.len(), x.index_set.as_slice()).cmp(&(y.index_set.len(), y.index_set.as_slice())));
    out
}
