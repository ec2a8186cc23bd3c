//! Supports, sparse polynomials and the combinatorial primitives built on
//! them: coordinate specializations `f_I`, Minkowski-sum dimensions and the
//! Hall-type dimension condition.
//!
//! Variables are 1-indexed in every public interface (`IndexSet`, the
//! surviving polynomial indices returned by [`specialize`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat;

/// Exponent vector of a monomial `X^a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn zero(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// The unit vector `e_i` (1-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i - 1] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> Result<u32> {
        self.0
            .iter()
            .try_fold(0u32, |acc, &e| acc.checked_add(e))
            .ok_or(Error::ExponentOverflow)
    }

    pub fn checked_add(&self, other: &Monomial) -> Result<Monomial> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }

    /// Bitmask of the (0-based) coordinates where the exponent vanishes.
    pub(crate) fn zero_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e == 0)
            .fold(0u64, |m, (i, _)| m | (1 << i))
    }

    /// True when every coordinate indexed by `index_set` is zero.
    pub fn vanishes_on(&self, index_set: &IndexSet) -> bool {
        index_set.iter().all(|i| self.0[i - 1] == 0)
    }

    /// Deletes the coordinates indexed by `index_set` (the projection `π_I`).
    pub fn project_out(&self, index_set: &IndexSet) -> Monomial {
        Monomial(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| !index_set.contains(i + 1))
                .map(|(_, &e)| e)
                .collect(),
        )
    }

    pub(crate) fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&e| i64::from(e)).collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A finite set of exponent vectors in `Z^n_{≥0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportSet {
    dim: usize,
    points: BTreeSet<Monomial>,
}

impl SupportSet {
    pub fn new<I>(dim: usize, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = Monomial>,
    {
        let mut set = BTreeSet::new();
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
            }
            set.insert(p);
        }
        Ok(SupportSet { dim, points: set })
    }

    /// Convenience constructor from raw exponent rows.
    pub fn from_rows(dim: usize, rows: &[&[u32]]) -> Result<Self> {
        Self::new(dim, rows.iter().map(|r| Monomial::new(r.to_vec())))
    }

    pub fn empty(dim: usize) -> Self {
        SupportSet { dim, points: BTreeSet::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.points.contains(m)
    }

    /// Points in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &Monomial> {
        self.points.iter()
    }

    pub fn points(&self) -> Vec<Monomial> {
        self.points.iter().cloned().collect()
    }

    pub fn union(&self, other: &SupportSet) -> Result<SupportSet> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(SupportSet { dim: self.dim, points: self.points.union(&other.points).cloned().collect() })
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.points.is_subset(&other.points)
    }

    pub fn contains_origin(&self) -> bool {
        self.points.iter().any(Monomial::is_constant)
    }

    /// `A^I`: points vanishing on `I`, with the `I` coordinates deleted.
    pub fn specialize(&self, index_set: &IndexSet) -> SupportSet {
        SupportSet {
            dim: self.dim - index_set.len(),
            points: self
                .points
                .iter()
                .filter(|p| p.vanishes_on(index_set))
                .map(|p| p.project_out(index_set))
                .collect(),
        }
    }
}

/// Sorted, duplicate-free subset of `{1, …, n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    n: usize,
    indices: Vec<usize>,
}

impl IndexSet {
    pub fn new<I>(n: usize, indices: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let indices: Vec<usize> = indices.into_iter().collect();
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndexSet(format!("{indices:?} is not sorted and duplicate-free")));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::InvalidIndexSet(format!("index {bad} outside 1..={n}")));
        }
        Ok(IndexSet { n, indices })
    }

    pub fn empty(n: usize) -> Self {
        IndexSet { n, indices: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        IndexSet { n, indices: (1..=n).collect() }
    }

    /// From a bitmask where bit `i` stands for variable `i + 1`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        IndexSet { n, indices: (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect() }
    }

    pub fn mask(&self) -> u64 {
        self.indices.iter().fold(0, |m, i| m | 1 << (i - 1))
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Coefficient field of a sparse polynomial.
pub trait Coefficient: Clone + fmt::Debug + PartialEq + Zero + Send + Sync + 'static {
    fn to_complex(&self) -> Complex64;
}

impl Coefficient for BigRational {
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Coefficient for Complex64 {
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// Polynomial stored as a map from exponents to nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

pub type RationalPoly = SparsePoly<BigRational>;
pub type ComplexPoly = SparsePoly<Complex64>;

impl<C: Coefficient> SparsePoly<C> {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs. Zero
    /// coefficients are dropped; repeated exponents are rejected.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, C)>,
    {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            if m.dim() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: m.dim() });
            }
            if map.contains_key(&m) {
                return Err(Error::DuplicateMonomial(m.0));
            }
            if !c.is_zero() {
                map.insert(m, c);
            }
        }
        Ok(SparsePoly { nvars, terms: map })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn support(&self) -> SupportSet {
        SupportSet { dim: self.nvars, points: self.terms.keys().cloned().collect() }
    }

    pub fn degree(&self) -> Result<u32> {
        self.terms.keys().try_fold(0, |d, m| Ok(d.max(m.degree()?)))
    }

    /// Adds `c · X^m`, removing the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: C) -> Result<()> {
        if m.dim() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: m.dim() });
        }
        let sum = match self.terms.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
        Ok(())
    }

    pub fn map_coefficients<D: Coefficient>(&self, mut f: impl FnMut(&C) -> D) -> SparsePoly<D> {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn to_complex(&self) -> ComplexPoly {
        self.map_coefficients(Coefficient::to_complex)
    }

    /// `(f)_I`: set the variables in `I` to zero and drop them.
    pub fn specialize(&self, index_set: &IndexSet) -> SparsePoly<C> {
        SparsePoly {
            nvars: self.nvars - index_set.len(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.vanishes_on(index_set))
                .map(|(m, c)| (m.project_out(index_set), c.clone()))
                .collect(),
        }
    }

    /// Evaluates at a complex point with the convention `0^0 = 1`.
    pub fn evaluate(&self, x: &[Complex64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(m, c)| c.to_complex() * monomial_value(m, x))
            .sum()
    }

    /// Largest coefficient modulus.
    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.to_complex().norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn monomial_value(m: &Monomial, x: &[Complex64]) -> Complex64 {
    m.exponents()
        .iter()
        .zip(x)
        .fold(Complex64::new(1.0, 0.0), |acc, (&e, xi)| acc * xi.powu(e))
}

/// Evaluates `p` at `x`; free-function form of [`SparsePoly::evaluate`].
pub fn evaluate<C: Coefficient>(p: &SparsePoly<C>, x: &[Complex64]) -> Result<Complex64> {
    if x.len() != p.nvars() {
        return Err(Error::LengthMismatch { expected: p.nvars(), found: x.len() });
    }
    Ok(p.evaluate(x))
}

/// Ordered list of polynomials in a shared set of variables.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSystem<C> {
    nvars: usize,
    polys: Vec<SparsePoly<C>>,
}

pub type RationalSystem = SparseSystem<BigRational>;
pub type ComplexSystem = SparseSystem<Complex64>;

impl<C: Coefficient> SparseSystem<C> {
    pub fn new(nvars: usize, polys: Vec<SparsePoly<C>>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::PreconditionViolated("a system needs at least one polynomial".into()));
        }
        Self::with_polys(nvars, polys)
    }

    /// Like [`SparseSystem::new`] but allows the empty system, which arises
    /// from specializations where every polynomial vanishes.
    pub fn with_polys(nvars: usize, polys: Vec<SparsePoly<C>>) -> Result<Self> {
        if let Some(p) = polys.iter().find(|p| p.nvars() != nvars) {
            return Err(Error::DimensionMismatch { expected: nvars, found: p.nvars() });
        }
        Ok(SparseSystem { nvars, polys })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.polys.len() == self.nvars
    }

    pub fn polys(&self) -> &[SparsePoly<C>] {
        &self.polys
    }

    pub fn supports(&self) -> Vec<SupportSet> {
        self.polys.iter().map(SparsePoly::support).collect()
    }

    pub fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.polys.iter().map(|p| p.evaluate(x)).collect()
    }

    /// `max_j |f_j(x)|`.
    pub fn residual(&self, x: &[Complex64]) -> f64 {
        self.polys.iter().map(|p| p.evaluate(x).norm()).fold(0.0, f64::max)
    }

    pub fn degree(&self) -> Result<u32> {
        self.polys.iter().try_fold(0, |d, p| Ok(d.max(p.degree()?)))
    }

    pub fn to_complex(&self) -> ComplexSystem {
        SparseSystem { nvars: self.nvars, polys: self.polys.iter().map(SparsePoly::to_complex).collect() }
    }
}

/// `Δ = {0, e_1, …, e_n}`.
pub fn simplex_delta(n: usize) -> Result<SupportSet> {
    if n == 0 {
        return Err(Error::InvalidDimension("the simplex needs n ≥ 1".into()));
    }
    SupportSet::new(n, std::iter::once(Monomial::zero(n)).chain((1..=n).map(|i| Monomial::unit(n, i))))
}

/// Element-wise union `A_j ∪ Δ`.
pub fn augment_with_delta(supports: &[SupportSet]) -> Result<Vec<SupportSet>> {
    let n = common_dim(supports)?;
    let delta = simplex_delta(n)?;
    supports.iter().map(|a| a.union(&delta)).collect()
}

pub(crate) fn common_dim(supports: &[SupportSet]) -> Result<usize> {
    let n = supports
        .first()
        .map(SupportSet::dim)
        .ok_or_else(|| Error::PreconditionViolated("empty family of supports".into()))?;
    if let Some(a) = supports.iter().find(|a| a.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: a.dim() });
    }
    Ok(n)
}

/// Result of specializing `X_i = 0` for `i ∈ I`.
#[derive(Clone, Debug, PartialEq)]
pub struct Specialization<C> {
    pub index_set: IndexSet,
    /// `J_I`, 1-based indices of the polynomials that do not vanish.
    pub surviving: Vec<usize>,
    /// `f_I` in the `n − #I` remaining variables; empty when `J_I = ∅`.
    pub system: SparseSystem<C>,
    /// `A^I_j` for `j ∈ J_I`.
    pub supports: Vec<SupportSet>,
}

/// Computes `J_I`, `f_I` and the specialized supports.
pub fn specialize<C: Coefficient>(f: &SparseSystem<C>, index_set: &IndexSet) -> Result<Specialization<C>> {
    if index_set.ambient() != f.nvars() {
        return Err(Error::DimensionMismatch { expected: f.nvars(), found: index_set.ambient() });
    }
    let mut surviving = Vec::new();
    let mut polys = Vec::new();
    for (j, p) in f.polys().iter().enumerate() {
        let q = p.specialize(index_set);
        if !q.is_zero() {
            surviving.push(j + 1);
            polys.push(q);
        }
    }
    let supports = polys.iter().map(SparsePoly::support).collect();
    Ok(Specialization {
        index_set: index_set.clone(),
        surviving,
        system: SparseSystem::with_polys(f.nvars() - index_set.len(), polys)?,
        supports,
    })
}

/// Support-level `J_I` and `A^I`.
pub fn specialize_supports(supports: &[SupportSet], index_set: &IndexSet) -> (Vec<usize>, Vec<SupportSet>) {
    supports
        .iter()
        .enumerate()
        .filter_map(|(j, a)| {
            let s = a.specialize(index_set);
            (!s.is_empty()).then_some((j + 1, s))
        })
        .unzip()
}

/// Affine dimension of `Σ_j conv(A_j)`.
pub fn minkowski_sum_dimension(supports: &[SupportSet]) -> Result<usize> {
    let n = common_dim(supports)?;
    let mut rows = Vec::new();
    for (j, a) in supports.iter().enumerate() {
        let mut it = a.iter();
        let base = it.next().ok_or(Error::EmptySupport(j + 1))?.as_i64();
        for p in it {
            rows.push(p.as_i64().iter().zip(&base).map(|(x, y)| x - y).collect::<Vec<_>>());
        }
    }
    if rows.is_empty() {
        return Ok(0);
    }
    debug_assert!(rows.iter().all(|r| r.len() == n));
    Ok(intmat::rank(&rows))
}

/// True iff `dim(Σ_{j∈J} A_j) ≥ #J` for every nonempty `J`. Enumerates all
/// `2^s − 1` subsets; a matroid-rank formulation would be polynomial.
pub fn hall_condition(supports: &[SupportSet]) -> bool {
    let s = supports.len();
    assert!(s < 64, "hall_condition: too many supports");
    (1u64..(1u64 << s)).all(|mask| {
        let sub: Vec<SupportSet> = (0..s).filter(|j| mask >> j & 1 == 1).map(|j| supports[j].clone()).collect();
        match minkowski_sum_dimension(&sub) {
            Ok(d) => d >= mask.count_ones() as usize,
            Err(_) => false,
        }
    })
}

/// `φ_I`: insert zeros at the coordinates indexed by `I`.
pub fn embed_phi<T: Clone + Zero>(point: &[T], index_set: &IndexSet, n: usize) -> Result<Vec<T>> {
    if index_set.ambient() != n {
        return Err(Error::DimensionMismatch { expected: n, found: index_set.ambient() });
    }
    if point.len() + index_set.len() != n {
        return Err(Error::LengthMismatch { expected: n - index_set.len(), found: point.len() });
    }
    let mut rest = point.iter();
    Ok((1..=n)
        .map(|i| if index_set.contains(i) { T::zero() } else { rest.next().cloned().unwrap_or_else(T::zero) })
        .collect())
}

/// `π_I`: delete the coordinates indexed by `I`.
pub fn project_pi<T: Clone>(point: &[T], index_set: &IndexSet) -> Vec<T> {
    point
        .iter()
        .enumerate()
        .filter(|(i, _)| !index_set.contains(i + 1))
        .map(|(_, x)| x.clone())
        .collect()
}
