//! Random liftings, mixed-cell enumeration and mixed volumes.
//!
//! Mixed volumes use the root-count normalization: `MV(Δ, …, Δ) = 1`, and
//! a mixed cell contributes `|det|` of its edge matrix.
//!
//! Cells are found by depth-first search over one lower edge per support,
//! pruning with an exact LP feasibility test on the partial normal cone.

use std::collections::BTreeMap;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::intmat;
use crate::lattice::{common_dim, Monomial, SupportSet};
use crate::lp::LinearSystem;

/// Default seed for the deterministic mixed volume routines.
pub const DEFAULT_SEED: u64 = 0x6d69_7865_6476_6f6c;
/// Default lifting range.
pub const DEFAULT_RANGE: u64 = 1 << 20;
/// Default number of liftings tried before giving up on fineness.
pub const DEFAULT_RETRIES: usize = 5;

const STABLE_SCALE: i64 = 1 << 31;

/// Integer weights `ω_j(a)` on each support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lifting {
    values: Vec<BTreeMap<Monomial, i64>>,
    seed: Option<u64>,
    range: Option<u64>,
}

impl Lifting {
    /// Explicit lifting; `values[j]` lists `ω_j` on the points of `A_j` in
    /// lexicographic order.
    pub fn from_values(supports: &[SupportSet], values: &[Vec<i64>]) -> Result<Self> {
        if supports.len() != values.len() {
            return Err(Error::LengthMismatch { expected: supports.len(), found: values.len() });
        }
        let mut out = Vec::with_capacity(supports.len());
        for (a, w) in supports.iter().zip(values) {
            if a.len() != w.len() {
                return Err(Error::LengthMismatch { expected: a.len(), found: w.len() });
            }
            out.push(a.iter().cloned().zip(w.iter().copied()).collect());
        }
        Ok(Lifting { values: out, seed: None, range: None })
    }

    pub fn value(&self, j: usize, a: &Monomial) -> Option<i64> {
        self.values.get(j)?.get(a).copied()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn range(&self) -> Option<u64> {
        self.range
    }

    /// Values for support `j` in the order of its points.
    pub fn support_values(&self, j: usize) -> Vec<i64> {
        self.values[j].values().copied().collect()
    }

    fn covers(&self, supports: &[SupportSet]) -> bool {
        self.values.len() == supports.len()
            && supports.iter().zip(&self.values).all(|(a, w)| a.len() == w.len() && a.iter().all(|p| w.contains_key(p)))
    }
}

/// Draws `ω_j(a)` uniformly from `[0, range)`.
pub fn random_lifting(supports: &[SupportSet], seed: u64, range: u64) -> Result<Lifting> {
    if range < 2 {
        return Err(Error::InvalidLiftingRange(range));
    }
    let range_i64 = i64::try_from(range).map_err(|_| Error::InvalidLiftingRange(range))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = supports
        .iter()
        .map(|a| a.iter().map(|p| (p.clone(), rng.gen_range(0..range_i64))).collect())
        .collect();
    Ok(Lifting { values, seed: Some(seed), range: Some(range) })
}

/// A cell of type `(1, …, 1)`: one edge `{a_j, b_j}` per support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedCell {
    /// `(a_j, b_j)` with `a_j < b_j` lexicographically.
    pub edges: Vec<(Monomial, Monomial)>,
    /// Primitive integer inner normal `μ ∈ Z^{n+1}` of the lifted lower
    /// facet, last coordinate positive. `γ = μ[..n] / μ[n]`.
    pub normal: Vec<i128>,
    /// `|det|` of the edge matrix.
    pub volume: u64,
}

impl MixedCell {
    pub fn dim(&self) -> usize {
        self.edges.len()
    }

    /// Rows `b_j − a_j`.
    pub fn edge_matrix(&self) -> Vec<Vec<i64>> {
        self.edges
            .iter()
            .map(|(a, b)| b.as_i64().iter().zip(a.as_i64()).map(|(x, y)| x - y).collect())
            .collect()
    }

    /// `γ` as `(numerators, denominator)`, denominator positive.
    pub fn gamma(&self) -> (Vec<i128>, i128) {
        let n = self.dim();
        (self.normal[..n].to_vec(), self.normal[n])
    }

    /// Euclidean norm of the primitive normal.
    pub fn normal_norm(&self) -> f64 {
        self.normal.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().sqrt()
    }
}

/// Mixed cells of the subdivision induced by a lifting.
#[derive(Clone, Debug)]
pub struct MixedSubdivision {
    pub supports: Vec<SupportSet>,
    pub lifting: Lifting,
    pub cells: Vec<MixedCell>,
}

impl MixedSubdivision {
    pub fn mixed_volume(&self) -> u64 {
        self.cells.iter().map(|c| c.volume).sum()
    }
}

/// Largest Euclidean norm of a primitive cell normal; 0 without cells.
pub fn max_normal_norm(sub: &MixedSubdivision) -> f64 {
    sub.cells.iter().map(MixedCell::normal_norm).fold(0.0, f64::max)
}

struct Prepared {
    n: usize,
    points: Vec<Vec<Monomial>>,
    coords: Vec<Vec<Vec<i128>>>,
    weights: Vec<Vec<i128>>,
}

impl Prepared {
    fn new(supports: &[SupportSet], lifting: &Lifting) -> Result<Self> {
        let n = common_dim(supports)?;
        if supports.len() != n {
            return Err(Error::NotSquare { supports: supports.len(), dim: n });
        }
        if let Some(j) = supports.iter().position(SupportSet::is_empty) {
            return Err(Error::EmptySupport(j + 1));
        }
        if !lifting.covers(supports) {
            return Err(Error::PreconditionViolated("lifting does not match the supports".into()));
        }
        let points: Vec<Vec<Monomial>> = supports.iter().map(SupportSet::points).collect();
        let coords = points
            .iter()
            .map(|ps| ps.iter().map(|p| p.exponents().iter().map(|&e| i128::from(e)).collect()).collect())
            .collect();
        let weights = points
            .iter()
            .enumerate()
            .map(|(j, ps)| ps.iter().map(|p| i128::from(lifting.values[j][p])).collect())
            .collect();
        Ok(Prepared { n, points, coords, weights })
    }

    /// Adds the constraints saying that `(γ, 1)` is minimized on edge
    /// `(p, q)` of support `j`.
    fn add_edge(&self, sys: &mut LinearSystem, j: usize, (p, q): (usize, usize)) {
        let (cs, ws) = (&self.coords[j], &self.weights[j]);
        let diff = cs[p].iter().zip(&cs[q]).map(|(x, y)| x - y).collect();
        sys.eq(diff, ws[q] - ws[p]);
        for c in 0..cs.len() {
            if c != p && c != q {
                let row = cs[c].iter().zip(&cs[p]).map(|(x, y)| x - y).collect();
                sys.ge(row, ws[p] - ws[c]);
            }
        }
    }

    fn lower_edges(&self, j: usize) -> Vec<(usize, usize)> {
        let m = self.points[j].len();
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|p| (p + 1..m).map(move |q| (p, q))).collect();
        pairs
            .into_par_iter()
            .filter(|&e| {
                let mut sys = LinearSystem::new(self.n);
                self.add_edge(&mut sys, j, e);
                sys.is_feasible()
            })
            .collect()
    }

    /// `table[k][j][f][e]` (for `j < k`): edge `f` of support `k` and edge
    /// `e` of support `j` admit a common lower normal.
    fn relation_table(&self, edges: &[Vec<(usize, usize)>]) -> Vec<Vec<Vec<Vec<bool>>>> {
        (0..self.n)
            .map(|k| {
                (0..k)
                    .map(|j| {
                        edges[k]
                            .par_iter()
                            .map(|&f| {
                                edges[j]
                                    .iter()
                                    .map(|&e| {
                                        let mut sys = LinearSystem::new(self.n);
                                        self.add_edge(&mut sys, j, e);
                                        self.add_edge(&mut sys, k, f);
                                        sys.is_feasible()
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    fn search(
        &self,
        edges: &[Vec<(usize, usize)>],
        related: &[Vec<Vec<Vec<bool>>>],
        chosen: &mut Vec<usize>,
        sys: &LinearSystem,
        out: &mut Vec<MixedCell>,
    ) -> Result<()> {
        let k = chosen.len();
        if k == self.n {
            let picked: Vec<(usize, usize)> = chosen.iter().enumerate().map(|(j, &e)| edges[j][e]).collect();
            if let Some(cell) = self.leaf(&picked)? {
                out.push(cell);
            }
            return Ok(());
        }
        for (fi, &f) in edges[k].iter().enumerate() {
            if !chosen.iter().enumerate().all(|(j, &e)| related[k][j][fi][e]) {
                continue;
            }
            let mut next = sys.clone();
            self.add_edge(&mut next, k, f);
            // two supports are already covered by the relation table
            if k < 2 || next.is_feasible() {
                chosen.push(fi);
                self.search(edges, related, chosen, &next, out)?;
                chosen.pop();
            }
        }
        Ok(())
    }

    /// Solves for the normal exactly and checks that the lower facet
    /// touches each support in exactly the chosen edge.
    fn leaf(&self, chosen: &[(usize, usize)]) -> Result<Option<MixedCell>> {
        let n = self.n;
        let mut v = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for (j, &(p, q)) in chosen.iter().enumerate() {
            let cs = &self.coords[j];
            v.push(cs[q].iter().zip(&cs[p]).map(|(x, y)| x - y).collect::<Vec<_>>());
            rhs.push(self.weights[j][p] - self.weights[j][q]);
        }
        let det = intmat::det(&v).ok_or(Error::ExponentOverflow)?;
        if det == 0 {
            return Ok(None);
        }
        let (num, den) = intmat::cramer(&v, &rhs).ok_or(Error::ExponentOverflow)?;
        let value = |j: usize, c: usize| -> i128 {
            self.coords[j][c].iter().zip(&num).map(|(x, g)| x * g).sum::<i128>() + den * self.weights[j][c]
        };
        for (j, &(p, q)) in chosen.iter().enumerate() {
            let base = value(j, p);
            debug_assert_eq!(base, value(j, q));
            for c in 0..self.coords[j].len() {
                if c == p || c == q {
                    continue;
                }
                let v = value(j, c);
                if v == base {
                    return Err(Error::NotFineLifting { attempts: 1 });
                }
                if v < base {
                    return Ok(None);
                }
            }
        }
        let g = num.iter().fold(den, |g, x| g.gcd(x));
        let normal = num.iter().map(|x| x / g).chain(std::iter::once(den / g)).collect();
        let edges = chosen
            .iter()
            .enumerate()
            .map(|(j, &(p, q))| (self.points[j][p].clone(), self.points[j][q].clone()))
            .collect();
        Ok(Some(MixedCell { edges, normal, volume: det.unsigned_abs() as u64 }))
    }
}

/// Enumerates the mixed cells of the subdivision induced by `lifting`.
/// Fails with [`Error::NotFineLifting`] on ties.
pub fn lower_facet_subdivision(supports: &[SupportSet], lifting: &Lifting) -> Result<MixedSubdivision> {
    let prep = Prepared::new(supports, lifting)?;
    let edges: Vec<Vec<(usize, usize)>> = (0..prep.n).map(|j| prep.lower_edges(j)).collect();
    let related = prep.relation_table(&edges);
    let groups: Vec<Result<Vec<MixedCell>>> = (0..edges[0].len())
        .into_par_iter()
        .map(|e| {
            let mut sys = LinearSystem::new(prep.n);
            prep.add_edge(&mut sys, 0, edges[0][e]);
            let mut out = Vec::new();
            let mut chosen = vec![e];
            prep.search(&edges, &related, &mut chosen, &sys, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut cells = Vec::new();
    for g in groups {
        cells.extend(g?);
    }
    Ok(MixedSubdivision { supports: supports.to_vec(), lifting: lifting.clone(), cells })
}

/// Seed, range and retry budget for the randomized routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MixedVolumeOptions {
    pub seed: u64,
    pub range: u64,
    pub retries: usize,
}

impl Default for MixedVolumeOptions {
    fn default() -> Self {
        MixedVolumeOptions { seed: DEFAULT_SEED, range: DEFAULT_RANGE, retries: DEFAULT_RETRIES }
    }
}

pub(crate) fn attempt_seed(seed: u64, attempt: usize) -> u64 {
    seed.wrapping_add((attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Fine subdivision from a random lifting, re-seeding on ties.
pub fn random_subdivision(supports: &[SupportSet], opts: &MixedVolumeOptions) -> Result<MixedSubdivision> {
    let attempts = opts.retries.max(1);
    for k in 0..attempts {
        let lifting = random_lifting(supports, attempt_seed(opts.seed, k), opts.range)?;
        match lower_facet_subdivision(supports, &lifting) {
            Err(Error::NotFineLifting { .. }) => log::debug!("lifting {k} not fine, re-seeding"),
            other => return other,
        }
    }
    Err(Error::NotFineLifting { attempts })
}

pub fn mixed_volume(supports: &[SupportSet]) -> Result<u64> {
    mixed_volume_with(supports, &MixedVolumeOptions::default())
}

pub fn mixed_volume_with(supports: &[SupportSet], opts: &MixedVolumeOptions) -> Result<u64> {
    Ok(random_subdivision(supports, opts)?.mixed_volume())
}

pub fn stable_mixed_volume(supports: &[SupportSet]) -> Result<u64> {
    stable_mixed_volume_with(supports, &MixedVolumeOptions::default())
}

/// Stable mixed volume: supports get the origin added, lifted by the
/// indicator of "origin was added", refined by a small random lifting.
/// Refined mixed cells are summed when the normal of the coarse cell that
/// contains them is non-negative.
pub fn stable_mixed_volume_with(supports: &[SupportSet], opts: &MixedVolumeOptions) -> Result<u64> {
    let n = common_dim(supports)?;
    let origin = Monomial::zero(n);
    let augmented: Vec<SupportSet> = supports
        .iter()
        .map(|a| a.union(&SupportSet::new(n, [origin.clone()])?))
        .collect::<Result<_>>()?;
    let coarse: Vec<BTreeMap<Monomial, i64>> = supports
        .iter()
        .zip(&augmented)
        .map(|(a, b)| b.iter().map(|p| (p.clone(), i64::from(!a.contains(p)))).collect())
        .collect();
    let attempts = opts.retries.max(1);
    for k in 0..attempts {
        let fine = random_lifting(&augmented, attempt_seed(opts.seed, k), opts.range.min(1 << 20))?;
        let values = fine
            .values
            .iter()
            .zip(&coarse)
            .map(|(r, w)| r.iter().map(|(p, &x)| (p.clone(), w[p] * STABLE_SCALE + x)).collect())
            .collect();
        let lifting = Lifting { values, seed: fine.seed, range: fine.range };
        let sub = match lower_facet_subdivision(&augmented, &lifting) {
            Err(Error::NotFineLifting { .. }) => continue,
            other => other?,
        };
        let mut total = 0u64;
        let mut consistent = true;
        for cell in &sub.cells {
            match coarse_normal_nonnegative(cell, &augmented, &coarse) {
                Some(true) => total += cell.volume,
                Some(false) => {}
                None => {
                    consistent = false;
                    break;
                }
            }
        }
        if consistent {
            return Ok(total);
        }
        log::debug!("refinement {k} not subordinate to the coarse lifting, re-seeding");
    }
    Err(Error::NotFineLifting { attempts })
}

/// Solves for the coarse normal on the cell's edges and checks it is a
/// genuine lower normal for the coarse lifting; returns whether it is
/// non-negative, or `None` if the refinement is inconsistent.
fn coarse_normal_nonnegative(
    cell: &MixedCell,
    supports: &[SupportSet],
    coarse: &[BTreeMap<Monomial, i64>],
) -> Option<bool> {
    let v: Vec<Vec<i128>> = cell.edge_matrix().iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let rhs: Vec<i128> = cell
        .edges
        .iter()
        .enumerate()
        .map(|(j, (a, b))| i128::from(coarse[j][a] - coarse[j][b]))
        .collect();
    let (num, den) = intmat::cramer(&v, &rhs)?;
    for (j, (a, _)) in cell.edges.iter().enumerate() {
        let value = |p: &Monomial| -> i128 {
            p.exponents().iter().zip(&num).map(|(&x, g)| i128::from(x) * g).sum::<i128>() + den * i128::from(coarse[j][p])
        };
        let base = value(a);
        if supports[j].iter().any(|c| value(c) < base) {
            return None;
        }
    }
    Some(num.iter().all(|&x| x >= 0))
}
