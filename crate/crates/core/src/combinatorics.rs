//! Special index sets, the set Γ of index sets carrying components of a
//! generic system, generic degrees and the degree bound.
//!
//! For `I ⊆ {1..n}`, `J_I` lists the polynomials that survive setting the
//! variables in `I` to zero. A generic system has a component in
//! `{x_i = 0, i ∈ I}` meeting the torus of the remaining coordinates
//! exactly when `I ∈ Γ`; its dimension is `n − #I − #J_I`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{augment_with_delta, common_dim, hall_condition, simplex_delta, IndexSet, SupportSet};
use crate::subdivision::{mixed_volume_with, MixedVolumeOptions};

const MAX_VARS: usize = 30;

/// A pair `(I, J_I)` produced by the special-sets dynamic program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialSetEntry {
    pub index_set: IndexSet,
    /// 1-based indices of the surviving polynomials.
    pub surviving: Vec<usize>,
}

/// An element of Γ with its component dimension and degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaEntry {
    pub index_set: IndexSet,
    pub surviving: Vec<usize>,
    /// `n − #I − #J_I`.
    pub dim: usize,
    /// `MV_{n−#I}(A^I, Δ^{(dim)})`, or 1 when no polynomial survives.
    pub toric_degree: u64,
}

/// Precomputed zero-masks of every monomial, for fast `J_I` queries.
struct SurvivalTable {
    n: usize,
    masks: Vec<Vec<u64>>,
}

impl SurvivalTable {
    fn new(supports: &[SupportSet]) -> Result<Self> {
        let n = common_dim(supports)?;
        if n > MAX_VARS {
            return Err(Error::InvalidDimension(format!("special sets support at most {MAX_VARS} variables")));
        }
        let masks = supports.iter().map(|a| a.iter().map(|m| m.zero_mask()).collect()).collect();
        Ok(SurvivalTable { n, masks })
    }

    fn surviving(&self, mask: u64) -> Vec<usize> {
        self.masks
            .iter()
            .enumerate()
            .filter(|(_, zs)| zs.iter().any(|z| z & mask == mask))
            .map(|(j, _)| j + 1)
            .collect()
    }

    fn count(&self, mask: u64) -> usize {
        self.masks.iter().filter(|zs| zs.iter().any(|z| z & mask == mask)).count()
    }
}

/// `(I, J_I)` sorted by `(#I, I)`.
pub fn sort_by_size_then_lex<T>(items: &mut [T], key: impl Fn(&T) -> &IndexSet) {
    items.sort_by(|a, b| {
        let (a, b) = (key(a), key(b));
        (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice()))
    });
}

/// The `P_I` table of the dynamic program, indexed by bitmask.
pub fn special_sets_table(supports: &[SupportSet]) -> Result<Vec<usize>> {
    let table = SurvivalTable::new(supports)?;
    let n = table.n;
    let s = supports.len();
    let mut p = vec![0usize; 1 << n];
    p[0] = n.min(s);
    for mask in 1u64..(1 << n) {
        let k = mask.count_ones() as usize;
        let mut best = n.min(k + table.count(mask));
        let mut rest = mask;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            best = best.min(p[(mask ^ bit) as usize]);
            rest ^= bit;
        }
        p[mask as usize] = best;
    }
    Ok(p)
}

/// All `(I, J_I)` with `#I + #J_I ≤ n` that are minimal in the sense that
/// no `Ĩ ⊂ I` has a smaller `#Ĩ + #J_Ĩ`.
pub fn special_sets(supports: &[SupportSet]) -> Result<Vec<SpecialSetEntry>> {
    let p = special_sets_table(supports)?;
    let table = SurvivalTable::new(supports)?;
    let n = table.n;
    let mut out = Vec::new();
    for mask in 0u64..(1 << n) {
        let surviving = table.surviving(mask);
        let k = mask.count_ones() as usize;
        if p[mask as usize] == k + surviving.len() {
            out.push(SpecialSetEntry { index_set: IndexSet::from_mask(n, mask), surviving });
        }
    }
    sort_by_size_then_lex(&mut out, |e| &e.index_set);
    Ok(out)
}

/// Recomputes every `P_I` as `min_{Ĩ ⊆ I} min(n, #Ĩ + #J_Ĩ)` by brute force
/// and compares with the dynamic program.
pub fn check_p_lemma(supports: &[SupportSet]) -> Result<bool> {
    let p = special_sets_table(supports)?;
    let table = SurvivalTable::new(supports)?;
    let n = table.n;
    for mask in 0u64..(1 << n) {
        let mut best = n;
        let mut sub = mask;
        loop {
            best = best.min(sub.count_ones() as usize + table.count(sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        if best != p[mask as usize] {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn gamma(supports: &[SupportSet]) -> Result<Vec<GammaEntry>> {
    gamma_with(supports, &MixedVolumeOptions::default())
}

/// Filters the special sets by Hall's condition on the specialized
/// supports and attaches dimension and toric degree.
pub fn gamma_with(supports: &[SupportSet], opts: &MixedVolumeOptions) -> Result<Vec<GammaEntry>> {
    let n = common_dim(supports)?;
    let candidates = special_sets(supports)?;
    let entries: Vec<Result<Option<GammaEntry>>> = candidates
        .into_par_iter()
        .map(|e| {
            let specialized: Vec<SupportSet> =
                e.surviving.iter().map(|&j| supports[j - 1].specialize(&e.index_set)).collect();
            if !hall_condition(&specialized) {
                return Ok(None);
            }
            let m = n - e.index_set.len();
            let dim = m - e.surviving.len();
            let toric_degree = if e.surviving.is_empty() {
                1
            } else {
                let mut family = specialized;
                family.extend(std::iter::repeat_n(simplex_delta(m)?, dim));
                mixed_volume_with(&family, opts)?
            };
            debug_assert!(toric_degree > 0, "Hall's condition holds but the mixed volume vanishes");
            Ok(Some(GammaEntry { index_set: e.index_set, surviving: e.surviving, dim, toric_degree }))
        })
        .collect();
    let mut out = Vec::new();
    for e in entries {
        if let Some(e) = e? {
            out.push(e);
        }
    }
    Ok(out)
}

/// Degree of the variety of a generic system with these supports.
pub fn generic_degree(supports: &[SupportSet]) -> Result<u64> {
    Ok(gamma(supports)?.iter().map(|e| e.toric_degree).sum())
}

/// For a square family without constant terms, decides whether a generic
/// system has only isolated zeros: `#I + #J_I ≥ n` for every `I`.
pub fn has_only_isolated(supports: &[SupportSet]) -> Result<bool> {
    let n = common_dim(supports)?;
    if supports.len() != n {
        return Err(Error::NotSquare { supports: supports.len(), dim: n });
    }
    if let Some(j) = supports.iter().position(SupportSet::contains_origin) {
        return Err(Error::PreconditionViolated(format!("polynomial {} has a constant term", j + 1)));
    }
    let p = special_sets_table(supports)?;
    Ok(p[(1usize << n) - 1] >= n)
}

/// `MV(A_1 ∪ Δ, …, A_n ∪ Δ)`, an upper bound for the degree of the
/// variety of any system with these supports.
pub fn degree_bound(supports: &[SupportSet]) -> Result<u64> {
    degree_bound_with(supports, &MixedVolumeOptions::default())
}

pub fn degree_bound_with(supports: &[SupportSet], opts: &MixedVolumeOptions) -> Result<u64> {
    let n = common_dim(supports)?;
    if supports.len() != n {
        return Err(Error::NotSquare { supports: supports.len(), dim: n });
    }
    mixed_volume_with(&augment_with_delta(supports)?, opts)
}
