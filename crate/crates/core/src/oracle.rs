//! Brute-force mixed volume by inclusion–exclusion over Minkowski sums.
//! Independent of the lifting machinery; used to cross-check it.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::intmat;
use crate::lattice::{common_dim, SupportSet};

const MAX_DIM: usize = 4;
const MAX_POINTS: usize = 8;

/// `MV = Σ_{∅≠S} (−1)^{n−#S} Vol(Σ_{j∈S} conv A_j)` with Euclidean volume.
pub fn mixed_volume_oracle(supports: &[SupportSet]) -> Result<u64> {
    let n = common_dim(supports)?;
    if supports.len() != n {
        return Err(Error::NotSquare { supports: supports.len(), dim: n });
    }
    if n > MAX_DIM || supports.iter().any(|a| a.len() > MAX_POINTS) {
        return Err(Error::SizeGuard(format!("oracle handles n ≤ {MAX_DIM} and ≤ {MAX_POINTS} points per support")));
    }
    if let Some(j) = supports.iter().position(SupportSet::is_empty) {
        return Err(Error::EmptySupport(j + 1));
    }
    let mut total: i128 = 0;
    for mask in 1u32..(1 << n) {
        let mut sum: BTreeSet<Vec<i128>> = BTreeSet::from([vec![0; n]]);
        for (j, a) in supports.iter().enumerate() {
            if mask >> j & 1 == 1 {
                sum = sum
                    .iter()
                    .flat_map(|s| a.iter().map(move |p| s.iter().zip(p.exponents()).map(|(x, &y)| x + i128::from(y)).collect()))
                    .collect();
            }
        }
        let vol = scaled_volume(&sum.into_iter().collect::<Vec<_>>(), n);
        let sign = if (n - mask.count_ones() as usize).is_multiple_of(2) { 1 } else { -1 };
        total += sign * vol;
    }
    let fact: i128 = (1..=n as i128).product();
    debug_assert_eq!(total % fact, 0);
    Ok((total / fact) as u64)
}

/// `n! · Vol(conv(points))` via a placing triangulation.
pub fn scaled_volume(points: &[Vec<i128>], n: usize) -> i128 {
    if points.is_empty() {
        return 0;
    }
    if n == 1 {
        let (lo, hi) = points.iter().fold((i128::MAX, i128::MIN), |(l, h), p| (l.min(p[0]), h.max(p[0])));
        return hi - lo;
    }
    // pick an initial full-dimensional simplex greedily
    let mut simplex = vec![0usize];
    for i in 1..points.len() {
        if simplex.len() == n + 1 {
            break;
        }
        let mut trial = simplex.clone();
        trial.push(i);
        if affine_rank(points, &trial) == trial.len() - 1 {
            simplex = trial;
        }
    }
    if simplex.len() < n + 1 {
        return 0;
    }
    let mut volume = orient(points, &simplex[..n], simplex[n]).abs();
    // boundary facets with the opposite vertex of their simplex
    let mut facets: Vec<(Vec<usize>, usize)> = (0..=n)
        .map(|skip| {
            let f: Vec<usize> = simplex.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &v)| v).collect();
            (f, simplex[skip])
        })
        .collect();
    let used: BTreeSet<usize> = simplex.iter().copied().collect();
    for p in (0..points.len()).filter(|i| !used.contains(i)) {
        let (visible, hidden): (Vec<_>, Vec<_>) = facets.into_iter().partition(|(f, opp)| {
            let s_p = orient(points, f, p).signum();
            let s_o = orient(points, f, *opp).signum();
            s_p != 0 && s_p != s_o
        });
        facets = hidden;
        if visible.is_empty() {
            continue;
        }
        let mut ridges: Vec<(Vec<usize>, usize)> = Vec::new();
        for (f, _) in &visible {
            volume += orient(points, f, p).abs();
            for skip in 0..f.len() {
                let mut r: Vec<usize> = f.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &v)| v).collect();
                r.sort_unstable();
                ridges.push((r, f[skip]));
            }
        }
        ridges.sort();
        let mut i = 0;
        while i < ridges.len() {
            let mut k = i + 1;
            while k < ridges.len() && ridges[k].0 == ridges[i].0 {
                k += 1;
            }
            if k - i == 1 {
                let (mut r, opp) = ridges[i].clone();
                r.push(p);
                facets.push((r, opp));
            }
            i = k;
        }
    }
    volume
}

fn orient(points: &[Vec<i128>], facet: &[usize], x: usize) -> i128 {
    let base = &points[facet[0]];
    let rows: Vec<Vec<i128>> = facet[1..]
        .iter()
        .chain(std::iter::once(&x))
        .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    intmat::det(&rows).expect("oracle determinant overflow")
}

fn affine_rank(points: &[Vec<i128>], idx: &[usize]) -> usize {
    let base = &points[idx[0]];
    let rows: Vec<Vec<i64>> = idx[1..]
        .iter()
        .map(|&i| points[i].iter().zip(base).map(|(a, b)| (a - b) as i64).collect())
        .collect();
    if rows.is_empty() {
        0
    } else {
        intmat::rank(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::simplex_delta;

    #[test]
    fn volumes() {
        let sq: Vec<Vec<i128>> = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1], vec![0, 0]];
        assert_eq!(scaled_volume(&sq, 2), 2);
        let cube: Vec<Vec<i128>> = (0..8).map(|m| (0..3).map(|i| (m >> i & 1) as i128).collect()).collect();
        assert_eq!(scaled_volume(&cube, 3), 6);
        let flat: Vec<Vec<i128>> = vec![vec![0, 0], vec![1, 1], vec![2, 2]];
        assert_eq!(scaled_volume(&flat, 2), 0);
        // collinear points on the boundary of a square
        let sq2: Vec<Vec<i128>> = vec![vec![0, 0], vec![2, 0], vec![1, 0], vec![0, 2], vec![2, 2], vec![2, 1], vec![1, 1]];
        assert_eq!(scaled_volume(&sq2, 2), 8);
    }

    #[test]
    fn simplex_pair_by_hand() {
        // Vol(2Δ) − 2 Vol(Δ) = 2 − 1
        let a = vec![simplex_delta(2).unwrap(); 2];
        assert_eq!(mixed_volume_oracle(&a).unwrap(), 1);
    }

    #[test]
    fn ejemplo1() {
        let a = vec![
            SupportSet::from_rows(3, &[&[1, 1, 2], &[1, 1, 1]]).unwrap(),
            SupportSet::from_rows(3, &[&[2, 0, 1], &[1, 0, 1]]).unwrap(),
            SupportSet::from_rows(3, &[&[0, 2, 1], &[0, 1, 1]]).unwrap(),
        ];
        assert_eq!(mixed_volume_oracle(&a).unwrap(), 1);
    }

    #[test]
    fn size_guard() {
        let a = vec![simplex_delta(5).unwrap(); 5];
        assert!(matches!(mixed_volume_oracle(&a), Err(Error::SizeGuard(_))));
    }
}
