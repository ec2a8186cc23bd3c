//! Exact feasibility test for `{ E z = e, H z ≥ h }` with `z` free.
//!
//! Decided through the Farkas alternative: the system is infeasible iff
//! some `y` (free) and `w ≥ 0` satisfy `Eᵀy + Hᵀw = 0` and `e·y + h·w > 0`.
//! Normalizing `Σ|y| + Σw ≤ 1` turns this into a bounded LP with only
//! `n + 1` rows, solved by a tableau simplex with Bland's rule.
//!
//! Pivoting is fraction-free: the tableau is an integer matrix over a
//! common positive denominator and each update divides exactly by the
//! previous pivot. Runs on checked `i128` and restarts on `BigInt` on
//! overflow.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

trait Int: Clone + Ord + Zero + Signed {
    fn from_i128(v: i128) -> Self;
    /// `(p·x − a·b) / d`, exact.
    fn pivot(p: &Self, x: &Self, a: &Self, b: &Self, d: &Self) -> Option<Self>;
    fn mul_(&self, o: &Self) -> Option<Self>;
}

impl Int for i128 {
    fn from_i128(v: i128) -> Self {
        v
    }
    fn pivot(p: &Self, x: &Self, a: &Self, b: &Self, d: &Self) -> Option<Self> {
        let t = p.checked_mul(*x)?.checked_sub(a.checked_mul(*b)?)?;
        debug_assert_eq!(t % d, 0);
        Some(t / d)
    }
    fn mul_(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
}

impl Int for BigInt {
    fn from_i128(v: i128) -> Self {
        BigInt::from(v)
    }
    fn pivot(p: &Self, x: &Self, a: &Self, b: &Self, d: &Self) -> Option<Self> {
        Some((p * x - a * b) / d)
    }
    fn mul_(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
}

/// A system of linear equalities and inequalities over free variables.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub nvars: usize,
    pub equalities: Vec<(Vec<i128>, i128)>,
    pub inequalities: Vec<(Vec<i128>, i128)>,
}

impl LinearSystem {
    pub fn new(nvars: usize) -> Self {
        LinearSystem { nvars, ..Default::default() }
    }

    pub fn eq(&mut self, row: Vec<i128>, rhs: i128) {
        debug_assert_eq!(row.len(), self.nvars);
        self.equalities.push((row, rhs));
    }

    /// Adds `row · z ≥ rhs`.
    pub fn ge(&mut self, row: Vec<i128>, rhs: i128) {
        debug_assert_eq!(row.len(), self.nvars);
        self.inequalities.push((row, rhs));
    }

    pub fn is_feasible(&self) -> bool {
        if self.equalities.is_empty() && self.inequalities.is_empty() {
            return true;
        }
        match farkas_infeasible::<i128>(self) {
            Some(v) => !v,
            None => !farkas_infeasible::<BigInt>(self).expect("big integer arithmetic cannot overflow"),
        }
    }
}

fn farkas_infeasible<T: Int>(sys: &LinearSystem) -> Option<bool> {
    let n = sys.nvars;
    let m_eq = sys.equalities.len();
    let m_ineq = sys.inequalities.len();
    // columns: y+, y-, w, normalization slack, then the right-hand side
    let ncols = 2 * m_eq + m_ineq + 1;
    let width = ncols + 1;
    let rhs = ncols;
    let mut tab: Vec<Vec<T>> = vec![vec![T::zero(); width]; n + 2];
    let mut cost = vec![0i128; ncols];
    for (k, (row, b)) in sys.equalities.iter().enumerate() {
        for i in 0..n {
            tab[i][k] = T::from_i128(row[i]);
            tab[i][m_eq + k] = T::from_i128(-row[i]);
        }
        cost[k] = *b;
        cost[m_eq + k] = -*b;
    }
    for (k, (row, b)) in sys.inequalities.iter().enumerate() {
        for i in 0..n {
            tab[i][2 * m_eq + k] = T::from_i128(row[i]);
        }
        cost[2 * m_eq + k] = *b;
    }
    for j in 0..ncols {
        tab[n][j] = T::from_i128(1);
    }
    tab[n][rhs] = T::from_i128(1);
    let obj = n + 1;
    for j in 0..ncols {
        tab[obj][j] = T::from_i128(-cost[j]);
    }
    // rows 0..n start with artificial basics at level zero; row n with the slack
    const ARTIFICIAL: usize = usize::MAX;
    let mut basis = vec![ARTIFICIAL; n + 1];
    basis[n] = ncols - 1;
    let mut denom = T::from_i128(1);

    for r in 0..n {
        if let Some(j) = (0..ncols - 1).find(|&j| !tab[r][j].is_zero()) {
            pivot(&mut tab, &mut denom, r, j)?;
            basis[r] = j;
        }
    }
    loop {
        let Some(enter) = (0..ncols).find(|&j| tab[obj][j].is_negative()) else { break };
        let mut leave: Option<usize> = None;
        for i in 0..=n {
            if basis[i] == ARTIFICIAL || !tab[i][enter].is_positive() {
                continue;
            }
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let lhs = tab[i][rhs].mul_(&tab[l][enter])?;
                    let rhs_l = tab[l][rhs].mul_(&tab[i][enter])?;
                    if lhs < rhs_l || (lhs == rhs_l && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        // the normalization row bounds every column, so a leaving row exists
        let r = leave.expect("normalized Farkas LP is bounded");
        pivot(&mut tab, &mut denom, r, enter)?;
        basis[r] = enter;
    }
    Some(tab[obj][rhs].is_positive())
}

fn pivot<T: Int>(tab: &mut [Vec<T>], denom: &mut T, r: usize, c: usize) -> Option<()> {
    let piv = tab[r][c].clone();
    let width = tab[r].len();
    for i in 0..tab.len() {
        if i == r {
            continue;
        }
        let a = tab[i][c].clone();
        for j in 0..width {
            tab[i][j] = T::pivot(&piv, &tab[i][j], &a, &tab[r][j], denom)?;
        }
    }
    if piv.is_negative() {
        for row in tab.iter_mut() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        *denom = -piv;
    } else {
        *denom = piv;
    }
    Some(())
}
