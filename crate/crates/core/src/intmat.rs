//! Small exact integer linear algebra on `i128`.

use num_integer::Integer;

/// Rank over `Q` of an integer matrix given by rows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                let g = a.gcd(&b);
                let (fa, fb) = (a / g, b / g);
                for k in 0..ncols {
                    m[i][k] = m[i][k] * fa - m[r][k] * fb;
                }
                let g = m[i].iter().fold(0i128, |g, &x| g.gcd(&x));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Determinant by fraction-free Bareiss elimination. Returns `None` on
/// `i128` overflow.
pub fn det(matrix: &[Vec<i128>]) -> Option<i128> {
    let n = matrix.len();
    if n == 0 {
        return Some(1);
    }
    let mut m = matrix.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else { return Some(0) };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = t / prev;
            }
        }
        prev = m[k][k];
    }
    m[n - 1][n - 1].checked_mul(sign)
}

/// Solves `V x = b` over `Q` for square nonsingular `V` by Cramer's rule.
/// Returns `(numerators, denominator)` with a positive denominator, or
/// `None` when `V` is singular or arithmetic overflows.
pub fn cramer(v: &[Vec<i128>], b: &[i128]) -> Option<(Vec<i128>, i128)> {
    let n = v.len();
    let mut den = det(v)?;
    if den == 0 {
        return None;
    }
    let mut nums = Vec::with_capacity(n);
    for col in 0..n {
        let replaced: Vec<Vec<i128>> = v
            .iter()
            .zip(b)
            .map(|(row, &bi)| {
                let mut r = row.clone();
                r[col] = bi;
                r
            })
            .collect();
        nums.push(det(&replaced)?);
    }
    if den < 0 {
        den = -den;
        nums.iter_mut().for_each(|x| *x = -*x);
    }
    Some((nums, den))
}

/// Column-style Hermite reduction: returns `(H, U)` with `V U = H`, `U`
/// unimodular and `H` lower triangular with positive diagonal. `V` must be
/// square and nonsingular.
pub fn column_hermite(v: &[Vec<i128>]) -> Option<(Vec<Vec<i128>>, Vec<Vec<i128>>)> {
    let n = v.len();
    let mut h = v.to_vec();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    for r in 0..n {
        // eliminate h[r][c] for c > r with extended gcd column operations
        for c in r + 1..n {
            let (a, b) = (h[r][r], h[r][c]);
            if b == 0 {
                continue;
            }
            let e = a.extended_gcd(&b);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let (p, q) = (a / g, b / g);
            // [col_r, col_c] <- [x col_r + y col_c, -q col_r + p col_c]
            for mat in [&mut h, &mut u] {
                for row in mat.iter_mut() {
                    let (cr, cc) = (row[r], row[c]);
                    row[r] = x.checked_mul(cr)?.checked_add(y.checked_mul(cc)?)?;
                    row[c] = p.checked_mul(cc)?.checked_sub(q.checked_mul(cr)?)?;
                }
            }
        }
        if h[r][r] == 0 {
            return None;
        }
        if h[r][r] < 0 {
            for mat in [&mut h, &mut u] {
                for row in mat.iter_mut() {
                    row[r] = -row[r];
                }
            }
        }
    }
    Some((h, u))
}
