//! Floating-point solver for isolated toric roots of square sparse
//! systems. Start points come from the binomial systems of mixed cells;
//! paths are followed with an Euler predictor and a Newton corrector.
//!
//! [`solve_toric`] works in two stages: a polyhedral homotopy to a system
//! with random unit coefficients on the target supports, then a
//! coefficient homotopy `(1 − t)·γ·g + t·f` to the target.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::intmat::column_hermite;
use crate::lattice::{ComplexPoly, ComplexSystem, Monomial, SparsePoly, SparseSystem};
use crate::subdivision::{random_subdivision, MixedCell, MixedSubdivision, MixedVolumeOptions, DEFAULT_SEED};

type C = Complex64;

const TAG_GAMMA: u64 = 1;
const TAG_LIFT: u64 = 2;
const TAG_START: u64 = 3;

/// Independent child seed for a tagged purpose.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn unit_from_rng(rng: &mut ChaCha8Rng) -> C {
    C::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrackerConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
    /// Residual below which an endpoint counts as converged.
    pub tol: f64,
    /// Norm cutoff for divergence.
    pub divergence: f64,
    /// Tracking stops at `t*` and the endpoint is polished at `t = 1`.
    pub endgame: f64,
    pub gamma: C,
    pub seed: u64,
    pub cluster_tol: f64,
    /// Range of the integer lifting behind the polyhedral homotopy.
    pub lift_range: u64,
    pub retries: usize,
}

impl TrackerConfig {
    pub fn with_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, TAG_GAMMA));
        TrackerConfig {
            initial_step: 0.01,
            min_step: 1e-14,
            max_step: 0.05,
            max_steps: 100_000,
            tol: 1e-8,
            divergence: 1e10,
            endgame: 1.0 - 1e-8,
            gamma: unit_from_rng(&mut rng),
            seed,
            cluster_tol: 1e-6,
            lift_range: 64,
            retries: 10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::PreconditionViolated(format!("tracker config: {m}")));
        if !(self.min_step > 0.0 && self.min_step < self.initial_step && self.initial_step <= self.max_step) {
            return bad("need 0 < min step < initial step ≤ max step");
        }
        if !(self.tol > 0.0 && self.cluster_tol > 0.0 && self.divergence > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.endgame > 0.0 && self.endgame < 1.0) {
            return bad("endgame truncation must lie in (0, 1)");
        }
        if (self.gamma.norm() - 1.0).abs() > 1e-12 {
            return bad("gamma must have modulus 1");
        }
        if self.lift_range < 2 {
            return Err(Error::InvalidLiftingRange(self.lift_range));
        }
        Ok(())
    }

    fn lifting_options(&self) -> MixedVolumeOptions {
        MixedVolumeOptions {
            seed: derive_seed(self.seed, TAG_LIFT),
            range: self.lift_range,
            retries: self.retries.max(1),
        }
    }
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self::with_seed(DEFAULT_SEED)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathStatus {
    Converged,
    Diverged,
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Cell { cell: usize, start: usize },
    Source(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrackedRoot {
    pub point: Vec<C>,
    /// Max modulus of the target polynomials, each scaled to unit largest
    /// coefficient and divided by its largest term when that exceeds 1.
    pub residual: f64,
    pub status: PathStatus,
    pub origin: Origin,
}

impl TrackedRoot {
    pub fn is_converged(&self) -> bool {
        self.status == PathStatus::Converged
    }
}

pub fn converged_points(roots: &[TrackedRoot]) -> Vec<Vec<C>> {
    roots.iter().filter(|r| r.is_converged()).map(|r| r.point.clone()).collect()
}

/// Binomial system `c_a x^a + c_b x^b = 0`, one per cell edge.
#[derive(Clone, Debug)]
pub struct StartSystem {
    pub cell: MixedCell,
    /// Rows `b_j − a_j`.
    pub exponents: Vec<Vec<i64>>,
    /// `(c_a, c_b)` per edge.
    pub coefficients: Vec<(C, C)>,
}

impl StartSystem {
    pub fn new(cell: &MixedCell, f: &ComplexSystem) -> Result<Self> {
        if cell.dim() != f.len() || f.nvars() != cell.dim() {
            return Err(Error::DimensionMismatch { expected: cell.dim(), found: f.len() });
        }
        let coefficients = cell
            .edges
            .iter()
            .zip(f.polys())
            .map(|((a, b), p)| match (p.coefficient(a), p.coefficient(b)) {
                (Some(ca), Some(cb)) => Ok((*ca, *cb)),
                _ => Err(Error::PreconditionViolated("cell edge is not in the support".into())),
            })
            .collect::<Result<_>>()?;
        Ok(StartSystem { cell: cell.clone(), exponents: cell.edge_matrix(), coefficients })
    }

    /// All `|det|` torus solutions. With `V U = H` (column Hermite form),
    /// `log x = U m` and `H m ≡ log r (mod 2πi)` is solved by forward
    /// substitution over every choice of branch.
    pub fn solutions(&self) -> Vec<Vec<C>> {
        let n = self.exponents.len();
        let v: Vec<Vec<i128>> = self.exponents.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
        let (h, u) = column_hermite(&v).expect("mixed cell with singular edge matrix");
        let logs: Vec<C> = self.coefficients.iter().map(|(ca, cb)| (-ca / cb).ln()).collect();
        let mut out = Vec::new();
        let mut m = vec![C::new(0.0, 0.0); n];
        branch(0, &h, &logs, &mut m, &mut |m| {
            let x: Vec<C> =
                (0..n).map(|i| (0..n).map(|l| m[l] * u[i][l] as f64).sum::<C>().exp()).collect();
            out.push(x);
        });
        out.into_iter().map(|x| self.refine(x)).collect()
    }

    fn refine(&self, mut x: Vec<C>) -> Vec<C> {
        let f = self.as_system();
        for _ in 0..3 {
            let (val, jac) = eval_system(&f, &x);
            match jac.lu().solve(&val) {
                Some(dx) => x.iter_mut().zip(dx.iter()).for_each(|(xi, d)| *xi -= d),
                None => break,
            }
        }
        x
    }

    fn as_system(&self) -> Terms {
        let n = self.exponents.len();
        let polys = self
            .cell
            .edges
            .iter()
            .zip(&self.coefficients)
            .map(|((a, b), &(ca, cb))| vec![(a.exponents().to_vec(), ca), (b.exponents().to_vec(), cb)])
            .collect();
        Terms { n, polys }
    }
}

fn branch(j: usize, h: &[Vec<i128>], logs: &[C], m: &mut Vec<C>, emit: &mut impl FnMut(&[C])) {
    if j == h.len() {
        emit(m);
        return;
    }
    let shift: C = (0..j).map(|l| m[l] * h[j][l] as f64).sum();
    let d = h[j][j];
    for k in 0..d {
        m[j] = (logs[j] + C::new(0.0, 2.0 * PI * k as f64) - shift) / d as f64;
        branch(j + 1, h, logs, m, emit);
    }
}

pub fn start_solutions(cell: &MixedCell, f: &ComplexSystem) -> Result<Vec<Vec<C>>> {
    Ok(StartSystem::new(cell, f)?.solutions())
}

/// Monomials with values and gradients from a shared power table.
struct Powers {
    table: Vec<Vec<C>>,
}

impl Powers {
    fn new(x: &[C], max_deg: &[u32]) -> Self {
        let table = x
            .iter()
            .zip(max_deg)
            .map(|(&xi, &d)| {
                let mut row = Vec::with_capacity(d as usize + 1);
                let mut p = C::new(1.0, 0.0);
                row.push(p);
                for _ in 0..d {
                    p *= xi;
                    row.push(p);
                }
                row
            })
            .collect();
        Powers { table }
    }

    fn value(&self, e: &[u32]) -> C {
        e.iter().enumerate().map(|(i, &k)| self.table[i][k as usize]).product()
    }

    /// Adds `c · ∇x^e` to `row`.
    fn add_gradient(&self, e: &[u32], c: C, row: &mut [C]) {
        for i in 0..e.len() {
            if e[i] == 0 {
                continue;
            }
            let mut g = c * e[i] as f64 * self.table[i][e[i] as usize - 1];
            for (k, &ek) in e.iter().enumerate() {
                if k != i {
                    g *= self.table[k][ek as usize];
                }
            }
            row[i] += g;
        }
    }
}

fn max_degrees<'a>(n: usize, exps: impl Iterator<Item = &'a Vec<u32>>) -> Vec<u32> {
    let mut d = vec![0; n];
    for e in exps {
        for (di, &ei) in d.iter_mut().zip(e) {
            *di = (*di).max(ei);
        }
    }
    d
}

/// Plain system as term lists, for Newton on binomials.
struct Terms {
    n: usize,
    polys: Vec<Vec<(Vec<u32>, C)>>,
}

fn eval_system(f: &Terms, x: &[C]) -> (DVector<C>, DMatrix<C>) {
    let n = f.n;
    let pw = Powers::new(x, &max_degrees(n, f.polys.iter().flatten().map(|(e, _)| e)));
    let mut val = DVector::zeros(f.polys.len());
    let mut jac = DMatrix::zeros(f.polys.len(), n);
    for (j, p) in f.polys.iter().enumerate() {
        let mut row = vec![C::new(0.0, 0.0); n];
        for (e, c) in p {
            val[j] += c * pw.value(e);
            pw.add_gradient(e, *c, &mut row);
        }
        for (i, r) in row.into_iter().enumerate() {
            jac[(j, i)] = r;
        }
    }
    (val, jac)
}

/// `H(x, t)` with its partial derivatives.
trait Homotopy: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[C], t: f64) -> (DVector<C>, DMatrix<C>, DVector<C>);
    /// Largest `|c_a x^a|` of each polynomial at `t = 1`.
    fn term_sizes(&self, x: &[C]) -> Vec<f64>;
}

/// `|H_j(x, 1)|` relative to the largest term of `H_j` once that exceeds 1:
/// far from the origin an absolute residual drowns in rounding.
fn residual<H: Homotopy>(hom: &H, x: &[C]) -> f64 {
    let (val, _, _) = hom.eval(x, 1.0);
    val.iter().zip(hom.term_sizes(x)).map(|(v, m)| v.norm() / m.max(1.0)).fold(0.0, f64::max)
}

/// `Σ c_a y^a t^{e_a}` per polynomial, `e_a ≥ 0` vanishing on the cell.
struct PolyhedralHomotopy {
    n: usize,
    max_deg: Vec<u32>,
    polys: Vec<Vec<(Vec<u32>, C, f64)>>,
}

impl PolyhedralHomotopy {
    fn new(sub: &MixedSubdivision, cell: &MixedCell, g: &ComplexSystem) -> Self {
        let n = cell.dim();
        let mu = &cell.normal;
        let lifted = |j: usize, a: &Monomial| -> i128 {
            let w = i128::from(sub.lifting.value(j, a).expect("lifting covers the support"));
            a.exponents().iter().zip(mu).map(|(&x, &m)| i128::from(x) * m).sum::<i128>() + w * mu[n]
        };
        let raw: Vec<Vec<(Vec<u32>, C, i128)>> = g
            .polys()
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let base = lifted(j, &cell.edges[j].0);
                p.terms().map(|(a, c)| (a.exponents().to_vec(), *c, lifted(j, a) - base)).collect()
            })
            .collect();
        let min_pos = raw.iter().flatten().map(|t| t.2).filter(|&e| e > 0).min().unwrap_or(1);
        debug_assert!(raw.iter().flatten().all(|t| t.2 >= 0), "cell normal is not a lower normal");
        let polys: Vec<Vec<(Vec<u32>, C, f64)>> = raw
            .into_iter()
            .map(|p| p.into_iter().map(|(e, c, w)| (e, c, w as f64 / min_pos as f64)).collect())
            .collect();
        let max_deg = max_degrees(n, polys.iter().flatten().map(|t| &t.0));
        PolyhedralHomotopy { n, max_deg, polys }
    }
}

impl Homotopy for PolyhedralHomotopy {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &[C], t: f64) -> (DVector<C>, DMatrix<C>, DVector<C>) {
        let n = self.n;
        let pw = Powers::new(x, &self.max_deg);
        let mut val = DVector::zeros(n);
        let mut jac = DMatrix::zeros(n, n);
        let mut dt = DVector::zeros(n);
        for (j, p) in self.polys.iter().enumerate() {
            let mut row = vec![C::new(0.0, 0.0); n];
            for (e, c, w) in p {
                let tw = if *w == 0.0 { 1.0 } else { t.powf(*w) };
                if tw == 0.0 && *w > 1.0 {
                    continue;
                }
                let m = pw.value(e);
                val[j] += c * tw * m;
                pw.add_gradient(e, c * tw, &mut row);
                if *w > 0.0 {
                    dt[j] += c * (w * t.powf(w - 1.0)) * m;
                }
            }
            for (i, r) in row.into_iter().enumerate() {
                jac[(j, i)] = r;
            }
        }
        (val, jac, dt)
    }

    fn term_sizes(&self, x: &[C]) -> Vec<f64> {
        let pw = Powers::new(x, &self.max_deg);
        self.polys.iter().map(|p| p.iter().map(|(e, c, _)| (c * pw.value(e)).norm()).fold(0.0, f64::max)).collect()
    }
}

/// `(1 − t)·γ·g + t·h`, each polynomial scaled to unit largest coefficient.
struct LinearHomotopy {
    n: usize,
    max_deg: Vec<u32>,
    polys: Vec<Vec<(Vec<u32>, C, C)>>,
}

fn unit_scaled(p: &ComplexPoly) -> f64 {
    let m = p.max_coefficient();
    if m > 0.0 {
        1.0 / m
    } else {
        1.0
    }
}

impl LinearHomotopy {
    fn new(g: &ComplexSystem, h: &ComplexSystem, gamma: C) -> Self {
        let n = g.nvars();
        let polys: Vec<Vec<(Vec<u32>, C, C)>> = g
            .polys()
            .iter()
            .zip(h.polys())
            .map(|(gp, hp)| {
                let (sg, sh) = (unit_scaled(gp), unit_scaled(hp));
                gp.terms()
                    .map(|(a, c)| {
                        let target = hp.coefficient(a).copied().unwrap_or_default();
                        (a.exponents().to_vec(), gamma * c * sg, target * sh)
                    })
                    .collect()
            })
            .collect();
        let max_deg = max_degrees(n, polys.iter().flatten().map(|t| &t.0));
        LinearHomotopy { n, max_deg, polys }
    }
}

impl Homotopy for LinearHomotopy {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &[C], t: f64) -> (DVector<C>, DMatrix<C>, DVector<C>) {
        let n = self.n;
        let pw = Powers::new(x, &self.max_deg);
        let mut val = DVector::zeros(self.polys.len());
        let mut jac = DMatrix::zeros(self.polys.len(), n);
        let mut dt = DVector::zeros(self.polys.len());
        for (j, p) in self.polys.iter().enumerate() {
            let mut row = vec![C::new(0.0, 0.0); n];
            for (e, g, h) in p {
                let c = g * (1.0 - t) + h * t;
                let m = pw.value(e);
                val[j] += c * m;
                dt[j] += (h - g) * m;
                pw.add_gradient(e, c, &mut row);
            }
            for (i, r) in row.into_iter().enumerate() {
                jac[(j, i)] = r;
            }
        }
        (val, jac, dt)
    }

    fn term_sizes(&self, x: &[C]) -> Vec<f64> {
        let pw = Powers::new(x, &self.max_deg);
        self.polys.iter().map(|p| p.iter().map(|(e, _, h)| (h * pw.value(e)).norm()).fold(0.0, f64::max)).collect()
    }
}

fn norm(x: &[C]) -> f64 {
    x.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Up to three Newton steps at fixed `t`; `None` unless the updates shrink
/// below the corrector tolerance.
fn correct<H: Homotopy>(hom: &H, mut x: Vec<C>, t: f64) -> Option<Vec<C>> {
    let mut last = f64::INFINITY;
    for _ in 0..3 {
        let (val, jac, _) = hom.eval(&x, t);
        let dx = jac.lu().solve(&val)?;
        let size = dx.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if !size.is_finite() || size > 0.5 * last {
            return None;
        }
        x.iter_mut().zip(dx.iter()).for_each(|(xi, d)| *xi -= d);
        if size <= 1e-9 * (1.0 + norm(&x)) {
            return Some(x);
        }
        last = size;
    }
    None
}

/// Gauss–Newton at `t = 1` through a truncated SVD, which also settles
/// onto positive-dimensional solution sets.
fn polish<H: Homotopy>(hom: &H, mut x: Vec<C>) -> (Vec<C>, f64) {
    for _ in 0..12 {
        let (val, jac, _) = hom.eval(&x, 1.0);
        let svd = jac.svd(true, true);
        let smax = svd.singular_values.max();
        let Ok(dx) = svd.solve(&val, 1e-10 * smax.max(f64::MIN_POSITIVE)) else { break };
        let size = dx.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if !size.is_finite() {
            break;
        }
        x.iter_mut().zip(dx.iter()).for_each(|(xi, d)| *xi -= d);
        if size <= 1e-14 * (1.0 + norm(&x)) {
            break;
        }
    }
    let r = residual(hom, &x);
    (x, r)
}

fn track<H: Homotopy>(hom: &H, start: Vec<C>, cfg: &TrackerConfig) -> (Vec<C>, f64, PathStatus) {
    let n = hom.dim();
    let mut x = start;
    let mut t = 0.0;
    let mut step = cfg.initial_step;
    let mut streak = 0;
    let mut steps = 0;
    let mut stalled = false;
    while t < cfg.endgame {
        steps += 1;
        if steps > cfg.max_steps {
            stalled = true;
            break;
        }
        let h = step.min(cfg.endgame - t);
        let (_, jac, dt) = hom.eval(&x, t);
        let predicted = jac.lu().solve(&dt).map(|v| {
            let mut y = x.clone();
            for i in 0..n {
                y[i] -= v[i] * h;
            }
            y
        });
        match predicted.and_then(|y| correct(hom, y, t + h)) {
            Some(y) => {
                x = y;
                t += h;
                streak += 1;
                if streak >= 4 {
                    step = (step * 2.0).min(cfg.max_step);
                    streak = 0;
                }
                if norm(&x) > cfg.divergence {
                    return (x, f64::INFINITY, PathStatus::Diverged);
                }
            }
            None => {
                step /= 2.0;
                streak = 0;
                if step < cfg.min_step {
                    stalled = true;
                    break;
                }
            }
        }
    }
    let (x, r) = polish(hom, x);
    let status = if !r.is_finite() || norm(&x) > cfg.divergence {
        PathStatus::Diverged
    } else if r <= cfg.tol {
        PathStatus::Converged
    } else if stalled {
        PathStatus::Diverged
    } else {
        PathStatus::Failed
    };
    log::trace!("path ended at t = {t} after {steps} steps: {status:?}");
    (x, r, status)
}

/// Keeps converged roots at least `tol` apart (max norm), first wins;
/// other paths are kept as they are.
pub fn dedup_roots(roots: Vec<TrackedRoot>, tol: f64) -> Vec<TrackedRoot> {
    let mut out: Vec<TrackedRoot> = Vec::with_capacity(roots.len());
    for r in roots {
        let dup = r.is_converged()
            && out.iter().any(|o| {
                o.is_converged() && o.point.iter().zip(&r.point).all(|(a, b)| (a - b).norm() <= tol)
            });
        if !dup {
            out.push(r);
        }
    }
    out
}

/// Random unit-modulus coefficients on the given supports.
fn random_unit_system(f: &ComplexSystem, seed: u64) -> Result<ComplexSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys = f
        .polys()
        .iter()
        .map(|p| SparsePoly::from_terms(f.nvars(), p.terms().map(|(a, _)| (a.clone(), unit_from_rng(&mut rng)))))
        .collect::<Result<_>>()?;
    SparseSystem::new(f.nvars(), polys)
}

/// Roots of `g` from the mixed cells of `sub`, by polyhedral homotopy.
fn polyhedral_stage(sub: &MixedSubdivision, g: &ComplexSystem, cfg: &TrackerConfig) -> Vec<TrackedRoot> {
    let jobs: Vec<(usize, usize, Vec<C>, &MixedCell)> = sub
        .cells
        .iter()
        .enumerate()
        .flat_map(|(ci, cell)| {
            let starts = start_solutions(cell, g).expect("cell edges lie in the supports");
            starts.into_iter().enumerate().map(move |(si, s)| (ci, si, s, cell))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(ci, si, s, cell)| {
            let hom = PolyhedralHomotopy::new(sub, cell, g);
            let (point, residual, status) = track(&hom, s, cfg);
            TrackedRoot { point, residual, status, origin: Origin::Cell { cell: ci, start: si } }
        })
        .collect()
}

/// Isolated toric roots of a square system. Converged roots are
/// deduplicated; failed and diverged paths are reported, not dropped.
pub fn solve_toric(f: &ComplexSystem, cfg: &TrackerConfig) -> Result<Vec<TrackedRoot>> {
    cfg.validate()?;
    if !f.is_square() {
        return Err(Error::NotSquare { supports: f.len(), dim: f.nvars() });
    }
    let supports = f.supports();
    let sub = random_subdivision(&supports, &cfg.lifting_options())?;
    if sub.cells.is_empty() {
        return Ok(Vec::new());
    }
    let g = random_unit_system(f, derive_seed(cfg.seed, TAG_START))?;
    let stage1 = polyhedral_stage(&sub, &g, cfg);
    let hom = LinearHomotopy::new(&g, f, cfg.gamma);
    let roots: Vec<TrackedRoot> = stage1
        .into_par_iter()
        .map(|r| {
            if !r.is_converged() {
                // report the residual against the target, not against g
                return TrackedRoot { residual: residual(&hom, &r.point), ..r };
            }
            let (point, residual, status) = track(&hom, r.point, cfg);
            TrackedRoot { point, residual, status, origin: r.origin }
        })
        .collect();
    log::debug!(
        "solve_toric: {} paths, {} converged",
        roots.len(),
        roots.iter().filter(|r| r.is_converged()).count()
    );
    Ok(dedup_roots(roots, cfg.cluster_tol))
}

/// Tracks `(1 − t)·γ·g + t·h` from each source root of `g`. Returns one
/// record per path, in source order.
pub fn coefficient_homotopy(
    sources: &[Vec<C>],
    g: &ComplexSystem,
    h: &ComplexSystem,
    cfg: &TrackerConfig,
) -> Result<Vec<TrackedRoot>> {
    cfg.validate()?;
    if !g.is_square() {
        return Err(Error::NotSquare { supports: g.len(), dim: g.nvars() });
    }
    if h.nvars() != g.nvars() || h.len() != g.len() {
        return Err(Error::DimensionMismatch { expected: g.nvars(), found: h.nvars() });
    }
    for (j, (gp, hp)) in g.polys().iter().zip(h.polys()).enumerate() {
        if !hp.support().is_subset(&gp.support()) {
            return Err(Error::SupportContainment(format!("support of target {} is not in the start support", j + 1)));
        }
    }
    if let Some(s) = sources.iter().find(|s| s.len() != g.nvars()) {
        return Err(Error::LengthMismatch { expected: g.nvars(), found: s.len() });
    }
    let hom = LinearHomotopy::new(g, h, cfg.gamma);
    Ok(sources
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let (point, residual, status) = track(&hom, s.clone(), cfg);
            TrackedRoot { point, residual, status, origin: Origin::Source(i) }
        })
        .collect())
}

/// Floating-point geometric resolution: `q = Π (u − ℓ·p)` and Lagrange
/// interpolants `v_i`, coefficients low to high.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericResolution {
    pub ell: Vec<f64>,
    pub q: Vec<C>,
    pub v: Vec<Vec<C>>,
}

fn poly_mul_linear(p: &[C], root: C) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= c * root;
    }
    out
}

fn horner(p: &[C], x: C) -> C {
    p.iter().rev().fold(C::new(0.0, 0.0), |acc, &c| acc * x + c)
}

impl NumericResolution {
    /// Fails with [`Error::NonSeparating`] when two values `ℓ·p` are within
    /// `sep_tol` of each other.
    pub fn from_points(points: &[Vec<C>], ell: &[f64], sep_tol: f64) -> Result<Self> {
        let n = ell.len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::LengthMismatch { expected: n, found: p.len() });
        }
        let nodes: Vec<C> = points.iter().map(|p| p.iter().zip(ell).map(|(x, l)| x * l).sum()).collect();
        for i in 0..nodes.len() {
            for j in 0..i {
                if (nodes[i] - nodes[j]).norm() <= sep_tol {
                    return Err(Error::NonSeparating);
                }
            }
        }
        let q = nodes.iter().fold(vec![C::new(1.0, 0.0)], |acc, &r| poly_mul_linear(&acc, r));
        let mut v = vec![vec![C::new(0.0, 0.0); nodes.len()]; n];
        for (k, &xk) in nodes.iter().enumerate() {
            let mut basis = vec![C::new(1.0, 0.0)];
            let mut denom = C::new(1.0, 0.0);
            for (i, &xi) in nodes.iter().enumerate() {
                if i != k {
                    basis = poly_mul_linear(&basis, xi);
                    denom *= xk - xi;
                }
            }
            for (vi, pk) in v.iter_mut().zip(&points[k]) {
                let s = pk / denom;
                for (c, b) in vi.iter_mut().zip(&basis) {
                    *c += b * s;
                }
            }
        }
        for vi in &mut v {
            while vi.last().is_some_and(|c| *c == C::new(0.0, 0.0)) {
                vi.pop();
            }
        }
        Ok(NumericResolution { ell: ell.to_vec(), q, v })
    }

    pub fn degree(&self) -> usize {
        self.q.len() - 1
    }

    pub fn points_at(&self, roots: &[C]) -> Vec<Vec<C>> {
        roots.iter().map(|&r| self.v.iter().map(|vi| horner(vi, r)).collect()).collect()
    }

    pub fn eval_q(&self, u: C) -> C {
        horner(&self.q, u)
    }
}
