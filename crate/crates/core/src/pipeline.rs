//! Witness point sets for equidimensional components: the generic
//! procedures driven by Γ, and the slicing procedure for arbitrary square
//! systems.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::gamma_with;
use crate::error::{Error, Result};
use crate::homotopy::{
    coefficient_homotopy, dedup_roots, derive_seed, solve_toric, NumericResolution, Origin, PathStatus, TrackedRoot,
    TrackerConfig,
};
use crate::lattice::{
    embed_phi, specialize, IndexSet, Monomial, RationalPoly, RationalSystem, SparsePoly, SparseSystem,
};
use crate::subdivision::{mixed_volume_with, MixedVolumeOptions, DEFAULT_RANGE};

type C = Complex64;

pub const DEFAULT_COEFF_BOUND: i64 = 997;

const TAG_SLICE: u64 = 11;
const TAG_ELL: u64 = 12;
const TAG_START: u64 = 13;
const TAG_LEVEL: u64 = 14;
const TAG_COMPONENT: u64 = 15;

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub tracker: TrackerConfig,
    /// Random integers are drawn from `[−B, B] \ {0}`.
    pub coeff_bound: i64,
    /// Scaled residual tolerance of the filters.
    pub tol: f64,
    pub lift_range: u64,
}

impl PipelineConfig {
    pub fn with_seed(seed: u64) -> Self {
        PipelineConfig {
            tracker: TrackerConfig::with_seed(seed),
            coeff_bound: DEFAULT_COEFF_BOUND,
            tol: 1e-8,
            lift_range: DEFAULT_RANGE,
        }
    }

    pub fn seed(&self) -> u64 {
        self.tracker.seed
    }

    fn mv_options(&self) -> MixedVolumeOptions {
        MixedVolumeOptions { seed: self.seed(), range: self.lift_range, retries: self.tracker.retries.max(1) }
    }

    fn reseeded(&self, seed: u64) -> Self {
        let mut cfg = self.clone();
        let gamma = TrackerConfig::with_seed(seed).gamma;
        cfg.tracker.seed = seed;
        cfg.tracker.gamma = gamma;
        cfg
    }

    fn validate(&self) -> Result<()> {
        self.tracker.validate()?;
        if self.coeff_bound < 1 {
            return Err(Error::PreconditionViolated("coefficient bound must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::PreconditionViolated("tolerance must be positive".into()));
        }
        Ok(())
    }
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self::with_seed(crate::subdivision::DEFAULT_SEED)
    }
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    let v = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

/// `L(X) = Σ a_l X_l − b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
}

impl AffineForm {
    pub fn random(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Self {
        let coeffs = (0..n).map(|_| nonzero(rng, bound)).collect();
        AffineForm { coeffs, rhs: nonzero(rng, bound) }
    }

    pub fn eval(&self, x: &[C]) -> C {
        self.coeffs.iter().zip(x).map(|(&a, xi)| xi * a as f64).sum::<C>() - self.rhs as f64
    }

    /// `Σ a_l X_l − b` scaled by `s`.
    pub fn to_poly(&self, s: i64) -> RationalPoly {
        let n = self.coeffs.len();
        let r = |v: i64| BigRational::from_integer(BigInt::from(v));
        let mut p = SparsePoly::zero(n);
        for (l, &a) in self.coeffs.iter().enumerate() {
            p.add_term(Monomial::unit(n, l + 1), r(a * s)).expect("matching dimension");
        }
        p.add_term(Monomial::zero(n), r(-self.rhs * s)).expect("matching dimension");
        p
    }

    /// The same form in `n` variables, with zero coefficients on `I`.
    pub fn embed(&self, index_set: &IndexSet) -> Self {
        let n = index_set.ambient();
        AffineForm { coeffs: embed_phi(&self.coeffs, index_set, n).expect("form lives on the complement"), rhs: self.rhs }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessPoint {
    pub root: TrackedRoot,
    /// The Jacobian of the generating system leaves more than `k` free
    /// directions here, so the point may lie on a component of dimension
    /// above `k` rather than on the `k`-dimensional part.
    pub higher_dimensional: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessSet {
    pub k: usize,
    /// Coordinates set to zero; empty outside the generic procedure.
    pub index_set: IndexSet,
    pub slicing_forms: Vec<AffineForm>,
    pub points: Vec<WitnessPoint>,
    pub resolution: Option<NumericResolution>,
    /// Degree predicted by Γ, when known.
    pub expected: Option<u64>,
}

impl WitnessSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points not flagged as lying on a higher-dimensional component.
    pub fn proper_count(&self) -> usize {
        self.points.iter().filter(|p| !p.higher_dimensional).count()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PathCounts {
    pub converged: usize,
    pub diverged: usize,
    pub failed: usize,
}

impl PathCounts {
    fn of(roots: &[TrackedRoot]) -> Self {
        let mut c = PathCounts::default();
        for r in roots {
            match r.status {
                PathStatus::Converged => c.converged += 1,
                PathStatus::Diverged => c.diverged += 1,
                PathStatus::Failed => c.failed += 1,
            }
        }
        c
    }

    fn add(&mut self, o: PathCounts) {
        self.converged += o.converged;
        self.diverged += o.diverged;
        self.failed += o.failed;
    }

    pub fn total(&self) -> usize {
        self.converged + self.diverged + self.failed
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub seed: u64,
    /// Mixed volumes behind each homotopy, in solve order.
    pub mixed_volumes: Vec<u64>,
    pub paths: PathCounts,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionReport {
    pub n: usize,
    pub components: BTreeMap<usize, Vec<WitnessSet>>,
    pub diagnostics: Diagnostics,
}

impl DecompositionReport {
    pub fn count(&self, k: usize) -> usize {
        self.components.get(&k).map_or(0, |v| v.iter().map(WitnessSet::len).sum())
    }

    pub fn proper_count(&self, k: usize) -> usize {
        self.components.get(&k).map_or(0, |v| v.iter().map(WitnessSet::proper_count).sum())
    }
}

/// Random separating form for the points, retried `retries` times.
fn resolve(points: &[Vec<C>], rng: &mut ChaCha8Rng, cfg: &PipelineConfig) -> Option<NumericResolution> {
    if points.is_empty() {
        return None;
    }
    let n = points[0].len();
    for _ in 0..cfg.tracker.retries.max(1) {
        let ell: Vec<f64> = (0..n).map(|_| nonzero(rng, cfg.coeff_bound) as f64).collect();
        match NumericResolution::from_points(points, &ell, cfg.tracker.cluster_tol) {
            Ok(r) => return Some(r),
            Err(_) => continue,
        }
    }
    log::warn!("no separating form found for {} points", points.len());
    None
}

struct ToricWitness {
    set: WitnessSet,
    mixed_volume: u64,
    paths: PathCounts,
}

/// Witness points of the toric part of `V(f)` for `m ≤ n` polynomials:
/// `n − m` random affine slices and a solve of the square system.
pub fn generic_toric_solve(f: &RationalSystem, cfg: &PipelineConfig) -> Result<WitnessSet> {
    Ok(toric_witness(f, cfg)?.set)
}

fn toric_witness(f: &RationalSystem, cfg: &PipelineConfig) -> Result<ToricWitness> {
    cfg.validate()?;
    let n = f.nvars();
    let m = f.len();
    if m > n {
        return Err(Error::PreconditionViolated(format!("{m} polynomials in {n} variables")));
    }
    if n == 0 {
        return Err(Error::InvalidDimension("generic toric solve needs n ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed(), TAG_SLICE));
    let forms: Vec<AffineForm> = (0..n - m).map(|_| AffineForm::random(&mut rng, n, cfg.coeff_bound)).collect();
    let mut polys = f.polys().to_vec();
    polys.extend(forms.iter().map(|l| l.to_poly(1)));
    let square = SparseSystem::new(n, polys)?;
    let mv = mixed_volume_with(&square.supports(), &cfg.mv_options())?;
    let mut set = WitnessSet {
        k: n - m,
        index_set: IndexSet::empty(n),
        slicing_forms: forms,
        points: Vec::new(),
        resolution: None,
        expected: None,
    };
    if mv == 0 {
        return Ok(ToricWitness { set, mixed_volume: 0, paths: PathCounts::default() });
    }
    let roots = solve_toric(&square.to_complex(), &cfg.tracker)?;
    let paths = PathCounts::of(&roots);
    set.points = roots
        .into_iter()
        .filter(TrackedRoot::is_converged)
        .map(|root| WitnessPoint { root, higher_dimensional: false })
        .collect();
    let pts: Vec<Vec<C>> = set.points.iter().map(|p| p.root.point.clone()).collect();
    let mut ell_rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed(), TAG_ELL));
    set.resolution = resolve(&pts, &mut ell_rng, cfg);
    Ok(ToricWitness { set, mixed_volume: mv, paths })
}

/// One witness set per `I ∈ Γ`, filed under `k = n − #I − #J_I`; points are
/// embedded into `C^n` with zeros on `I`.
pub fn generic_affine_solve(f: &RationalSystem, cfg: &PipelineConfig) -> Result<DecompositionReport> {
    cfg.validate()?;
    let n = f.nvars();
    let gamma = gamma_with(&f.supports(), &cfg.mv_options())?;
    let solved: Vec<Result<(WitnessSet, u64, PathCounts)>> = gamma
        .par_iter()
        .map(|entry| {
            let i = &entry.index_set;
            if i.len() == n {
                // the origin, cut by no slices
                let root = TrackedRoot {
                    point: vec![C::new(0.0, 0.0); n],
                    residual: f.residual(&vec![C::new(0.0, 0.0); n]),
                    status: PathStatus::Converged,
                    origin: Origin::Source(0),
                };
                let set = WitnessSet {
                    k: entry.dim,
                    index_set: i.clone(),
                    slicing_forms: Vec::new(),
                    points: vec![WitnessPoint { root, higher_dimensional: false }],
                    resolution: None,
                    expected: Some(entry.toric_degree),
                };
                return Ok((set, 1, PathCounts::default()));
            }
            let restricted = specialize(f, i)?;
            let sub = cfg.reseeded(derive_seed(cfg.seed(), TAG_COMPONENT ^ (i.mask() << 8)));
            let tw = toric_witness(&restricted.system, &sub)?;
            let mut set = tw.set;
            set.k = entry.dim;
            set.expected = Some(entry.toric_degree);
            set.slicing_forms = set.slicing_forms.iter().map(|l| l.embed(i)).collect();
            for p in &mut set.points {
                p.root.point = embed_phi(&p.root.point, i, n)?;
            }
            set.index_set = i.clone();
            set.resolution = resolve(
                &set.points.iter().map(|p| p.root.point.clone()).collect::<Vec<_>>(),
                &mut ChaCha8Rng::seed_from_u64(derive_seed(sub.seed(), TAG_ELL)),
                cfg,
            );
            Ok((set, tw.mixed_volume, tw.paths))
        })
        .collect();
    let mut report = DecompositionReport {
        n,
        components: BTreeMap::new(),
        diagnostics: Diagnostics { seed: cfg.seed(), ..Default::default() },
    };
    for r in solved {
        let (set, mv, paths) = r?;
        report.diagnostics.mixed_volumes.push(mv);
        report.diagnostics.paths.add(paths);
        report.components.entry(set.k).or_default().push(set);
    }
    report.diagnostics.notes.push(
        "positive-dimensional components are represented by witness points on generic slices".into(),
    );
    Ok(report)
}

/// Keeps points with `max_j |f_j(p)| ≤ tol · (1 + ‖coeffs‖_∞ · (1 + ‖p‖_∞)^deg f)`.
pub fn filter_by_residual(points: &[Vec<C>], f: &RationalSystem, tol: f64) -> Vec<Vec<C>> {
    points.iter().filter(|p| passes_residual(p, f, tol)).cloned().collect()
}

fn inf_norm(p: &[C]) -> f64 {
    p.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn passes_residual(p: &[C], f: &RationalSystem, tol: f64) -> bool {
    let coeffs = f.polys().iter().map(SparsePoly::max_coefficient).fold(0.0, f64::max);
    let deg = f.degree().unwrap_or(0) as i32;
    let bound = tol * (1.0 + coeffs * (1.0 + inf_norm(p)).powi(deg));
    f.residual(p) <= bound
}

fn on_slices(p: &[C], forms: &[AffineForm], tol: f64) -> bool {
    forms.iter().all(|l| {
        let scale = l.coeffs.iter().map(|a| a.abs()).max().unwrap_or(0).max(l.rhs.abs()) as f64;
        l.eval(p).norm() <= tol * (1.0 + scale * (1.0 + inf_norm(p)))
    })
}

/// `n` minus the numerical rank of the Jacobian of `f` at `p`.
pub fn local_corank(f: &RationalSystem, p: &[C]) -> usize {
    let n = f.nvars();
    let mut jac = DMatrix::<C>::zeros(f.len(), n);
    for (j, poly) in f.polys().iter().enumerate() {
        for (m, c) in poly.terms() {
            let c = C::new(num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN), 0.0);
            for i in 0..n {
                let e = m.exponents()[i];
                if e == 0 {
                    continue;
                }
                let mut g = c * e as f64;
                for (l, (&el, x)) in m.exponents().iter().zip(p).enumerate() {
                    g *= x.powu(if l == i { el - 1 } else { el });
                }
                jac[(j, i)] += g;
            }
        }
    }
    let sv = jac.singular_values();
    let smax = sv.max();
    let rank = sv.iter().filter(|&&s| s > 1e-6 * (1.0 + smax)).count();
    n - rank
}

/// For each `k < n`: track the roots of a random `g` on `A_j ∪ Δ` to
/// `h^(k) = f + Σ b_ij L_j`, keep endpoints on `V(f)` and on the slices.
pub fn points_in_equid_comps(f: &RationalSystem, cfg: &PipelineConfig) -> Result<DecompositionReport> {
    cfg.validate()?;
    let n = f.nvars();
    if !f.is_square() {
        return Err(Error::NotSquare { supports: f.len(), dim: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed(), TAG_START));
    let delta_terms: Vec<Monomial> = std::iter::once(Monomial::zero(n)).chain((1..=n).map(|i| Monomial::unit(n, i))).collect();
    let g_polys = f
        .polys()
        .iter()
        .map(|p| {
            let mut support: Vec<Monomial> = p.terms().map(|(m, _)| m.clone()).collect();
            support.extend(delta_terms.iter().filter(|m| p.coefficient(m).is_none()).cloned());
            support.sort();
            SparsePoly::from_terms(
                n,
                support.into_iter().map(|m| (m, BigRational::from_integer(nonzero(&mut rng, cfg.coeff_bound).into()))),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let g = SparseSystem::new(n, g_polys)?;
    let g_c = g.to_complex();
    let g_roots = solve_toric(&g_c, &cfg.tracker)?;
    let start_paths = PathCounts::of(&g_roots);
    let sources: Vec<Vec<C>> = g_roots.into_iter().filter(TrackedRoot::is_converged).map(|r| r.point).collect();
    log::debug!("auxiliary system: {} start roots", sources.len());

    let levels: Vec<Result<(WitnessSet, PathCounts)>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed(), TAG_LEVEL ^ ((k as u64) << 8)));
            let forms: Vec<AffineForm> = (0..k).map(|_| AffineForm::random(&mut rng, n, cfg.coeff_bound)).collect();
            let h_polys = f
                .polys()
                .iter()
                .map(|p| {
                    let mut h = p.clone();
                    for l in &forms {
                        for (m, c) in l.to_poly(nonzero(&mut rng, cfg.coeff_bound)).terms() {
                            h.add_term(m.clone(), c.clone())?;
                        }
                    }
                    Ok(h)
                })
                .collect::<Result<Vec<_>>>()?;
            let h = SparseSystem::new(n, h_polys)?;
            let ends = coefficient_homotopy(&sources, &g_c, &h.to_complex(), &cfg.tracker)?;
            let counts = PathCounts::of(&ends);
            let kept: Vec<TrackedRoot> = ends
                .into_iter()
                .filter(|r| r.is_converged() && passes_residual(&r.point, f, cfg.tol) && on_slices(&r.point, &forms, cfg.tol))
                .collect();
            let kept = dedup_roots(kept, cfg.tracker.cluster_tol);
            let points: Vec<WitnessPoint> = kept
                .into_iter()
                .map(|root| {
                    let higher_dimensional = local_corank(f, &root.point) > k;
                    WitnessPoint { root, higher_dimensional }
                })
                .collect();
            let pts: Vec<Vec<C>> = points.iter().map(|p| p.root.point.clone()).collect();
            let resolution = resolve(&pts, &mut rng, cfg);
            let set = WitnessSet { k, index_set: IndexSet::empty(n), slicing_forms: forms, points, resolution, expected: None };
            Ok((set, counts))
        })
        .collect();

    let mut report = DecompositionReport {
        n,
        components: BTreeMap::new(),
        diagnostics: Diagnostics {
            seed: cfg.seed(),
            mixed_volumes: vec![start_paths.total() as u64],
            paths: start_paths,
            notes: vec![
                "witness points form supersets; points flagged higher_dimensional may lie on components of larger dimension".into(),
            ],
        },
    };
    for l in levels {
        let (set, counts) = l?;
        report.diagnostics.paths.add(counts);
        report.components.insert(set.k, vec![set]);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn poly(n: usize, terms: &[(&[u32], i64)]) -> RationalPoly {
        SparsePoly::from_terms(n, terms.iter().map(|(e, c)| (Monomial::new(e.to_vec()), r(*c)))).unwrap()
    }

    #[test]
    fn affine_form_poly() {
        let l = AffineForm { coeffs: vec![2, -3], rhs: 5 };
        let p = l.to_poly(2);
        assert_eq!(p.coefficient(&Monomial::new(vec![1, 0])), Some(&r(4)));
        assert_eq!(p.coefficient(&Monomial::zero(2)), Some(&r(-10)));
        assert_eq!(l.eval(&[C::new(4.0, 0.0), C::new(1.0, 0.0)]), C::new(0.0, 0.0));
        let i = IndexSet::new(3, [2]).unwrap();
        assert_eq!(l.embed(&i).coeffs, vec![2, 0, -3]);
    }

    #[test]
    fn residual_filter() {
        let f = SparseSystem::new(2, vec![poly(2, &[(&[1, 0], 1), (&[0, 0], -1)])]).unwrap();
        let pts = vec![
            vec![C::new(1.0, 0.0), C::new(5.0, 0.0)],
            vec![C::new(1.001, 0.0), C::new(0.0, 0.0)],
        ];
        assert_eq!(filter_by_residual(&pts, &f, 1e-8), vec![pts[0].clone()]);
    }

    #[test]
    fn corank_on_a_line() {
        // (x−1)(y−1), (x−1)(z−1), (y−1)(z−1) at a point of {x = y = 1}
        let f = SparseSystem::new(
            3,
            vec![
                poly(3, &[(&[1, 1, 0], 1), (&[1, 0, 0], -1), (&[0, 1, 0], -1), (&[0, 0, 0], 1)]),
                poly(3, &[(&[1, 0, 1], 1), (&[1, 0, 0], -1), (&[0, 0, 1], -1), (&[0, 0, 0], 1)]),
                poly(3, &[(&[0, 1, 1], 1), (&[0, 1, 0], -1), (&[0, 0, 1], -1), (&[0, 0, 0], 1)]),
            ],
        )
        .unwrap();
        let c = |v: f64| C::new(v, 0.0);
        assert_eq!(local_corank(&f, &[c(1.0), c(1.0), c(3.0)]), 1);
        assert_eq!(local_corank(&f, &[c(1.0), c(1.0), c(1.0)]), 3);
    }
}
