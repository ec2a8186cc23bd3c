//! Geometric resolutions of finite point sets over `Q`.
//!
//! A resolution `(ℓ, q, v_1..v_n)` describes the points
//! `{(v_1(η), …, v_n(η)) : q(η) = 0}` where `ℓ` is a linear form taking
//! the value `η` at the point attached to `η`.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::RationalSystem;
use crate::unipoly::UniPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricResolution {
    ell: Vec<BigRational>,
    q: UniPoly,
    v: Vec<UniPoly>,
}

/// Either a resolution or the empty set (`q = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolution {
    Points(GeometricResolution),
    Empty,
}

impl Resolution {
    pub fn is_empty(&self) -> bool {
        matches!(self, Resolution::Empty)
    }

    pub fn degree(&self) -> usize {
        match self {
            Resolution::Points(r) => r.degree(),
            Resolution::Empty => 0,
        }
    }
}

/// `(q, w_1..w_n)` with points `w_i(η) / q′(η)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KroneckerRep {
    pub q: UniPoly,
    pub w: Vec<UniPoly>,
}

fn dot(ell: &[BigRational], p: &[BigRational]) -> BigRational {
    ell.iter().zip(p).map(|(a, b)| a * b).sum()
}

/// True iff `ℓ` takes pairwise distinct values on `points`.
pub fn is_separating(ell: &[BigRational], points: &[Vec<BigRational>]) -> bool {
    let mut seen = BTreeSet::new();
    points.iter().all(|p| seen.insert(dot(ell, p)))
}

impl GeometricResolution {
    /// Checks that `q` is monic, nonconstant and squarefree and that every
    /// `v_i` has degree below `deg q`.
    pub fn new(ell: Vec<BigRational>, q: UniPoly, v: Vec<UniPoly>) -> Result<Self> {
        if ell.len() != v.len() {
            return Err(Error::LengthMismatch { expected: ell.len(), found: v.len() });
        }
        let d = q.degree().filter(|&d| d > 0).ok_or_else(|| {
            Error::PreconditionViolated("minimal polynomial must be nonconstant; use Resolution::Empty".into())
        })?;
        if !q.is_monic() {
            return Err(Error::PreconditionViolated("minimal polynomial must be monic".into()));
        }
        if !q.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        if let Some(i) = v.iter().position(|vi| vi.degree().is_some_and(|e| e >= d)) {
            return Err(Error::PreconditionViolated(format!("parametrization {} has degree ≥ deg q", i + 1)));
        }
        Ok(GeometricResolution { ell, q, v })
    }

    /// `q = Π (u − ℓ·p)` and Lagrange interpolants for the coordinates.
    pub fn from_points(points: &[Vec<BigRational>], ell: &[BigRational]) -> Result<Self> {
        let n = ell.len();
        if points.is_empty() {
            return Err(Error::PreconditionViolated("no points to resolve".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::LengthMismatch { expected: n, found: p.len() });
        }
        if !is_separating(ell, points) {
            return Err(Error::NonSeparating);
        }
        let nodes: Vec<BigRational> = points.iter().map(|p| dot(ell, p)).collect();
        let q = UniPoly::from_roots(&nodes);
        let v = (0..n)
            .map(|i| UniPoly::interpolate(&nodes, &points.iter().map(|p| p[i].clone()).collect::<Vec<_>>()))
            .collect();
        Ok(GeometricResolution { ell: ell.to_vec(), q, v })
    }

    pub fn nvars(&self) -> usize {
        self.ell.len()
    }

    pub fn degree(&self) -> usize {
        self.q.degree().unwrap_or(0)
    }

    pub fn ell(&self) -> &[BigRational] {
        &self.ell
    }

    pub fn q(&self) -> &UniPoly {
        &self.q
    }

    pub fn v(&self) -> &[UniPoly] {
        &self.v
    }

    /// `ℓ·v(u) ≡ u (mod q)`: the form really parametrizes by `u`.
    pub fn is_consistent(&self) -> bool {
        let combo = self
            .ell
            .iter()
            .zip(&self.v)
            .fold(UniPoly::zero(), |acc, (l, vi)| &acc + &vi.scale(l));
        (&combo - &UniPoly::var()).rem(&self.q).is_zero()
    }

    /// Evaluates the parametrization at exact roots of `q`.
    pub fn points_at(&self, roots: &[BigRational]) -> Result<Vec<Vec<BigRational>>> {
        roots
            .iter()
            .map(|r| {
                if !self.q.eval(r).is_zero() {
                    return Err(Error::NotARoot(r.to_string()));
                }
                Ok(self.v.iter().map(|vi| vi.eval(r)).collect())
            })
            .collect()
    }

    /// Keeps exactly the points where `f` vanishes:
    /// `Q = gcd(q, f_1(v), …, f_s(v))`, `V_i = v_i mod Q`.
    pub fn clean(&self, f: &RationalSystem) -> Result<Resolution> {
        if f.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), found: f.nvars() });
        }
        let composed: Vec<UniPoly> = f.polys().par_iter().map(|p| self.compose_mod_q(p)).collect();
        let g = composed.iter().fold(self.q.clone(), |g, c| g.gcd(c));
        if g.is_constant() {
            return Ok(Resolution::Empty);
        }
        let v = self.v.iter().map(|vi| vi.rem(&g)).collect();
        Ok(Resolution::Points(GeometricResolution { ell: self.ell.clone(), q: g, v }))
    }

    /// `p(v_1(u), …, v_n(u)) mod q`, with powers of each `v_i` cached.
    fn compose_mod_q(&self, p: &crate::lattice::RationalPoly) -> UniPoly {
        let mut powers: Vec<Vec<UniPoly>> = vec![vec![UniPoly::one()]; self.nvars()];
        let mut acc = UniPoly::zero();
        for (m, c) in p.terms() {
            let mut term = UniPoly::constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul_mod(&self.v[i], &self.q);
                    powers[i].push(next);
                }
                if e > 0 {
                    term = term.mul_mod(&powers[i][e], &self.q);
                }
            }
            acc = &acc + &term;
        }
        acc.rem(&self.q)
    }

    /// `w_i = v_i · q′ mod q`.
    pub fn to_kronecker(&self) -> KroneckerRep {
        let dq = self.q.derivative();
        KroneckerRep { q: self.q.clone(), w: self.v.iter().map(|vi| vi.mul_mod(&dq, &self.q)).collect() }
    }

    /// Inverse of [`GeometricResolution::to_kronecker`].
    pub fn from_kronecker(k: &KroneckerRep, ell: &[BigRational]) -> Result<Self> {
        let inv = k.q.derivative().inverse_mod(&k.q).ok_or(Error::NotSquarefree)?;
        let v = k.w.iter().map(|wi| wi.mul_mod(&inv, &k.q)).collect();
        GeometricResolution::new(ell.to_vec(), k.q.clone(), v)
    }
}

impl fmt::Display for GeometricResolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} = 0", self.q)?;
        for (i, vi) in self.v.iter().enumerate() {
            writeln!(f, "X{} = {}", i + 1, vi)?;
        }
        Ok(())
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resolution::Points(r) => r.fmt(f),
            Resolution::Empty => writeln!(f, "empty"),
        }
    }
}
