use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, PointSet};
use crate::scalar::{sum, Scalar};

pub type Space<S> = Arc<FiniteMetricSpace<S>>;

/// Finitely supported element `sum c_x delta(x)` of the free space.
///
/// Coefficients are stored densely; the base slot is always zero because
/// `delta(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeElement<S> {
    space: Space<S>,
    coeffs: Vec<S>,
}

impl<S: Scalar> FreeElement<S> {
    pub fn zero(space: &Space<S>) -> Self {
        Self { space: space.clone(), coeffs: vec![S::zero(); space.len()] }
    }

    /// Dense coefficients, one per point. The base entry is discarded.
    pub fn from_coeffs(space: &Space<S>, mut coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() != space.len() {
            return Err(Error::SpaceMismatch);
        }
        coeffs[space.base()] = S::zero();
        Ok(Self { space: space.clone(), coeffs })
    }

    pub fn from_map(space: &Space<S>, map: &BTreeMap<usize, S>) -> Result<Self> {
        let mut e = Self::zero(space);
        for (&x, c) in map {
            if x >= space.len() {
                return Err(Error::UnknownPoint(x.to_string()));
            }
            e.add_at(x, c.clone());
        }
        Ok(e)
    }

    /// `delta(x)`.
    pub fn delta(space: &Space<S>, x: usize) -> Self {
        let mut e = Self::zero(space);
        e.add_at(x, S::one());
        e
    }

    /// `(delta(x) - delta(y)) / d(x, y)`.
    pub fn molecule(space: &Space<S>, x: usize, y: usize) -> Result<Self> {
        if x == y {
            return Err(Error::DegeneratePair(space.name(x).to_string()));
        }
        let d = space.d(x, y).clone();
        let mut e = Self::zero(space);
        e.add_at(x, S::one() / d.clone());
        e.add_at(y, -(S::one() / d));
        Ok(e)
    }

    pub fn space(&self) -> &Space<S> {
        &self.space
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, x: usize) -> &S {
        &self.coeffs[x]
    }

    pub fn add_at(&mut self, x: usize, c: S) {
        if x != self.space.base() {
            self.coeffs[x] += c;
        }
    }

    /// Points with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| !self.coeffs[i].is_zero()).collect()
    }

    pub fn support_set(&self) -> PointSet {
        PointSet::new(self.coeffs.len(), self.support()).expect("indices in range")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn same_space(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.combine(other, S::one())
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.combine(other, -S::one())
    }

    /// `self + t * other`.
    pub fn combine(&self, other: &Self, t: S) -> Result<Self> {
        if !self.same_space(other) {
            return Err(Error::SpaceMismatch);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + t.clone() * b.clone()).collect();
        Ok(Self { space: self.space.clone(), coeffs })
    }

    pub fn scale(&self, t: S) -> Self {
        Self { space: self.space.clone(), coeffs: self.coeffs.iter().map(|c| c.clone() * t.clone()).collect() }
    }

    /// `sum_i a_i e_i` over elements of one space.
    pub fn linear_combination(space: &Space<S>, coeffs: &[S], elems: &[FreeElement<S>]) -> Result<Self> {
        let mut acc = Self::zero(space);
        for (a, e) in coeffs.iter().zip(elems) {
            acc = acc.combine(e, a.clone())?;
        }
        Ok(acc)
    }

    /// Duality pairing `<f, mu>`.
    pub fn pair(&self, f: &LipFunction<S>) -> Result<S> {
        if !Arc::ptr_eq(&self.space, &f.space) && *self.space != *f.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(sum(self.coeffs.iter().zip(&f.values).map(|(c, v)| c.clone() * v.clone())))
    }
}

/// One weighted molecule `a * m_xy`.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule<S> {
    pub x: usize,
    pub y: usize,
    pub a: S,
}

/// Finite sum of weighted molecules.
#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeRep<S> {
    space: Space<S>,
    terms: Vec<Molecule<S>>,
}

impl<S: Scalar> MoleculeRep<S> {
    pub fn new(space: &Space<S>, terms: Vec<Molecule<S>>) -> Result<Self> {
        for t in &terms {
            if t.x >= space.len() || t.y >= space.len() {
                return Err(Error::UnknownPoint(t.x.max(t.y).to_string()));
            }
            if t.x == t.y {
                return Err(Error::DegeneratePair(space.name(t.x).to_string()));
            }
        }
        Ok(Self { space: space.clone(), terms })
    }

    pub fn space(&self) -> &Space<S> {
        &self.space
    }

    pub fn terms(&self) -> &[Molecule<S>] {
        &self.terms
    }

    /// `sum |a_k|`.
    pub fn mass(&self) -> S {
        sum(self.terms.iter().map(|t| t.a.abs()))
    }

    /// The element the representation sums to.
    pub fn value(&self) -> FreeElement<S> {
        let mut e = FreeElement::zero(&self.space);
        for t in &self.terms {
            let w = t.a.clone() / self.space.d(t.x, t.y).clone();
            e.add_at(t.x, w.clone());
            e.add_at(t.y, -w);
        }
        e
    }
}

/// Lipschitz function vanishing at the base point, given on every point.
#[derive(Debug, Clone, PartialEq)]
pub struct LipFunction<S> {
    space: Space<S>,
    values: Vec<S>,
}

impl<S: Scalar> LipFunction<S> {
    pub fn new(space: &Space<S>, values: Vec<S>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::SpaceMismatch);
        }
        if !values[space.base()].is_zero() {
            return Err(Error::BaseNotInDomain);
        }
        Ok(Self { space: space.clone(), values })
    }

    pub fn zero(space: &Space<S>) -> Self {
        Self { space: space.clone(), values: vec![S::zero(); space.len()] }
    }

    pub fn space(&self) -> &Space<S> {
        &self.space
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &S {
        &self.values[x]
    }

    /// Best Lipschitz constant.
    pub fn lip_constant(&self) -> S {
        let n = self.values.len();
        let mut best = S::zero();
        for x in 0..n {
            for y in x + 1..n {
                let q = (self.values[x].clone() - self.values[y].clone()).abs() / self.space.d(x, y).clone();
                if q > best {
                    best = q;
                }
            }
        }
        best
    }

    /// Points where the function is nonzero.
    pub fn support_set(&self) -> PointSet {
        PointSet::new(self.values.len(), (0..self.values.len()).filter(|&i| !self.values[i].is_zero()))
            .expect("indices in range")
    }
}

/// Function known on a subset `S` of the points.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFunction<S> {
    pub values: BTreeMap<usize, S>,
}

impl<S: Scalar> PartialFunction<S> {
    pub fn new(values: BTreeMap<usize, S>) -> Self {
        Self { values }
    }

    pub fn domain(&self, space_len: usize) -> PointSet {
        PointSet::new(space_len, self.values.keys().copied()).expect("indices in range")
    }
}
