//! Finite pointed metric spaces and the point-set operations on them.

use crate::error::{Error, Result};
use crate::scalar::{le_tol, Scalar};

/// A finite metric space with a distinguished base point.
///
/// Points are addressed by index; `names` keeps the external labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace<S> {
    names: Vec<String>,
    base: usize,
    dist: Vec<S>,
}

impl<S: Scalar> FiniteMetricSpace<S> {
    /// Checks the metric axioms and builds the space.
    ///
    /// Float input is compared with the scalar tolerance, so a matrix that
    /// is symmetric or triangular up to `1e-9` is accepted.
    pub fn validate_metric(names: Vec<String>, base: usize, matrix: Vec<Vec<S>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptySet);
        }
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        if base >= n {
            return Err(Error::BaseOutOfRange(base.to_string()));
        }
        let name = |i: usize| names[i].clone();
        for (x, row) in matrix.iter().enumerate() {
            for (y, v) in row.iter().enumerate() {
                if *v < S::zero() {
                    return Err(Error::NegativeDistance { x: name(x), y: name(y) });
                }
            }
        }
        for (x, row) in matrix.iter().enumerate() {
            if !row[x].is_zero() {
                return Err(Error::NonzeroDiagonal(name(x)));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && matrix[x][y].is_zero() {
                    return Err(Error::ZeroDistanceDistinctPoints { x: name(x), y: name(y) });
                }
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                if (matrix[x][y].clone() - matrix[y][x].clone()).abs() > S::tol() {
                    return Err(Error::AsymmetricMatrix { x: name(x), y: name(y) });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let via = matrix[x][y].clone() + matrix[y][z].clone() + S::tol();
                    if matrix[x][z] > via {
                        return Err(Error::TriangleViolation { x: name(x), y: name(y), z: name(z) });
                    }
                }
            }
        }
        let dist = matrix.into_iter().flatten().collect();
        Ok(Self { names, base, dist })
    }

    /// Builds a space whose distances are known to be a metric, checking
    /// only that distinct points are at positive distance.
    pub(crate) fn from_trusted(names: Vec<String>, base: usize, dist: Vec<S>) -> Result<Self> {
        let n = names.len();
        debug_assert_eq!(dist.len(), n * n);
        for x in 0..n {
            for y in x + 1..n {
                if dist[x * n + y] <= S::zero() {
                    return Err(Error::ZeroDistanceDistinctPoints { x: names[x].clone(), y: names[y].clone() });
                }
            }
        }
        Ok(Self { names, base, dist })
    }

    /// Points of the real line with the usual distance.
    pub fn from_line(names: Vec<String>, coords: &[S], base: usize) -> Result<Self> {
        if names.len() != coords.len() {
            return Err(Error::NotSquare);
        }
        if base >= names.len() {
            return Err(Error::BaseOutOfRange(base.to_string()));
        }
        let n = coords.len();
        let mut dist = Vec::with_capacity(n * n);
        for x in coords {
            for y in coords {
                dist.push((x.clone() - y.clone()).abs());
            }
        }
        Self::from_trusted(names, base, dist)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn d(&self, x: usize, y: usize) -> &S {
        &self.dist[x * self.names.len() + y]
    }

    /// Distance matrix as rows.
    pub fn matrix(&self) -> Vec<Vec<S>> {
        self.dist.chunks(self.len()).map(|r| r.to_vec()).collect()
    }

    /// `d(x, A)`; `None` if `A` is empty.
    pub fn dist_to_set(&self, x: usize, set: &PointSet) -> Option<S> {
        set.iter().map(|a| self.d(x, a).clone()).reduce(S::min_of)
    }

    pub fn point_set<I: IntoIterator<Item = usize>>(&self, members: I) -> Result<PointSet> {
        PointSet::new(self.len(), members)
    }

    pub fn all_points(&self) -> PointSet {
        PointSet { mask: vec![true; self.len()] }
    }
}

/// Subset of the points of a space, stored as a mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    mask: Vec<bool>,
}

impl PointSet {
    pub fn new<I: IntoIterator<Item = usize>>(space_len: usize, members: I) -> Result<Self> {
        let mut mask = vec![false; space_len];
        for m in members {
            if m >= space_len {
                return Err(Error::UnknownPoint(m.to_string()));
            }
            mask[m] = true;
        }
        Ok(Self { mask })
    }

    pub fn empty(space_len: usize) -> Self {
        Self { mask: vec![false; space_len] }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, x: usize) {
        self.mask[x] = true;
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|b| *b)
    }

    pub fn space_len(&self) -> usize {
        self.mask.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }

    pub fn complement(&self) -> Self {
        Self { mask: self.mask.iter().map(|b| !b).collect() }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self { mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a || *b).collect() }
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.mask.iter().zip(&other.mask).any(|(a, b)| *a && *b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| !*a || *b)
    }
}

/// Closed neighborhood `{x : d(x, A) <= r}`.
pub fn neighborhood<S: Scalar>(space: &FiniteMetricSpace<S>, a: &PointSet, r: &S) -> Result<PointSet> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if *r < S::zero() {
        return Err(Error::InvalidParameter("radius must be nonnegative".into()));
    }
    let members = (0..space.len()).filter(|&x| space.dist_to_set(x, a).is_some_and(|d| le_tol(&d, r)));
    space.point_set(members)
}

/// `{x : 2^k <= d(x,0) <= 2^(k+2)}` together with the base point.
pub fn annulus<S: Scalar>(space: &FiniteMetricSpace<S>, k: i32) -> PointSet {
    let lo = S::pow2(k);
    let hi = S::pow2(k + 2);
    let b = space.base();
    let mut set = PointSet::empty(space.len());
    for x in 0..space.len() {
        let r = space.d(x, b);
        if x == b || (*r >= lo && *r <= hi) {
            set.insert(x);
        }
    }
    set
}

/// Adds `delta` to every distance between the two sides of the partition.
///
/// The result is a metric only when `delta < d(A, B)`; larger values are
/// rejected.
pub fn perturbed_metric<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    a: &PointSet,
    b: &PointSet,
    delta: &S,
) -> Result<FiniteMetricSpace<S>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.intersects(b) {
        return Err(Error::OverlappingSides);
    }
    if a.union(b).len() != space.len() {
        return Err(Error::NotCovering);
    }
    if *delta < S::zero() {
        return Err(Error::InvalidParameter("delta must be nonnegative".into()));
    }
    let side = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| (x, y)))
        .map(|(x, y)| space.d(x, y).clone())
        .reduce(S::min_of)
        .expect("both sides nonempty");
    if *delta >= side {
        return Err(Error::DeltaTooLarge { delta: delta.to_f64(), side_distance: side.to_f64() });
    }
    let n = space.len();
    let mut m = space.matrix();
    for x in 0..n {
        for y in 0..n {
            if a.contains(x) != a.contains(y) {
                m[x][y] = m[x][y].clone() + delta.clone();
            }
        }
    }
    FiniteMetricSpace::validate_metric(space.names().to_vec(), space.base(), m)
}

/// Smallest distance between two distinct points of `set`.
pub fn min_separation<S: Scalar>(space: &FiniteMetricSpace<S>, set: &PointSet) -> Result<S> {
    let pts: Vec<usize> = set.iter().collect();
    if pts.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let mut best: Option<S> = None;
    for (i, &x) in pts.iter().enumerate() {
        for &y in &pts[i + 1..] {
            let d = space.d(x, y).clone();
            best = Some(match best {
                Some(b) => S::min_of(b, d),
                None => d,
            });
        }
    }
    Ok(best.expect("two points"))
}
