//! Cantor schemes of nested intervals on the line.
//!
//! Level `k` holds `2^k` closed intervals indexed by the binary address
//! `s` (first choice in the most significant bit); the children of `s` are
//! `2s` and `2s + 1`. Below the stored depth the scheme is continued by
//! placing children at the ends of their parent, so the point with address
//! `t 1 1 1 ...` is `max A_t` and `t 0 0 0 ...` is `min A_t`.

use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::free::{FreeElement, Molecule, MoleculeRep};
use crate::scalar::{le_tol, Scalar};
use crate::tree::{godard_transform, L1Step, RTree, TreePoint, TreeSpace};

#[derive(Debug, Clone)]
struct LineData<S> {
    space: Arc<TreeSpace<S>>,
    /// `(u_{s0}, u_{s1})` point indices for each level `k < depth`.
    gaps: Vec<Vec<(usize, usize)>>,
    end: usize,
}

#[derive(Debug)]
pub struct CantorScheme<S> {
    levels: Vec<Vec<(S, S)>>,
    line: OnceLock<LineData<S>>,
    justified: OnceLock<Box<CantorScheme<S>>>,
}

impl<S: Scalar> Clone for CantorScheme<S> {
    fn clone(&self) -> Self {
        Self::with_levels(self.levels.clone())
    }
}

/// Largest supported depth.
pub const MAX_DEPTH: usize = 16;

/// Scheme on `[0,1]` with children `[min, min + r diam]` and
/// `[max - r diam, max]`; `r = 1/3` gives the middle-thirds set.
pub fn cantor_scheme<S: Scalar>(depth: usize, ratio: &S) -> Result<CantorScheme<S>> {
    if *ratio <= S::zero() || *ratio > S::ratio(1, 3) {
        return Err(Error::BadRatio);
    }
    check_depth(depth)?;
    let mut levels = vec![vec![(S::zero(), S::one())]];
    for k in 0..depth {
        let mut next = Vec::with_capacity(2 << k);
        for (lo, hi) in &levels[k] {
            let w = (hi.clone() - lo.clone()) * ratio.clone();
            next.push((lo.clone(), lo.clone() + w.clone()));
            next.push((hi.clone() - w, hi.clone()));
        }
        levels.push(next);
    }
    Ok(CantorScheme::with_levels(levels))
}

fn check_depth(depth: usize) -> Result<()> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::InvalidParameter(format!("depth must be in 1..={MAX_DEPTH}")));
    }
    Ok(())
}

fn address(k: usize, s: usize) -> String {
    (0..k).rev().map(|b| if (s >> b) & 1 == 1 { '1' } else { '0' }).collect()
}

impl<S: Scalar> CantorScheme<S> {
    fn with_levels(levels: Vec<Vec<(S, S)>>) -> Self {
        Self { levels, line: OnceLock::new(), justified: OnceLock::new() }
    }

    /// Validates nesting, `diam(child) <= diam / 3` and
    /// `d(children) >= diam / 3` at every stored level.
    pub fn from_levels(levels: Vec<Vec<(S, S)>>) -> Result<Self> {
        check_depth(levels.len().saturating_sub(1))?;
        for (k, level) in levels.iter().enumerate() {
            if level.len() != 1 << k {
                return Err(Error::InvalidScheme(format!("level {k} size")));
            }
            for (s, (lo, hi)) in level.iter().enumerate() {
                if lo >= hi || *lo < S::zero() {
                    return Err(Error::InvalidScheme(address(k, s)));
                }
            }
        }
        let third = S::ratio(1, 3);
        for k in 0..levels.len() - 1 {
            for s in 0..levels[k].len() {
                let (lo, hi) = &levels[k][s];
                let (l0, h0) = &levels[k + 1][2 * s];
                let (l1, h1) = &levels[k + 1][2 * s + 1];
                let d = hi.clone() - lo.clone();
                let small = d.clone() * third.clone();
                let ok = le_tol(lo, l0)
                    && le_tol(h1, hi)
                    && le_tol(&(h0.clone() - l0.clone()), &small)
                    && le_tol(&(h1.clone() - l1.clone()), &small)
                    && le_tol(&small, &(l1.clone() - h0.clone()));
                if !ok {
                    return Err(Error::InvalidScheme(address(k, s)));
                }
            }
        }
        Ok(Self::with_levels(levels))
    }

    /// Random valid scheme in `[0, 1]`: child diameters from
    /// `[diam/6, diam/3]`, leftover space split at random between the two
    /// margins and the gap. Every endpoint is a rational combination of
    /// the parent's, so the exact backend stays exact.
    pub fn random<R: Rng>(depth: usize, rng: &mut R) -> Result<Self> {
        check_depth(depth)?;
        let mut levels = vec![vec![(S::zero(), S::one())]];
        for k in 0..depth {
            let mut next = Vec::with_capacity(2 << k);
            for (lo, hi) in &levels[k] {
                let d = hi.clone() - lo.clone();
                let k0: i64 = rng.gen_range(4..=8);
                let k1: i64 = rng.gen_range(4..=8);
                let slack = d.clone() * S::ratio(16 - k0 - k1, 24);
                let mut parts: [i64; 3] = [rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3)];
                if parts.iter().all(|p| *p == 0) {
                    parts = [1, 1, 1];
                }
                let total: i64 = parts.iter().sum();
                let left_margin = slack.clone() * S::ratio(parts[0], total);
                let right_margin = slack * S::ratio(parts[2], total);
                let l0 = lo.clone() + left_margin;
                let h0 = l0.clone() + d.clone() * S::ratio(k0, 24);
                let h1 = hi.clone() - right_margin;
                let l1 = h1.clone() - d * S::ratio(k1, 24);
                next.push((l0, h0));
                next.push((l1, h1));
            }
            levels.push(next);
        }
        Self::from_levels(levels)
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn interval(&self, k: usize, s: usize) -> &(S, S) {
        &self.levels[k][s]
    }

    pub fn diam(&self, k: usize, s: usize) -> S {
        let (lo, hi) = &self.levels[k][s];
        hi.clone() - lo.clone()
    }

    /// Same diameters, children pushed to the ends of their parent.
    /// Computed once and cached.
    pub fn justified(&self) -> &CantorScheme<S> {
        self.justified.get_or_init(|| Box::new(self.build_justified()))
    }

    fn build_justified(&self) -> Self {
        let mut levels = vec![self.levels[0].clone()];
        for k in 0..self.depth() {
            let mut next = Vec::with_capacity(2 << k);
            for (s, (lo, hi)) in levels[k].iter().enumerate() {
                next.push((lo.clone(), lo.clone() + self.diam(k + 1, 2 * s)));
                next.push((hi.clone() - self.diam(k + 1, 2 * s + 1), hi.clone()));
            }
            levels.push(next);
        }
        Self::with_levels(levels)
    }

    /// `(u_{s0}, u_{s1})` for address `s` at level `k < depth`.
    pub fn gap_points(&self, k: usize, s: usize) -> Result<(S, S)> {
        let depth = self.depth();
        if k >= depth {
            return Err(Error::DepthExceeded { n: k + 1, depth });
        }
        let down = depth - k - 1;
        let left = ((2 * s) << down) | ((1 << down) - 1);
        let right = (2 * s + 1) << down;
        Ok((self.levels[depth][left].1.clone(), self.levels[depth][right].0.clone()))
    }

    /// Left endpoints of the deepest intervals.
    pub fn level_points(&self) -> Vec<S> {
        self.levels[self.depth()].iter().map(|(lo, _)| lo.clone()).collect()
    }

    fn line_data(&self) -> Result<&LineData<S>> {
        if let Some(d) = self.line.get() {
            return Ok(d);
        }
        let (lo, hi) = self.levels[0][0].clone();
        let len = hi.clone();
        let tree = Arc::new(RTree::new("0", &[("0".to_string(), "end".to_string(), len)])?);
        let mut named: Vec<(String, TreePoint<S>)> = vec![("0".into(), TreePoint::root())];
        let mut gaps = Vec::with_capacity(self.depth());
        for k in 0..self.depth() {
            let mut row = Vec::with_capacity(1 << k);
            for s in 0..1 << k {
                let (a, b) = self.gap_points(k, s)?;
                let a_idx = named.len();
                named.push((format!("u{}0", address(k, s)), tree.point(1, a)?));
                named.push((format!("u{}1", address(k, s)), tree.point(1, b)?));
                row.push((a_idx, a_idx + 1));
            }
            gaps.push(row);
        }
        if lo > S::zero() {
            named.push(("start".into(), tree.point(1, lo)?));
        }
        let end = named.len();
        named.push(("end".into(), tree.vertex_point(1)));
        let space = Arc::new(TreeSpace::new(tree, named)?);
        let _ = self.line.set(LineData { space, gaps, end });
        Ok(self.line.get().expect("just set"))
    }

    /// Line space holding `0`, every gap point, and `max A`.
    pub fn line_space(&self) -> Result<Arc<TreeSpace<S>>> {
        Ok(self.line_data()?.space.clone())
    }

    /// Index of `max A` in [`Self::line_space`].
    pub fn end_point(&self) -> Result<usize> {
        Ok(self.line_data()?.end)
    }

    /// Point indices of `(u_{s0}, u_{s1})` in [`Self::line_space`].
    pub fn gap_indices(&self, k: usize, s: usize) -> Result<(usize, usize)> {
        let d = self.line_data()?;
        d.gaps.get(k).and_then(|r| r.get(s)).copied().ok_or(Error::DepthExceeded { n: k + 1, depth: self.depth() })
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.depth() {
            return Err(Error::DepthExceeded { n, depth: self.depth() });
        }
        Ok(())
    }

    /// `gamma_n = 2^(1-n) sum_{|s| = n-1} m_{u_{s1} u_{s0}}`.
    pub fn gamma_n(&self, n: usize) -> Result<MoleculeRep<S>> {
        self.check_level(n)?;
        let space = self.line_space()?;
        let a = S::pow2(1 - n as i32);
        let terms = (0..1usize << (n - 1))
            .map(|s| {
                let (u0, u1) = self.gap_indices(n - 1, s)?;
                Ok(Molecule { x: u1, y: u0, a: a.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        MoleculeRep::new(space.metric(), terms)
    }

    /// `f_n = 2^(1-n) sum_s 1_(u'_{s0}, u'_{s1}) / d(u_{s1}, u_{s0})` on the
    /// justified scheme's line; the image of `gamma_n` under the isometry
    /// after moving gap points to the justified scheme.
    /// The result lives on the tree of `self.justified().line_space()`.
    pub fn f_n(&self, n: usize) -> Result<L1Step<S>> {
        self.check_level(n)?;
        let target = self.justified();
        let space = target.line_space()?;
        let metric = space.metric();
        let a = S::pow2(1 - n as i32);
        let mut coeffs = vec![S::zero(); metric.len()];
        for s in 0..1usize << (n - 1) {
            let (u0, u1) = self.gap_points(n - 1, s)?;
            let w = a.clone() / (u1 - u0);
            let (i0, i1) = target.gap_indices(n - 1, s)?;
            coeffs[i1] += w.clone();
            coeffs[i0] -= w;
        }
        let mu = FreeElement::from_coeffs(metric, coeffs)?;
        godard_transform(&space, &mu)
    }

    /// Intervals at level `k` contained in a union of closed intervals.
    pub fn count_contained(&self, k: usize, union: &[(S, S)]) -> Result<usize> {
        let level = self.levels.get(k).ok_or(Error::DepthExceeded { n: k, depth: self.depth() })?;
        Ok(level.iter().filter(|(lo, hi)| union.iter().any(|(a, b)| a <= lo && hi <= b)).count())
    }
}

/// `max(|x'-y'|/|x-y|, |x-y|/|x'-y'|)` over level-depth points of two
/// schemes of equal depth, matched by address.
pub fn bilipschitz_constant<S: Scalar>(a: &CantorScheme<S>, b: &CantorScheme<S>) -> Result<S> {
    if a.depth() != b.depth() {
        return Err(Error::InvalidParameter("schemes of different depth".into()));
    }
    let pa = a.level_points();
    let pb = b.level_points();
    let mut worst = S::one();
    for i in 0..pa.len() {
        for j in i + 1..pa.len() {
            let da = (pa[i].clone() - pa[j].clone()).abs();
            let db = (pb[i].clone() - pb[j].clone()).abs();
            worst = S::max_of(worst, S::max_of(da.clone() / db.clone(), db / da));
        }
    }
    Ok(worst)
}
