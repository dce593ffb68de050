//! Free-space norm by its two characterizations, and distances to
//! subspaces `F(S)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::metric::PointSet;
use crate::scalar::{le_tol, Scalar};

use super::element::{FreeElement, LipFunction, Molecule, MoleculeRep, PartialFunction, Space};
use super::extension::mcshane_unchecked;
use super::flow::min_cost_flow;
use super::lp::{ConstraintGraph, DualProgram};

#[derive(Debug, Clone)]
pub struct DualNorm<S> {
    pub value: S,
    /// 1-Lipschitz function attaining the supremum.
    pub witness: LipFunction<S>,
}

#[derive(Debug, Clone)]
pub struct PrimalNorm<S> {
    pub value: S,
    /// Convex representation with `mass == value`.
    pub rep: MoleculeRep<S>,
}

/// Sorted points: support of `mu`, the members of `extra`, and the base.
fn local_points<S: Scalar>(mu: &FreeElement<S>, extra: Option<&PointSet>) -> Vec<usize> {
    let space = mu.space();
    let mut pts = mu.support_set();
    pts.insert(space.base());
    if let Some(e) = extra {
        pts = pts.union(e);
    }
    pts.iter().collect()
}

/// `sup <f, mu>` over 1-Lipschitz `f` vanishing on `zero_set` (which
/// always includes the base). Works on the support plus `zero_set` and
/// extends the optimizer to the whole space.
fn dual_on<S: Scalar>(mu: &FreeElement<S>, zero_set: &PointSet) -> Result<DualNorm<S>> {
    let space = mu.space();
    let pts = local_points(mu, Some(zero_set));
    let graph = ConstraintGraph::complete(pts.len(), |i, j| space.d(pts[i], pts[j]).clone());
    let pinned: Vec<bool> = pts.iter().map(|&p| p == space.base() || zero_set.contains(p)).collect();
    let program = DualProgram::new(&graph, &pinned)?;
    let c: Vec<S> = pts.iter().map(|&p| mu.coeff(p).clone()).collect();
    let (value, f) = program.maximize(&c)?;
    let partial: BTreeMap<usize, S> = pts.iter().copied().zip(f).collect();
    let witness = mcshane_unchecked(space, &PartialFunction::new(partial), &S::one());
    Ok(DualNorm { value, witness })
}

/// `||mu||` as the value of the Kantorovich dual linear program.
pub fn norm_dual<S: Scalar>(mu: &FreeElement<S>) -> Result<DualNorm<S>> {
    let empty = PointSet::empty(mu.space().len());
    dual_on(mu, &empty)
}

/// `||mu||` as a min-cost transport; the optimal flow gives a convex
/// molecular representation.
pub fn norm_primal<S: Scalar>(mu: &FreeElement<S>) -> Result<PrimalNorm<S>> {
    let space = mu.space();
    let pts = local_points(mu, None);
    let n = pts.len();
    let base_local = pts.iter().position(|&p| p == space.base()).expect("base included");
    let mut cost = Vec::with_capacity(n * n);
    for &u in &pts {
        for &v in &pts {
            cost.push((u != v).then(|| space.d(u, v).clone()));
        }
    }
    let mut supply: Vec<S> = pts.iter().map(|&p| mu.coeff(p).clone()).collect();
    let total = supply.iter().fold(S::zero(), |acc, v| acc + v.clone());
    supply[base_local] = -total;
    let sol = min_cost_flow(n, &cost, &supply)?;
    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let f = &sol.flow[i * n + j];
            if *f > S::zero() {
                terms.push(Molecule { x: pts[i], y: pts[j], a: f.clone() * space.d(pts[i], pts[j]).clone() });
            }
        }
    }
    Ok(PrimalNorm { value: sol.cost, rep: MoleculeRep::new(space, terms)? })
}

/// `sum |a| == ||value(rep)||` up to tolerance.
pub fn is_convex_representation<S: Scalar>(rep: &MoleculeRep<S>) -> Result<bool> {
    let norm = norm_dual(&rep.value())?.value;
    Ok(le_tol(&rep.mass(), &norm))
}

/// `dist(mu, F(S))` by duality, with the optimal `f` vanishing on `S`.
pub fn dist_to_subspace<S: Scalar>(mu: &FreeElement<S>, set: &PointSet) -> Result<DualNorm<S>> {
    if set.space_len() != mu.space().len() {
        return Err(Error::SpaceMismatch);
    }
    dual_on(mu, set)
}

/// `dist(mu, F(S))` as a transport problem in which `S` together with the
/// base acts as one free source and sink.
pub fn dist_to_subspace_primal<S: Scalar>(mu: &FreeElement<S>, set: &PointSet) -> Result<S> {
    let space = mu.space();
    if set.space_len() != space.len() {
        return Err(Error::SpaceMismatch);
    }
    let mut zero = set.clone();
    zero.insert(space.base());
    let free: Vec<usize> = mu.support().into_iter().filter(|p| !zero.contains(*p)).collect();
    let n = free.len() + 1;
    let hub = free.len();
    let to_zero: Vec<S> = free.iter().map(|&p| space.dist_to_set(p, &zero).expect("nonempty")).collect();
    let mut cost = vec![None; n * n];
    for i in 0..free.len() {
        for j in 0..free.len() {
            if i != j {
                cost[i * n + j] = Some(space.d(free[i], free[j]).clone());
            }
        }
        cost[i * n + hub] = Some(to_zero[i].clone());
        cost[hub * n + i] = Some(to_zero[i].clone());
    }
    let mut supply: Vec<S> = free.iter().map(|&p| mu.coeff(p).clone()).collect();
    let total = supply.iter().fold(S::zero(), |acc, v| acc + v.clone());
    supply.push(-total);
    Ok(min_cost_flow(n, &cost, &supply)?.cost)
}

/// Upper bound on `||m_uv - m_xy||`:
/// `(d(u,x) + d(v,y) + |d(u,v) - d(x,y)|) / max(d(u,v), d(x,y))`.
pub fn molecule_dist_upper<S: Scalar>(space: &Space<S>, u: usize, v: usize, x: usize, y: usize) -> Result<S> {
    if u == v {
        return Err(Error::DegeneratePair(space.name(u).to_string()));
    }
    if x == y {
        return Err(Error::DegeneratePair(space.name(x).to_string()));
    }
    let duv = space.d(u, v).clone();
    let dxy = space.d(x, y).clone();
    let num = space.d(u, x).clone() + space.d(v, y).clone() + (duv.clone() - dxy.clone()).abs();
    Ok(num / S::max_of(duv, dxy))
}
