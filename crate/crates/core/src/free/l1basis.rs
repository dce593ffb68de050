//! Lower `l1` constants of finite families: the largest `c` with
//! `||sum a_i g_i|| >= c sum |a_i|`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::element::FreeElement;
use super::lp::{ConstraintGraph, DualProgram};
use super::norm::norm_dual;
use super::simplex::solve;

/// Dual program together with the node standing for each covered space
/// point. Nodes missing from `node_of` are auxiliary.
pub struct PointProgram<S> {
    pub program: DualProgram<S>,
    pub node_of: BTreeMap<usize, usize>,
    pub nodes: usize,
}

impl<S: Scalar> PointProgram<S> {
    /// Coefficients of `mu` arranged by program node.
    pub fn weights(&self, mu: &FreeElement<S>) -> Result<Vec<S>> {
        let mut c = vec![S::zero(); self.nodes];
        for p in mu.support() {
            let node = self.node_of.get(&p).ok_or(Error::SpaceMismatch)?;
            c[*node] = mu.coeff(p).clone();
        }
        Ok(c)
    }
}

/// Something that can compute free-space norms on a fixed space.
pub trait NormOracle<S: Scalar> {
    fn norm(&self, mu: &FreeElement<S>) -> Result<S>;

    /// Dual program covering at least `points` and the base point.
    fn program(&self, points: &[usize]) -> Result<PointProgram<S>>;
}

/// Norms on an arbitrary finite metric space via the complete dual LP.
pub struct MetricOracle<S> {
    pub space: super::element::Space<S>,
}

impl<S: Scalar> NormOracle<S> for MetricOracle<S> {
    fn norm(&self, mu: &FreeElement<S>) -> Result<S> {
        Ok(norm_dual(mu)?.value)
    }

    fn program(&self, points: &[usize]) -> Result<PointProgram<S>> {
        let mut pts: Vec<usize> = points.to_vec();
        pts.push(self.space.base());
        pts.sort_unstable();
        pts.dedup();
        let graph = ConstraintGraph::complete(pts.len(), |i, j| self.space.d(pts[i], pts[j]).clone());
        let pinned: Vec<bool> = pts.iter().map(|&p| p == self.space.base()).collect();
        let program = DualProgram::new(&graph, &pinned)?;
        let node_of = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Ok(PointProgram { program, node_of, nodes: pts.len() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct L1Estimate<S> {
    /// Smallest `||sum a_i g_i||` over tested directions with `sum |a| = 1`.
    pub estimate: S,
    /// `min_s max_f min_i s_i <f, g_i>` over all sign patterns; by minimax
    /// this equals the constant. Present when every pattern was solved.
    pub certified: Option<S>,
    pub patterns_tested: usize,
    pub random_directions: usize,
}

impl<S: Scalar> L1Estimate<S> {
    /// `estimate - certified`, or `None` without a certificate.
    pub fn gap(&self) -> Option<S> {
        self.certified.as_ref().map(|c| self.estimate.clone() - c.clone())
    }

    /// Best available value: the certificate if present.
    pub fn constant(&self) -> S {
        self.certified.clone().unwrap_or_else(|| self.estimate.clone())
    }
}

/// Number of random directions tried beyond sign patterns.
pub const RANDOM_DIRECTIONS: usize = 32;

pub fn l1_basis_lower_bound<S: Scalar, O: NormOracle<S>>(
    oracle: &O,
    family: &[FreeElement<S>],
    budget: usize,
    seed: u64,
) -> Result<L1Estimate<S>> {
    let n = family.len();
    if n == 0 {
        return Err(Error::EmptyFamily);
    }
    let space = family[0].space().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exhaustive = n <= 63 && (1u64 << (n - 1)) <= budget as u64;
    let patterns: Vec<Vec<bool>> = if exhaustive {
        (0..1u64 << (n - 1)).map(|m| (0..n).map(|i| i > 0 && (m >> (i - 1)) & 1 == 1).collect()).collect()
    } else {
        (0..budget.max(1)).map(|_| (0..n).map(|i| i > 0 && rng.gen::<bool>()).collect()).collect()
    };

    let inv_n = S::one() / S::from_i64(n as i64);
    let mut estimate: Option<S> = None;
    let mut consider = |v: S| {
        if estimate.as_ref().is_none_or(|e| v < *e) {
            estimate = Some(v);
        }
    };
    for neg in &patterns {
        let a: Vec<S> = neg.iter().map(|&ng| if ng { -inv_n.clone() } else { inv_n.clone() }).collect();
        consider(oracle.norm(&FreeElement::linear_combination(&space, &a, family)?)?);
    }
    for _ in 0..RANDOM_DIRECTIONS {
        let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(-1000..=1000)).collect();
        let total: i64 = raw.iter().map(|v| v.abs()).sum();
        if total == 0 {
            continue;
        }
        let a: Vec<S> = raw.iter().map(|&v| S::ratio(v, total)).collect();
        consider(oracle.norm(&FreeElement::linear_combination(&space, &a, family)?)?);
    }

    let certified = if exhaustive { Some(certificate(oracle, family, &patterns)?) } else { None };
    Ok(L1Estimate {
        estimate: estimate.expect("at least one direction"),
        certified,
        patterns_tested: patterns.len(),
        random_directions: RANDOM_DIRECTIONS,
    })
}

/// For each sign pattern `s`, solves `max t` subject to
/// `t <= s_i <f, g_i>` over 1-Lipschitz `f`, and returns the minimum.
fn certificate<S: Scalar, O: NormOracle<S>>(oracle: &O, family: &[FreeElement<S>], patterns: &[Vec<bool>]) -> Result<S> {
    let mut points: Vec<usize> = family.iter().flat_map(|g| g.support()).collect();
    points.sort_unstable();
    points.dedup();
    let pp = oracle.program(&points)?;
    let forms: Vec<(Vec<S>, S)> =
        family.iter().map(|g| Ok(pp.program.linear_form(&pp.weights(g)?))).collect::<Result<_>>()?;
    let nv = pp.program.variables();
    let mut best: Option<S> = None;
    for neg in patterns {
        let mut lp = pp.program.base_lp(1);
        for ((coefs, constant), &ng) in forms.iter().zip(neg) {
            let sign = if ng { -S::one() } else { S::one() };
            // t - s <g, coefs> <= s * constant
            let mut row = vec![S::zero(); nv + 1];
            for (v, c) in coefs.iter().enumerate() {
                row[v] = -(sign.clone() * c.clone());
            }
            row[nv] = S::one();
            lp.rows.push(row);
            lp.rhs.push(sign * constant.clone());
        }
        lp.obj[nv] = S::one();
        let t = solve(&lp)?.value;
        if best.as_ref().is_none_or(|b| t < *b) {
            best = Some(t);
        }
    }
    Ok(best.expect("nonempty patterns"))
}
