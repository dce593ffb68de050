//! Numerical checks on sequences of convex sums of small molecules.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::free::{l1_basis_lower_bound, FreeElement, NormOracle};
use crate::scalar::{le_tol, Scalar};

use super::families::SequenceBundle;

#[derive(Debug, Clone, PartialEq)]
pub struct LimitRow<S> {
    pub n: usize,
    /// `||gamma + gamma_n||`.
    pub norm_sum: S,
    /// `||gamma|| + ||gamma_n||`.
    pub norm_bound: S,
    /// `norm_bound - norm_sum`.
    pub defect: S,
    /// Largest `d(x, y)` over the terms of the representation.
    pub spread: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitTable<S> {
    pub rows: Vec<LimitRow<S>>,
    /// Representations that are not convex, and a note if the spread does
    /// not decrease.
    pub warnings: Vec<Error>,
}

impl<S: Scalar> LimitTable<S> {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,norm_sum,norm_bound,defect\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.n, r.norm_sum, r.norm_bound, r.defect);
        }
        out
    }

    pub fn max_defect(&self) -> S {
        self.rows.iter().map(|r| r.defect.clone()).fold(S::zero(), S::max_of)
    }

    pub fn last_defect(&self) -> Option<&S> {
        self.rows.last().map(|r| &r.defect)
    }
}

pub fn small_molecule_limit_check<S: Scalar>(gamma: &FreeElement<S>, bundle: &SequenceBundle<S>) -> Result<LimitTable<S>> {
    if bundle.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if !std::sync::Arc::ptr_eq(gamma.space(), bundle.space.metric()) {
        return Err(Error::SpaceMismatch);
    }
    let oracle = bundle.oracle();
    let base = oracle.norm(gamma)?;
    let mut rows = Vec::with_capacity(bundle.len());
    let mut warnings = Vec::new();
    let mut last_spread: Option<S> = None;
    let mut spread_grew = false;
    for (i, rep) in bundle.reps.iter().enumerate() {
        let n = i + 1;
        let g = rep.value();
        let norm_n = oracle.norm(&g)?;
        if !le_tol(&rep.mass(), &norm_n) {
            warnings.push(Error::NotConvexFamily(n));
        }
        let norm_sum = oracle.norm(&gamma.plus(&g)?)?;
        let norm_bound = base.clone() + norm_n;
        let metric = rep.space();
        let spread = rep.terms().iter().map(|t| metric.d(t.x, t.y).clone()).fold(S::zero(), S::max_of);
        if last_spread.as_ref().is_some_and(|l| spread > *l) {
            spread_grew = true;
        }
        last_spread = Some(spread.clone());
        rows.push(LimitRow { n, defect: norm_bound.clone() - norm_sum.clone(), norm_sum, norm_bound, spread });
    }
    if spread_grew {
        warnings.push(Error::InvalidParameter("molecule spread is not decreasing".into()));
    }
    Ok(LimitTable { rows, warnings })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsequenceCertificate<S> {
    /// Accepted indices, 1-based.
    pub selected: Vec<usize>,
    /// Certified `l1` constant after each acceptance.
    pub constants: Vec<S>,
    pub rejected: Vec<usize>,
}

/// Greedy subsequence whose `l1` constant stays at least `c_target`: each
/// `gamma_n` is kept if the certified constant of the selection plus `gamma_n`
/// is still at least the target.
pub fn ai_l1_subsequence_probe<S: Scalar>(
    bundle: &SequenceBundle<S>,
    c_target: &S,
    budget: usize,
    seed: u64,
) -> Result<SubsequenceCertificate<S>> {
    if bundle.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let oracle = bundle.oracle();
    let elems = bundle.elements();
    let mut cert = SubsequenceCertificate { selected: Vec::new(), constants: Vec::new(), rejected: Vec::new() };
    let mut chosen: Vec<FreeElement<S>> = Vec::new();
    for (i, g) in elems.iter().enumerate() {
        chosen.push(g.clone());
        let est = l1_basis_lower_bound(&oracle, &chosen, budget, seed)?;
        let c = est.constant();
        if le_tol(c_target, &c) {
            cert.selected.push(i + 1);
            cert.constants.push(c);
        } else {
            chosen.pop();
            cert.rejected.push(i + 1);
        }
    }
    if cert.selected.is_empty() {
        return Err(Error::TargetUnreachableAtBudget);
    }
    Ok(cert)
}
