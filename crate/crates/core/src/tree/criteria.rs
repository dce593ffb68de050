//! Finite-family checks of the two relative weak compactness conditions on
//! trees: uniformly small mass on small sets, and uniform approximation by
//! finitely generated subtrees.

use crate::error::{Error, Result};
use crate::free::FreeElement;
use crate::scalar::Scalar;

use super::godard::{godard_transform, mass_outside, top_mass_inverse};
use super::rtree::{Subtree, TreePoint, TreeSpace};
use super::step::L1Step;

#[derive(Debug, Clone, PartialEq)]
pub struct SubtreeChoice<S> {
    pub subtree: Subtree<S>,
    /// `dist(w, F(T'))` per family element.
    pub defects: Vec<S>,
}

impl<S: Scalar> SubtreeChoice<S> {
    pub fn max_defect(&self) -> S {
        self.defects.iter().cloned().fold(S::zero(), S::max_of)
    }
}

fn transforms<S: Scalar>(space: &TreeSpace<S>, family: &[FreeElement<S>]) -> Result<Vec<L1Step<S>>> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    family.iter().map(|w| godard_transform(space, w)).collect()
}

/// Greedy subtree with `sup_w dist(w, F(T')) <= eps`: while some element
/// exceeds `eps`, add the segment `[0, z]` capturing the most of the worst
/// element's uncovered mass, `z` ranging over far ends of its pieces.
pub fn best_subtree<S: Scalar>(space: &TreeSpace<S>, family: &[FreeElement<S>], eps: &S) -> Result<SubtreeChoice<S>> {
    let gs = transforms(space, family)?;
    let mut sub = Subtree::root_only(space.tree());
    loop {
        let defects: Vec<S> = gs.iter().map(|g| mass_outside(g, &sub)).collect::<Result<_>>()?;
        let (worst, top) = defects
            .iter()
            .enumerate()
            .fold((0, S::zero()), |(i, m), (j, d)| if *d > m { (j, d.clone()) } else { (i, m) });
        if top <= *eps {
            return Ok(SubtreeChoice { subtree: sub, defects });
        }
        let g = &gs[worst];
        let mut best: Option<(S, TreePoint<S>)> = None;
        for p in g.pieces().filter(|p| !p.value.is_zero() && p.to > *sub.cover(p.edge)) {
            let z = space.tree().point(p.edge, p.to.clone())?;
            let mut trial = sub.clone();
            trial.add_segment(&z)?;
            let gain = top.clone() - mass_outside(g, &trial)?;
            if best.as_ref().is_none_or(|(b, _)| gain > *b) {
                best = Some((gain, z));
            }
        }
        let (_, z) = best.expect("uncovered mass lies on some piece");
        sub.add_segment(&z)?;
    }
}

/// Minimum of `dist(w, F(T'))` over subtrees generated by `k` points, by
/// enumerating `k`-sets of leaves whose root path meets the support of `G w`.
pub fn min_defect_k_generators<S: Scalar>(space: &TreeSpace<S>, w: &FreeElement<S>, k: usize) -> Result<S> {
    let g = godard_transform(space, w)?;
    let tree = space.tree();
    let leaves: Vec<usize> = tree
        .edges()
        .filter(|&e| tree.children(e).is_empty())
        .filter(|&leaf| g.pieces().any(|p| !p.value.is_zero() && tree.is_ancestor(p.edge, leaf)))
        .collect();
    if k >= leaves.len() {
        let gens: Vec<TreePoint<S>> = leaves.iter().map(|&l| tree.vertex_point(l)).collect();
        return mass_outside(&g, &Subtree::from_generators(tree, &gens)?);
    }
    let combos = binomial(leaves.len(), k);
    if combos > 2_000_000 {
        return Err(Error::InvalidParameter(format!("{combos} generator sets exceed the enumeration limit")));
    }
    let mut best: Option<S> = None;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let gens: Vec<TreePoint<S>> = idx.iter().map(|&i| tree.vertex_point(leaves[i])).collect();
        let d = mass_outside(&g, &Subtree::from_generators(tree, &gens)?)?;
        if best.as_ref().is_none_or(|b| d < *b) {
            best = Some(d);
        }
        if !next_combination(&mut idx, leaves.len()) {
            break;
        }
    }
    Ok(best.unwrap_or_else(|| g.l1_norm()))
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionA<S> {
    pub eps: S,
    /// Largest `delta` with `sup_w top_mass(G w, delta) <= eps`; `None`
    /// when no constraint arises.
    pub delta: Option<S>,
    /// Element attaining the minimum.
    pub witness: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionB<S> {
    pub eps: S,
    pub generators: Vec<TreePoint<S>>,
    pub defects: Vec<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquiReport<S> {
    pub condition_a: Vec<ConditionA<S>>,
    pub condition_b: Vec<ConditionB<S>>,
    /// First `eps` at which a condition failed, with the element index.
    pub failure: Option<(S, usize)>,
}

impl<S: Scalar> EquiReport<S> {
    pub fn satisfied(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn equi_integrability_report<S: Scalar>(
    space: &TreeSpace<S>,
    family: &[FreeElement<S>],
    epsilons: &[S],
) -> Result<EquiReport<S>> {
    let gs = transforms(space, family)?;
    let mut condition_a = Vec::new();
    let mut condition_b = Vec::new();
    let mut failure = None;
    for eps in epsilons {
        if *eps <= S::zero() {
            return Err(Error::InvalidParameter("eps must be positive".into()));
        }
        let mut delta: Option<S> = None;
        let mut witness = None;
        for (i, g) in gs.iter().enumerate() {
            if let Some(d) = top_mass_inverse(g, eps) {
                if delta.as_ref().is_none_or(|cur| d < *cur) {
                    delta = Some(d);
                    witness = Some(i);
                }
            }
        }
        if let (Some(d), Some(w)) = (&delta, witness) {
            if *d <= S::zero() && failure.is_none() {
                failure = Some((eps.clone(), w));
            }
        }
        condition_a.push(ConditionA { eps: eps.clone(), delta, witness });

        let choice = best_subtree(space, family, eps)?;
        if failure.is_none() {
            if let Some(i) = choice.defects.iter().position(|d| d > eps) {
                failure = Some((eps.clone(), i));
            }
        }
        condition_b.push(ConditionB { eps: eps.clone(), generators: choice.subtree.generators(), defects: choice.defects });
    }
    Ok(EquiReport { condition_a, condition_b, failure })
}
