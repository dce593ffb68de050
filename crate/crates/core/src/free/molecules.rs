//! Operations on molecular representations.

use crate::error::{Error, Result};
use crate::scalar::{approx_eq, sum, Scalar};

use super::element::{FreeElement, Molecule, MoleculeRep};

/// Largest term count handled by exact enumeration.
pub const EXACT_TERM_LIMIT: usize = 22;

/// Replaces term `k` by the pieces of the geodesic chain `chains[k]`.
///
/// A chain `u_1 = x, ..., u_{m+1} = y` splits `a m_xy` into
/// `a d(u_j, u_{j+1}) / d(x, y) m_{u_j u_{j+1}}`; the element and the mass
/// are unchanged.
pub fn refine_partition<S: Scalar>(rep: &MoleculeRep<S>, chains: &[Vec<usize>]) -> Result<MoleculeRep<S>> {
    let space = rep.space();
    if chains.len() != rep.terms().len() {
        return Err(Error::InvalidParameter("one chain per term".into()));
    }
    let mut out = Vec::new();
    for (k, (t, chain)) in rep.terms().iter().zip(chains).enumerate() {
        let bad = || Error::NotAGeodesicChain { term: k };
        if chain.len() < 2 || chain[0] != t.x || *chain.last().unwrap() != t.y {
            return Err(bad());
        }
        if chain.iter().any(|&u| u >= space.len()) || chain.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad());
        }
        let dxy = space.d(t.x, t.y).clone();
        let length = sum(chain.windows(2).map(|w| space.d(w[0], w[1]).clone()));
        if !approx_eq(&length, &dxy) {
            return Err(bad());
        }
        for w in chain.windows(2) {
            let a = t.a.clone() * space.d(w[0], w[1]).clone() / dxy.clone();
            out.push(Molecule { x: w[0], y: w[1], a });
        }
    }
    MoleculeRep::new(space, out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Modulus<S> {
    pub value: S,
    /// Set when `value` is only an upper bound.
    pub approximate: bool,
}

/// `max { sum_{i in I} |a_i| : sum_{i in I} d(x_i, y_i) < delta }`.
///
/// Exact by branch and bound up to [`EXACT_TERM_LIMIT`] terms; above that
/// the fractional-knapsack bound is returned with `approximate` set.
pub fn small_mass_modulus<S: Scalar>(rep: &MoleculeRep<S>, delta: &S) -> Modulus<S> {
    if rep.terms().len() <= EXACT_TERM_LIMIT {
        Modulus { value: exact_modulus(rep, delta), approximate: false }
    } else {
        Modulus { value: fractional_bound(&items(rep), delta), approximate: true }
    }
}

/// As [`small_mass_modulus`] but refuses to approximate.
pub fn small_mass_modulus_exact<S: Scalar>(rep: &MoleculeRep<S>, delta: &S) -> Result<S> {
    if rep.terms().len() > EXACT_TERM_LIMIT {
        return Err(Error::TooManyTermsForExact { terms: rep.terms().len() });
    }
    Ok(exact_modulus(rep, delta))
}

/// `(length, mass)` sorted by decreasing density.
fn items<S: Scalar>(rep: &MoleculeRep<S>) -> Vec<(S, S)> {
    let space = rep.space();
    let mut v: Vec<(S, S)> = rep.terms().iter().map(|t| (space.d(t.x, t.y).clone(), t.a.abs())).collect();
    v.sort_by(|a, b| {
        let da = a.1.clone() / a.0.clone();
        let db = b.1.clone() / b.0.clone();
        db.partial_cmp(&da).unwrap()
    });
    v
}

fn fractional_bound<S: Scalar>(items: &[(S, S)], cap: &S) -> S {
    let mut room = cap.clone();
    let mut total = S::zero();
    for (w, v) in items {
        if room <= S::zero() {
            break;
        }
        if *w <= room {
            total += v.clone();
            room -= w.clone();
        } else {
            total += v.clone() * room.clone() / w.clone();
            room = S::zero();
        }
    }
    total
}

fn exact_modulus<S: Scalar>(rep: &MoleculeRep<S>, delta: &S) -> S {
    let items = items(rep);
    let mut best = S::zero();
    branch(&items, 0, S::zero(), S::zero(), delta, &mut best);
    best
}

fn branch<S: Scalar>(items: &[(S, S)], i: usize, used: S, value: S, delta: &S, best: &mut S) {
    if value > *best {
        *best = value.clone();
    }
    if i == items.len() {
        return;
    }
    let bound = value.clone() + fractional_bound(&items[i..], &(delta.clone() - used.clone()));
    if bound <= *best {
        return;
    }
    let (w, v) = &items[i];
    let with = used.clone() + w.clone();
    if with < *delta {
        branch(items, i + 1, with, value.clone() + v.clone(), delta, best);
    }
    branch(items, i + 1, used, value, delta, best);
}

/// Splits terms into `(large, small)`: `d(x,y) >= r` versus `d(x,y) < r`.
pub fn split_by_scale<S: Scalar>(rep: &MoleculeRep<S>, r: &S) -> Result<(MoleculeRep<S>, MoleculeRep<S>)> {
    let space = rep.space();
    let (small, large): (Vec<_>, Vec<_>) = rep.terms().iter().cloned().partition(|t| *space.d(t.x, t.y) < *r);
    Ok((MoleculeRep::new(space, large)?, MoleculeRep::new(space, small)?))
}

/// Pointwise multiplication `delta(x) -> h(x) delta(x)`.
pub fn apply_weighted_operator<S: Scalar>(h: &[S], mu: &FreeElement<S>) -> Result<FreeElement<S>> {
    if h.len() != mu.space().len() {
        return Err(Error::SpaceMismatch);
    }
    let coeffs = mu.coeffs().iter().zip(h).map(|(c, w)| c.clone() * w.clone()).collect();
    FreeElement::from_coeffs(mu.space(), coeffs)
}
