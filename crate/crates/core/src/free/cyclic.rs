//! Cyclical monotonicity of pair sets and norming functions.
//!
//! Pairs `(x_i, y_i)` are cyclically monotone when no cycle in the complete
//! digraph with weights `w(i -> j) = d(x_i, y_j) - d(x_i, y_i)` is negative.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::element::{FreeElement, LipFunction, Space};
use super::norm::norm_dual;

#[derive(Debug, Clone, PartialEq)]
pub struct CmReport<S> {
    pub monotone: bool,
    /// Pair indices `i_1 -> i_2 -> ... -> i_1` of a negative cycle.
    pub negative_cycle: Option<Vec<usize>>,
    pub cycle_weight: Option<S>,
}

fn check_pairs<S: Scalar>(space: &Space<S>, pairs: &[(usize, usize)]) -> Result<()> {
    for &(x, y) in pairs {
        if x >= space.len() || y >= space.len() {
            return Err(Error::UnknownPoint(x.max(y).to_string()));
        }
        if x == y {
            return Err(Error::DegeneratePair(space.name(x).to_string()));
        }
    }
    Ok(())
}

/// Bellman-Ford from a virtual source joined to every pair.
pub fn is_cyclically_monotone<S: Scalar>(space: &Space<S>, pairs: &[(usize, usize)]) -> Result<CmReport<S>> {
    check_pairs(space, pairs)?;
    let k = pairs.len();
    let w = |i: usize, j: usize| {
        let (xi, yi) = pairs[i];
        space.d(xi, pairs[j].1).clone() - space.d(xi, yi).clone()
    };
    let mut dist = vec![S::zero(); k];
    let mut pred: Vec<Option<usize>> = vec![None; k];
    let mut last = None;
    for _round in 0..=k {
        last = None;
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let cand = dist[i].clone() + w(i, j);
                if cand < dist[j].clone() - S::eps() {
                    dist[j] = cand;
                    pred[j] = Some(i);
                    last = Some(j);
                }
            }
        }
        if last.is_none() {
            break;
        }
    }
    let Some(mut v) = last else {
        return Ok(CmReport { monotone: true, negative_cycle: None, cycle_weight: None });
    };
    for _ in 0..k {
        v = pred[v].expect("relaxed node has a predecessor");
    }
    let mut cycle = vec![v];
    let mut u = pred[v].unwrap();
    while u != v {
        cycle.push(u);
        u = pred[u].unwrap();
    }
    cycle.reverse();
    let mut weight = S::zero();
    for i in 0..cycle.len() {
        weight += w(cycle[i], cycle[(i + 1) % cycle.len()]);
    }
    if weight < -S::tol() {
        Ok(CmReport { monotone: false, negative_cycle: Some(cycle), cycle_weight: Some(weight) })
    } else {
        Ok(CmReport { monotone: true, negative_cycle: None, cycle_weight: None })
    }
}

/// A 1-Lipschitz `f` with `f(x_i) - f(y_i) = d(x_i, y_i)` for every pair,
/// found as an optimizer of the dual program for `sum_i m_{x_i y_i}`.
pub fn find_norming_function<S: Scalar>(space: &Space<S>, pairs: &[(usize, usize)]) -> Result<Option<LipFunction<S>>> {
    check_pairs(space, pairs)?;
    let mut mu = FreeElement::zero(space);
    for &(x, y) in pairs {
        mu = mu.plus(&FreeElement::molecule(space, x, y)?)?;
    }
    let target = S::from_i64(pairs.len() as i64);
    let dual = norm_dual(&mu)?;
    if dual.value < target - S::tol() {
        return Ok(None);
    }
    let f = dual.witness;
    let norms_all = pairs
        .iter()
        .all(|&(x, y)| f.value(x).clone() - f.value(y).clone() >= space.d(x, y).clone() - S::tol());
    Ok(norms_all.then_some(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;
    use crate::scalar::Rational;
    use std::sync::Arc;

    fn line(c: &[i64]) -> Space<Rational> {
        let names = (0..c.len()).map(|i| format!("p{i}")).collect();
        let coords: Vec<Rational> = c.iter().map(|&v| Rational::from_i64(v)).collect();
        Arc::new(FiniteMetricSpace::from_line(names, &coords, 0).unwrap())
    }

    #[test]
    fn opposite_pairs_fail() {
        let s = line(&[0, 1]);
        let r = is_cyclically_monotone(&s, &[(0, 1), (1, 0)]).unwrap();
        assert!(!r.monotone);
        assert_eq!(r.cycle_weight, Some(Rational::from_i64(-2)));
        assert_eq!(r.negative_cycle.as_ref().map(|c| c.len()), Some(2));
        assert!(find_norming_function(&s, &[(0, 1), (1, 0)]).unwrap().is_none());
    }

    #[test]
    fn aligned_pairs_pass() {
        let s = line(&[0, 1, 2, 3]);
        let pairs = [(1, 0), (3, 2), (2, 1)];
        assert!(is_cyclically_monotone(&s, &pairs).unwrap().monotone);
        let f = find_norming_function(&s, &pairs).unwrap().unwrap();
        for (x, y) in pairs {
            assert_eq!(f.value(x).clone() - f.value(y).clone(), s.d(x, y).clone());
        }
    }

    #[test]
    fn single_pair_with_base() {
        let s = line(&[0, 5]);
        assert!(is_cyclically_monotone(&s, &[(1, 0)]).unwrap().monotone);
        let f = find_norming_function(&s, &[(1, 0)]).unwrap().unwrap();
        assert_eq!(*f.value(1), Rational::from_i64(5));
    }
}
