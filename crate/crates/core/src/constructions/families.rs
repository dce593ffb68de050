//! Sequences of convex sums of molecules on tree spaces.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::free::{FreeElement, Molecule, MoleculeRep};
use crate::scalar::Scalar;
use crate::tree::{RTree, TreeOracle, TreePoint, TreeSpace};

use super::cantor::CantorScheme;

/// A labelled sequence `gamma_1, gamma_2, ...` with representations.
#[derive(Debug, Clone)]
pub struct SequenceBundle<S> {
    pub label: String,
    pub space: Arc<TreeSpace<S>>,
    pub reps: Vec<MoleculeRep<S>>,
}

impl<S: Scalar> SequenceBundle<S> {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn elements(&self) -> Vec<FreeElement<S>> {
        self.reps.iter().map(|r| r.value()).collect()
    }

    pub fn oracle(&self) -> TreeOracle<S> {
        TreeOracle { space: self.space.clone() }
    }
}

/// Largest `N` for the star and dyadic families.
pub const MAX_FAMILY_LEN: usize = 12;

fn check_len(n: usize) -> Result<()> {
    if n == 0 || n > MAX_FAMILY_LEN {
        return Err(Error::InvalidParameter(format!("N must be in 1..={MAX_FAMILY_LEN}")));
    }
    Ok(())
}

/// Star with `n` branches of length `1/n` for each `n <= big_n`;
/// `mu_n = sum_i delta(x_i^n)` written as `sum_i (1/n) m_{x_i^n 0}`.
pub fn star_family<S: Scalar>(big_n: usize) -> Result<SequenceBundle<S>> {
    check_len(big_n)?;
    let mut edges = Vec::new();
    for n in 1..=big_n {
        for i in 1..=n {
            edges.push(("0".to_string(), format!("x{n}_{i}"), S::ratio(1, n as i64)));
        }
    }
    let tree = Arc::new(RTree::new("0", &edges)?);
    let space = Arc::new(TreeSpace::vertices(tree.clone())?);
    let metric = space.metric();
    let mut reps = Vec::with_capacity(big_n);
    for n in 1..=big_n {
        let terms = (1..=n)
            .map(|i| {
                let x = metric.index_of(&format!("x{n}_{i}"))?;
                Ok(Molecule { x, y: metric.base(), a: S::ratio(1, n as i64) })
            })
            .collect::<Result<Vec<_>>>()?;
        reps.push(MoleculeRep::new(metric, terms)?);
    }
    Ok(SequenceBundle { label: "star".into(), space, reps })
}

/// Segment `[0, 2]` with `x_k = k 2^-n`, `y_k = x_k + 2^-(n+k)` and
/// `gamma_n = (2^n + 1)^-1 sum_{k=0}^{2^n} m_{x_k y_k}`.
pub fn dyadic_family<S: Scalar>(big_n: usize) -> Result<SequenceBundle<S>> {
    check_len(big_n)?;
    let two = S::two();
    let tree = Arc::new(RTree::new("0", &[("0".to_string(), "2".to_string(), two)])?);
    let mut pairs: Vec<Vec<(S, S)>> = Vec::with_capacity(big_n);
    for n in 1..=big_n {
        let step = S::pow2(-(n as i32));
        let row = (0..=(1usize << n))
            .map(|k| {
                let x = step.clone() * S::from_i64(k as i64);
                let y = x.clone() + S::pow2(-((n + k) as i32));
                (x, y)
            })
            .collect::<Vec<_>>();
        if row.iter().any(|(x, y)| y <= x) {
            return Err(Error::InvalidParameter(format!("N = {big_n} exceeds the resolution of this number type")));
        }
        pairs.push(row);
    }
    // Names are the decimal value; equal points across levels collapse.
    let mut names: BTreeMap<String, TreePoint<S>> = BTreeMap::new();
    names.insert("0".into(), TreePoint::root());
    let mut name_of = |v: &S| -> Result<String> {
        let key = v.to_string();
        if !names.contains_key(&key) {
            names.insert(key.clone(), tree.point(1, v.clone())?);
        }
        Ok(key)
    };
    let mut named_pairs = Vec::with_capacity(big_n);
    for row in &pairs {
        named_pairs.push(row.iter().map(|(x, y)| Ok((name_of(x)?, name_of(y)?))).collect::<Result<Vec<_>>>()?);
    }
    let named: Vec<(String, TreePoint<S>)> = names.into_iter().collect();
    let space = Arc::new(TreeSpace::new(tree, named)?);
    let metric = space.metric();
    let mut reps = Vec::with_capacity(big_n);
    for (n, row) in named_pairs.iter().enumerate() {
        let a = S::one() / S::from_i64((1i64 << (n + 1)) + 1);
        let terms = row
            .iter()
            .map(|(x, y)| Ok(Molecule { x: metric.index_of(x)?, y: metric.index_of(y)?, a: a.clone() }))
            .collect::<Result<Vec<_>>>()?;
        reps.push(MoleculeRep::new(metric, terms)?);
    }
    Ok(SequenceBundle { label: "dyadic".into(), space, reps })
}

/// `gamma_1, ..., gamma_depth` of a Cantor scheme on its line space.
pub fn cantor_family<S: Scalar>(scheme: &CantorScheme<S>) -> Result<SequenceBundle<S>> {
    let reps = (1..=scheme.depth()).map(|n| scheme.gamma_n(n)).collect::<Result<Vec<_>>>()?;
    Ok(SequenceBundle { label: "cantor".into(), space: scheme.line_space()?, reps })
}
