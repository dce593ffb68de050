//! Finite-instance probes of uniform regularity.

use crate::error::{Error, Result};
use crate::metric::PointSet;
use crate::scalar::Scalar;

use super::element::{FreeElement, LipFunction};
use super::norm::dist_to_subspace;

/// `sup_w dist(w, F(M \ U))` for each set `U` in `sets`.
pub fn complement_distances<S: Scalar>(family: &[FreeElement<S>], sets: &[PointSet]) -> Result<Vec<S>> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    sets.iter()
        .map(|u| {
            let rest = u.complement();
            let mut best = S::zero();
            for w in family {
                let d = dist_to_subspace(w, &rest)?.value;
                if d > best {
                    best = d;
                }
            }
            Ok(best)
        })
        .collect()
}

/// `sup_w |<f_n, w>|` for each function of a family with pairwise
/// disjoint supports.
pub fn disjoint_pairings<S: Scalar>(family: &[FreeElement<S>], fs: &[LipFunction<S>]) -> Result<Vec<S>> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let supports: Vec<PointSet> = fs.iter().map(|f| f.support_set()).collect();
    for i in 0..supports.len() {
        for j in i + 1..supports.len() {
            if supports[i].intersects(&supports[j]) {
                return Err(Error::SupportsNotDisjoint { i, j });
            }
        }
    }
    fs.iter()
        .map(|f| {
            let mut best = S::zero();
            for w in family {
                let v = w.pair(f)?.abs();
                if v > best {
                    best = v;
                }
            }
            Ok(best)
        })
        .collect()
}
