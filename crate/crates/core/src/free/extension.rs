//! Lipschitz extensions.

use crate::error::{Error, Result};
use crate::metric::PointSet;
use crate::scalar::Scalar;

use super::element::{LipFunction, PartialFunction, Space};

/// Lower McShane extension `F(x) = min_s f(s) + L d(x,s)` without checks.
pub(crate) fn mcshane_unchecked<S: Scalar>(space: &Space<S>, f: &PartialFunction<S>, lip: &S) -> LipFunction<S> {
    let base = space.base();
    let values = (0..space.len())
        .map(|x| {
            if x == base {
                return S::zero();
            }
            if let Some(v) = f.values.get(&x) {
                return v.clone();
            }
            f.values
                .iter()
                .map(|(&s, v)| v.clone() + lip.clone() * space.d(x, s).clone())
                .reduce(S::min_of)
                .expect("nonempty domain")
        })
        .collect();
    LipFunction::new(space, values).expect("base value is zero")
}

/// Extends an `L`-Lipschitz function on a subset containing the base point
/// to the whole space with the same constant.
pub fn mcshane_extend<S: Scalar>(space: &Space<S>, f: &PartialFunction<S>, lip: &S) -> Result<LipFunction<S>> {
    match f.values.get(&space.base()) {
        Some(v) if v.is_zero() => {}
        _ => return Err(Error::BaseNotInDomain),
    }
    if let Some(&bad) = f.values.keys().find(|&&x| x >= space.len()) {
        return Err(Error::UnknownPoint(bad.to_string()));
    }
    check_lipschitz(space, f, lip)?;
    Ok(mcshane_unchecked(space, f, lip))
}

fn check_lipschitz<S: Scalar>(space: &Space<S>, f: &PartialFunction<S>, lip: &S) -> Result<()> {
    let entries: Vec<(&usize, &S)> = f.values.iter().collect();
    for (i, (x, fx)) in entries.iter().enumerate() {
        for (y, fy) in &entries[i + 1..] {
            let bound = lip.clone() * space.d(**x, **y).clone() + S::tol();
            if ((*fx).clone() - (*fy).clone()).abs() > bound {
                return Err(Error::NotLipschitzOnS { x: space.name(**x).into(), y: space.name(**y).into() });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct DisjointExtension<S> {
    pub functions: Vec<LipFunction<S>>,
    /// The enlarged supports; pairwise disjoint.
    pub neighborhoods: Vec<PointSet>,
}

/// Extends functions in the unit ball of `Lip_0(N)` with disjoint supports
/// to 2-Lipschitz functions on the whole space with disjoint supports.
///
/// The support `U_i` of `f_i` is enlarged to the union of open balls
/// `B(x, d(x, N \ U_i) / 2)` over `x` in `U_i`; the extension is `f_i` on
/// `U_i`, zero off the enlargement, and McShane with constant 2 elsewhere.
pub fn extend_disjoint<S: Scalar>(
    space: &Space<S>,
    domain: &PointSet,
    fs: &[PartialFunction<S>],
) -> Result<DisjointExtension<S>> {
    if fs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if !domain.contains(space.base()) {
        return Err(Error::BaseNotInDomain);
    }
    let n = space.len();
    let mut supports = Vec::with_capacity(fs.len());
    for (i, f) in fs.iter().enumerate() {
        if f.domain(n) != *domain {
            return Err(Error::SpaceMismatch);
        }
        if !f.values[&space.base()].is_zero() {
            return Err(Error::BaseNotInDomain);
        }
        if check_lipschitz(space, f, &S::one()).is_err() {
            return Err(Error::NotInUnitBall { index: i });
        }
        let supp = domain.iter().filter(|x| !f.values[x].is_zero());
        supports.push(PointSet::new(n, supp)?);
    }
    for i in 0..supports.len() {
        for j in i + 1..supports.len() {
            if supports[i].intersects(&supports[j]) {
                return Err(Error::SupportsNotDisjoint { i, j });
            }
        }
    }

    let two = S::two();
    let mut functions = Vec::with_capacity(fs.len());
    let mut neighborhoods = Vec::with_capacity(fs.len());
    for (f, u) in fs.iter().zip(&supports) {
        let rest: PointSet = PointSet::new(n, domain.iter().filter(|x| !u.contains(*x)))?;
        let mut grown = PointSet::empty(n);
        for x in u.iter() {
            let r = space.dist_to_set(x, &rest).expect("base lies outside the support") / two.clone();
            for p in 0..n {
                if *space.d(p, x) < r {
                    grown.insert(p);
                }
            }
        }
        let mut partial = PartialFunction::new(Default::default());
        for x in u.iter() {
            partial.values.insert(x, f.values[&x].clone());
        }
        for p in grown.complement().iter() {
            partial.values.insert(p, S::zero());
        }
        functions.push(mcshane_extend(space, &partial, &two)?);
        neighborhoods.push(grown);
    }
    Ok(DisjointExtension { functions, neighborhoods })
}
