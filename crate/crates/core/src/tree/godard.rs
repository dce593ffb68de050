//! The isometry `F(T) -> L1(T)`, `delta(x) -> 1_[0,x]`, and the distances
//! it makes computable.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::free::{ConstraintGraph, DualProgram, FreeElement, Molecule, MoleculeRep, NormOracle, PointProgram};
use crate::scalar::Scalar;

use super::rtree::{RTree, Subtree, TreePoint, TreeSpace};
use super::step::{EdgeSteps, L1Step, Piece};

fn check_space<S: Scalar>(space: &TreeSpace<S>, mu: &FreeElement<S>) -> Result<()> {
    if Arc::ptr_eq(mu.space(), space.metric()) || **mu.space() == **space.metric() {
        Ok(())
    } else {
        Err(Error::PointOffTree)
    }
}

/// `G(sum c_x delta(x)) = sum c_x 1_[0,x]`.
pub fn godard_transform<S: Scalar>(space: &TreeSpace<S>, mu: &FreeElement<S>) -> Result<L1Step<S>> {
    check_space(space, mu)?;
    let tree = space.tree();
    let n = tree.vertex_count();
    let mut full = vec![S::zero(); n];
    let mut cuts: Vec<Vec<(S, S)>> = vec![Vec::new(); n];
    for x in mu.support() {
        let p = space.point(x);
        let Some(e) = p.edge else { continue };
        let c = mu.coeff(x).clone();
        cuts[e].push((p.offset.clone(), c.clone()));
        let mut v = tree.parent(e).unwrap();
        while v != 0 {
            full[v] += c.clone();
            v = tree.parent(v).unwrap();
        }
    }
    let mut raw = Vec::with_capacity(n);
    raw.push(EdgeSteps { breaks: vec![S::zero()], values: vec![] });
    for e in tree.edges() {
        let mut c = std::mem::take(&mut cuts[e]);
        c.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut breaks: Vec<S> = vec![S::zero(), tree.edge_len(e).clone()];
        breaks.extend(c.iter().map(|(t, _)| t.clone()));
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup();
        let pieces = breaks.len() - 1;
        let mut values = vec![S::zero(); pieces];
        let mut acc = full[e].clone();
        let mut k = 0;
        for i in (0..pieces).rev() {
            while k < c.len() && c[k].0 >= breaks[i + 1] {
                acc += c[k].1.clone();
                k += 1;
            }
            values[i] = acc.clone();
        }
        raw.push(EdgeSteps { breaks, values });
    }
    L1Step::from_edges(tree, raw)
}

/// `||G mu||_1`, equal to the free-space norm.
pub fn l1_norm<S: Scalar>(g: &L1Step<S>) -> S {
    g.l1_norm()
}

fn point_name<S: Scalar>(tree: &RTree<S>, p: &TreePoint<S>) -> String {
    match p.edge {
        None => tree.name(0).to_string(),
        Some(e) if p.offset == *tree.edge_len(e) => tree.name(e).to_string(),
        Some(e) => format!("{}-{}@{}", tree.name(tree.parent(e).unwrap()), tree.name(e), p.offset),
    }
}

/// A representation with one molecule per constant piece, on a tree space
/// holding all piece endpoints: `v 1_(a,b) = v (b - a) m_{b a}`.
pub fn inverse_godard<S: Scalar>(g: &L1Step<S>) -> Result<(Arc<TreeSpace<S>>, MoleculeRep<S>)> {
    let tree = g.tree();
    let mut pts: Vec<TreePoint<S>> = vec![TreePoint::root()];
    let idx = |p: TreePoint<S>, pts: &mut Vec<TreePoint<S>>| match pts.iter().position(|q| *q == p) {
        Some(i) => i,
        None => {
            pts.push(p);
            pts.len() - 1
        }
    };
    let mut raw_terms = Vec::new();
    for piece in g.pieces().filter(|p| !p.value.is_zero()) {
        let a = idx(tree.point(piece.edge, piece.from.clone())?, &mut pts);
        let b = idx(tree.point(piece.edge, piece.to.clone())?, &mut pts);
        let w = piece.value.abs() * piece.length();
        if piece.value > S::zero() {
            raw_terms.push(Molecule { x: b, y: a, a: w });
        } else {
            raw_terms.push(Molecule { x: a, y: b, a: w });
        }
    }
    let named = pts.into_iter().map(|p| (point_name(tree, &p), p)).collect();
    let space = Arc::new(TreeSpace::new(tree.clone(), named)?);
    let rep = MoleculeRep::new(space.metric(), raw_terms)?;
    Ok((space, rep))
}

fn sorted_by_height<S: Scalar>(g: &L1Step<S>) -> Vec<Piece<S>> {
    let mut pieces: Vec<Piece<S>> = g.pieces().filter(|p| !p.value.is_zero()).collect();
    pieces.sort_by(|a, b| b.value.abs().partial_cmp(&a.value.abs()).unwrap());
    pieces
}

/// `sup { int_B |g| : lambda(B) <= delta }`: the largest values first.
pub fn top_mass<S: Scalar>(g: &L1Step<S>, delta: &S) -> S {
    let mut room = delta.clone();
    let mut acc = S::zero();
    for p in sorted_by_height(g) {
        if room <= S::zero() {
            break;
        }
        let len = p.length();
        if len <= room {
            acc += p.mass();
            room -= len;
        } else {
            acc += p.value.abs() * room.clone();
            room = S::zero();
        }
    }
    acc
}

/// Largest `delta` with `top_mass(g, delta) <= eps`; `None` when every
/// `delta` qualifies because `||g|| <= eps`.
pub fn top_mass_inverse<S: Scalar>(g: &L1Step<S>, eps: &S) -> Option<S> {
    let mut used = S::zero();
    let mut acc = S::zero();
    for p in sorted_by_height(g) {
        let m = p.mass();
        if acc.clone() + m.clone() > *eps {
            return Some(used + (eps.clone() - acc) / p.value.abs());
        }
        acc += m;
        used += p.length();
    }
    None
}

/// `dist(mu, SSM(delta)) = ||mu|| - top_mass(G mu, delta)`.
pub fn dist_to_small_support<S: Scalar>(space: &TreeSpace<S>, mu: &FreeElement<S>, delta: &S) -> Result<S> {
    let g = godard_transform(space, mu)?;
    Ok(g.l1_norm() - top_mass(&g, delta))
}

/// `int_{T \ T'} |g|`.
pub fn mass_outside<S: Scalar>(g: &L1Step<S>, sub: &Subtree<S>) -> Result<S> {
    if !(Arc::ptr_eq(g.tree(), sub.tree()) || **g.tree() == **sub.tree()) {
        return Err(Error::DifferentTrees);
    }
    let mut acc = S::zero();
    for p in g.pieces() {
        let c = sub.cover(p.edge);
        if p.to > *c {
            let from = S::max_of(p.from.clone(), c.clone());
            acc += (p.to.clone() - from) * p.value.abs();
        }
    }
    Ok(acc)
}

/// `dist(mu, F(T')) = int_{T \ T'} |G mu|`.
pub fn dist_to_subtree<S: Scalar>(space: &TreeSpace<S>, mu: &FreeElement<S>, sub: &Subtree<S>) -> Result<S> {
    if !Arc::ptr_eq(space.tree(), sub.tree()) && **space.tree() != **sub.tree() {
        return Err(Error::DifferentTrees);
    }
    mass_outside(&godard_transform(space, mu)?, sub)
}

/// Norms on a tree space through the isometry, with dual programs whose
/// constraints join consecutive points along each edge.
pub struct TreeOracle<S> {
    pub space: Arc<TreeSpace<S>>,
}

impl<S: Scalar> NormOracle<S> for TreeOracle<S> {
    fn norm(&self, mu: &FreeElement<S>) -> Result<S> {
        Ok(godard_transform(&self.space, mu)?.l1_norm())
    }

    fn program(&self, points: &[usize]) -> Result<PointProgram<S>> {
        skeleton_program(&self.space, points)
    }
}

/// Dual program on the vertices plus `points`, with one constraint per
/// segment between consecutive nodes on an edge.
pub fn skeleton_program<S: Scalar>(space: &TreeSpace<S>, points: &[usize]) -> Result<PointProgram<S>> {
    let tree = space.tree();
    let nv = tree.vertex_count();
    let mut nodes = nv;
    let mut node_of = BTreeMap::new();
    let mut interior: Vec<Vec<(S, usize)>> = vec![Vec::new(); nv];
    for &i in points.iter().chain(std::iter::once(&space.metric().base())) {
        if node_of.contains_key(&i) {
            continue;
        }
        let p = space.point(i);
        match p.edge {
            None => {
                node_of.insert(i, 0);
            }
            Some(e) if p.offset == *tree.edge_len(e) => {
                node_of.insert(i, e);
            }
            Some(e) => {
                interior[e].push((p.offset.clone(), nodes));
                node_of.insert(i, nodes);
                nodes += 1;
            }
        }
    }
    let mut edges = Vec::new();
    for e in tree.edges() {
        let list = &mut interior[e];
        list.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut prev = (S::zero(), tree.parent(e).unwrap());
        for (t, node) in list.iter() {
            edges.push((prev.1, *node, t.clone() - prev.0.clone()));
            prev = (t.clone(), *node);
        }
        edges.push((prev.1, e, tree.edge_len(e).clone() - prev.0));
    }
    let graph = ConstraintGraph { nodes, edges };
    let mut pinned = vec![false; nodes];
    pinned[0] = true;
    Ok(PointProgram { program: DualProgram::new(&graph, &pinned)?, node_of, nodes })
}

/// `||mu||` from the dual program on the tree skeleton.
pub fn tree_dual_norm<S: Scalar>(space: &TreeSpace<S>, mu: &FreeElement<S>) -> Result<S> {
    check_space(space, mu)?;
    let pp = skeleton_program(space, &mu.support())?;
    Ok(pp.program.maximize(&pp.weights(mu)?)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::norm_dual;
    use crate::scalar::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn sample() -> Arc<TreeSpace<Rational>> {
        let e = |f: &str, t: &str, l: i64| (f.to_string(), t.to_string(), q(l));
        let tree = Arc::new(RTree::new("r", &[e("r", "a", 2), e("a", "b", 1), e("a", "c", 3), e("r", "d", 1)]).unwrap());
        let mid_c = tree.point(tree.vertex("c").unwrap(), q(1)).unwrap();
        let mut named: Vec<(String, TreePoint<Rational>)> =
            (0..tree.vertex_count()).map(|v| (tree.name(v).to_string(), tree.vertex_point(v))).collect();
        named.push(("mc".into(), mid_c));
        Arc::new(TreeSpace::new(tree, named).unwrap())
    }

    #[test]
    fn molecule_image() {
        let s = sample();
        let m = s.metric();
        let b = m.index_of("b").unwrap();
        let c = m.index_of("c").unwrap();
        // m_bc: +1/4 on [a,b], -1/4 on [a,c]
        let mol = FreeElement::molecule(m, b, c).unwrap();
        let g = godard_transform(&s, &mol).unwrap();
        assert_eq!(g.l1_norm(), q(1));
        let eb = s.tree().vertex("b").unwrap();
        let ec = s.tree().vertex("c").unwrap();
        assert_eq!(g.edge(eb).values, vec![Rational::ratio(1, 4)]);
        assert_eq!(g.edge(ec).values, vec![Rational::ratio(-1, 4)]);
        assert_eq!(g.edge(s.tree().vertex("a").unwrap()).values, vec![q(0)]);
    }

    #[test]
    fn isometry_on_sample() {
        let s = sample();
        let m = s.metric();
        let coeffs: Vec<Rational> = (0..m.len()).map(|i| q([0, 3, -2, 1, -1, 2][i])).collect();
        let mu = FreeElement::from_coeffs(m, coeffs).unwrap();
        let g = godard_transform(&s, &mu).unwrap();
        assert_eq!(g.l1_norm(), norm_dual(&mu).unwrap().value);
        assert_eq!(tree_dual_norm(&s, &mu).unwrap(), g.l1_norm());
    }

    #[test]
    fn inverse_round_trip() {
        let s = sample();
        let m = s.metric();
        let coeffs: Vec<Rational> = (0..m.len()).map(|i| q([0, 1, 1, -3, 0, 2][i])).collect();
        let mu = FreeElement::from_coeffs(m, coeffs).unwrap();
        let g = godard_transform(&s, &mu).unwrap();
        let (space2, rep) = inverse_godard(&g).unwrap();
        assert_eq!(rep.mass(), g.l1_norm());
        assert_eq!(godard_transform(&space2, &rep.value()).unwrap(), g);
    }

    #[test]
    fn top_mass_and_inverse() {
        let s = sample();
        let m = s.metric();
        let c = m.index_of("c").unwrap();
        let d = m.index_of("d").unwrap();
        // 2 on [r,d] (len 1), 1 on [r,a] and [a,c] (len 5)
        let mut mu = FreeElement::delta(m, d);
        mu.add_at(d, q(1));
        mu.add_at(c, q(1));
        let g = godard_transform(&s, &mu).unwrap();
        assert_eq!(top_mass(&g, &q(1)), q(2));
        assert_eq!(top_mass(&g, &q(3)), q(4));
        assert_eq!(top_mass(&g, &q(100)), q(7));
        assert_eq!(top_mass_inverse(&g, &q(3)), Some(q(2)));
        assert_eq!(top_mass_inverse(&g, &q(7)), None);
        assert_eq!(dist_to_small_support(&s, &mu, &q(1)).unwrap(), q(5));
    }

    #[test]
    fn subtree_distance() {
        let s = sample();
        let m = s.metric();
        let b = m.index_of("b").unwrap();
        let mu = FreeElement::delta(m, b);
        let a = s.tree().vertex("a").unwrap();
        let sub = Subtree::from_generators(s.tree(), &[s.tree().vertex_point(a)]).unwrap();
        assert_eq!(dist_to_subtree(&s, &mu, &sub).unwrap(), q(1));
        let other = Arc::new(RTree::new("r", &[("r".into(), "a".into(), q(5))]).unwrap());
        assert_eq!(dist_to_subtree(&s, &mu, &Subtree::root_only(&other)), Err(Error::DifferentTrees));
    }
}
