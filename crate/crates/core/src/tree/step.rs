use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::rtree::RTree;

/// Piecewise-constant function on one edge: `values[i]` on
/// `(breaks[i], breaks[i+1])`, with `breaks` running from `0` to the length.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSteps<S> {
    pub breaks: Vec<S>,
    pub values: Vec<S>,
}

/// Step function on a tree, in canonical form: no zero-length pieces and
/// no two adjacent pieces with the same value.
#[derive(Debug, Clone)]
pub struct L1Step<S> {
    tree: Arc<RTree<S>>,
    edges: Vec<EdgeSteps<S>>,
}

/// One constant piece.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece<S> {
    pub edge: usize,
    pub from: S,
    pub to: S,
    pub value: S,
}

impl<S: Scalar> Piece<S> {
    pub fn length(&self) -> S {
        self.to.clone() - self.from.clone()
    }

    pub fn mass(&self) -> S {
        self.length() * self.value.abs()
    }
}

impl<S: Scalar> PartialEq for L1Step<S> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.tree, &other.tree) || self.tree == other.tree) && self.edges == other.edges
    }
}

fn canonical<S: Scalar>(breaks: Vec<S>, values: Vec<S>) -> EdgeSteps<S> {
    let mut b = vec![breaks[0].clone()];
    let mut v: Vec<S> = Vec::new();
    for (i, val) in values.into_iter().enumerate() {
        let end = breaks[i + 1].clone();
        if end == *b.last().unwrap() {
            continue;
        }
        if v.last() == Some(&val) {
            *b.last_mut().unwrap() = end;
        } else {
            v.push(val);
            b.push(end);
        }
    }
    EdgeSteps { breaks: b, values: v }
}

impl<S: Scalar> L1Step<S> {
    pub fn zero(tree: &Arc<RTree<S>>) -> Self {
        let edges = (0..tree.vertex_count())
            .map(|e| {
                if e == 0 {
                    EdgeSteps { breaks: vec![S::zero()], values: vec![] }
                } else {
                    EdgeSteps { breaks: vec![S::zero(), tree.edge_len(e).clone()], values: vec![S::zero()] }
                }
            })
            .collect();
        Self { tree: tree.clone(), edges }
    }

    /// Builds and canonicalizes from per-edge breakpoints and values.
    pub fn from_edges(tree: &Arc<RTree<S>>, raw: Vec<EdgeSteps<S>>) -> Result<Self> {
        if raw.len() != tree.vertex_count() {
            return Err(Error::DifferentTrees);
        }
        let mut edges = Vec::with_capacity(raw.len());
        for (e, st) in raw.into_iter().enumerate() {
            if e == 0 {
                edges.push(EdgeSteps { breaks: vec![S::zero()], values: vec![] });
                continue;
            }
            let ok = st.breaks.len() == st.values.len() + 1
                && st.breaks.first().is_some_and(|b| b.is_zero())
                && st.breaks.last() == Some(tree.edge_len(e))
                && st.breaks.windows(2).all(|w| w[0] <= w[1]);
            if !ok {
                return Err(Error::PointOffTree);
            }
            edges.push(canonical(st.breaks, st.values));
        }
        Ok(Self { tree: tree.clone(), edges })
    }

    pub fn tree(&self) -> &Arc<RTree<S>> {
        &self.tree
    }

    pub fn edge(&self, e: usize) -> &EdgeSteps<S> {
        &self.edges[e]
    }

    pub fn pieces(&self) -> impl Iterator<Item = Piece<S>> + '_ {
        self.edges.iter().enumerate().flat_map(|(e, st)| {
            st.values.iter().enumerate().map(move |(i, v)| Piece {
                edge: e,
                from: st.breaks[i].clone(),
                to: st.breaks[i + 1].clone(),
                value: v.clone(),
            })
        })
    }

    /// `int |g| d lambda`.
    pub fn l1_norm(&self) -> S {
        self.pieces().fold(S::zero(), |acc, p| acc + p.mass())
    }

    /// Length of `{g != 0}`.
    pub fn support_measure(&self) -> S {
        self.pieces().filter(|p| !p.value.is_zero()).fold(S::zero(), |acc, p| acc + p.length())
    }

    /// Value at `offset` on edge `e`, taken from the piece to the left of
    /// a breakpoint (the right one at `0`).
    pub fn value_at(&self, e: usize, offset: &S) -> S {
        let st = &self.edges[e];
        for i in 0..st.values.len() {
            if *offset <= st.breaks[i + 1] {
                return st.values[i].clone();
            }
        }
        S::zero()
    }

    pub fn scale(&self, t: &S) -> Self {
        if t.is_zero() {
            return Self::zero(&self.tree);
        }
        let edges = self
            .edges
            .iter()
            .map(|st| canonical(st.breaks.clone(), st.values.iter().map(|v| v.clone() * t.clone()).collect()))
            .collect();
        Self { tree: self.tree.clone(), edges }
    }

    /// `self + t * other`.
    pub fn combine(&self, other: &Self, t: &S) -> Result<Self> {
        if !(Arc::ptr_eq(&self.tree, &other.tree) || self.tree == other.tree) {
            return Err(Error::DifferentTrees);
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for (a, b) in self.edges.iter().zip(&other.edges) {
            if a.values.is_empty() {
                edges.push(a.clone());
                continue;
            }
            let mut breaks: Vec<S> = a.breaks.iter().chain(&b.breaks).cloned().collect();
            breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
            breaks.dedup();
            let mut values = Vec::with_capacity(breaks.len() - 1);
            let (mut i, mut j) = (0, 0);
            for w in breaks.windows(2) {
                while a.breaks[i + 1] <= w[0] {
                    i += 1;
                }
                while b.breaks[j + 1] <= w[0] {
                    j += 1;
                }
                values.push(a.values[i].clone() + t.clone() * b.values[j].clone());
            }
            edges.push(canonical(breaks, values));
        }
        Ok(Self { tree: self.tree.clone(), edges })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn line() -> Arc<RTree<Rational>> {
        Arc::new(RTree::new("0", &[("0".into(), "1".into(), q(4))]).unwrap())
    }

    #[test]
    fn canonical_merges_and_drops() {
        let t = line();
        let raw = vec![
            EdgeSteps { breaks: vec![q(0)], values: vec![] },
            EdgeSteps { breaks: vec![q(0), q(1), q(1), q(2), q(4)], values: vec![q(3), q(9), q(3), q(-1)] },
        ];
        let g = L1Step::from_edges(&t, raw).unwrap();
        assert_eq!(g.edge(1).breaks, vec![q(0), q(2), q(4)]);
        assert_eq!(g.edge(1).values, vec![q(3), q(-1)]);
        assert_eq!(g.l1_norm(), q(8));
        assert_eq!(g.support_measure(), q(4));
    }

    #[test]
    fn combine_cancels() {
        let t = line();
        let raw = || {
            vec![
                EdgeSteps { breaks: vec![q(0)], values: vec![] },
                EdgeSteps { breaks: vec![q(0), q(1), q(4)], values: vec![q(2), q(1)] },
            ]
        };
        let g = L1Step::from_edges(&t, raw()).unwrap();
        let h = L1Step::from_edges(&t, raw()).unwrap();
        let z = g.combine(&h, &q(-1)).unwrap();
        assert_eq!(z, L1Step::zero(&t));
        assert_eq!(g.scale(&q(0)), L1Step::zero(&t));
        assert_eq!(g.scale(&q(2)).l1_norm(), q(10));
    }
}
