use std::sync::Arc;

use crate::error::{Error, Result};
use crate::free::Space;
use crate::metric::FiniteMetricSpace;
use crate::scalar::Scalar;

/// Finite rooted tree with positive edge lengths.
///
/// Vertex 0 is the root. Every other vertex `v` has exactly one parent
/// edge, and that edge is identified with `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct RTree<S> {
    names: Vec<String>,
    parent: Vec<Option<usize>>,
    len: Vec<S>,
    depth: Vec<S>,
    level: Vec<usize>,
    children: Vec<Vec<usize>>,
}

/// Point of a tree. `edge: None` is the root; otherwise the point sits at
/// distance `offset` in `(0, len]` from the parent end of the edge.
#[derive(Debug, Clone, PartialEq)]
pub struct TreePoint<S> {
    pub edge: Option<usize>,
    pub offset: S,
}

impl<S: Scalar> TreePoint<S> {
    pub fn root() -> Self {
        Self { edge: None, offset: S::zero() }
    }

    pub fn is_root(&self) -> bool {
        self.edge.is_none()
    }
}

impl<S: Scalar> RTree<S> {
    /// Builds a tree from `(from, to, len)` edges directed away from the root.
    pub fn new(root: &str, edges: &[(String, String, S)]) -> Result<Self> {
        let mut names = vec![root.to_string()];
        for (_, to, _) in edges {
            if names.contains(to) {
                return Err(Error::NotATree(format!("vertex {to} has two parents or is the root")));
            }
            names.push(to.clone());
        }
        let n = names.len();
        let mut parent = vec![None; n];
        let mut len = vec![S::zero(); n];
        let mut children = vec![Vec::new(); n];
        for (k, (from, to, l)) in edges.iter().enumerate() {
            if *l <= S::zero() {
                return Err(Error::NotATree(format!("edge {from}-{to} has nonpositive length")));
            }
            let p = names
                .iter()
                .position(|x| x == from)
                .ok_or_else(|| Error::NotATree(format!("unknown vertex {from}")))?;
            parent[k + 1] = Some(p);
            len[k + 1] = l.clone();
            children[p].push(k + 1);
        }
        let mut depth = vec![S::zero(); n];
        let mut level = vec![0; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &c in &children[v] {
                if seen[c] {
                    return Err(Error::NotATree("cycle".into()));
                }
                seen[c] = true;
                depth[c] = depth[v].clone() + len[c].clone();
                level[c] = level[v] + 1;
                stack.push(c);
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::NotATree(format!("vertex {} not connected to the root", names[v])));
        }
        Ok(Self { names, parent, len, depth, level, children })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    /// Edge ids, i.e. the non-root vertices.
    pub fn edges(&self) -> std::ops::Range<usize> {
        1..self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn edge_len(&self, e: usize) -> &S {
        &self.len[e]
    }

    pub fn vertex_depth(&self, v: usize) -> &S {
        &self.depth[v]
    }

    pub fn total_length(&self) -> S {
        self.edges().fold(S::zero(), |acc, e| acc + self.len[e].clone())
    }

    /// Canonical point at `offset` along edge `e` from its parent end.
    pub fn point(&self, e: usize, offset: S) -> Result<TreePoint<S>> {
        if e == 0 || e >= self.names.len() || offset < S::zero() || offset > self.len[e] {
            return Err(Error::PointOffTree);
        }
        if offset.is_zero() {
            return Ok(self.vertex_point(self.parent[e].expect("non-root edge")));
        }
        Ok(TreePoint { edge: Some(e), offset })
    }

    /// Point at `offset` from `from` along the edge joining two adjacent
    /// vertices, in either direction.
    pub fn point_between(&self, from: &str, to: &str, offset: S) -> Result<TreePoint<S>> {
        let a = self.vertex(from)?;
        let b = self.vertex(to)?;
        if self.parent[b] == Some(a) {
            self.point(b, offset)
        } else if self.parent[a] == Some(b) {
            self.point(a, self.len[a].clone() - offset)
        } else {
            Err(Error::PointOffTree)
        }
    }

    pub fn vertex_point(&self, v: usize) -> TreePoint<S> {
        if v == 0 {
            TreePoint::root()
        } else {
            TreePoint { edge: Some(v), offset: self.len[v].clone() }
        }
    }

    pub fn check_point(&self, p: &TreePoint<S>) -> Result<()> {
        match p.edge {
            None if p.offset.is_zero() => Ok(()),
            Some(e) if e > 0 && e < self.names.len() && p.offset > S::zero() && p.offset <= self.len[e] => Ok(()),
            _ => Err(Error::PointOffTree),
        }
    }

    /// Distance from the root.
    pub fn depth(&self, p: &TreePoint<S>) -> S {
        match p.edge {
            None => S::zero(),
            Some(e) => self.depth[self.parent[e].unwrap()].clone() + p.offset.clone(),
        }
    }

    /// `a` is `b` or lies above it.
    pub fn is_ancestor(&self, a: usize, mut b: usize) -> bool {
        while self.level[b] > self.level[a] {
            b = self.parent[b].unwrap();
        }
        a == b
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.level[a] > self.level[b] {
            a = self.parent[a].unwrap();
        }
        while self.level[b] > self.level[a] {
            b = self.parent[b].unwrap();
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
        }
        a
    }

    /// Depth of the point where the root paths of `p` and `q` part.
    pub fn meet_depth(&self, p: &TreePoint<S>, q: &TreePoint<S>) -> S {
        let (Some(ep), Some(eq)) = (p.edge, q.edge) else { return S::zero() };
        if ep == eq {
            return self.depth[self.parent[ep].unwrap()].clone() + S::min_of(p.offset.clone(), q.offset.clone());
        }
        if self.is_ancestor(ep, eq) {
            return self.depth(p);
        }
        if self.is_ancestor(eq, ep) {
            return self.depth(q);
        }
        self.depth[self.lca(ep, eq)].clone()
    }

    pub fn distance(&self, p: &TreePoint<S>, q: &TreePoint<S>) -> S {
        self.depth(p) + self.depth(q) - S::two() * self.meet_depth(p, q)
    }

    /// True when `z` lies on the segment from the root to `x`.
    pub fn below_or_at(&self, z: &TreePoint<S>, x: &TreePoint<S>) -> bool {
        self.meet_depth(z, x) == self.depth(z)
    }
}

/// Validated distance between two points.
pub fn tree_distance<S: Scalar>(tree: &RTree<S>, p: &TreePoint<S>, q: &TreePoint<S>) -> Result<S> {
    tree.check_point(p)?;
    tree.check_point(q)?;
    Ok(tree.distance(p, q))
}

/// Finitely many points of a tree viewed as a pointed metric space with
/// the root as base point.
#[derive(Debug, Clone)]
pub struct TreeSpace<S> {
    tree: Arc<RTree<S>>,
    points: Vec<TreePoint<S>>,
    metric: Space<S>,
}

impl<S: Scalar> TreeSpace<S> {
    /// The root is added under its vertex name when not listed.
    pub fn new(tree: Arc<RTree<S>>, named: Vec<(String, TreePoint<S>)>) -> Result<Self> {
        let mut named = named;
        for (_, p) in &named {
            tree.check_point(p)?;
        }
        if !named.iter().any(|(_, p)| p.is_root()) {
            named.insert(0, (tree.name(0).to_string(), TreePoint::root()));
        }
        let base = named.iter().position(|(_, p)| p.is_root()).unwrap();
        let n = named.len();
        let mut dist = Vec::with_capacity(n * n);
        for (_, p) in &named {
            for (_, q) in &named {
                dist.push(tree.distance(p, q));
            }
        }
        let (names, points): (Vec<String>, Vec<TreePoint<S>>) = named.into_iter().unzip();
        let metric = Arc::new(FiniteMetricSpace::from_trusted(names, base, dist)?);
        Ok(Self { tree, points, metric })
    }

    /// Every vertex, named as in the tree.
    pub fn vertices(tree: Arc<RTree<S>>) -> Result<Self> {
        let named = (0..tree.vertex_count()).map(|v| (tree.name(v).to_string(), tree.vertex_point(v))).collect();
        Self::new(tree, named)
    }

    pub fn tree(&self) -> &Arc<RTree<S>> {
        &self.tree
    }

    pub fn metric(&self) -> &Space<S> {
        &self.metric
    }

    pub fn points(&self) -> &[TreePoint<S>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &TreePoint<S> {
        &self.points[i]
    }

    pub fn index_of(&self, p: &TreePoint<S>) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }
}

/// Subtree containing the root: on each edge the initial segment
/// `[0, cover[e]]` from the parent end.
#[derive(Debug, Clone, PartialEq)]
pub struct Subtree<S> {
    tree: Arc<RTree<S>>,
    cover: Vec<S>,
}

impl<S: Scalar> Subtree<S> {
    pub fn root_only(tree: &Arc<RTree<S>>) -> Self {
        Self { tree: tree.clone(), cover: vec![S::zero(); tree.vertex_count()] }
    }

    pub fn full(tree: &Arc<RTree<S>>) -> Self {
        let cover = (0..tree.vertex_count()).map(|e| if e == 0 { S::zero() } else { tree.edge_len(e).clone() }).collect();
        Self { tree: tree.clone(), cover }
    }

    /// Union of the segments `[0, z]`.
    pub fn from_generators(tree: &Arc<RTree<S>>, gens: &[TreePoint<S>]) -> Result<Self> {
        let mut s = Self::root_only(tree);
        for z in gens {
            s.add_segment(z)?;
        }
        Ok(s)
    }

    /// Validates a per-edge cover.
    pub fn from_cover(tree: &Arc<RTree<S>>, cover: Vec<S>) -> Result<Self> {
        if cover.len() != tree.vertex_count() || !cover[0].is_zero() {
            return Err(Error::NotASubtree);
        }
        for e in tree.edges() {
            if cover[e] < S::zero() || cover[e] > *tree.edge_len(e) {
                return Err(Error::NotASubtree);
            }
            if cover[e] > S::zero() {
                if let Some(p) = tree.parent(e).filter(|&p| p != 0) {
                    if cover[p] != *tree.edge_len(p) {
                        return Err(Error::NotASubtree);
                    }
                }
            }
        }
        Ok(Self { tree: tree.clone(), cover })
    }

    pub fn add_segment(&mut self, z: &TreePoint<S>) -> Result<()> {
        self.tree.check_point(z)?;
        let Some(e) = z.edge else { return Ok(()) };
        if z.offset > self.cover[e] {
            self.cover[e] = z.offset.clone();
        }
        let mut v = self.tree.parent(e).unwrap();
        while v != 0 {
            self.cover[v] = self.tree.edge_len(v).clone();
            v = self.tree.parent(v).unwrap();
        }
        Ok(())
    }

    pub fn tree(&self) -> &Arc<RTree<S>> {
        &self.tree
    }

    pub fn cover(&self, e: usize) -> &S {
        &self.cover[e]
    }

    pub fn contains(&self, p: &TreePoint<S>) -> bool {
        match p.edge {
            None => true,
            Some(e) => p.offset <= self.cover[e] && (self.tree.parent(e) == Some(0) || self.is_full(self.tree.parent(e).unwrap())),
        }
    }

    fn is_full(&self, e: usize) -> bool {
        self.cover[e] == *self.tree.edge_len(e)
    }

    /// Minimal generating points: ends of covered segments not continued
    /// by any child edge.
    pub fn generators(&self) -> Vec<TreePoint<S>> {
        let mut out = Vec::new();
        for e in self.tree.edges() {
            if self.cover[e].is_zero() {
                continue;
            }
            let continued = self.is_full(e) && self.tree.children(e).iter().any(|&c| !self.cover[c].is_zero());
            if !continued {
                out.push(TreePoint { edge: Some(e), offset: self.cover[e].clone() });
            }
        }
        out
    }

    pub fn measure(&self) -> S {
        self.tree.edges().fold(S::zero(), |acc, e| acc + self.cover[e].clone())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.tree.edges().all(|e| self.cover[e] <= other.cover[e])
    }
}
