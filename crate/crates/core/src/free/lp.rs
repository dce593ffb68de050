//! Linear programs over 1-Lipschitz functions.
//!
//! A [`DualProgram`] encodes `f(i) - f(j) <= w(i,j)` for each arc of a
//! constraint graph, with `f = 0` on a pinned set. Variables are shifted by
//! the graph distance `h` to the pinned set, `g = f + h >= 0`, which makes
//! every right-hand side nonnegative and avoids phase one.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::simplex::{solve, Lp};

/// Undirected weighted graph; every edge yields two difference constraints.
#[derive(Debug, Clone)]
pub struct ConstraintGraph<S> {
    pub nodes: usize,
    pub edges: Vec<(usize, usize, S)>,
}

impl<S: Scalar> ConstraintGraph<S> {
    /// All pairs of `points` under `d`.
    pub fn complete<F: Fn(usize, usize) -> S>(nodes: usize, d: F) -> Self {
        let mut edges = Vec::with_capacity(nodes * nodes.saturating_sub(1) / 2);
        for i in 0..nodes {
            for j in i + 1..nodes {
                edges.push((i, j, d(i, j)));
            }
        }
        Self { nodes, edges }
    }
}

#[derive(Debug, Clone)]
pub struct DualProgram<S> {
    nodes: usize,
    var_of: Vec<Option<usize>>,
    offset: Vec<S>,
    rows: Vec<(Vec<(usize, S)>, S)>,
}

impl<S: Scalar> DualProgram<S> {
    pub fn new(graph: &ConstraintGraph<S>, pinned: &[bool]) -> Result<Self> {
        let n = graph.nodes;
        assert_eq!(pinned.len(), n);
        let h = distances_to_pinned(graph, pinned)?;
        let mut var_of = vec![None; n];
        let mut nv = 0;
        for i in 0..n {
            if !pinned[i] {
                var_of[i] = Some(nv);
                nv += 1;
            }
        }
        let mut rows = Vec::new();
        let clamp = |v: S| if v < S::zero() { S::zero() } else { v };
        for (i, j, w) in &graph.edges {
            for (x, y) in [(*i, *j), (*j, *i)] {
                match (var_of[x], var_of[y]) {
                    (Some(vx), Some(vy)) => {
                        let rhs = clamp(w.clone() + h[x].clone() - h[y].clone());
                        rows.push((vec![(vx, S::one()), (vy, -S::one())], rhs));
                    }
                    (Some(vx), None) => {
                        rows.push((vec![(vx, S::one())], clamp(w.clone() + h[x].clone())));
                    }
                    _ => {}
                }
            }
        }
        Ok(Self { nodes: n, var_of, offset: h, rows })
    }

    pub fn variables(&self) -> usize {
        self.var_of.iter().filter(|v| v.is_some()).count()
    }

    /// LP in shifted variables with `extra` additional columns appended
    /// after the function variables. Returns the LP and the constant that
    /// converts each function-objective `sum c_i f_i` into shifted form.
    pub(crate) fn base_lp(&self, extra: usize) -> Lp<S> {
        let nv = self.variables();
        let width = nv + extra;
        let mut rows = Vec::with_capacity(self.rows.len());
        let mut rhs = Vec::with_capacity(self.rows.len());
        for (coefs, b) in &self.rows {
            let mut r = vec![S::zero(); width];
            for (v, c) in coefs {
                r[*v] = c.clone();
            }
            rows.push(r);
            rhs.push(b.clone());
        }
        Lp { n: width, rows, rhs, obj: vec![S::zero(); width] }
    }

    /// Shifted coefficients of the linear form `sum c_i f_i`: returns the
    /// coefficient per variable and the constant `-sum c_i h_i`.
    pub(crate) fn linear_form(&self, c: &[S]) -> (Vec<S>, S) {
        let mut coefs = vec![S::zero(); self.variables()];
        let mut constant = S::zero();
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            if let Some(v) = self.var_of[i] {
                coefs[v] += ci.clone();
                constant -= ci.clone() * self.offset[i].clone();
            }
        }
        (coefs, constant)
    }

    /// Recovers `f` on every node from shifted variable values.
    pub(crate) fn unshift(&self, x: &[S]) -> Vec<S> {
        (0..self.nodes)
            .map(|i| match self.var_of[i] {
                Some(v) => x[v].clone() - self.offset[i].clone(),
                None => S::zero(),
            })
            .collect()
    }

    /// `max sum c_i f(i)` over admissible `f`; returns the value and `f`.
    pub fn maximize(&self, c: &[S]) -> Result<(S, Vec<S>)> {
        assert_eq!(c.len(), self.nodes);
        let (obj, constant) = self.linear_form(c);
        if self.variables() == 0 {
            return Ok((S::zero(), vec![S::zero(); self.nodes]));
        }
        let mut lp = self.base_lp(0);
        lp.obj = obj;
        let sol = solve(&lp)?;
        Ok((sol.value + constant, self.unshift(&sol.x)))
    }
}

/// Shortest-path distance to the pinned set; dense Dijkstra on the graph.
fn distances_to_pinned<S: Scalar>(graph: &ConstraintGraph<S>, pinned: &[bool]) -> Result<Vec<S>> {
    let n = graph.nodes;
    let mut adj: Vec<Vec<(usize, S)>> = vec![Vec::new(); n];
    for (i, j, w) in &graph.edges {
        adj[*i].push((*j, w.clone()));
        adj[*j].push((*i, w.clone()));
    }
    let mut dist: Vec<Option<S>> = (0..n).map(|i| pinned[i].then(S::zero)).collect();
    let mut done = vec![false; n];
    loop {
        let mut next: Option<usize> = None;
        for i in 0..n {
            if done[i] {
                continue;
            }
            if let Some(di) = &dist[i] {
                if next.is_none_or(|k| *di < *dist[k].as_ref().unwrap()) {
                    next = Some(i);
                }
            }
        }
        let Some(u) = next else { break };
        done[u] = true;
        let du = dist[u].clone().unwrap();
        for (v, w) in &adj[u] {
            let cand = du.clone() + w.clone();
            if dist[*v].as_ref().is_none_or(|dv| cand < *dv) {
                dist[*v] = Some(cand);
            }
        }
    }
    dist.into_iter()
        .map(|d| d.ok_or_else(|| Error::InvalidParameter("constraint graph not connected to the pinned set".into())))
        .collect()
}
