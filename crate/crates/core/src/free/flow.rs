//! Uncapacitated min-cost transshipment by successive shortest paths.
//!
//! Dense formulation: `cost[u * n + v]` is `Some(c)` when the arc exists.
//! Dijkstra runs on reduced costs, which stay nonnegative because all arc
//! costs are nonnegative to begin with.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct FlowSolution<S> {
    pub cost: S,
    /// `flow[u * n + v]` on arc `u -> v`.
    pub flow: Vec<S>,
}

#[derive(Clone, Copy)]
enum Via {
    Forward(usize),
    Backward(usize),
}

pub fn min_cost_flow<S: Scalar>(n: usize, cost: &[Option<S>], supply: &[S]) -> Result<FlowSolution<S>> {
    assert_eq!(cost.len(), n * n);
    assert_eq!(supply.len(), n);
    let eps = S::eps();
    let mut excess = supply.to_vec();
    let mut pi = vec![S::zero(); n];
    let mut flow = vec![S::zero(); n * n];
    let mut rounds = 0usize;

    while let Some(s) = (0..n).find(|&i| excess[i] > eps) {
        rounds += 1;
        if rounds > 10 * n * n + 100 {
            return Err(Error::IterationLimit);
        }

        let mut dist: Vec<Option<S>> = vec![None; n];
        let mut pred: Vec<Option<Via>> = vec![None; n];
        let mut done = vec![false; n];
        dist[s] = Some(S::zero());
        loop {
            let mut u: Option<usize> = None;
            for i in 0..n {
                if !done[i] {
                    if let Some(di) = &dist[i] {
                        if u.is_none_or(|k| *di < *dist[k].as_ref().unwrap()) {
                            u = Some(i);
                        }
                    }
                }
            }
            let Some(u) = u else { break };
            done[u] = true;
            let du = dist[u].clone().unwrap();
            for v in 0..n {
                if done[v] || v == u {
                    continue;
                }
                let mut best: Option<(S, Via)> = None;
                if let Some(c) = &cost[u * n + v] {
                    best = Some((c.clone() + pi[u].clone() - pi[v].clone(), Via::Forward(u)));
                }
                if flow[v * n + u] > eps {
                    let c = cost[v * n + u].as_ref().expect("flow only on arcs");
                    let rc = -c.clone() + pi[u].clone() - pi[v].clone();
                    if best.as_ref().is_none_or(|(b, _)| rc < *b) {
                        best = Some((rc, Via::Backward(u)));
                    }
                }
                if let Some((mut rc, via)) = best {
                    if rc < S::zero() {
                        rc = S::zero();
                    }
                    let cand = du.clone() + rc;
                    if dist[v].as_ref().is_none_or(|dv| cand < *dv) {
                        dist[v] = Some(cand);
                        pred[v] = Some(via);
                    }
                }
            }
        }

        let t = (0..n)
            .filter(|&i| excess[i] < -eps.clone() && dist[i].is_some())
            .min_by(|&a, &b| dist[a].as_ref().unwrap().partial_cmp(dist[b].as_ref().unwrap()).unwrap());
        let Some(t) = t else { return Err(Error::LpInfeasible) };
        let dt = dist[t].clone().unwrap();
        for v in 0..n {
            let add = match &dist[v] {
                Some(dv) if *dv < dt => dv.clone(),
                _ => dt.clone(),
            };
            pi[v] += add;
        }

        let mut amount = S::min_of(excess[s].clone(), -excess[t].clone());
        let mut v = t;
        while v != s {
            match pred[v].expect("path to source") {
                Via::Forward(u) => v = u,
                Via::Backward(u) => {
                    amount = S::min_of(amount, flow[v * n + u].clone());
                    v = u;
                }
            }
        }
        let mut v = t;
        while v != s {
            match pred[v].unwrap() {
                Via::Forward(u) => {
                    flow[u * n + v] += amount.clone();
                    v = u;
                }
                Via::Backward(u) => {
                    flow[v * n + u] -= amount.clone();
                    if !S::EXACT && flow[v * n + u] < eps {
                        flow[v * n + u] = S::zero();
                    }
                    v = u;
                }
            }
        }
        excess[s] -= amount.clone();
        excess[t] += amount;
        if !S::EXACT {
            for i in [s, t] {
                if excess[i].abs() <= eps {
                    excess[i] = S::zero();
                }
            }
        }
    }
    if excess.iter().any(|e| e.abs() > S::tol()) {
        return Err(Error::LpInfeasible);
    }

    let mut total = S::zero();
    for (i, f) in flow.iter().enumerate() {
        if !f.is_zero() {
            total += f.clone() * cost[i].clone().expect("flow only on arcs");
        }
    }
    Ok(FlowSolution { cost: total, flow })
}
