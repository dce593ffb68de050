//! Dense dictionary simplex for `max c.x` s.t. `A x <= b`, `x >= 0`.
//!
//! Dantzig pricing, falling back to Bland's rule after a run of degenerate
//! pivots. A negative right-hand side triggers the auxiliary-variable
//! phase one.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct Lp<S> {
    pub n: usize,
    pub rows: Vec<Vec<S>>,
    pub rhs: Vec<S>,
    pub obj: Vec<S>,
}

#[derive(Debug, Clone)]
pub struct LpSolution<S> {
    pub value: S,
    pub x: Vec<S>,
}

const MAX_PIVOTS: usize = 200_000;
const DEGENERATE_RUN: usize = 50;

struct Dict<S> {
    m: usize,
    n: usize,
    a: Vec<S>,
    b: Vec<S>,
    c: Vec<S>,
    v: S,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    bland: bool,
    degenerate_run: usize,
    pivots: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Pivoted,
}

impl<S: Scalar> Dict<S> {
    fn at(&self, i: usize, j: usize) -> &S {
        &self.a[i * self.n + j]
    }

    fn pivot(&mut self, r: usize, s: usize) {
        let n = self.n;
        let inv = S::one() / self.a[r * n + s].clone();
        for j in 0..n {
            if j == s {
                self.a[r * n + j] = inv.clone();
            } else if !self.a[r * n + j].is_zero() {
                self.a[r * n + j] *= inv.clone();
            }
        }
        self.b[r] *= inv.clone();
        let row_r: Vec<S> = self.a[r * n..(r + 1) * n].to_vec();
        let br = self.b[r].clone();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.a[i * n + s].clone();
            if f.is_zero() {
                continue;
            }
            for (j, rj) in row_r.iter().enumerate() {
                if j == s || rj.is_zero() {
                    continue;
                }
                let t = f.clone() * rj.clone();
                self.a[i * n + j] -= t;
            }
            self.a[i * n + s] = -(f.clone() * row_r[s].clone());
            self.b[i] -= f * br.clone();
            if !S::EXACT && self.b[i] < S::zero() && self.b[i] > -S::eps() {
                self.b[i] = S::zero();
            }
        }
        let f = self.c[s].clone();
        if !f.is_zero() {
            for (j, rj) in row_r.iter().enumerate() {
                if j != s && !rj.is_zero() {
                    let t = f.clone() * rj.clone();
                    self.c[j] -= t;
                }
            }
            self.c[s] = -(f.clone() * row_r[s].clone());
            self.v += f * br;
        }
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[s]);
        self.pivots += 1;
    }

    fn entering(&self) -> Option<usize> {
        let eps = S::eps();
        let mut best: Option<usize> = None;
        for j in 0..self.n {
            if self.c[j] <= eps {
                continue;
            }
            best = match best {
                None => Some(j),
                Some(k) => {
                    let better = if self.bland {
                        self.nonbasic[j] < self.nonbasic[k]
                    } else {
                        self.c[j] > self.c[k]
                    };
                    Some(if better { j } else { k })
                }
            };
        }
        best
    }

    fn leaving(&self, s: usize) -> Option<usize> {
        let eps = S::eps();
        let mut best: Option<(usize, S)> = None;
        for i in 0..self.m {
            let ais = self.at(i, s);
            if *ais <= eps {
                continue;
            }
            let ratio = self.b[i].clone() / ais.clone();
            best = match best {
                None => Some((i, ratio)),
                Some((k, rk)) => {
                    if ratio < rk || (ratio == rk && self.basic[i] < self.basic[k]) {
                        Some((i, ratio))
                    } else {
                        Some((k, rk))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    fn step(&mut self) -> Result<Step> {
        if self.pivots > MAX_PIVOTS {
            return Err(Error::IterationLimit);
        }
        let Some(s) = self.entering() else { return Ok(Step::Optimal) };
        let Some(r) = self.leaving(s) else { return Ok(Step::Unbounded) };
        if self.b[r] <= S::eps() {
            self.degenerate_run += 1;
            if self.degenerate_run > DEGENERATE_RUN {
                self.bland = true;
            }
        } else {
            self.degenerate_run = 0;
        }
        self.pivot(r, s);
        Ok(Step::Pivoted)
    }

    fn run(&mut self) -> Result<bool> {
        loop {
            match self.step()? {
                Step::Optimal => return Ok(true),
                Step::Unbounded => return Ok(false),
                Step::Pivoted => {}
            }
        }
    }

    fn drop_column(&mut self, s: usize) {
        let n = self.n;
        let mut a = Vec::with_capacity(self.m * (n - 1));
        for i in 0..self.m {
            for j in 0..n {
                if j != s {
                    a.push(self.a[i * n + j].clone());
                }
            }
        }
        self.a = a;
        self.c.remove(s);
        self.nonbasic.remove(s);
        self.n -= 1;
    }
}

pub fn solve<S: Scalar>(lp: &Lp<S>) -> Result<LpSolution<S>> {
    let m = lp.rows.len();
    let n = lp.n;
    assert_eq!(lp.rhs.len(), m);
    assert_eq!(lp.obj.len(), n);
    let mut b = lp.rhs.clone();
    if !S::EXACT {
        for v in b.iter_mut() {
            if *v < S::zero() && *v > -S::eps() {
                *v = S::zero();
            }
        }
    }
    let needs_phase_one = b.iter().any(|v| *v < S::zero());
    let width = if needs_phase_one { n + 1 } else { n };
    let mut a = Vec::with_capacity(m * width);
    for row in &lp.rows {
        assert_eq!(row.len(), n);
        a.extend(row.iter().cloned());
        if needs_phase_one {
            a.push(-S::one());
        }
    }
    let aux = n + m;
    let mut d = Dict {
        m,
        n: width,
        a,
        b,
        c: vec![S::zero(); width],
        v: S::zero(),
        basic: (n..n + m).collect(),
        nonbasic: (0..width).map(|j| if j < n { j } else { aux }).collect(),
        bland: false,
        degenerate_run: 0,
        pivots: 0,
    };

    if needs_phase_one {
        d.c[n] = -S::one();
        let mut r = 0;
        for i in 1..m {
            if d.b[i] < d.b[r] {
                r = i;
            }
        }
        d.pivot(r, n);
        if !d.run()? {
            return Err(Error::LpUnbounded);
        }
        if d.v < -S::tol() - S::eps() {
            return Err(Error::LpInfeasible);
        }
        if let Some(r) = d.basic.iter().position(|&l| l == aux) {
            let s = (0..d.n)
                .filter(|&j| d.at(r, j).abs() > S::eps())
                .max_by(|&j, &k| d.at(r, j).abs().partial_cmp(&d.at(r, k).abs()).unwrap())
                .ok_or(Error::LpInfeasible)?;
            d.pivot(r, s);
        }
        let s = d.nonbasic.iter().position(|&l| l == aux).expect("aux nonbasic");
        d.drop_column(s);
        d.c = vec![S::zero(); d.n];
        d.v = S::zero();
        for (j, cj) in lp.obj.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            if let Some(k) = d.nonbasic.iter().position(|&l| l == j) {
                d.c[k] += cj.clone();
            } else if let Some(i) = d.basic.iter().position(|&l| l == j) {
                d.v += cj.clone() * d.b[i].clone();
                for k in 0..d.n {
                    let t = cj.clone() * d.at(i, k).clone();
                    d.c[k] -= t;
                }
            }
        }
        d.bland = false;
        d.degenerate_run = 0;
    } else {
        d.c = lp.obj.clone();
    }

    if !d.run()? {
        return Err(Error::LpUnbounded);
    }
    let mut x = vec![S::zero(); n];
    for (i, &l) in d.basic.iter().enumerate() {
        if l < n {
            x[l] = d.b[i].clone();
        }
    }
    Ok(LpSolution { value: d.v, x })
}
