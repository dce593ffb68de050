//! End-to-end scenarios. Each returns a [`Report`]; errors are reserved for
//! malformed input.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::constructions::{
    ai_l1_subsequence_probe, bilipschitz_constant, cantor_family, cantor_scheme, dyadic_family,
    small_molecule_limit_check, star_family, CantorScheme, LimitTable, SequenceBundle,
};
use crate::error::{Error, Result};
use crate::free::{
    dist_to_subspace, dist_to_subspace_primal, find_norming_function, is_convex_representation, is_cyclically_monotone,
    mcshane_extend, norm_dual, norm_primal, FreeElement, PartialFunction, Space,
};
use crate::metric::{FiniteMetricSpace, PointSet};
use crate::scalar::{approx_eq, le_tol, Scalar};
use crate::tree::{
    dist_to_small_support, equi_integrability_report, godard_transform, min_defect_k_generators, top_mass,
    tree_dual_norm, TreeSpace,
};

use super::io::{
    element_to_json, lip_to_json, num_json, pairs_to_json, rep_to_json, step_to_json, subset_to_json,
    tree_element_to_json, tree_point_to_json,
};
use super::report::Report;

pub const DEFAULT_SEED: u64 = 7;

/// Dual and primal norms with their certificates.
pub fn norm_report<S: Scalar>(mu: &FreeElement<S>, seed: u64) -> Result<Report> {
    let mut r = Report::new("norm", seed, S::EXACT);
    let dual = norm_dual(mu)?;
    let primal = norm_primal(mu)?;
    let convex = is_convex_representation(&primal.rep)?;
    r.data = json!({ "dual": num_json(&dual.value), "primal": num_json(&primal.value) });
    r.check(
        "duality",
        approx_eq(&dual.value, &primal.value),
        r.data.clone(),
        json!({ "element": element_to_json(mu), "function": lip_to_json(&dual.witness), "rep": rep_to_json(&primal.rep) }),
    );
    r.check("optimal_rep_convex", convex, json!({ "mass": num_json(&primal.rep.mass()) }), rep_to_json(&primal.rep));
    Ok(r.finish())
}

/// `dist(mu, F(A))` by the dual program and by transport to a hub.
pub fn dist_report<S: Scalar>(mu: &FreeElement<S>, set: &PointSet, seed: u64) -> Result<Report> {
    let mut r = Report::new("dist", seed, S::EXACT);
    let dual = dist_to_subspace(mu, set)?;
    let primal = dist_to_subspace_primal(mu, set)?;
    r.data = json!({ "dual": num_json(&dual.value), "primal": num_json(&primal) });
    r.check(
        "duality",
        approx_eq(&dual.value, &primal),
        r.data.clone(),
        json!({
            "element": element_to_json(mu),
            "subset": subset_to_json(mu.space(), set),
            "function": lip_to_json(&dual.witness),
        }),
    );
    Ok(r.finish())
}

/// Cyclical monotonicity of `pairs`, with a norming function or a negative
/// cycle.
pub fn cm_report<S: Scalar>(space: &Space<S>, pairs: &[(usize, usize)], seed: u64) -> Result<Report> {
    let mut r = Report::new("cm-check", seed, S::EXACT);
    let cm = is_cyclically_monotone(space, pairs)?;
    let norming = find_norming_function(space, pairs)?;
    let witness = if cm.monotone {
        norming.as_ref().map(lip_to_json).unwrap_or(Value::Null)
    } else {
        let cycle: Vec<Value> = cm
            .negative_cycle
            .iter()
            .flatten()
            .map(|&i| json!([space.name(pairs[i].0), space.name(pairs[i].1)]))
            .collect();
        json!({ "pairs": pairs_to_json(space, pairs), "cycle": cycle, "weight": cm.cycle_weight.as_ref().map(num_json) })
    };
    r.data = json!({ "monotone": cm.monotone });
    r.check_strict("cyclically_monotone", cm.monotone, r.data.clone(), witness);
    r.check_strict(
        "norming_function_agrees",
        cm.monotone == norming.is_some(),
        json!({ "norming_function_found": norming.is_some() }),
        pairs_to_json(space, pairs),
    );
    Ok(r.finish())
}

/// L1 norm of the Godard transform against the dual program; with `delta`
/// also the small-support identity.
pub fn tree_norm_report<S: Scalar>(space: &TreeSpace<S>, mu: &FreeElement<S>, delta: Option<&S>, seed: u64) -> Result<Report> {
    let mut r = Report::new("tree-norm", seed, S::EXACT);
    let g = godard_transform(space, mu)?;
    let l1 = g.l1_norm();
    let lp = tree_dual_norm(space, mu)?;
    r.data = json!({ "l1": num_json(&l1), "lp": num_json(&lp), "transform": step_to_json(&g) });
    r.check(
        "isometry",
        approx_eq(&l1, &lp),
        json!({ "l1": num_json(&l1), "lp": num_json(&lp) }),
        json!({ "element": tree_element_to_json(space, mu) }),
    );
    if let Some(d) = delta {
        let dist = dist_to_small_support(space, mu, d)?;
        let top = top_mass(&g, d);
        r.check(
            "small_support_identity",
            approx_eq(&(dist.clone() + top.clone()), &l1),
            json!({ "delta": num_json(d), "dist": num_json(&dist), "top_mass": num_json(&top) }),
            json!({ "element": tree_element_to_json(space, mu) }),
        );
    }
    Ok(r.finish())
}

fn equi_json<S: Scalar>(space: &TreeSpace<S>, family: &[FreeElement<S>], epsilons: &[S], r: &mut Report) -> Result<Value> {
    let rep = equi_integrability_report(space, family, epsilons)?;
    let tree = space.tree();
    let a: Vec<Value> = rep
        .condition_a
        .iter()
        .map(|c| json!({ "eps": num_json(&c.eps), "delta": c.delta.as_ref().map(num_json), "witness": c.witness }))
        .collect();
    let b: Vec<Value> = rep
        .condition_b
        .iter()
        .map(|c| {
            json!({
                "eps": num_json(&c.eps),
                "generators": c.generators.iter().map(|p| tree_point_to_json(tree, p)).collect::<Vec<_>>(),
                "defects": c.defects.iter().map(num_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let witnesses: Vec<Value> = rep
        .failure
        .iter()
        .map(|(eps, i)| json!({ "eps": num_json(eps), "element": tree_element_to_json(space, &family[*i]) }))
        .collect();
    r.check_strict(
        "equi_integrable_at_tested_eps",
        rep.satisfied(),
        json!({ "epsilons": epsilons.iter().map(num_json).collect::<Vec<_>>() }),
        witnesses.first().cloned().unwrap_or(Value::Null),
    );
    Ok(json!({ "condition_a": a, "condition_b": b, "witnesses": witnesses }))
}

pub fn equi_report<S: Scalar>(space: &TreeSpace<S>, family: &[FreeElement<S>], epsilons: &[S], seed: u64) -> Result<Report> {
    let mut r = Report::new("equi-report", seed, S::EXACT);
    r.data = equi_json(space, family, epsilons, &mut r)?;
    Ok(r.finish())
}

fn table_json<S: Scalar>(t: &LimitTable<S>) -> Value {
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|row| {
            json!({
                "n": row.n,
                "norm_sum": num_json(&row.norm_sum),
                "norm_bound": num_json(&row.norm_bound),
                "defect": num_json(&row.defect),
                "spread": num_json(&row.spread),
            })
        })
        .collect();
    json!({ "rows": rows, "warnings": t.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>() })
}

fn limit_checks<S: Scalar>(r: &mut Report, t: &LimitTable<S>, gamma: &FreeElement<S>, final_bound: Option<S>) {
    let negative = t.rows.iter().find(|row| !le_tol(&S::zero(), &row.defect));
    r.check(
        "defect_nonnegative",
        negative.is_none(),
        json!({ "max_defect": num_json(&t.max_defect()) }),
        negative.map(|row| json!({ "n": row.n, "gamma": element_to_json(gamma) })).unwrap_or(Value::Null),
    );
    if let (Some(bound), Some(last)) = (final_bound, t.last_defect()) {
        r.check(
            "final_defect_small",
            le_tol(last, &bound),
            json!({ "final_defect": num_json(last), "bound": num_json(&bound) }),
            json!({ "n": t.rows.len(), "gamma": element_to_json(gamma) }),
        );
    }
}

/// `||gamma + gamma_n||` against `||gamma|| + ||gamma_n||` along a family.
pub fn limit_report<S: Scalar>(bundle: &SequenceBundle<S>, gamma: &FreeElement<S>, seed: u64) -> Result<Report> {
    let mut r = Report::new(format!("limit-check-{}", bundle.label), seed, S::EXACT);
    let t = small_molecule_limit_check(gamma, bundle)?;
    limit_checks(&mut r, &t, gamma, None);
    r.data = table_json(&t);
    r.csv = Some(t.to_csv());
    Ok(r.finish())
}

/// Default `gamma` for a family: `delta(1)` on line families, the first star
/// leaf otherwise.
pub fn default_gamma<S: Scalar>(bundle: &SequenceBundle<S>) -> Result<FreeElement<S>> {
    let tree = bundle.space.tree();
    let target = if bundle.label == "star" {
        tree.vertex_point(1)
    } else {
        tree.point(1, S::one())?
    };
    let i = bundle.space.index_of(&target).ok_or(Error::PointOffTree)?;
    Ok(FreeElement::delta(bundle.space.metric(), i))
}

/// Number of leading `gamma_n` used by the subsequence probe.
const PROBE_LEN: usize = 4;

pub fn reproduce_cantor<S: Scalar>(depth: usize, seed: u64) -> Result<Report> {
    let mut r = Report::new("reproduce-cantor", seed, S::EXACT);
    r.inputs.push(format!("cantor_scheme(depth = {depth}, ratio = 1/3)"));
    let scheme = cantor_scheme(depth, &S::ratio(1, 3))?;
    let bundle = cantor_family(&scheme)?;

    let mut gamma_norms = Vec::new();
    let mut f_norms = Vec::new();
    let mut supports: Vec<Vec<(S, S)>> = Vec::new();
    for (i, rep) in bundle.reps.iter().enumerate() {
        let n = i + 1;
        let g = godard_transform(&bundle.space, &rep.value())?;
        let convex = le_tol(&rep.mass(), &g.l1_norm());
        gamma_norms.push((n, g.l1_norm(), convex));
        let f = scheme.f_n(n)?;
        f_norms.push(f.l1_norm());
        supports.push(f.pieces().filter(|p| !p.value.is_zero()).map(|p| (p.from, p.to)).collect());
    }
    let bad_gamma = gamma_norms.iter().find(|(_, v, c)| !c || !approx_eq(v, &S::one()));
    r.check(
        "gamma_n_unit_convex",
        bad_gamma.is_none(),
        json!(gamma_norms.iter().map(|(_, v, _)| num_json(v)).collect::<Vec<_>>()),
        bad_gamma.map(|(n, _, _)| json!({ "n": n, "rep": rep_to_json(&bundle.reps[n - 1]) })).unwrap_or(Value::Null),
    );
    let bad_f = f_norms.iter().position(|v| !approx_eq(v, &S::one()));
    r.check(
        "f_n_unit_norm_middle_thirds",
        bad_f.is_none(),
        json!(f_norms.iter().map(num_json).collect::<Vec<_>>()),
        bad_f.map(|i| json!({ "n": i + 1, "depth": depth })).unwrap_or(Value::Null),
    );
    let overlap = overlapping_supports(&supports);
    r.check_strict(
        "f_n_supports_disjoint",
        overlap.is_none(),
        json!({ "levels": supports.len() }),
        overlap.map(|(a, b)| json!({ "n": a + 1, "m": b + 1, "depth": depth })).unwrap_or(Value::Null),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random: CantorScheme<S> = CantorScheme::random(depth, &mut rng)?;
    let three = S::from_i64(3);
    let third = S::ratio(1, 3);
    let random_norms = (1..=depth).map(|n| Ok(random.f_n(n)?.l1_norm())).collect::<Result<Vec<S>>>()?;
    let out_of_range = random_norms.iter().position(|v| !le_tol(&third, v) || !le_tol(v, &three));
    r.check(
        "f_n_norm_bounds_random_scheme",
        out_of_range.is_none(),
        json!(random_norms.iter().map(num_json).collect::<Vec<_>>()),
        out_of_range.map(|i| json!({ "n": i + 1, "seed": seed })).unwrap_or(Value::Null),
    );
    let lip = bilipschitz_constant(&random, random.justified())?;
    r.check(
        "bilipschitz_to_justified_copy",
        le_tol(&lip, &three),
        json!({ "constant": num_json(&lip) }),
        json!({ "seed": seed, "depth": depth }),
    );

    let gamma = default_gamma(&bundle)?;
    let table = small_molecule_limit_check(&gamma, &bundle)?;
    limit_checks(&mut r, &table, &gamma, Some(S::ratio(1, 10)));

    let probe_bundle = SequenceBundle { reps: bundle.reps[..depth.min(PROBE_LEN)].to_vec(), ..bundle.clone() };
    let c_target = S::ratio(3, 10);
    let probe = ai_l1_subsequence_probe(&probe_bundle, &c_target, 1 << PROBE_LEN, seed);
    r.check_strict(
        "l1_subsequence_probe",
        probe.is_ok(),
        match &probe {
            Ok(c) => json!({
                "c_target": num_json(&c_target),
                "selected": c.selected,
                "constants": c.constants.iter().map(num_json).collect::<Vec<_>>(),
            }),
            Err(e) => json!({ "error": e.to_string() }),
        },
        json!({ "family": "cantor", "terms": probe_bundle.len() }),
    );
    r.data = json!({ "limit_table": table_json(&table) });
    r.csv = Some(table.to_csv());
    Ok(r.finish())
}

fn overlapping_supports<S: Scalar>(supports: &[Vec<(S, S)>]) -> Option<(usize, usize)> {
    for a in 0..supports.len() {
        for b in a + 1..supports.len() {
            for (l0, h0) in &supports[a] {
                for (l1, h1) in &supports[b] {
                    if S::max_of(l0.clone(), l1.clone()) < S::min_of(h0.clone(), h1.clone()) {
                        return Some((a, b));
                    }
                }
            }
        }
    }
    None
}

/// Number of random coefficient vectors in the star isometry check.
const STAR_SAMPLES: usize = 100;

pub fn reproduce_star<S: Scalar>(big_n: usize, epsilons: &[S], seed: u64) -> Result<Report> {
    let mut r = Report::new("reproduce-star", seed, S::EXACT);
    r.inputs.push(format!("star_family(N = {big_n})"));
    let bundle = star_family::<S>(big_n)?;
    let elems = bundle.elements();
    let oracle_norm = |mu: &FreeElement<S>| -> Result<S> { Ok(godard_transform(&bundle.space, mu)?.l1_norm()) };

    let norms = elems.iter().map(&oracle_norm).collect::<Result<Vec<_>>>()?;
    let bad = norms.iter().position(|v| !approx_eq(v, &S::one()));
    r.check(
        "mu_n_unit_norm",
        bad.is_none(),
        json!(norms.iter().map(num_json).collect::<Vec<_>>()),
        bad.map(|i| json!({ "n": i + 1 })).unwrap_or(Value::Null),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: Option<(S, Vec<S>)> = None;
    for _ in 0..STAR_SAMPLES {
        let a: Vec<S> = (0..big_n).map(|_| S::from_i64(rng.gen_range(-9..=9))).collect();
        let combo = FreeElement::linear_combination(bundle.space.metric(), &a, &elems)?;
        let l1: S = a.iter().fold(S::zero(), |acc, x| acc + x.abs());
        let gap = (oracle_norm(&combo)? - l1).abs();
        if worst.as_ref().is_none_or(|(g, _)| gap > *g) {
            worst = Some((gap, a));
        }
    }
    let (gap, coeffs) = worst.expect("at least one sample");
    r.check(
        "l1_isometry",
        le_tol(&gap, &S::zero()),
        json!({ "samples": STAR_SAMPLES, "max_gap": num_json(&gap) }),
        json!({ "coefficients": coeffs.iter().map(num_json).collect::<Vec<_>>(), "seed": seed }),
    );

    let eq = equi_json(&bundle.space, &elems, epsilons, &mut r)?;
    let deltas = eq["condition_a"].as_array().cloned().unwrap_or_default();
    let delta_ok = epsilons.iter().zip(&deltas).all(|(eps, d)| d["delta"] == num_json(eps) || {
        d["delta"].as_f64().is_some_and(|v| (v - eps.to_f64()).abs() <= 1e-9)
    });
    r.check(
        "condition_a_delta_equals_eps",
        delta_ok,
        json!(deltas.iter().map(|d| d["delta"].clone()).collect::<Vec<_>>()),
        json!({ "epsilons": epsilons.iter().map(num_json).collect::<Vec<_>>() }),
    );

    let mut curve = Vec::new();
    let mut curve_bad = None;
    for (i, mu) in elems.iter().enumerate() {
        let n = i + 1;
        for k in 0..=n {
            let d = min_defect_k_generators(&bundle.space, mu, k)?;
            let expected = S::one() - S::ratio(k as i64, n as i64);
            if !approx_eq(&d, &expected) && curve_bad.is_none() {
                curve_bad = Some(json!({ "n": n, "k": k, "defect": num_json(&d) }));
            }
            curve.push(json!({ "n": n, "k": k, "defect": num_json(&d) }));
        }
    }
    r.check(
        "condition_b_defect_one_minus_k_over_n",
        curve_bad.is_none(),
        json!({ "points": curve.len() }),
        curve_bad.unwrap_or(Value::Null),
    );
    r.data = json!({ "equi": eq, "defect_curve": curve });
    Ok(r.finish())
}

pub fn reproduce_dyadic<S: Scalar>(big_n: usize, seed: u64) -> Result<Report> {
    let mut r = Report::new("reproduce-dyadic", seed, S::EXACT);
    r.inputs.push(format!("dyadic_family(N = {big_n})"));
    let bundle = dyadic_family::<S>(big_n)?;
    let mut convex = Vec::new();
    let mut spreads = Vec::new();
    for (i, rep) in bundle.reps.iter().enumerate() {
        let n = i + 1;
        let norm = godard_transform(&bundle.space, &rep.value())?.l1_norm();
        convex.push(approx_eq(&norm, &rep.mass()));
        let metric = rep.space();
        let total = rep.terms().iter().fold(S::zero(), |acc, t| acc + metric.d(t.x, t.y).clone());
        let expected = S::pow2(1 - n as i32) * (S::one() - S::pow2(-((1i32 << n) + 1)));
        spreads.push((total, expected));
    }
    let bad = convex.iter().position(|c| !c);
    r.check(
        "gamma_n_convex",
        bad.is_none(),
        json!({ "levels": convex.len() }),
        bad.map(|i| rep_to_json(&bundle.reps[i])).unwrap_or(Value::Null),
    );
    let bad_sum = spreads.iter().position(|(t, e)| !approx_eq(t, e));
    r.check(
        "distance_sum_closed_form",
        bad_sum.is_none(),
        json!(spreads.iter().map(|(t, _)| num_json(t)).collect::<Vec<_>>()),
        bad_sum.map(|i| json!({ "n": i + 1, "expected": num_json(&spreads[i].1) })).unwrap_or(Value::Null),
    );
    let not_decreasing = spreads.windows(2).position(|w| w[1].0 >= w[0].0);
    r.check_strict(
        "distance_sum_decreasing",
        not_decreasing.is_none(),
        json!({ "levels": spreads.len() }),
        not_decreasing.map(|i| json!({ "n": i + 2 })).unwrap_or(Value::Null),
    );
    let gamma = default_gamma(&bundle)?;
    let table = small_molecule_limit_check(&gamma, &bundle)?;
    limit_checks(&mut r, &table, &gamma, None);
    r.data = json!({ "limit_table": table_json(&table) });
    r.csv = Some(table.to_csv());
    Ok(r.finish())
}

/// The line `{0, 1, 3}` with `z = 0` and `K = {3}`.
pub fn remark_default_space<S: Scalar>() -> Result<(Space<S>, usize, PointSet)> {
    let names = vec!["0".to_string(), "1".to_string(), "3".to_string()];
    let m = Arc::new(FiniteMetricSpace::from_line(names, &[S::zero(), S::one(), S::from_i64(3)], 0)?);
    let k = m.point_set([2])?;
    Ok((m, 0, k))
}

/// For `x` with `d(x, z) <= d(x, K u {0})`, the function vanishing on
/// `K u {z, 0}` and equal to `d(x, z)` at `x` norms `m_xz` and shows
/// `dist(m_xz, F(K u {z})) = 1`.
pub fn remark_ball_not_ur_scenario<S: Scalar>(
    space: &Space<S>,
    z: usize,
    k: &PointSet,
    x: Option<usize>,
    seed: u64,
) -> Result<Report> {
    let mut r = Report::new("reproduce-remark", seed, S::EXACT);
    let base = space.base();
    let mut closed = k.clone();
    closed.insert(z);
    let mut pinned = closed.clone();
    pinned.insert(base);
    let admissible = |x: usize| -> bool {
        !pinned.contains(x) && space.dist_to_set(x, &pinned).is_some_and(|d| le_tol(space.d(x, z), &d))
    };
    let x = match x {
        Some(x) if admissible(x) => x,
        Some(x) => {
            return Err(Error::HypothesisUnsatisfied(format!(
                "{} lies in K u {{z, 0}} or is closer to K u {{0}} than to z",
                space.name(x)
            )))
        }
        None => (0..space.len())
            .find(|&x| admissible(x))
            .ok_or_else(|| Error::HypothesisUnsatisfied("no x with d(x, z) <= d(x, K u {0})".into()))?,
    };
    let mut values: BTreeMap<usize, S> = pinned.iter().map(|p| (p, S::zero())).collect();
    values.insert(x, space.d(x, z).clone());
    let f = mcshane_extend(space, &PartialFunction::new(values), &S::one())?;
    let m = FreeElement::molecule(space, x, z)?;
    let pairing = m.pair(&f)?;
    let dist = dist_to_subspace(&m, &closed)?;
    let primal = dist_to_subspace_primal(&m, &closed)?;
    r.inputs.push(format!("x = {}, z = {}, K = {:?}", space.name(x), space.name(z), subset_to_json(space, k)));
    let vanishes = closed.iter().all(|p| f.value(p).is_zero());
    r.check(
        "witness_norms_molecule",
        approx_eq(&pairing, &S::one()) && le_tol(&f.lip_constant(), &S::one()) && vanishes,
        json!({ "pairing": num_json(&pairing), "lip": num_json(&f.lip_constant()) }),
        lip_to_json(&f),
    );
    r.check(
        "distance_at_least_one",
        le_tol(&S::one(), &dist.value) && approx_eq(&dist.value, &primal),
        json!({ "dual": num_json(&dist.value), "primal": num_json(&primal) }),
        json!({ "x": space.name(x), "z": space.name(z), "subset": subset_to_json(space, k), "function": lip_to_json(&dist.witness) }),
    );
    Ok(r.finish())
}

/// Star, Cantor, dyadic and remark scenarios with default parameters, run
/// on separate threads.
pub fn reproduce_all<S: Scalar>(seed: u64) -> Result<Vec<Report>> {
    let eps = [S::ratio(1, 20), S::ratio(1, 10), S::ratio(1, 5)];
    let dyadic_n = if S::EXACT { 6 } else { 5 };
    std::thread::scope(|scope| {
        let star = scope.spawn(|| reproduce_star::<S>(8, &eps, seed));
        let cantor = scope.spawn(|| reproduce_cantor::<S>(8, seed));
        let dyadic = scope.spawn(|| reproduce_dyadic::<S>(dyadic_n, seed));
        let remark = scope.spawn(|| {
            let (space, z, k) = remark_default_space::<S>()?;
            remark_ball_not_ur_scenario(&space, z, &k, None, seed)
        });
        [cantor, star, dyadic, remark].into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
    })
}
