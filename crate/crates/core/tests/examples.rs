//! Worked examples with frozen expected values. Values marked "oracle" were
//! computed once with an independent LP solver and hard-coded here.

use std::collections::BTreeMap;
use std::sync::Arc;

use freelip::constructions::{bilipschitz_constant, cantor_scheme, dyadic_family, star_family, CantorScheme};
use freelip::free::{
    dist_to_subspace, dist_to_subspace_primal, extend_disjoint, find_norming_function, is_convex_representation,
    is_cyclically_monotone, l1_basis_lower_bound, mcshane_extend, molecule_dist_upper, norm_dual, norm_primal,
    refine_partition, small_mass_modulus, split_by_scale, FreeElement, Molecule, MoleculeRep, PartialFunction,
};
use freelip::metric::{annulus, min_separation, neighborhood, perturbed_metric, FiniteMetricSpace, PointSet};
use freelip::tree::{
    best_subtree, dist_to_small_support, dist_to_subtree, equi_integrability_report, godard_transform,
    inverse_godard, top_mass, RTree, Subtree, TreeOracle, TreeSpace,
};
use freelip::{Error, Rational, Scalar};

fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

fn z(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

fn line(coords: &[i64]) -> Arc<FiniteMetricSpace<Rational>> {
    let c: Vec<Rational> = coords.iter().map(|&v| z(v)).collect();
    Arc::new(FiniteMetricSpace::from_line(coords.iter().map(|v| v.to_string()).collect(), &c, 0).unwrap())
}

fn matrix(rows: &[&[i64]]) -> Arc<FiniteMetricSpace<Rational>> {
    let m = rows.iter().map(|r| r.iter().map(|&v| z(v)).collect()).collect();
    Arc::new(FiniteMetricSpace::validate_metric(names(rows.len()), 0, m).unwrap())
}

fn element(space: &Arc<FiniteMetricSpace<Rational>>, c: &[i64]) -> FreeElement<Rational> {
    FreeElement::from_coeffs(space, c.iter().map(|&v| z(v)).collect()).unwrap()
}

/// Shortest-path closure of random integer weights (oracle instance).
fn oracle_space() -> Arc<FiniteMetricSpace<Rational>> {
    matrix(&[
        &[0, 8, 3, 5, 4, 7],
        &[8, 0, 5, 8, 4, 8],
        &[3, 5, 0, 6, 7, 9],
        &[5, 8, 6, 0, 4, 5],
        &[4, 4, 7, 4, 0, 9],
        &[7, 8, 9, 5, 9, 0],
    ])
}

#[test]
fn metric_validation_examples() {
    assert!(FiniteMetricSpace::validate_metric(names(2), 0, vec![vec![z(0), z(1)], vec![z(1), z(0)]]).is_ok());
    let bad = vec![vec![z(0), z(1), z(3)], vec![z(1), z(0), z(1)], vec![z(3), z(1), z(0)]];
    assert_eq!(
        FiniteMetricSpace::validate_metric(names(3), 0, bad).unwrap_err(),
        Error::TriangleViolation { x: "p0".into(), y: "p1".into(), z: "p2".into() }
    );
    let l = line(&[0, 1, 2, 3]);
    assert!(FiniteMetricSpace::validate_metric(l.names().to_vec(), 0, l.matrix()).is_ok());
}

#[test]
fn neighborhoods_and_annuli_on_the_line() {
    let l = line(&[0, 1, 2, 3]);
    let s1 = l.point_set([1]).unwrap();
    assert_eq!(neighborhood(&l, &s1, &z(1)).unwrap().iter().collect::<Vec<_>>(), vec![0, 1, 2]);
    let s0 = l.point_set([0]).unwrap();
    assert_eq!(neighborhood(&l, &s0, &z(0)).unwrap().iter().collect::<Vec<_>>(), vec![0]);
    assert_eq!(neighborhood(&l, &l.all_points(), &z(5)).unwrap().len(), 4);
    assert!(neighborhood(&l, &PointSet::empty(4), &z(1)).is_err());

    assert_eq!(annulus(&l, 0).len(), 4);
    assert_eq!(annulus(&l, -5).iter().collect::<Vec<_>>(), vec![0]);
    let far = line(&[0, 8]);
    assert!(annulus(&far, 1).contains(1));
}

#[test]
fn perturbation_and_separation() {
    // A = {0, a}, B = {x} with d(0,a) = 1, d(a,x) = 2, d(0,x) = 3.
    let m = line(&[0, 1, 3]);
    let a = m.point_set([0, 1]).unwrap();
    let b = m.point_set([2]).unwrap();
    let p = perturbed_metric(&m, &a, &b, &z(1)).unwrap();
    assert_eq!(*p.d(1, 2), z(3));
    assert_eq!(*p.d(0, 1), z(1));
    let same = perturbed_metric(&m, &a, &b, &z(0)).unwrap();
    assert_eq!(same.matrix(), m.matrix());
    assert!(matches!(perturbed_metric(&m, &a, &b, &z(2)), Err(Error::DeltaTooLarge { .. })));

    assert_eq!(min_separation(&m, &m.all_points()).unwrap(), z(1));
    let tri = matrix(&[&[0, 2, 2], &[2, 0, 2], &[2, 2, 0]]);
    assert_eq!(min_separation(&tri, &tri.all_points()).unwrap(), z(2));
    assert_eq!(min_separation(&tri, &tri.point_set([1]).unwrap()).unwrap_err(), Error::TooFewPoints);
}

#[test]
fn molecule_values() {
    let l = line(&[0, 1, 2]);
    let rep = MoleculeRep::new(&l, vec![Molecule { x: 2, y: 1, a: z(1) }]).unwrap();
    assert_eq!(rep.value(), element(&l, &[0, -1, 1]));
    assert!(MoleculeRep::new(&l, vec![]).unwrap().value().is_zero());
    let cancel = MoleculeRep::new(&l, vec![Molecule { x: 1, y: 2, a: z(1) }, Molecule { x: 2, y: 1, a: z(1) }]).unwrap();
    assert!(cancel.value().is_zero());
    assert!(!is_convex_representation(&cancel).unwrap());
}

#[test]
fn line_norm_of_second_difference() {
    let l = line(&[0, 1, 2, 3]);
    let mu = element(&l, &[0, 1, -2, 1]);
    assert_eq!(norm_dual(&mu).unwrap().value, z(2));
    let p = norm_primal(&mu).unwrap();
    assert_eq!(p.value, z(2));
    assert_eq!(p.rep.mass(), z(2));
    assert_eq!(p.rep.value(), mu);
    assert_eq!(norm_dual(&FreeElement::delta(&l, 3)).unwrap().value, z(3));
    assert_eq!(norm_dual(&FreeElement::molecule(&l, 1, 3).unwrap()).unwrap().value, z(1));
    assert_eq!(norm_primal(&FreeElement::zero(&l)).unwrap().rep.terms().len(), 0);
}

#[test]
fn oracle_norms_on_random_integer_metric() {
    let m = oracle_space();
    let cases: [(&[i64], i64); 4] =
        [(&[0, 1, -1, 0, 0, 0], 5), (&[0, 2, 0, -3, 1, 0], 20), (&[0, -1, -1, -1, 4, -1], 24), (&[0, 0, 5, 0, 0, -2], 27)];
    for (c, expected) in cases {
        let mu = element(&m, c);
        assert_eq!(norm_dual(&mu).unwrap().value, z(expected), "{c:?}");
        assert_eq!(norm_primal(&mu).unwrap().value, z(expected), "{c:?}");
    }
}

#[test]
fn oracle_subspace_distances() {
    let m = oracle_space();
    let cases: [(&[i64], &[usize], i64); 3] =
        [(&[0, 2, 0, -3, 1, 0], &[1, 3], 4), (&[0, -1, -1, -1, 4, -1], &[4], 18), (&[0, 0, 5, 0, 0, -2], &[2, 5], 0)];
    for (c, s, expected) in cases {
        let mu = element(&m, c);
        let set = m.point_set(s.iter().copied()).unwrap();
        assert_eq!(dist_to_subspace(&mu, &set).unwrap().value, z(expected));
        assert_eq!(dist_to_subspace_primal(&mu, &set).unwrap(), z(expected));
    }
}

#[test]
fn subspace_distance_edge_cases() {
    let tri = matrix(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
    let mu = FreeElement::delta(&tri, 1);
    assert_eq!(dist_to_subspace(&mu, &tri.point_set([2]).unwrap()).unwrap().value, z(1));
    assert_eq!(dist_to_subspace(&mu, &PointSet::empty(3)).unwrap().value, z(1));
    assert_eq!(dist_to_subspace(&mu, &tri.point_set([1]).unwrap()).unwrap().value, z(0));
}

#[test]
fn cyclic_monotonicity_on_the_line() {
    let l = line(&[0, 1, 2]);
    assert!(is_cyclically_monotone(&l, &[(1, 0)]).unwrap().monotone);
    let swapped = is_cyclically_monotone(&l, &[(0, 1), (1, 0)]).unwrap();
    assert!(!swapped.monotone);
    assert_eq!(swapped.cycle_weight, Some(z(-2)));
    assert!(find_norming_function(&l, &[(0, 1), (1, 0)]).unwrap().is_none());
    let f = find_norming_function(&l, &[(1, 0), (2, 1)]).unwrap().unwrap();
    assert_eq!(f.value(1).clone() - f.value(0).clone(), z(1));
    assert_eq!(f.value(2).clone() - f.value(1).clone(), z(1));
    assert_eq!(is_cyclically_monotone(&l, &[(1, 1)]).unwrap_err(), Error::DegeneratePair("1".into()));
}

#[test]
fn molecule_distance_bound() {
    let l = line(&[0, 1, 3]);
    assert_eq!(molecule_dist_upper(&l, 1, 2, 1, 2).unwrap(), z(0));
    assert_eq!(molecule_dist_upper(&l, 2, 1, 1, 2).unwrap(), z(2));
    let diff = FreeElement::molecule(&l, 2, 1).unwrap().minus(&FreeElement::molecule(&l, 1, 2).unwrap()).unwrap();
    assert_eq!(norm_dual(&diff).unwrap().value, z(2));
}

#[test]
fn refinement_splits_at_interior_points() {
    let l = line(&[0, 1, 2]);
    let rep = MoleculeRep::new(&l, vec![Molecule { x: 2, y: 0, a: z(4) }]).unwrap();
    let refined = refine_partition(&rep, &[vec![2, 1, 0]]).unwrap();
    assert_eq!(refined.terms(), &[Molecule { x: 2, y: 1, a: z(2) }, Molecule { x: 1, y: 0, a: z(2) }]);
    assert_eq!(refined.value(), rep.value());
    assert_eq!(refined.mass(), rep.mass());
    assert_eq!(refine_partition(&rep, &[vec![2, 0]]).unwrap().terms(), rep.terms());
    assert_eq!(refine_partition(&rep, &[vec![2, 1]]).unwrap_err(), Error::NotAGeodesicChain { term: 0 });
}

#[test]
fn small_mass_examples() {
    let l = line(&[0, 1, 10]);
    let big = MoleculeRep::new(&l, vec![Molecule { x: 2, y: 0, a: z(1) }]).unwrap();
    assert_eq!(small_mass_modulus(&big, &z(1)).value, z(0));

    // Lengths 1/10 and 10 with weight 1/2 each.
    let m = Arc::new(FiniteMetricSpace::from_line(names(3), &[z(0), q(1, 10), z(10)], 0).unwrap());
    let rep = MoleculeRep::new(&m, vec![Molecule { x: 1, y: 0, a: q(1, 2) }, Molecule { x: 2, y: 0, a: q(1, 2) }]).unwrap();
    let md = small_mass_modulus(&rep, &z(1));
    assert_eq!(md.value, q(1, 2));
    assert!(!md.approximate);

    let (large, small) = split_by_scale(&rep, &z(1)).unwrap();
    assert_eq!(large.terms().len(), 1);
    assert_eq!(small.mass(), q(1, 2));
    assert_eq!(large.value().plus(&small.value()).unwrap(), rep.value());
    let (all, none) = split_by_scale(&rep, &q(1, 20)).unwrap();
    assert_eq!((all.terms().len(), none.mass()), (2, z(0)));
}

#[test]
fn star_small_mass_modulus() {
    let b = star_family::<Rational>(5).unwrap();
    // mu_5 has five terms of length 1/5 and weight 1/5: the modulus is |I|/5
    // for the largest |I| with |I|/5 < delta.
    let rep = &b.reps[4];
    assert_eq!(small_mass_modulus(rep, &q(1, 2)).value, q(2, 5));
    assert_eq!(small_mass_modulus(rep, &q(2, 5)).value, q(1, 5));
    assert_eq!(small_mass_modulus(rep, &z(2)).value, z(1));
}

#[test]
fn mcshane_on_the_line() {
    let l = line(&[0, 1, 2]);
    let f = PartialFunction::new(BTreeMap::from([(0, z(0)), (2, z(2))]));
    let ext = mcshane_extend(&l, &f, &z(1)).unwrap();
    assert_eq!(*ext.value(1), z(1));
    let steep = PartialFunction::new(BTreeMap::from([(0, z(0)), (2, z(5))]));
    assert!(matches!(mcshane_extend(&l, &steep, &z(1)), Err(Error::NotLipschitzOnS { .. })));
}

#[test]
fn disjoint_extension_of_two_bumps() {
    let l = line(&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
    let domain = l.point_set([0, 1, 2, 7, 8]).unwrap();
    let f1 = PartialFunction::new(BTreeMap::from([(0, z(0)), (1, z(1)), (2, z(0)), (7, z(0)), (8, z(0))]));
    let f2 = PartialFunction::new(BTreeMap::from([(0, z(0)), (1, z(0)), (2, z(0)), (7, z(0)), (8, z(1))]));
    let ext = extend_disjoint(&l, &domain, &[f1, f2]).unwrap();
    assert!(!ext.neighborhoods[0].intersects(&ext.neighborhoods[1]));
    for f in &ext.functions {
        assert!(f.lip_constant() <= z(2));
    }
    assert!(!ext.functions[0].support_set().intersects(&ext.functions[1].support_set()));
    assert_eq!(*ext.functions[1].value(8), z(1));
}

fn example_tree() -> Arc<RTree<Rational>> {
    let e = |a: &str, b: &str, l: Rational| (a.to_string(), b.to_string(), l);
    Arc::new(RTree::new("r", &[e("r", "a", z(1)), e("a", "b", q(1, 2)), e("a", "c", z(2)), e("r", "d", q(3, 4))]).unwrap())
}

#[test]
fn oracle_tree_norms() {
    let s = TreeSpace::vertices(example_tree()).unwrap();
    let cases: [(&[i64], Rational); 3] = [(&[0, 1, -2, 1, 0], z(3)), (&[0, 0, 3, -1, -1], q(25, 4)), (&[0, -1, 0, 0, 2], q(5, 2))];
    for (c, expected) in cases {
        let mu = element(s.metric(), c);
        assert_eq!(godard_transform(&s, &mu).unwrap().l1_norm(), expected);
        assert_eq!(norm_dual(&mu).unwrap().value, expected);
    }
}

#[test]
fn godard_images() {
    let t = example_tree();
    let x = t.point_between("r", "a", q(1, 2)).unwrap();
    let y = t.point_between("r", "a", q(1, 4)).unwrap();
    let s = TreeSpace::new(t.clone(), vec![("x".into(), x), ("y".into(), y)]).unwrap();
    let dx = FreeElement::delta(s.metric(), s.metric().index_of("x").unwrap());
    let g = godard_transform(&s, &dx).unwrap();
    assert_eq!(g.value_at(1, &q(1, 3)), z(1));
    assert_eq!(g.value_at(1, &q(2, 3)), z(0));
    assert_eq!(g.l1_norm(), q(1, 2));

    let m = FreeElement::molecule(s.metric(), s.metric().index_of("x").unwrap(), s.metric().index_of("y").unwrap()).unwrap();
    let gm = godard_transform(&s, &m).unwrap();
    assert_eq!(gm.value_at(1, &q(3, 8)), z(4));
    assert_eq!(gm.value_at(1, &q(1, 8)), z(0));
    assert_eq!(gm.l1_norm(), z(1));

    let (back, rep) = inverse_godard(&g).unwrap();
    assert_eq!(rep.mass(), q(1, 2));
    assert_eq!(godard_transform(&back, &rep.value()).unwrap().l1_norm(), q(1, 2));
}

#[test]
fn top_mass_examples() {
    let t = Arc::new(RTree::new("r", &[("r".to_string(), "a".to_string(), z(1))]).unwrap());
    let at = |o: Rational| t.point(1, o).unwrap();
    let s = TreeSpace::new(t.clone(), vec![("a".into(), at(z(1))), ("m".into(), at(q(1, 10)))]).unwrap();
    let one = FreeElement::delta(s.metric(), 1);
    let g = godard_transform(&s, &one).unwrap();
    assert_eq!(top_mass(&g, &q(3, 10)), q(3, 10));
    assert_eq!(top_mass(&g, &z(5)), z(1));
    // 2 on [0, 1/10] and 1 on (1/10, 1].
    let mut two = one.clone();
    two.add_at(2, z(1));
    let g2 = godard_transform(&s, &two).unwrap();
    assert_eq!(top_mass(&g2, &q(1, 5)), q(3, 10));
    assert_eq!(dist_to_small_support(&s, &two, &q(1, 5)).unwrap(), g2.l1_norm() - q(3, 10));
}

#[test]
fn star_tree_quantities() {
    let b = star_family::<Rational>(6).unwrap();
    let elems = b.elements();
    // ||mu_2 - mu_3|| = 2.
    let g = godard_transform(&b.space, &elems[1].minus(&elems[2]).unwrap()).unwrap();
    assert_eq!(g.l1_norm(), z(2));
    // Below the branch length the small-support distance is 1 - delta.
    assert_eq!(dist_to_small_support(&b.space, &elems[3], &q(1, 10)).unwrap(), q(9, 10));
    // k of the n branches of mu_n covered: defect (n - k) / n.
    let tree = b.space.tree();
    let gens: Vec<_> = ["x4_1", "x4_2", "x4_3"].iter().map(|n| tree.vertex_point(tree.vertex(n).unwrap())).collect();
    let sub = Subtree::from_generators(tree, &gens).unwrap();
    assert_eq!(dist_to_subtree(&b.space, &elems[3], &sub).unwrap(), q(1, 4));
    assert_eq!(dist_to_subtree(&b.space, &elems[3], &Subtree::root_only(tree)).unwrap(), z(1));
    assert_eq!(dist_to_subtree(&b.space, &elems[3], &Subtree::full(tree)).unwrap(), z(0));

    let choice = best_subtree(&b.space, &elems, &q(1, 2)).unwrap();
    assert!(choice.max_defect() <= q(1, 2));
    let report = equi_integrability_report(&b.space, &elems, &[q(1, 10)]).unwrap();
    assert_eq!(report.condition_a[0].delta, Some(q(1, 10)));
    assert!(report.satisfied());
}

#[test]
fn l1_constants_of_shipped_families() {
    let star = star_family::<Rational>(5).unwrap();
    let est = l1_basis_lower_bound(&star.oracle(), &star.elements(), 64, 1).unwrap();
    assert_eq!(est.certified, Some(z(1)));
    assert_eq!(est.estimate, z(1));

    let c = cantor_scheme(5, &q(1, 3)).unwrap();
    let fam = freelip::constructions::cantor_family(&c).unwrap();
    let est = l1_basis_lower_bound(&TreeOracle { space: fam.space.clone() }, &fam.elements(), 64, 1).unwrap();
    assert!(est.constant() >= q(1, 3));

    let single = l1_basis_lower_bound(&star.oracle(), &star.elements()[..1], 64, 1).unwrap();
    assert_eq!(single.constant(), z(1));
}

#[test]
fn cantor_examples() {
    let c = cantor_scheme(1, &q(1, 3)).unwrap();
    assert_eq!(c.interval(1, 0), &(z(0), q(1, 3)));
    assert_eq!(c.interval(1, 1), &(q(2, 3), z(1)));
    assert_eq!(c.gap_points(0, 0).unwrap(), (q(1, 3), q(2, 3)));

    let deep = cantor_scheme(5, &q(1, 3)).unwrap();
    for k in 0..5 {
        let mut third = Rational::from_i64(1);
        for _ in 0..=k {
            third /= z(3);
        }
        for s in 0..1usize << k {
            let (a, b) = deep.gap_points(k, s).unwrap();
            assert_eq!(b - a, third);
        }
    }
    let g1 = deep.gamma_n(1).unwrap();
    assert_eq!(g1.terms().len(), 1);
    assert_eq!(g1.terms()[0].a, z(1));

    let f1 = deep.f_n(1).unwrap();
    assert_eq!(f1.value_at(1, &q(1, 2)), z(3));
    assert_eq!(f1.l1_norm(), z(1));

    assert_eq!(cantor_scheme(3, &q(1, 2)).unwrap_err(), Error::BadRatio);
    assert_eq!(deep.gamma_n(6).unwrap_err(), Error::DepthExceeded { n: 6, depth: 5 });
    assert_eq!(bilipschitz_constant(&deep, deep.justified()).unwrap(), z(1));
}

#[test]
fn random_schemes_respect_norm_bounds() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let c: CantorScheme<Rational> = CantorScheme::random(5, &mut rng).unwrap();
    for n in 1..=5 {
        let v = c.f_n(n).unwrap().l1_norm();
        assert!(v >= q(1, 3) && v <= z(3));
    }
}

#[test]
fn dyadic_examples() {
    let b = dyadic_family::<Rational>(3).unwrap();
    let first = &b.reps[0];
    let m = first.space();
    let lengths: Vec<Rational> = first.terms().iter().map(|t| m.d(t.x, t.y).clone()).collect();
    assert_eq!(lengths, vec![q(1, 2), q(1, 4), q(1, 8)]);
    assert_eq!(lengths.iter().fold(z(0), |a, l| a + l.clone()), q(7, 8));
    for (i, rep) in b.reps.iter().enumerate() {
        let total = rep.terms().iter().fold(z(0), |a, t| a + m.d(t.x, t.y).clone());
        assert!(total < Rational::pow2(-(i as i32)));
        assert!(is_convex_representation(rep).unwrap());
    }
}
