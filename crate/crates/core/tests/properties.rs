use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use freelip::constructions::CantorScheme;
use freelip::free::{
    dist_to_subspace, dist_to_subspace_primal, find_norming_function, is_convex_representation, is_cyclically_monotone,
    molecule_dist_upper, norm_dual, norm_primal, refine_partition, FreeElement, Molecule, MoleculeRep,
};
use freelip::metric::{min_separation, neighborhood, perturbed_metric, FiniteMetricSpace, PointSet};
use freelip::sample::{random_element, random_integer_metric, random_tree};
use freelip::tree::{dist_to_small_support, dist_to_subtree, godard_transform, inverse_godard, top_mass, Subtree, TreeSpace};
use freelip::{Rational, Scalar};

type Q = Rational;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn space(seed: u64, n: usize) -> Arc<FiniteMetricSpace<Q>> {
    Arc::new(random_integer_metric(n, 9, &mut rng(seed)).unwrap())
}

fn random_rep(space: &Arc<FiniteMetricSpace<Q>>, terms: usize, r: &mut ChaCha8Rng) -> MoleculeRep<Q> {
    let n = space.len();
    let mols = (0..terms)
        .map(|_| {
            let x = r.gen_range(0..n);
            let y = (x + r.gen_range(1..n)) % n;
            Molecule { x, y, a: Q::ratio(r.gen_range(-6..=6), r.gen_range(1..=3)) }
        })
        .collect();
    MoleculeRep::new(space, mols).unwrap()
}

fn random_subset(n: usize, r: &mut ChaCha8Rng) -> PointSet {
    PointSet::new(n, (0..n).filter(|_| r.gen_bool(0.4))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_metrics_satisfy_triangle(seed in any::<u64>(), n in 2usize..9) {
        let m = space(seed, n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    prop_assert!(*m.d(x, z) <= m.d(x, y).clone() + m.d(y, z).clone());
                }
            }
        }
    }

    #[test]
    fn perturbation_stays_between_bounds(seed in any::<u64>(), n in 3usize..8, frac in 1i64..10) {
        let m = space(seed, n);
        let split = 1 + (seed as usize) % (n - 1);
        let a = m.point_set(0..split).unwrap();
        let b = m.point_set(split..n).unwrap();
        let c = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| (x, y)))
            .map(|(x, y)| m.d(x, y).clone())
            .fold(None, |acc: Option<Q>, d| Some(acc.map_or(d.clone(), |v| Q::min_of(v, d))))
            .unwrap();
        let delta = c.clone() * Q::ratio(frac, 10);
        let p = perturbed_metric(&m, &a, &b, &delta).unwrap();
        let factor = Q::from_i64(1) + delta / c;
        for x in 0..n {
            for y in 0..n {
                prop_assert!(*m.d(x, y) <= *p.d(x, y));
                prop_assert!(*p.d(x, y) <= factor.clone() * m.d(x, y).clone());
            }
        }
    }

    #[test]
    fn neighborhoods_grow_with_radius(seed in any::<u64>(), n in 2usize..9, r1 in 0i64..12, extra in 0i64..12) {
        let m = space(seed, n);
        let mut r = rng(seed ^ 1);
        let mut s = random_subset(n, &mut r);
        s.insert(r.gen_range(0..n));
        let small = neighborhood(&m, &s, &Q::from_i64(r1)).unwrap();
        let big = neighborhood(&m, &s, &Q::from_i64(r1 + extra)).unwrap();
        prop_assert!(small.is_subset(&big));
        prop_assert!(s.is_subset(&small));
        prop_assert_eq!(neighborhood(&m, &s, &Q::zero()).unwrap(), s);
    }

    #[test]
    fn dual_and_primal_norms_agree(seed in any::<u64>(), n in 2usize..10, terms in 1usize..8) {
        let m = space(seed, n);
        let mu = random_element(&m, terms, &mut rng(seed ^ 2));
        let d = norm_dual(&mu).unwrap();
        let p = norm_primal(&mu).unwrap();
        prop_assert_eq!(&d.value, &p.value);
        prop_assert_eq!(mu.pair(&d.witness).unwrap(), d.value.clone());
        prop_assert!(d.witness.lip_constant() <= Q::from_i64(1));
        prop_assert_eq!(p.rep.value(), mu);
        prop_assert_eq!(p.rep.mass(), p.value);
    }

    #[test]
    fn norm_is_bounded_by_mass(seed in any::<u64>(), n in 2usize..8, terms in 1usize..6) {
        let m = space(seed, n);
        let rep = random_rep(&m, terms, &mut rng(seed ^ 3));
        let norm = norm_dual(&rep.value()).unwrap().value;
        prop_assert!(norm <= rep.mass());
        prop_assert_eq!(is_convex_representation(&rep).unwrap(), norm == rep.mass());
    }

    #[test]
    fn subspace_distance_two_sided(seed in any::<u64>(), n in 2usize..9, terms in 1usize..6) {
        let m = space(seed, n);
        let mut r = rng(seed ^ 4);
        let mu = random_element(&m, terms, &mut r);
        let s = random_subset(n, &mut r);
        let d = dist_to_subspace(&mu, &s).unwrap().value;
        prop_assert_eq!(&d, &dist_to_subspace_primal(&mu, &s).unwrap());
        prop_assert!(d <= norm_dual(&mu).unwrap().value);
    }

    #[test]
    fn molecule_bound_dominates_norm(seed in any::<u64>(), n in 2usize..8) {
        let m = space(seed, n);
        let mut r = rng(seed ^ 5);
        let mut pick = || {
            let x = r.gen_range(0..n);
            (x, (x + r.gen_range(1..n)) % n)
        };
        let ((u, v), (x, y)) = (pick(), pick());
        let diff = FreeElement::molecule(&m, u, v).unwrap().minus(&FreeElement::molecule(&m, x, y).unwrap()).unwrap();
        prop_assert!(norm_dual(&diff).unwrap().value <= molecule_dist_upper(&m, u, v, x, y).unwrap());
    }

    #[test]
    fn norming_function_exists_iff_monotone(seed in any::<u64>(), k in 1usize..5) {
        let m = space(seed, 5);
        let mut r = rng(seed ^ 6);
        let pairs: Vec<(usize, usize)> = (0..k)
            .map(|_| {
                let x = r.gen_range(0..5);
                (x, (x + r.gen_range(1..5)) % 5)
            })
            .collect();
        let mono = is_cyclically_monotone(&m, &pairs).unwrap().monotone;
        let f = find_norming_function(&m, &pairs).unwrap();
        prop_assert_eq!(mono, f.is_some());
        if let Some(f) = f {
            for &(x, y) in &pairs {
                prop_assert_eq!(f.value(x).clone() - f.value(y).clone(), m.d(x, y).clone());
            }
        }
    }

    #[test]
    fn normalized_differences_obey_massera_schaffer(seed in any::<u64>(), n in 2usize..8) {
        let m = space(seed, n);
        let mut r = rng(seed ^ 7);
        let x = random_element(&m, 3, &mut r);
        let y = random_element(&m, 3, &mut r);
        let (nx, ny) = (norm_dual(&x).unwrap().value, norm_dual(&y).unwrap().value);
        prop_assume!(!nx.is_zero() && !ny.is_zero());
        let lhs = x.scale(Q::from_i64(1) / nx.clone()).minus(&y.scale(Q::from_i64(1) / ny.clone())).unwrap();
        let rhs = Q::from_i64(2) * norm_dual(&x.minus(&y).unwrap()).unwrap().value / Q::max_of(nx, ny);
        prop_assert!(norm_dual(&lhs).unwrap().value <= rhs);
    }

    #[test]
    fn refinement_on_the_line_preserves_value(seed in any::<u64>(), n in 3usize..9) {
        let mut r = rng(seed);
        let mut coords = vec![Q::zero()];
        for _ in 1..n {
            let last = coords.last().unwrap().clone();
            coords.push(last + Q::from_i64(r.gen_range(1..5)));
        }
        let m = Arc::new(FiniteMetricSpace::from_line((0..n).map(|i| i.to_string()).collect(), &coords, 0).unwrap());
        let (y, x) = (r.gen_range(0..n - 2), n - 1);
        let mid = r.gen_range(y + 1..x);
        let a = Q::from_i64(r.gen_range(1..5));
        let rep = MoleculeRep::new(&m, vec![Molecule { x, y, a }]).unwrap();
        let refined = refine_partition(&rep, &[vec![x, mid, y]]).unwrap();
        prop_assert_eq!(refined.value(), rep.value());
        prop_assert_eq!(refined.mass(), rep.mass());
        prop_assert_eq!(refined.terms().len(), 2);
    }

    #[test]
    fn tree_transform_is_an_isometry(seed in any::<u64>(), v in 2usize..12, terms in 1usize..6) {
        let mut r = rng(seed);
        let s = TreeSpace::vertices(random_tree::<Q, _>(v, &mut r).unwrap()).unwrap();
        let mu = random_element(s.metric(), terms, &mut r);
        let g = godard_transform(&s, &mu).unwrap();
        prop_assert_eq!(g.l1_norm(), norm_dual(&mu).unwrap().value);

        let (back, rep) = inverse_godard(&g).unwrap();
        prop_assert_eq!(rep.mass(), g.l1_norm());
        prop_assert!(godard_transform(&back, &rep.value()).unwrap() == g);
    }

    #[test]
    fn top_mass_shape(seed in any::<u64>(), v in 2usize..10, terms in 1usize..6) {
        let mut r = rng(seed);
        let s = TreeSpace::vertices(random_tree::<Q, _>(v, &mut r).unwrap()).unwrap();
        let mu = random_element(s.metric(), terms, &mut r);
        let g = godard_transform(&s, &mu).unwrap();
        let grid: Vec<Q> = (0..=40).map(|k| Q::ratio(k, 4)).collect();
        let vals: Vec<Q> = grid.iter().map(|d| top_mass(&g, d)).collect();
        prop_assert!(vals[0].is_zero());
        prop_assert_eq!(top_mass(&g, &Q::from_i64(1000)), g.l1_norm());
        for w in vals.windows(3) {
            prop_assert!(w[0] <= w[1]);
            // Equal grid steps: concavity means the increments shrink.
            prop_assert!(w[2].clone() - w[1].clone() <= w[1].clone() - w[0].clone());
        }
        for d in &grid {
            prop_assert_eq!(dist_to_small_support(&s, &mu, d).unwrap() + top_mass(&g, d), g.l1_norm());
        }
    }

    #[test]
    fn larger_subtrees_leave_less_mass(seed in any::<u64>(), v in 2usize..10) {
        let mut r = rng(seed);
        let tree = random_tree::<Q, _>(v, &mut r).unwrap();
        let s = TreeSpace::vertices(tree.clone()).unwrap();
        let mu = random_element(s.metric(), 4, &mut r);
        let small: Vec<_> = (0..v).filter(|_| r.gen_bool(0.3)).map(|i| tree.vertex_point(i)).collect();
        let mut large = small.clone();
        large.extend((0..v).filter(|_| r.gen_bool(0.3)).map(|i| tree.vertex_point(i)));
        let t1 = Subtree::from_generators(&tree, &small).unwrap();
        let t2 = Subtree::from_generators(&tree, &large).unwrap();
        prop_assert!(t1.is_subset(&t2));
        prop_assert!(dist_to_subtree(&s, &mu, &t1).unwrap() >= dist_to_subtree(&s, &mu, &t2).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_schemes_give_disjoint_bounded_steps(seed in any::<u64>(), depth in 2usize..6) {
        let c: CantorScheme<Q> = CantorScheme::random(depth, &mut rng(seed)).unwrap();
        for k in 1..=depth {
            for s in 0..1usize << k {
                let (lo, hi) = c.interval(k, s);
                let (plo, phi) = c.interval(k - 1, s / 2);
                prop_assert!(plo <= lo && hi <= phi && lo < hi);
            }
            for s in (0..1usize << k).step_by(2) {
                prop_assert!(c.interval(k, s).1 < c.interval(k, s + 1).0);
            }
        }
        let f: Vec<_> = (1..=depth).map(|n| c.f_n(n).unwrap()).collect();
        let one = Q::from_i64(1);
        for (i, fi) in f.iter().enumerate() {
            prop_assert!(Q::ratio(1, 3) <= fi.l1_norm() && fi.l1_norm() <= Q::from_i64(3));
            for fj in &f[i + 1..] {
                // |a+b| + |a-b| = 2 max(|a|,|b|), so equality below means disjoint supports.
                let plus = fi.combine(fj, &one).unwrap().l1_norm();
                let minus = fi.combine(fj, &(-one.clone())).unwrap().l1_norm();
                prop_assert_eq!(plus + minus, Q::from_i64(2) * (fi.l1_norm() + fj.l1_norm()));
            }
        }
        prop_assert!(min_separation(c.justified().line_space().unwrap().metric(), &PointSet::new(2, [0, 1]).unwrap()).is_ok());
    }
}
