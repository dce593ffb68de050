//! Random inputs for tests, benchmarks and the acceptance run.

use std::sync::Arc;

use rand::Rng;

use crate::error::Result;
use crate::free::FreeElement;
use crate::metric::FiniteMetricSpace;
use crate::scalar::Scalar;
use crate::tree::RTree;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Shortest-path closure of a complete graph with integer weights in
/// `1..=max_weight`. The base is `p0`.
pub fn random_integer_metric<S: Scalar, R: Rng>(n: usize, max_weight: i64, rng: &mut R) -> Result<FiniteMetricSpace<S>> {
    let mut d = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.gen_range(1..=max_weight.max(1));
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let matrix = d.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect();
    FiniteMetricSpace::validate_metric(names(n), 0, matrix)
}

/// `n` points uniform in `[0, 1]^dim`.
pub fn random_points<R: Rng>(n: usize, dim: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect()
}

/// Points with the `l1` distance; the first point is the base.
pub fn taxicab_space<S: Scalar>(points: &[Vec<S>]) -> Result<FiniteMetricSpace<S>> {
    let matrix = points
        .iter()
        .map(|p| {
            points
                .iter()
                .map(|q| p.iter().zip(q).fold(S::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs()))
                .collect()
        })
        .collect();
    FiniteMetricSpace::validate_metric(names(points.len()), 0, matrix)
}

/// Points with the Euclidean distance; the first point is the base.
pub fn euclidean_space(points: &[Vec<f64>]) -> Result<FiniteMetricSpace<f64>> {
    let matrix = points
        .iter()
        .map(|p| points.iter().map(|q| p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()).collect())
        .collect();
    FiniteMetricSpace::validate_metric(names(points.len()), 0, matrix)
}

/// Random recursive tree on `vertices` vertices named `v0, v1, ...` with
/// edge lengths in `{1/4, 2/4, ..., 2}`.
pub fn random_tree<S: Scalar, R: Rng>(vertices: usize, rng: &mut R) -> Result<Arc<RTree<S>>> {
    let edges: Vec<(String, String, S)> = (1..vertices.max(1))
        .map(|v| (format!("v{}", rng.gen_range(0..v)), format!("v{v}"), S::ratio(rng.gen_range(1..=8), 4)))
        .collect();
    Ok(Arc::new(RTree::new("v0", &edges)?))
}

/// Element with `terms` random integer coefficients in `-5..=5`.
pub fn random_element<S: Scalar, R: Rng>(space: &Arc<FiniteMetricSpace<S>>, terms: usize, rng: &mut R) -> FreeElement<S> {
    let mut mu = FreeElement::zero(space);
    for _ in 0..terms {
        mu.add_at(rng.gen_range(0..space.len()), S::from_i64(rng.gen_range(-5..=5)));
    }
    mu
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_produce_valid_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m: FiniteMetricSpace<Rational> = random_integer_metric(7, 9, &mut rng).unwrap();
        assert_eq!(m.len(), 7);
        let pts = random_points(6, 2, &mut rng);
        assert!(euclidean_space(&pts).is_ok());
        assert!(taxicab_space(&pts).is_ok());
        let t: Arc<RTree<Rational>> = random_tree(9, &mut rng).unwrap();
        assert_eq!(t.vertex_count(), 9);
    }
}
