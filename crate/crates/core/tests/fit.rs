//! Residual fitting on real and synthetic inputs, with expected degrees
//! recomputed outside the library.

use mcgraph::datasets::les_miserables;
use mcgraph::graph::{ring_of_cliques, Graph};
use mcgraph::models::{
    fit_residual, Dependency, EdgeProbabilityMatrix, FitOptions, PlantedModel, UnionModel,
};
use mcgraph::rng;

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Planted marginals from clique membership counted directly.
fn marginals_by_hand(model: &PlantedModel) -> Vec<Vec<f64>> {
    let n = model.input().node_count();
    let mut m = vec![vec![0i32; n]; n];
    for c in model.cliques().cliques() {
        for (a, &i) in c.iter().enumerate() {
            for &j in &c[a + 1..] {
                m[i][j] += 1;
                m[j][i] += 1;
            }
        }
    }
    m.iter()
        .map(|row| row.iter().map(|&k| 1.0 - (1.0 - model.p()).powi(k)).collect())
        .collect()
}

fn union_degrees_by_hand(planted: &[Vec<f64>], logits: &[f64]) -> Vec<f64> {
    let n = logits.len();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| 1.0 - (1.0 - planted[i][j]) * (1.0 - logistic(logits[i] + logits[j])))
                .sum()
        })
        .collect()
}

#[test]
fn les_miserables_fits_at_every_p() {
    let g = les_miserables();
    let target: Vec<f64> = g.degree_sequence().to_f64();
    for kind in Dependency::ALL {
        for &p in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            let planted = PlantedModel::new(g.clone(), p, kind).unwrap();
            let by_hand = marginals_by_hand(&planted);
            let lib = planted.planted_marginals();
            for i in 0..g.node_count() {
                for j in 0..g.node_count() {
                    if i != j {
                        assert!((lib.get(i, j) - by_hand[i][j]).abs() < 1e-12);
                    }
                }
            }
            let fit = fit_residual(&target, &lib, FitOptions::default()).unwrap();
            assert!(fit.converged, "{kind} p={p}: error {}", fit.final_error);
            assert!(fit.final_error <= 1e-8);
            assert!(fit.iterations <= 100);
            let degrees = union_degrees_by_hand(&by_hand, &fit.logits);
            let norm = degrees.iter().zip(&target).map(|(d, t)| (d - t).powi(2)).sum::<f64>().sqrt();
            assert!((norm - fit.final_error).abs() <= 1e-9);
            for (i, (d, t)) in degrees.iter().zip(&target).enumerate() {
                assert!((d - t).abs() <= 1e-6, "{kind} p={p} node {i}: {d} vs {t}");
            }
        }
    }
}

#[test]
fn newton_converges_quickly() {
    // only a correct Jacobian gives a handful of iterations
    let g = les_miserables();
    let planted = PlantedModel::new(g, 0.5, Dependency::EdgeIndependent).unwrap();
    let fit = UnionModel::fit(planted, FitOptions::default()).unwrap();
    assert!(fit.residual.iterations <= 20, "{}", fit.residual.iterations);
}

#[test]
fn pure_residual_matches_chung_lu_style_degrees() {
    // no planted graph: an odds-product model with the given degrees
    let target = vec![3.0, 2.0, 2.0, 1.0, 1.0, 1.0];
    let fit = fit_residual(&target, &EdgeProbabilityMatrix::zeros(6), FitOptions::default()).unwrap();
    assert!(fit.converged);
    let zeros = vec![vec![0.0; 6]; 6];
    let degrees = union_degrees_by_hand(&zeros, &fit.logits);
    for (d, t) in degrees.iter().zip(&target) {
        assert!((d - t).abs() < 1e-7);
    }
    // equal targets give equal logits
    assert!((fit.logits[1] - fit.logits[2]).abs() < 1e-9);
    assert!(fit.logits[0] > fit.logits[1] && fit.logits[1] > fit.logits[3]);
}

#[test]
fn union_samples_match_degrees_on_average() {
    let g = ring_of_cliques(4, 5).unwrap();
    let planted = PlantedModel::new(g.clone(), 0.4, Dependency::NodeIndependent).unwrap();
    let model = UnionModel::fit(planted, FitOptions::default()).unwrap();
    let n = g.node_count();
    let draws = 4000;
    let mut sum = vec![0.0; n];
    for i in 0..draws {
        let s = model.sample_union(&mut rng::stream(41, i));
        for (v, acc) in sum.iter_mut().enumerate() {
            *acc += s.degree(v) as f64;
        }
    }
    for v in 0..n {
        let mean = sum[v] / draws as f64;
        // degrees here are at most 5, so the sd of the mean is below 0.04
        assert!((mean - g.degree(v) as f64).abs() < 0.15, "node {v}: {mean}");
    }
}

#[test]
fn memorizes_at_p_one() {
    for g in [les_miserables(), ring_of_cliques(10, 10).unwrap()] {
        for kind in Dependency::ALL {
            let planted = PlantedModel::new(g.clone(), 1.0, kind).unwrap();
            let model = UnionModel::fit(planted, FitOptions::default()).unwrap();
            for seed in 0..20 {
                assert_eq!(model.sample_union(&mut rng::stream(seed, 0)), g);
            }
        }
    }
}

#[test]
fn rejects_bad_targets() {
    let planted = EdgeProbabilityMatrix::zeros(3);
    assert!(fit_residual(&[1.0, 1.0, 3.0], &planted, FitOptions::default()).is_err());
    assert!(fit_residual(&[1.0, 1.0], &planted, FitOptions::default()).is_err());
    assert!(fit_residual(&[1.0, -0.5, 1.0], &planted, FitOptions::default()).is_err());
}

#[test]
fn unreachable_targets_report_non_convergence() {
    // planted edges already exceed the target degree of node 0
    let g = Graph::complete(4);
    let planted = PlantedModel::new(g, 1.0, Dependency::FullyDependent).unwrap();
    let fit = fit_residual(&[1.0, 1.0, 1.0, 1.0], &planted.planted_marginals(), FitOptions::default())
        .unwrap();
    assert!(!fit.converged);
    assert!(fit.final_error > 1.0);
}
