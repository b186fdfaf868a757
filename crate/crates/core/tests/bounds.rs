use mcgraph::bounds::{kcycle_bound, triangle_bound, verify_bound};
use mcgraph::models::{ActiveNodes, CompleteOrEmpty, Dependency, Gnp};

use Dependency::*;

#[test]
fn each_model_meets_its_own_level() {
    let n = 20;
    for &p in &[0.2, 0.5] {
        for k in [3, 4] {
            let ei = verify_bound(&Gnp::new(n, p).unwrap(), EdgeIndependent, k, 2000, 1).unwrap();
            let ni = verify_bound(&ActiveNodes::new(n, p).unwrap(), NodeIndependent, k, 2000, 2).unwrap();
            let fd = verify_bound(&CompleteOrEmpty::new(n, p).unwrap(), FullyDependent, k, 2000, 3).unwrap();
            for check in [&ei, &ni, &fd] {
                assert_eq!(check.passed, Some(true), "{check:?}");
                assert!(check.tightness.unwrap() > 0.1);
            }
        }
    }
}

#[test]
fn stronger_dependence_breaks_weaker_bounds() {
    let n = 30;
    let an = ActiveNodes::new(n, 0.25).unwrap();
    assert_eq!(verify_bound(&an, EdgeIndependent, 3, 2000, 4).unwrap().passed, Some(false));
    let ce = CompleteOrEmpty::new(n, 0.25).unwrap();
    assert_eq!(verify_bound(&ce, NodeIndependent, 3, 2000, 5).unwrap().passed, Some(false));
    assert_eq!(verify_bound(&ce, EdgeIndependent, 4, 2000, 6).unwrap().passed, Some(false));
}

#[test]
fn known_values() {
    assert!((triangle_bound(EdgeIndependent, 100, 0.1) - 1000.0 / 6.0).abs() < 1e-9);
    assert!((kcycle_bound(EdgeIndependent, 10, 4, 0.5).unwrap() - 78.125).abs() < 1e-9);
    assert!((kcycle_bound(FullyDependent, 10, 4, 0.5).unwrap() - 2500.0).abs() < 1e-9);
    assert!((kcycle_bound(NodeIndependent, 10, 4, 0.25).unwrap() - 78.125).abs() < 1e-9);
}

#[test]
fn empty_model_has_no_verdict() {
    let check = verify_bound(&Gnp::new(10, 0.0).unwrap(), EdgeIndependent, 3, 10, 0).unwrap();
    assert_eq!(check.bound, None);
    assert_eq!(check.passed, None);
    assert!(verify_bound(&Gnp::new(10, 0.5).unwrap(), EdgeIndependent, 3, 1, 0).is_err());
    assert!(verify_bound(&Gnp::new(10, 0.5).unwrap(), EdgeIndependent, 2, 10, 0).is_err());
}

#[test]
fn odd_sample_counts_use_every_sample() {
    let check = verify_bound(&Gnp::new(12, 0.5).unwrap(), EdgeIndependent, 3, 101, 8).unwrap();
    assert_eq!(check.samples, 101);
    assert_eq!(check.overlap.pairs_used, 50);
}
