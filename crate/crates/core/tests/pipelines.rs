use ellgw_core::correlator::{cumulant, expected_genus};
use ellgw_core::fock::{connected_correlator, disconnected_npoint};
use ellgw_core::graph::{bcov_connected_series, bcov_correlator, bcov_correlator_with, bcov_disconnected};
use ellgw_core::series::{euler_product, QSeries};
use ellgw_core::CorrelatorRequest;

/// Insertion multisets with at most three entries and even total at most 6.
fn suite() -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for a in 0..=6u32 {
        if a % 2 == 0 {
            out.push(vec![a]);
        }
        for b in 0..=a {
            if a + b <= 6 && (a + b) % 2 == 0 {
                out.push(vec![a, b]);
            }
            for c in 0..=b {
                if a + b + c <= 6 && (a + b + c) % 2 == 0 {
                    out.push(vec![a, b, c]);
                }
            }
        }
    }
    out
}

#[test]
fn pipelines_agree_on_the_suite() {
    let order = 10;
    let cases = suite();
    assert_eq!(cases.len(), 28);
    for ks in cases {
        let fock = connected_correlator(&CorrelatorRequest::new(ks.clone(), order)).unwrap();
        let graph = bcov_correlator(&ks, order).unwrap();
        let g = expected_genus(&ks).unwrap();
        assert!(graph.keys().all(|&k| k == g), "{ks:?}: support {:?}", graph.keys());
        let series = graph.get(&g).map(|r| r.series.clone()).unwrap_or_else(|| QSeries::zero(order));
        assert_eq!(fock.series, series, "{ks:?}");
        assert_eq!(fock.genus, Some(g));
    }
}

#[test]
fn odd_totals_vanish_in_both_pipelines() {
    for ks in [vec![1], vec![3], vec![2, 1], vec![1, 0, 0], vec![3, 1, 1]] {
        let fock = connected_correlator(&CorrelatorRequest::new(ks.clone(), 8)).unwrap();
        assert!(fock.series.is_zero(), "{ks:?}");
        assert!(bcov_correlator(&ks, 8).unwrap().is_empty(), "{ks:?}");
    }
}

#[test]
fn label_order_does_not_matter() {
    let order = 7;
    for ks in [vec![2, 0, 0], vec![3, 1, 0], vec![1, 2, 1]] {
        let base = bcov_connected_series(&ks, order, order).unwrap();
        let mut perm = ks.clone();
        perm.reverse();
        assert_eq!(bcov_connected_series(&perm, order, order).unwrap(), base, "{ks:?}");
        perm.rotate_left(1);
        assert_eq!(bcov_connected_series(&perm, order, order).unwrap(), base, "{ks:?}");
    }
}

#[test]
fn doubling_the_flow_bound_changes_nothing() {
    let order = 6;
    for ks in [vec![0, 0], vec![2, 2], vec![1, 1, 0], vec![2, 1, 1]] {
        let a = bcov_correlator_with(&ks, order, order).unwrap();
        let b = bcov_correlator_with(&ks, order, 2 * order).unwrap();
        assert_eq!(a, b, "{ks:?}");
    }
}

#[test]
fn a_too_small_flow_bound_is_detectable() {
    // with flows capped at 1 the q² coefficient of <τ0 τ0> is lost
    let exact = bcov_connected_series(&[0, 0], 4, 4).unwrap();
    let capped = bcov_connected_series(&[0, 0], 4, 1).unwrap();
    assert_ne!(exact, capped);
}

#[test]
fn graph_disconnected_sum_is_the_normalized_trace() {
    let order = 6;
    for ks in [vec![0, 0], vec![2, 0], vec![1, 1, 0], vec![0, 0, 0]] {
        let req = CorrelatorRequest::new(ks.clone(), order);
        let normalized = &disconnected_npoint(&req).unwrap() * &euler_product(order);
        assert_eq!(bcov_disconnected(&ks, order, order).unwrap(), normalized, "{ks:?}");
    }
}

#[test]
fn graph_connected_is_the_cumulant_of_graph_disconnected() {
    let order = 6;
    let ks = [2u32, 1, 1];
    let mut subsets = vec![QSeries::zero(order)];
    for mask in 1..8usize {
        let sub: Vec<u32> = (0..3).filter(|i| mask & (1 << i) != 0).map(|i| ks[i]).collect();
        subsets.push(bcov_disconnected(&sub, order, order).unwrap());
    }
    let connected = cumulant(3, &subsets).unwrap();
    assert_eq!(connected, bcov_connected_series(&ks, order, order).unwrap());
}
