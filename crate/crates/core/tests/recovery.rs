mod common;

use annulus::recovery::{highdim_thresholds, prune_and_split};
use annulus::*;

#[test]
fn conditional_common_neighbor_means() {
    let (same, diff) = common::conditional_mean_errors(20_000, 10.0, 2.0, 20, 20);
    assert!(same <= 0.05, "same-cluster worst bin error {same}");
    assert!(diff <= 0.05, "cross-cluster worst bin error {diff}");
}

#[test]
fn cross_edges_rarely_survive() {
    let frac = common::cross_edge_survival(20_000, 10.0, 2.0, 20);
    assert!(frac <= 0.01, "{frac}");
}

#[test]
fn permutation_invariance() {
    common::recovery_permutation_invariance(10, 7).unwrap();
}

#[test]
fn min_a_nondecreasing_in_b() {
    let bs = [0.01, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
    let mins: Vec<f64> = bs.iter().map(|&b| min_a_for_recovery(b).unwrap()).collect();
    assert!(mins.windows(2).all(|w| w[0] <= w[1]), "{mins:?}");
}

#[test]
fn upper_threshold_exceeds_lower() {
    for i in 1..=40 {
        let b = 0.25 * i as f64;
        for j in 0..20 {
            let a = 2.0 * b + 0.5 * j as f64;
            let th = compute_thresholds(a, b).unwrap();
            assert!(th.e_s > th.e_d, "a={a} b={b}: {} <= {}", th.e_s, th.e_d);
        }
    }
}

#[test]
fn keeping_every_edge_keeps_components() {
    let unit = connectivity_scale(3000, 1);
    for seed in 0..5 {
        let g = gen_gbm(3000, 6.0 * unit, 1.0 * unit, seed).unwrap().graph;
        let out = prune_and_split(&g, |_| true);
        assert_eq!(out.removed_edges, 0);
        assert_eq!(out.component_count, connected_components(&g).count);
    }
}

#[test]
fn recovery_improves_with_a() {
    let n = 6000;
    let unit = connectivity_scale(n, 1);
    let acc = |a: f64| -> f64 {
        (0..10)
            .map(|s| {
                let inst = gen_gbm(n, a * unit, unit, 500 + s).unwrap();
                recover_gbm_1d(&inst.graph, a, 1.0).unwrap().scored(inst.truth.as_ref().unwrap()).unwrap().accuracy.unwrap()
            })
            .sum::<f64>()
            / 10.0
    };
    assert!(acc(12.0) > acc(3.0));
}

#[test]
fn highdim_accuracy_trend() {
    let (n, t) = (10_000, 2);
    let unit = connectivity_scale(n, t);
    let rd = 2.0 * unit;
    let mean_accuracy = |gap: f64| -> f64 {
        (0..20)
            .map(|s| {
                let inst = gen_gbm_t(n, t, rd + gap, rd, 900 + s).unwrap();
                recover_gbm_highdim(&inst.graph, t, rd + gap, rd, 1.0, 1.0)
                    .unwrap()
                    .scored(inst.truth.as_ref().unwrap())
                    .unwrap()
                    .accuracy
                    .unwrap()
            })
            .sum::<f64>()
            / 20.0
    };
    let wide = mean_accuracy(2.0 * unit);
    let narrow = mean_accuracy(unit);
    assert!(wide >= narrow, "{wide} < {narrow}");
}

#[test]
fn highdim_thresholds_formula() {
    let (n, t, rs, rd) = (10_000usize, 2, 0.08, 0.05);
    let (e_s, e_d) = highdim_thresholds(n, t, rs, rd, 1.0, 1.0).unwrap();
    // On S^2 the cap of chord radius r has normalized area r²/4.
    let cap = rd * rd / 4.0;
    let nf = n as f64;
    let ln = nf.ln();
    assert!((e_s - (cap * nf + (6.0 * cap * nf * ln).sqrt())).abs() < 1e-9);
    let lens = lens_fraction(t, rs, rd, rd).unwrap();
    assert!((e_d - (nf * lens - (2.0 * nf * cap * ln).sqrt())).abs() < 1e-9);
}

#[test]
fn location_aware_recovery_above_threshold() {
    let n = 4000;
    let unit = connectivity_scale(n, 1);
    let exact = (0..10)
        .filter(|&s| {
            let inst = gen_gbm(n, 2.0 * unit, unit, 300 + s).unwrap();
            recover_with_locations(&inst, 2.0 * unit, unit).unwrap().scored(inst.truth.as_ref().unwrap()).unwrap().exact
                == Some(true)
        })
        .count();
    assert!(exact >= 8, "{exact}/10");
}
