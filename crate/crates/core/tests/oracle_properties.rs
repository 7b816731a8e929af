mod common;

use approx::assert_relative_eq;
use lapdiag::oracle::forest_weights;
use lapdiag::{exact_pseudoinverse_diag, forest_weight_diag, kirchhoff_exact, DensePseudoinverse};

use common::{connected_unlabeled, random_connected};

#[test]
fn enumeration_counts_match_known_sequence() {
    // connected graphs on n unlabeled nodes: 1, 1, 2, 6, 21, 112
    let counts: Vec<usize> = (1..=6).map(|n| connected_unlabeled(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
}

#[test]
fn forest_and_dense_oracles_agree_exhaustively() {
    for n in 2..=6 {
        for g in connected_unlabeled(n) {
            let dense = exact_pseudoinverse_diag(&g).unwrap();
            let forest = forest_weight_diag(&g).unwrap();
            for (a, b) in dense.iter().zip(&forest) {
                assert!((a - b).abs() < 1e-9, "n={n} edges={:?}", g.edges());
            }
        }
    }
}

#[test]
fn forest_and_dense_oracles_agree_on_weighted_graphs() {
    for seed in 0..10 {
        let n = 5 + (seed as usize % 4);
        let g = random_connected(n, 16 - (n - 1), 0.5, 2.0, seed);
        assert!(g.edge_count() <= 16);
        let dense = exact_pseudoinverse_diag(&g).unwrap();
        let forest = forest_weight_diag(&g).unwrap();
        for (a, b) in dense.iter().zip(&forest) {
            assert!((a - b).abs() < 1e-9, "seed={seed}");
        }
    }
}

#[test]
fn one_tree_weight_is_n_times_spanning_tree_count() {
    // K4 has 16 spanning trees
    let g = connected_unlabeled(4)
        .into_iter()
        .find(|g| g.edge_count() == 6)
        .unwrap();
    assert_eq!(forest_weights(&g).unwrap().one_tree, 64.0);
}

#[test]
fn resistance_is_a_metric_on_small_graphs() {
    for n in 2..=6 {
        for g in connected_unlabeled(n) {
            let p = DensePseudoinverse::new(&g).unwrap();
            for a in 0..n {
                assert_eq!(p.resistance(a, a), 0.0);
                for b in 0..n {
                    assert!((p.resistance(a, b) - p.resistance(b, a)).abs() < 1e-10);
                    if a != b {
                        assert!(p.resistance(a, b) > 0.0);
                    }
                    for c in 0..n {
                        assert!(
                            p.resistance(a, c) <= p.resistance(a, b) + p.resistance(b, c) + 1e-10
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn dense_identities_on_random_graphs() {
    for seed in 0..20 {
        let n = 20 + 9 * seed as usize;
        let g = random_connected(n, 2 * n, 0.5, 2.0, 100 + seed);
        let p = DensePseudoinverse::new(&g).unwrap();
        let tr: f64 = p.diag().iter().sum();
        assert_relative_eq!(tr, kirchhoff_exact(&g).unwrap() / n as f64, max_relative = 1e-10);
        for s in p.row_sums() {
            assert!(s.abs() < 1e-10);
        }
        assert!((p.foster_sum(&g) - (n as f64 - 1.0)).abs() < 1e-8);
        // R_u from the identity equals the summed pair resistances
        let u = seed as usize % n;
        let summed: f64 = (0..n).map(|v| p.resistance(u, v)).sum();
        assert_relative_eq!(p.node_resistance(u), summed, max_relative = 1e-10);
        // Kirchhoff index is half the summed node resistances
        let half: f64 = (0..n).map(|v| p.node_resistance(v)).sum::<f64>() / 2.0;
        assert_relative_eq!(p.kirchhoff(), half, max_relative = 1e-10);
    }
}

#[test]
fn trees_have_resistance_equal_to_path_length() {
    let g = random_connected(30, 0, 1.0, 1.0, 7);
    let p = DensePseudoinverse::new(&g).unwrap();
    for e in g.edges() {
        assert!((p.resistance(e.u, e.v) - 1.0).abs() < 1e-10);
    }
    assert!((p.foster_sum(&g) - 29.0).abs() < 1e-10);
}
