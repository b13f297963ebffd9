//! Adjacency matrices against the tabulated sl(4) forms, and pole
//! cancellation of every range-column partial sum with solved Bethe roots.

use sln_core::bethe::{bae_residual, solve_bethe_roots};
use sln_core::spectral::{adjacency_matrix, eaf_factorization, polynomial_defect, range_subsets, residue_check};
use sln_core::{rel_residual, C64};

#[test]
fn sl4_matrices_match_golden_files() {
    let golden = [
        include_str!("golden/adjacency_4_1.txt"),
        include_str!("golden/adjacency_4_2.txt"),
        include_str!("golden/adjacency_4_3.txt"),
    ];
    for (a, want) in (1..4).zip(golden) {
        assert_eq!(adjacency_matrix(4, a).unwrap().to_text(), want, "a = {a}");
    }
}

#[test]
fn json_export_has_edge_fields() {
    let m = adjacency_matrix(4, 2).unwrap();
    let text = serde_json::to_string(&m).unwrap();
    let back: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(back["vertices"].as_array().unwrap().len(), 6);
    let e = &back["edges"][0];
    assert_eq!((e["i"].as_u64(), e["j"].as_u64(), e["level"].as_u64(), e["shift"].as_f64()), (Some(0), Some(1), Some(2), Some(0.5)));
}

#[test]
fn range_partial_sums_are_polynomials() {
    for n in 2..=5 {
        let data = solve_bethe_roots(n, 2, 0.5, 1.0, &vec![0.0; n]).unwrap();
        assert!(bae_residual(&data).unwrap() <= 1e-10);
        for a in 1..n {
            for s in range_subsets(n, a).unwrap() {
                let f = eaf_factorization(n, a, &s).unwrap();
                let res = residue_check(&f, &data, 0.05, 64).unwrap();
                assert!(res <= 1e-9, "n={n} a={a} {s:?}: residue {res}");
                let defect = polynomial_defect(&f, &data, 3.0, 128).unwrap();
                assert!(defect <= 1e-9, "n={n} a={a} {s:?}: defect {defect}");
                // The factorization reconstructs the plain sum.
                for k in 0..10 {
                    let x = C64::new(-1.7 + 0.37 * k as f64, 0.31);
                    let p = f.eval_p(&data, x).unwrap();
                    let mut back = p;
                    for (z, m) in &f.common_zeros {
                        back *= z.eval(&data, x).unwrap().powu(*m);
                    }
                    for q in &f.unremoved_poles {
                        back /= q.eval(&data, x).unwrap();
                    }
                    assert!(rel_residual(f.eval_sum(&data, x).unwrap(), back) <= 1e-10);
                }
            }
        }
    }
}

#[test]
fn perturbed_roots_leave_residues() {
    let data = solve_bethe_roots(4, 2, 0.5, 1.0, &[0.0; 4]).unwrap().scaled_roots(1.01);
    for a in 1..=2 {
        let worst = range_subsets(4, a)
            .unwrap()
            .iter()
            .map(|s| residue_check(&eaf_factorization(4, a, s).unwrap(), &data, 0.05, 64).unwrap())
            .fold(0.0, f64::max);
        assert!(worst > 1e-4, "a={a}: {worst}");
    }
}
