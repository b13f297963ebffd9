//! Structural checks of the kernel tables.

use sln_core::kernels::{
    common_kernel, reflect, table_kernel, table_len, table_reps, table_terms, KernelSystem, ShiftChoice,
};

fn ks() -> Vec<f64> {
    (0..50).map(|i| -12.0 + 24.0 * i as f64 / 49.0 + 0.013).collect()
}

#[test]
fn first_difference_and_zero_limits() {
    for n in [4, 5] {
        for &k in &ks() {
            let d = table_kernel(n, 1, k).unwrap() - table_kernel(n, 0, k).unwrap();
            assert!((d - (-k / 2.0 - k.abs() / 2.0).exp()).abs() <= 1e-13);
        }
    }
    assert!((common_kernel(4, 1, 1, 0.0) + 0.25).abs() <= 1e-13);
    assert!((common_kernel(5, 1, 1, 0.0) + 0.2).abs() <= 1e-13);
    assert!((common_kernel(4, 1, 1, 1e-9) + 0.25).abs() <= 1e-8);
}

#[test]
fn entries_are_common_part_plus_exponentials() {
    for n in [4, 5] {
        for idx in 0..table_len(n).unwrap() {
            let (a, b) = table_reps(n, idx).unwrap();
            for &k in &ks() {
                let extra: f64 = table_terms(n, idx)
                    .unwrap()
                    .iter()
                    .map(|&(c, al, ga)| c as f64 * (al * k - ga * k.abs()).exp())
                    .sum();
                let d = table_kernel(n, idx, k).unwrap() - common_kernel(n, a, b, k);
                assert!((d - extra).abs() <= 1e-13);
            }
        }
    }
}

#[test]
fn hermitian_and_reflection_closure() {
    for n in [4, 5] {
        let s = KernelSystem::new(n, ShiftChoice::Bounded).unwrap();
        let d = s.dim();
        for &k in &ks() {
            let m = s.raw_matrix(k);
            let mm = s.raw_matrix(-k);
            for r in 0..d {
                for c in 0..d {
                    assert!((m[r * d + c] - mm[c * d + r]).abs() <= 1e-13);
                }
            }
            let twice = reflect(&s, &reflect(&s, &m));
            assert!(twice.iter().zip(&m).all(|(a, b)| (a - b).abs() <= 1e-13));
            assert!(reflect(&s, &m).iter().zip(&m).all(|(a, b)| (a - b).abs() <= 1e-13));
        }
    }
}

#[test]
fn constants_annihilate_uniform_shifts() {
    for n in [4, 5] {
        let s = KernelSystem::new(n, ShiftChoice::Bounded).unwrap();
        for row in s.constant_rows() {
            assert_eq!(row.iter().sum::<i32>(), 0);
        }
    }
}

#[test]
fn conjugated_matrix_stays_bounded() {
    for n in [4, 5] {
        let s = KernelSystem::new(n, ShiftChoice::Bounded).unwrap();
        for k in [-400.0, -60.0, 60.0, 400.0] {
            assert!(s.matrix(k).iter().all(|v| v.is_finite() && v.abs() < 10.0));
            assert!(s.driving(k).iter().all(|v| v.is_finite() && v.abs() < 10.0));
        }
    }
}
