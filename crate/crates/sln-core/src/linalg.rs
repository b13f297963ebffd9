//! Dense complex linear solve for the small systems of the Bethe solver.

use crate::error::{domain, Result};
use crate::C64;

/// Solves `A x = b` in place by Gaussian elimination with partial pivoting.
/// `a` is row-major `n × n`; on return `b` holds the solution.
pub fn solve(a: &mut [C64], b: &mut [C64]) -> Result<()> {
    let n = b.len();
    if a.len() != n * n {
        return Err(domain("matrix and right-hand side sizes differ"));
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))
            .unwrap_or(col);
        if a[piv * n + col].norm() == 0.0 {
            return Err(domain("singular matrix"));
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            b.swap(piv, col);
        }
        let d = a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] / d;
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for k in col..n {
                let v = a[col * n + k];
                a[row * n + k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row * n + k] * b[k];
        }
        b[row] = s / a[row * n + row];
    }
    Ok(())
}

/// Max-norm of a complex vector.
pub fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}


#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn solves_small_system() {
        let c = |r: f64, i: f64| C64::new(r, i);
        let mut a = vec![c(0.0, 1.0), c(2.0, 0.0), c(1.0, -1.0), c(3.0, 0.5)];
        let x = [c(0.3, -0.2), c(-1.0, 0.7)];
        let mut b = vec![a[0] * x[0] + a[1] * x[1], a[2] * x[0] + a[3] * x[1]];
        solve(&mut a, &mut b).unwrap();
        assert!((b[0] - x[0]).norm() < 1e-14 && (b[1] - x[1]).norm() < 1e-14);
    }
}
