//! Bethe equations in the dominant sector m_1 = … = m_{n-1} = N/2.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, CoreError, Result};
use crate::{linalg, RootData, C64};

const I: C64 = C64::new(0.0, 1.0);

/// Polynomial (cross-multiplied) form of the Bethe equation for a root r of
/// level j; vanishes exactly when λ_j/λ_{j+1} → -1 at r.
fn bae_poly(data: &RootData, j: usize, r: C64) -> Result<C64> {
    let w = |s: usize| (data.beta * data.mu[s - 1]).exp();
    Ok(w(j) * data.q(j - 1, r - I)? * data.q(j, r + I)? * data.q(j + 1, r)?
        + w(j + 1) * data.q(j - 1, r)? * data.q(j, r - I)? * data.q(j + 1, r + I)?)
}

/// max over roots of |λ_j/λ_{j+1} + 1|, the q_j(r) factors cancelled.
pub fn bae_residual(data: &RootData) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for j in 1..data.n {
        let w = (data.beta * (data.mu[j - 1] - data.mu[j])).exp();
        for &r in &data.roots[j - 1] {
            let num = data.q(j - 1, r - I)? * data.q(j, r + I)? * data.q(j + 1, r)?;
            let den = data.q(j - 1, r)? * data.q(j, r - I)? * data.q(j + 1, r + I)?;
            if den.norm() == 0.0 {
                return Err(CoreError::ZeroDenominator(alloc::format!("BAE ratio at level {j}")));
            }
            worst = worst.max((num / den * w + 1.0).norm());
        }
    }
    Ok(worst)
}

fn flatten(data: &RootData) -> Vec<C64> {
    data.roots.iter().flatten().copied().collect()
}

fn unflatten(data: &mut RootData, z: &[C64]) {
    let mut k = 0;
    for level in data.roots.iter_mut() {
        for r in level.iter_mut() {
            *r = z[k];
            k += 1;
        }
    }
}

fn residual_vector(data: &RootData) -> Result<Vec<C64>> {
    let mut out = Vec::new();
    for j in 1..data.n {
        for &r in &data.roots[j - 1] {
            out.push(bae_poly(data, j, r)?);
        }
    }
    Ok(out)
}

/// Newton iteration on the polynomial form; Jacobian by complex finite
/// differences (the equations are holomorphic in the roots).
fn newton(data: &mut RootData, max_iter: usize) -> Result<f64> {
    let mut z = flatten(data);
    let dim = z.len();
    let mut res = residual_vector(data)?;
    for _ in 0..max_iter {
        let norm = linalg::max_norm(&res);
        if norm < 1e-14 {
            break;
        }
        let mut jac = vec![C64::new(0.0, 0.0); dim * dim];
        for c in 0..dim {
            let h = 1e-7 * (1.0 + z[c].norm());
            let mut zp = z.clone();
            zp[c] += h;
            unflatten(data, &zp);
            let rp = residual_vector(data)?;
            for r in 0..dim {
                jac[r * dim + c] = (rp[r] - res[r]) / h;
            }
        }
        let mut step: Vec<C64> = res.iter().map(|v| -v).collect();
        linalg::solve(&mut jac, &mut step)?;
        // Damped update: halve until the residual does not grow.
        let mut t = 1.0;
        loop {
            let trial: Vec<C64> = z.iter().zip(&step).map(|(a, d)| a + d * t).collect();
            unflatten(data, &trial);
            let r = residual_vector(data)?;
            if linalg::max_norm(&r) <= norm || t < 1e-4 {
                z = trial;
                res = r;
                break;
            }
            t *= 0.5;
        }
    }
    unflatten(data, &z);
    Ok(linalg::max_norm(&res))
}

/// Dominant-sector roots for small even N.
///
/// At μ = 0 and N = 2 the roots are x_j = iτ(n - 2j)/n, one per level. For
/// larger N the same centres are split along the real axis. Nonzero μ is
/// reached by homotopy from μ = 0.
pub fn solve_bethe_roots(n: usize, trotter: usize, tau: f64, beta: f64, mu: &[f64]) -> Result<RootData> {
    if trotter == 0 || !trotter.is_multiple_of(2) {
        return Err(domain("Trotter number must be positive and even"));
    }
    let m = trotter / 2;
    let spreads: &[f64] = if m == 1 { &[0.0] } else { &[0.6, 0.9, 0.4, 1.3, 0.25] };
    let mut last = f64::INFINITY;
    for &spread in spreads {
        let roots = (1..n)
            .map(|j| {
                let centre = C64::new(0.0, tau * (n as f64 - 2.0 * j as f64) / n as f64);
                (0..m)
                    .map(|k| {
                        let off = spread * (k as f64 - (m as f64 - 1.0) / 2.0);
                        centre + C64::new(off, 1e-3 * j as f64 * if k % 2 == 0 { 1.0 } else { -1.0 } * spread)
                    })
                    .collect()
            })
            .collect();
        let mut data = RootData::new(n, trotter, tau, beta, vec![0.0; n], roots)?;
        let steps = if mu.iter().all(|&v| v == 0.0) { 1 } else { 10 };
        let mut ok = true;
        for s in 1..=steps {
            let t = s as f64 / steps as f64;
            data.mu = mu.iter().map(|v| v * t).collect();
            match newton(&mut data, 60) {
                Ok(r) if r.is_finite() => last = r,
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        if let Ok(r) = bae_residual(&data) {
            last = r;
            if r <= 1e-10 && distinct(&data) {
                return Ok(data);
            }
        }
    }
    Err(CoreError::NoConvergence { iterations: 60, residual: last })
}

fn distinct(data: &RootData) -> bool {
    data.roots.iter().all(|l| {
        l.iter().enumerate().all(|(i, a)| l[i + 1..].iter().all(|b| (a - b).norm() > 1e-8))
    })
}

/// Λ(x) of a Bethe state evaluated by averaging over a circle: with the
/// Bethe equations satisfied Λ is a polynomial, so this is exact even when
/// x sits on a root.
pub fn eigenvalue_on_circle(data: &RootData, x: C64, radius: f64, points: usize) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..points {
        let th = 2.0 * core::f64::consts::PI * (k as f64 + 0.5) / points as f64;
        acc += data.eigenvalue(x + C64::from_polar(radius, th))?;
    }
    Ok(acc / points as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_single_root_at_origin() {
        let d = solve_bethe_roots(2, 2, 0.4, 1.0, &[0.0, 0.0]).unwrap();
        assert!(d.roots[0][0].norm() < 1e-12);
    }

    #[test]
    fn closed_form_and_symmetry() {
        for n in [3, 4, 5] {
            let tau = 0.3;
            let d = solve_bethe_roots(n, 2, tau, 1.0, &vec![0.0; n]).unwrap();
            assert!(bae_residual(&d).unwrap() <= 1e-10);
            for j in 1..n {
                let want = C64::new(0.0, tau * (n as f64 - 2.0 * j as f64) / n as f64);
                assert!((d.roots[j - 1][0] - want).norm() < 1e-10);
                // Each level is invariant under x -> -conj(x); level n-j
                // carries the conjugated roots of level j.
                let r = d.roots[j - 1][0];
                assert!((-r.conj() - r).norm() < 1e-10);
                assert!((r.conj() - d.roots[n - j - 1][0]).norm() < 1e-10);
            }
            let lam = eigenvalue_on_circle(&d, C64::new(0.0, 0.0), 0.3, 64).unwrap();
            let want = n as f64 * (1.0 + tau * tau) + 2.0 * tau;
            assert!((lam - want).norm() < 1e-10, "n={n} {lam}");
        }
    }

    #[test]
    fn homotopy_in_mu() {
        let mu = [0.2, -0.1, 0.05, -0.15];
        let d = solve_bethe_roots(4, 2, 0.25, 1.0, &mu).unwrap();
        assert!(bae_residual(&d).unwrap() <= 1e-10);
    }
}
