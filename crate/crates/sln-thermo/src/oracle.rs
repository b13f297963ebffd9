//! Brute-force oracles: exact diagonalization of the permutation chain,
//! the finite-Trotter quantum transfer matrix, Yang-Baxter and transfer
//! matrix commutation residuals, and the spin-2 polynomial identity.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sln_core::bethe::{eigenvalue_on_circle, solve_bethe_roots};

use crate::error::{Result, ThermoError};

/// Cap on n^L (or n^N) for every oracle.
pub const DIM_CAP: usize = 200_000;
/// Cap on the dimension of a fully dense operator.
pub const DENSE_CAP: usize = 4096;

fn checked_dim(n: usize, sites: usize, cap: usize) -> Result<usize> {
    let dim = (n as u128).checked_pow(sites as u32).unwrap_or(u128::MAX);
    if dim > cap as u128 {
        return Err(ThermoError::Dimension { dim: dim.min(usize::MAX as u128) as usize, cap });
    }
    Ok(dim as usize)
}

/// Digits of a basis index, site 0 most significant.
fn digits(mut s: usize, n: usize, sites: usize) -> Vec<usize> {
    let mut d = vec![0; sites];
    for i in (0..sites).rev() {
        d[i] = s % n;
        s /= n;
    }
    d
}

fn index(d: &[usize], n: usize) -> usize {
    d.iter().fold(0, |acc, &v| acc * n + v)
}

/// Dense real operator on `sites` copies of C^n.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    pub n: usize,
    pub sites: usize,
    pub matrix: DMatrix<f64>,
}

impl DenseOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut e: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }
}

fn bonds(sites: usize, periodic: bool) -> Vec<(usize, usize)> {
    let mut b: Vec<(usize, usize)> = (0..sites.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    if periodic && sites > 2 {
        b.push((sites - 1, 0));
    }
    b
}

/// `H = Σ P_{i,i+1}`; the wrap bond is added for periodic chains with L > 2.
pub fn build_hamiltonian(n: usize, sites: usize, periodic: bool) -> Result<DenseOperator> {
    let dim = checked_dim(n, sites, DENSE_CAP)?;
    let mut m = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let d = digits(s, n, sites);
        for &(i, j) in &bonds(sites, periodic) {
            let mut e = d.clone();
            e.swap(i, j);
            m[(index(&e, n), s)] += 1.0;
        }
    }
    Ok(DenseOperator { n, sites, matrix: m })
}

/// Distinct orderings of a count vector.
fn permutations_of(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut c = counts.to_vec();
    c.sort_unstable();
    let mut out = vec![c.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (0..c.len().saturating_sub(1)).rev().find(|&i| c[i] < c[i + 1]) else { break };
        let j = (i + 1..c.len()).rev().find(|&j| c[j] > c[i]).unwrap();
        c.swap(i, j);
        c[i + 1..].reverse();
        out.push(c.clone());
    }
    out
}

/// Count vectors (descending) of L particles over n species.
fn partitions(total: usize, parts: usize, max: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=max.min(total)).rev() {
        for mut rest in partitions(total - first, parts - 1, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Spectrum of `Σ P` restricted to the sector with the given species counts.
fn sector_spectrum(n: usize, sites: usize, periodic: bool, counts: &[usize]) -> Vec<f64> {
    let mut states = Vec::new();
    let mut d = Vec::with_capacity(sites);
    fn rec(n: usize, left: &mut Vec<usize>, d: &mut Vec<usize>, sites: usize, out: &mut Vec<usize>) {
        if d.len() == sites {
            out.push(index(d, n));
            return;
        }
        for s in 0..n {
            if left[s] > 0 {
                left[s] -= 1;
                d.push(s);
                rec(n, left, d, sites, out);
                d.pop();
                left[s] += 1;
            }
        }
    }
    rec(n, &mut counts.to_vec(), &mut d, sites, &mut states);
    let pos: BTreeMap<usize, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let dim = states.len();
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for (col, &s) in states.iter().enumerate() {
        let d = digits(s, n, sites);
        for &(i, j) in &bonds(sites, periodic) {
            let mut e = d.clone();
            e.swap(i, j);
            m[(pos[&index(&e, n)], col)] += 1.0;
        }
    }
    SymmetricEigen::new(m).eigenvalues.iter().copied().collect()
}

/// `f_L = -(T/L) log tr exp(-β(J H - Σ μ_j N_j))`, block by block in the
/// species-count sectors.
pub fn finite_free_energy(n: usize, sites: usize, periodic: bool, t: f64, j: f64, mu: &[f64]) -> Result<f64> {
    checked_dim(n, sites, DIM_CAP)?;
    if mu.len() != n {
        return Err(ThermoError::Config(format!("need {n} chemical potentials")));
    }
    let beta = 1.0 / t;
    let mut exps = Vec::new();
    for counts in partitions(sites, n, sites) {
        let spec = sector_spectrum(n, sites, periodic, &counts);
        for perm in permutations_of(&counts) {
            let w: f64 = perm.iter().zip(mu).map(|(&c, &m)| beta * m * c as f64).sum();
            exps.extend(spec.iter().map(|e| w - beta * j * e));
        }
    }
    let top = exps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let log_z = top + exps.iter().map(|e| (e - top).exp()).sum::<f64>().ln();
    Ok(-t / sites as f64 * log_z)
}

/// Finite-Trotter quantum transfer matrix at spectral parameter x.
///
/// Odd columns carry `(-τ + ix) δ_{a'a} δ_{qq'} + δ_{a'q'} δ_{aq}`, even
/// columns `(-τ - ix) δ_{a'a} δ_{qq'} + δ_{a'q} δ_{aq'}`; the auxiliary
/// trace is twisted by `diag(e^{βμ})`. Its eigenvalues at x = 0 are those
/// of the Bethe data with `τ_data = -τ`.
#[derive(Debug, Clone)]
pub struct Qtm {
    pub n: usize,
    pub trotter: usize,
    pub tau: f64,
    pub x: C64,
    pub twist: Vec<f64>,
    dim: usize,
}

impl Qtm {
    pub fn new(n: usize, trotter: usize, tau: f64, x: C64, beta_mu: &[f64]) -> Result<Self> {
        if trotter == 0 || !trotter.is_multiple_of(2) {
            return Err(ThermoError::Config("Trotter number must be even and positive".into()));
        }
        if beta_mu.len() != n {
            return Err(ThermoError::Config(format!("need {n} chemical potentials")));
        }
        let dim = checked_dim(n, trotter, DIM_CAP)?;
        Ok(Self { n, trotter, tau, x, twist: beta_mu.iter().map(|v| v.exp()).collect(), dim })
    }

    /// Physical operator at temperature T: `τ = βJ/N`.
    pub fn physical(n: usize, trotter: usize, t: f64, j: f64, mu: &[f64]) -> Result<Self> {
        let beta = 1.0 / t;
        let bmu: Vec<f64> = mu.iter().map(|m| beta * m).collect();
        Self::new(n, trotter, beta * j / trotter as f64, C64::new(0.0, 0.0), &bmu)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix-free product, `O(N n² n^N)`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.n;
        let nn = self.trotter;
        let dim = self.dim;
        let odd = C64::new(-self.tau, 0.0) + C64::new(0.0, 1.0) * self.x;
        let even = C64::new(-self.tau, 0.0) - C64::new(0.0, 1.0) * self.x;
        let mut out = vec![C64::new(0.0, 0.0); dim];
        // x[q * dim + s]: auxiliary state q, quantum digits s
        let mut x = vec![C64::new(0.0, 0.0); n * dim];
        let mut y = vec![C64::new(0.0, 0.0); n * dim];
        for q1 in 0..n {
            x.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            x[q1 * dim..(q1 + 1) * dim].copy_from_slice(v);
            for site in 0..nn {
                let stride = n.pow((nn - 1 - site) as u32);
                let diag = if site % 2 == 0 { odd } else { even };
                for (yv, xv) in y.iter_mut().zip(&x) {
                    *yv = diag * xv;
                }
                for s in 0..dim {
                    let d = (s / stride) % n;
                    let base = s - d * stride;
                    if site % 2 == 0 {
                        // a' = q', a = q: y[q'][a'=q'] += Σ_q x[q][a=q]
                        if d != 0 {
                            continue;
                        }
                        let sum: C64 = (0..n).map(|q| x[q * dim + base + q * stride]).sum();
                        for qp in 0..n {
                            y[qp * dim + base + qp * stride] += sum;
                        }
                    } else {
                        // a' = q, a = q': y[q'][a'] += x[a'][a=q']
                        for qp in 0..n {
                            y[qp * dim + s] += x[d * dim + base + qp * stride];
                        }
                    }
                }
                std::mem::swap(&mut x, &mut y);
            }
            let w = self.twist[q1];
            for (o, xv) in out.iter_mut().zip(&x[q1 * dim..(q1 + 1) * dim]) {
                *o += w * xv;
            }
        }
        out
    }

    pub fn dense(&self) -> Result<DMatrix<C64>> {
        checked_dim(self.n, self.trotter, DENSE_CAP)?;
        let mut m = DMatrix::zeros(self.dim, self.dim);
        let mut e = vec![C64::new(0.0, 0.0); self.dim];
        for c in 0..self.dim {
            e[c] = C64::new(1.0, 0.0);
            for (r, v) in self.apply(&e).into_iter().enumerate() {
                m[(r, c)] = v;
            }
            e[c] = C64::new(0.0, 0.0);
        }
        Ok(m)
    }

    /// Dominant eigenvalue by shifted power iteration from the uniform vector.
    pub fn dominant(&self, tol: f64, shift: f64, max_iter: usize) -> Result<PowerResult> {
        power_iteration(|v| self.apply(v), self.dim, tol, shift, max_iter)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerResult {
    pub re: f64,
    pub im: f64,
    pub iterations: usize,
    /// `1 - |λ₂/λ₁|` estimated from the contraction rate.
    pub gap: f64,
}

impl PowerResult {
    pub fn value(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}

/// Power iteration on `A + s`, returning the eigenvalue of `A`.
pub fn power_iteration(
    apply: impl Fn(&[C64]) -> Vec<C64>,
    dim: usize,
    tol: f64,
    shift: f64,
    max_iter: usize,
) -> Result<PowerResult> {
    let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut v = vec![C64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
    let mut lam = C64::new(0.0, 0.0);
    let mut deltas: Vec<f64> = Vec::new();
    for it in 1..=max_iter {
        let mut w = apply(&v);
        let new: C64 = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi += vi * shift;
        }
        let nw = norm(&w);
        if !(nw.is_finite() && nw > 0.0) {
            return Err(ThermoError::NotFinite { iteration: it });
        }
        w.iter_mut().for_each(|z| *z /= nw);
        let delta = (new - lam).norm();
        lam = new;
        v = w;
        deltas.push(delta);
        if it > 3 && delta <= tol * lam.norm() && deltas[it - 2] <= 10.0 * tol * lam.norm() {
            return Ok(PowerResult { re: lam.re, im: lam.im, iterations: it, gap: gap_estimate(&deltas) });
        }
    }
    Err(ThermoError::NoConvergence { iterations: max_iter, residual: gap_estimate(&deltas) })
}

fn gap_estimate(deltas: &[f64]) -> f64 {
    let k = deltas.len();
    if k < 6 {
        return f64::NAN;
    }
    let rate = (deltas[k - 1] / deltas[k - 5]).powf(0.25).sqrt();
    1.0 - rate
}

/// QTM report for one temperature.
#[derive(Debug, Clone, Serialize)]
pub struct QtmReport {
    pub n: usize,
    pub trotter: usize,
    pub temperature: f64,
    pub tau: f64,
    pub lambda: f64,
    /// `Λ / (1 - τ²)^{N/2}`, the Trotter-consistent normalization.
    pub lambda_normalized: f64,
    /// `-T log` of the normalized eigenvalue.
    pub free_energy: f64,
    pub iterations: usize,
}

pub fn qtm_eigenvalue(n: usize, trotter: usize, t: f64, j: f64, mu: &[f64]) -> Result<QtmReport> {
    let q = Qtm::physical(n, trotter, t, j, mu)?;
    let p = q.dominant(1e-13, 0.0, 20_000)?;
    let tau = q.tau;
    let normalized = p.re / (1.0 - tau * tau).powi((trotter / 2) as i32);
    Ok(QtmReport {
        n,
        trotter,
        temperature: t,
        tau,
        lambda: p.re,
        lambda_normalized: normalized,
        free_energy: -t * normalized.ln(),
        iterations: p.iterations,
    })
}

/// Relative |Λ_QTM(0) - Λ_BA(0)| at N = 2: QTM with τ against Bethe data
/// with -τ, same twist.
pub fn bethe_cross_check(n: usize, tau: f64, beta: f64, mu: &[f64]) -> Result<f64> {
    let bmu: Vec<f64> = mu.iter().map(|m| beta * m).collect();
    let q = Qtm::new(n, 2, tau, C64::new(0.0, 0.0), &bmu)?;
    let top = q.dominant(1e-14, 0.0, 20_000)?.value();
    let data = solve_bethe_roots(n, 2, -tau, beta, mu)?;
    let ba = eigenvalue_on_circle(&data, C64::new(0.0, 0.0), 0.3, 256)?;
    Ok((top - ba).norm() / ba.norm())
}

/// `Λ/(1-τ²)^{N/2}`-normalized free energies for a list of Trotter numbers,
/// with the log-log slope of the error against a reference and the N → ∞
/// value from a fit in powers of N^{-2} through the last (up to) three.
#[derive(Debug, Clone, Serialize)]
pub struct TrotterStudy {
    pub trotter: Vec<usize>,
    pub free_energy: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
    pub extrapolated: f64,
}

pub fn trotter_study(n: usize, t: f64, j: f64, mu: &[f64], trotter: &[usize], reference: f64) -> Result<TrotterStudy> {
    let free_energy = trotter
        .iter()
        .map(|&nn| Ok(qtm_eigenvalue(n, nn, t, j, mu)?.free_energy))
        .collect::<Result<Vec<f64>>>()?;
    let errors: Vec<f64> = free_energy.iter().map(|f| (f - reference).abs()).collect();
    let xs: Vec<f64> = trotter.iter().map(|&v| (v as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let m = trotter.len();
    let k = m.min(3);
    let a = DMatrix::from_fn(k, k, |r, c| (trotter[m - k + r] as f64).powi(-2 * c as i32));
    let b = nalgebra::DVector::from_fn(k, |r, _| free_energy[m - k + r]);
    let extrapolated = a
        .lu()
        .solve(&b)
        .map(|c| c[0])
        .ok_or_else(|| ThermoError::Config("repeated Trotter numbers".into()))?;
    Ok(TrotterStudy { trotter: trotter.to_vec(), free_energy, errors, slope, extrapolated })
}

fn swap_matrix(n: usize, scale: f64) -> DMatrix<f64> {
    let mut p = DMatrix::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            p[(b * n + a, a * n + b)] = scale;
        }
    }
    p
}

/// Embed a two-site operator acting on tensor factors (i, j) of `(C^n)^{⊗3}`.
fn embed3(op: &DMatrix<f64>, n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let dim = n * n * n;
    let mut out = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let d = digits(s, n, 3);
        for r in 0..n * n {
            let (ri, rj) = (r / n, r % n);
            let v = op[(r, d[i] * n + d[j])];
            if v != 0.0 {
                let mut e = d.clone();
                e[i] = ri;
                e[j] = rj;
                out[(index(&e, n), s)] += v;
            }
        }
    }
    out
}

/// Max-norm residual of `L12(λ-μ) L13(λ-ν) L23(μ-ν) = L23 L13 L12` with
/// `L(u) = u + P`, over `draws` random triples. `perturb` scales P by
/// that factor in the L13 factor only.
pub fn ybe_residual(n: usize, draws: usize, seed: u64, perturb: f64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = DMatrix::<f64>::identity(n * n, n * n);
    let p = swap_matrix(n, 1.0);
    let pp = swap_matrix(n, perturb);
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let (l, m, v): (f64, f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let l12 = embed3(&(&id * (l - m) + &p), n, 0, 1);
        let l13 = embed3(&(&id * (l - v) + &pp), n, 0, 2);
        let l23 = embed3(&(&id * (m - v) + &p), n, 1, 2);
        let lhs = &l12 * &l13 * &l23;
        let rhs = &l23 * &l13 * &l12;
        worst = worst.max((lhs - rhs).amax());
    }
    worst
}

/// Dense row-to-row transfer matrix `tr_a Π_j (λ + P_{aj})` on L sites.
pub fn row_transfer_matrix(n: usize, sites: usize, lambda: f64) -> Result<DMatrix<f64>> {
    let dim = checked_dim(n, sites, DENSE_CAP)?;
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let d = digits(col, n, sites);
        // per starting auxiliary state: (aux, digits) -> weight
        let mut paths: Vec<BTreeMap<(usize, Vec<usize>), f64>> = (0..n)
            .map(|a| {
                let mut b = BTreeMap::new();
                b.insert((a, d.clone()), 1.0);
                b
            })
            .collect();
        for site in 0..sites {
            for p in paths.iter_mut() {
                let mut next = BTreeMap::new();
                for ((a, ds), w) in p.iter() {
                    *next.entry((*a, ds.clone())).or_insert(0.0) += lambda * w;
                    let mut e = ds.clone();
                    let b = e[site];
                    e[site] = *a;
                    *next.entry((b, e)).or_insert(0.0) += *w;
                }
                *p = next;
            }
        }
        for (a, p) in paths.iter().enumerate() {
            for ((b, ds), w) in p {
                if *b == a {
                    m[(index(ds, n), col)] += w;
                }
            }
        }
    }
    Ok(m)
}

/// `max|[A, B]| / max|AB|`.
pub fn commutator_residual<T: nalgebra::ComplexField<RealField = f64> + Copy>(a: &DMatrix<T>, b: &DMatrix<T>) -> f64 {
    let ab = a * b;
    let ba = b * a;
    let scale = ab.iter().map(|z| z.modulus()).fold(0.0, f64::max).max(1e-300);
    (ab - ba).iter().map(|z| z.modulus()).fold(0.0, f64::max) / scale
}

/// Row-to-row commutation at L sites for random real spectral parameters.
pub fn row_commutation_residual(n: usize, sites: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (l, m) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    Ok(commutator_residual(&row_transfer_matrix(n, sites, l)?, &row_transfer_matrix(n, sites, m)?))
}

/// QTM commutation at N = 2 for random real spectral parameters.
pub fn qtm_commutation_residual(n: usize, tau: f64, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bmu: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let (x, y) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let a = Qtm::new(n, 2, tau, C64::new(x, 0.0), &bmu)?.dense()?;
    let b = Qtm::new(n, 2, tau, C64::new(y, 0.0), &bmu)?.dense()?;
    Ok(commutator_residual(&a, &b))
}

/// Coefficients of `X, X², X³, X⁴` in the spin-2 polynomial.
pub const SPIN2_COEFFS: [f64; 4] = [-5.0 / 2.0, -13.0 / 36.0, 1.0 / 6.0, 1.0 / 36.0];

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Spin2Report {
    /// `max|P - poly - c Id|`.
    pub residual: f64,
    /// Fitted c = tr(P - poly)/25.
    pub constant: f64,
}

/// Two-site `S·S` for spin 2, `SzSz + (S+S- + S-S+)/2`.
pub fn spin2_exchange() -> DMatrix<f64> {
    let ms = [2.0, 1.0, 0.0, -1.0, -2.0];
    let s = 2.0f64;
    let mut sz = DMatrix::zeros(5, 5);
    let mut sp = DMatrix::zeros(5, 5);
    for (i, &m) in ms.iter().enumerate() {
        sz[(i, i)] = m;
        if i > 0 {
            sp[(i - 1, i)] = (s * (s + 1.0) - m * (m + 1.0)).sqrt();
        }
    }
    let sm = sp.transpose();
    let kron = |a: &DMatrix<f64>, b: &DMatrix<f64>| a.kronecker(b);
    kron(&sz, &sz) + (kron(&sp, &sm) + kron(&sm, &sp)) * 0.5
}

pub fn spin2_identity(coeffs: [f64; 4]) -> Spin2Report {
    let x = spin2_exchange();
    let mut poly = DMatrix::zeros(25, 25);
    let mut pow = DMatrix::identity(25, 25);
    for c in coeffs {
        pow = &pow * &x;
        poly += &pow * c;
    }
    let diff = swap_matrix(5, 1.0) - poly;
    let constant = diff.trace() / 25.0;
    let residual = (diff - DMatrix::identity(25, 25) * constant).amax();
    Spin2Report { residual, constant }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_spectrum() {
        for n in 2..=5 {
            let h = build_hamiltonian(n, 2, true).unwrap();
            let e = h.eigenvalues();
            let minus = e.iter().filter(|v| (**v + 1.0).abs() < 1e-12).count();
            let plus = e.iter().filter(|v| (**v - 1.0).abs() < 1e-12).count();
            assert_eq!((minus, plus), (n * (n - 1) / 2, n * (n + 1) / 2));
            assert!((&h.matrix * &h.matrix - DMatrix::identity(n * n, n * n)).amax() < 1e-15);
        }
    }

    #[test]
    fn two_site_partition_function() {
        let (t, beta) = (0.7f64, 1.0f64 / 0.7);
        let want = -t / 2.0 * (15.0 * (-beta).exp() + 10.0 * beta.exp()).ln();
        let f = finite_free_energy(5, 2, true, t, 1.0, &[0.0; 5]).unwrap();
        assert!((f - want).abs() < 1e-13);
    }

    #[test]
    fn sectors_match_dense_trace() {
        let (n, l, t) = (3, 5, 0.8);
        let mu = [0.3, -0.1, 0.05];
        let h = build_hamiltonian(n, l, true).unwrap();
        let e = h.eigenvalues();
        let f = finite_free_energy(n, l, true, t, 1.0, &[0.0; 3]).unwrap();
        let top = e.iter().map(|v| -v / t).fold(f64::NEG_INFINITY, f64::max);
        let lz = top + e.iter().map(|v| (-v / t - top).exp()).sum::<f64>().ln();
        assert!((f + t / l as f64 * lz).abs() < 1e-12);
        // μ enters only through the sector weights
        let g = finite_free_energy(n, l, true, t, 0.0, &mu).unwrap();
        let want = -t * mu.iter().map(|m| (m / t).exp()).sum::<f64>().ln();
        assert!((g - want).abs() < 1e-12);
    }

    #[test]
    fn infinite_temperature() {
        let f = finite_free_energy(4, 4, true, 1e300, 1.0, &[0.0; 4]).unwrap();
        assert!(((f / 1e300) + 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn heisenberg_ground_state() {
        // P = (1 + σ·σ)/2
        let h = build_hamiltonian(2, 4, true).unwrap();
        let e0 = h.eigenvalues()[0];
        // Σσ·σ ground energy of the 4-site ring is -8
        assert!((e0 - (4.0 - 8.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_cap() {
        assert!(matches!(build_hamiltonian(5, 6, true), Err(ThermoError::Dimension { .. })));
        assert!(finite_free_energy(5, 9, true, 1.0, 1.0, &[0.0; 5]).is_err());
    }

    #[test]
    fn qtm_trivial_limit() {
        let q = Qtm::new(5, 2, 0.0, C64::new(0.0, 0.0), &[0.0; 5]).unwrap();
        let p = q.dominant(1e-12, 0.5, 1000).unwrap();
        assert!((p.value() - C64::new(5.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn yang_baxter() {
        for n in 2..=5 {
            assert!(ybe_residual(n, 10, 7, 1.0) <= 1e-13);
        }
        assert!(ybe_residual(3, 10, 7, 1.01) > 1e-3);
    }

    #[test]
    fn spin2_polynomial() {
        let r = spin2_identity(SPIN2_COEFFS);
        assert!(r.residual <= 1e-12, "{r:?}");
        assert!((r.constant + 1.0).abs() < 1e-12);
        let mut c = SPIN2_COEFFS;
        c[1] = 0.0;
        assert!(spin2_identity(c).residual > 0.1);
    }

    #[test]
    fn bethe_agreement() {
        for n in 2..=5 {
            assert!(bethe_cross_check(n, 0.25, 1.0, &vec![0.0; n]).unwrap() < 1e-9);
        }
        let mu = [0.1, -0.05, 0.0, 0.02];
        assert!(bethe_cross_check(4, 0.25, 1.0, &mu).unwrap() < 1e-9);
    }

    #[test]
    fn commutation() {
        assert!(row_commutation_residual(3, 4, 1).unwrap() <= 1e-12);
        assert!(qtm_commutation_residual(4, 0.2, 2).unwrap() <= 1e-12);
    }
}
