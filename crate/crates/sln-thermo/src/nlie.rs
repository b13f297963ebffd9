//! Fixed-point solver for the non-linear integral equations
//! `log b = -c - βJ d - K ∗ log B`, `B = 1 + b`, on a uniform periodic grid.
//!
//! Conventions: `𝓕[f](k) = ∫ e^{-ikx} f(x) dx`; the convolution `K ∗ g` has
//! transform `K̂ ĝ`. The driving term is `d(x) = ∫ e^{ikx} d̂(k) dk`. Kernels
//! and driving terms are sampled analytically in k.

use std::collections::VecDeque;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use sln_core::auxiliary::{asymptotic_value, canonical_defs};
use sln_core::kernels::{KernelSystem, ShiftChoice};
use sln_core::special::digamma;

use crate::error::{Result, ThermoError};

/// Largest tolerated |log B - log B∞| at the window edges.
pub const TAIL_LIMIT: f64 = 1e-3;

/// Uniform grid `x_m = -L + mΔ`, `Δ = 2L/M`, with FFT-ordered wave numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub half_width: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(points: usize, half_width: f64) -> Result<Self> {
        if !points.is_power_of_two() || points < 16 {
            return Err(ThermoError::Config(format!("grid points must be a power of two ≥ 16, got {points}")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(ThermoError::Config(format!("half width must be positive, got {half_width}")));
        }
        Ok(Self { half_width, points })
    }

    /// Default grid: 4096 points, `L = clamp(6/T, 40, 200)`.
    pub fn for_temperature(t: f64) -> Self {
        Self { half_width: (6.0 / t).clamp(40.0, 200.0), points: 4096 }
    }

    /// Same half width as `for_temperature`, with the fewest points (a power
    /// of two, at least 2048) keeping the spacing at or below 0.06.
    pub fn adaptive(t: f64) -> Self {
        let half_width = Self::for_temperature(t).half_width;
        let points = ((2.0 * half_width / 0.06).ceil() as usize).next_power_of_two().max(2048);
        Self { half_width, points }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn x(&self, m: usize) -> f64 {
        -self.half_width + m as f64 * self.spacing()
    }

    /// Wave number of FFT bin m (negative for m ≥ M/2).
    pub fn k(&self, m: usize) -> f64 {
        let mm = self.points as i64;
        let j = if (m as i64) < mm / 2 { m as i64 } else { m as i64 - mm };
        2.0 * std::f64::consts::PI * j as f64 / (mm as f64 * self.spacing())
    }

    /// Index of x = 0.
    pub fn origin(&self) -> usize {
        self.points / 2
    }

    fn key(&self) -> (usize, u64) {
        (self.points, self.half_width.to_bits())
    }
}

/// Physical and numerical parameters of one solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NlieParams {
    pub n: usize,
    pub temperature: f64,
    pub mu: Vec<f64>,
    pub coupling: f64,
    /// Initial damping θ; 0 enables the automatic fallback to 0.5.
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub shifts: ShiftChoice,
    /// Anderson mixing depth; 0 is the plain damped iteration.
    #[serde(default)]
    pub anderson: usize,
}

impl NlieParams {
    pub fn new(n: usize, temperature: f64, mu: &[f64]) -> Self {
        Self {
            n,
            temperature,
            mu: mu.to_vec(),
            coupling: 1.0,
            damping: 0.0,
            tol: 1e-12,
            max_iter: 1000,
            shifts: ShiftChoice::Bounded,
            anderson: 0,
        }
    }

    pub fn beta(&self) -> f64 {
        1.0 / self.temperature
    }

    fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(ThermoError::Config(format!("temperature must be positive, got {}", self.temperature)));
        }
        if self.mu.len() != self.n {
            return Err(ThermoError::Config(format!("need {} chemical potentials, got {}", self.n, self.mu.len())));
        }
        if !(0.0..1.0).contains(&self.damping) {
            return Err(ThermoError::Config(format!("damping must lie in [0, 1), got {}", self.damping)));
        }
        Ok(())
    }
}

/// Converged solution on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NlieState {
    pub params: NlieParams,
    pub grid: Grid,
    #[serde(with = "complex_rows")]
    pub logb: Vec<Vec<C64>>,
    /// log b∞ per function.
    pub asymptote: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    /// Sup-norm update per iteration.
    #[serde(default)]
    pub residuals: Vec<f64>,
    /// Damping in effect at the end (0.5 after an automatic fallback).
    pub damping_used: f64,
    /// max |log B - log B∞| at the window edges.
    pub tail: f64,
    /// Re log Λ(0).
    pub log_lambda: f64,
    /// Free energy per site.
    pub f: f64,
    pub warnings: Vec<String>,
}

mod complex_rows {
    use num_complex::Complex64 as C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<C64>], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<Vec<[f64; 2]>> = rows.iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<C64>>, D::Error> {
        let pairs: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        Ok(pairs.into_iter().map(|r| r.into_iter().map(|[re, im]| C64::new(re, im)).collect()).collect())
    }
}

/// `log(1 + e^z)` without overflow and with full relative accuracy for
/// small `e^z`.
pub fn log1p_exp(z: C64) -> C64 {
    fn log1p(w: C64) -> C64 {
        C64::new(0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p(), w.im.atan2(1.0 + w.re))
    }
    if z.re > 0.0 {
        z + log1p((-z).exp())
    } else {
        log1p(z.exp())
    }
}

/// Kernel matrices, driving terms and FFT plans for one (n, grid).
pub struct NlieSystem {
    n: usize,
    grid: Grid,
    kernels: KernelSystem,
    /// Distinct kernel columns over the grid, `unique[u][m]`.
    unique: Vec<Vec<f64>>,
    /// `index[i * D + j]` into `unique`.
    index: Vec<usize>,
    k0: Vec<f64>,
    /// d_i(x_m) without the βJ factor, `drive[i][m]`.
    drive: Vec<Vec<C64>>,
    /// d̂_i(-k_m), `dagger[i][m]`.
    dagger: Vec<Vec<f64>>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

type CacheKey = (usize, (usize, u64), ShiftChoice);

fn cache() -> &'static Mutex<VecDeque<(CacheKey, Arc<NlieSystem>)>> {
    static CACHE: OnceLock<Mutex<VecDeque<(CacheKey, Arc<NlieSystem>)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(VecDeque::new()))
}

const CACHE_SLOTS: usize = 4;

impl NlieSystem {
    pub fn new(n: usize, grid: Grid, choice: ShiftChoice) -> Result<Self> {
        let kernels = KernelSystem::new(n, choice)?;
        let d = kernels.dim();
        let m = grid.points;
        let ks: Vec<f64> = (0..m).map(|i| grid.k(i)).collect();

        // Entries with the same table index, orientation and conjugation
        // exponent are identical functions of k.
        let mut keys: Vec<(u8, bool, i64)> = Vec::new();
        let mut index = Vec::with_capacity(d * d);
        let mut unique = Vec::new();
        for r in 0..d {
            for c in 0..d {
                let e = kernels.entry_ref(r, c);
                let p = ((kernels.shifts()[c] - kernels.shifts()[r]) * 8.0).round() as i64;
                let key = (e.index, e.flipped, p);
                let u = match keys.iter().position(|k| *k == key) {
                    Some(u) => u,
                    None => {
                        keys.push(key);
                        unique.push(ks.iter().map(|&k| kernels.entry(r, c, k)).collect());
                        keys.len() - 1
                    }
                };
                index.push(u);
            }
        }

        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        let ifft = planner.plan_fft_inverse(m);

        let x0 = grid.x(0);
        let dk = std::f64::consts::PI / grid.half_width;
        let drive_k: Vec<Vec<f64>> = ks.iter().map(|&k| kernels.driving(k)).collect();
        let drive = (0..d)
            .map(|i| {
                let mut buf: Vec<C64> =
                    (0..m).map(|j| C64::from_polar(drive_k[j][i], ks[j] * x0)).collect();
                ifft.process(&mut buf);
                buf.iter().map(|z| z * dk).collect()
            })
            .collect();
        let dagger_k: Vec<Vec<f64>> = ks.iter().map(|&k| kernels.driving(-k)).collect();
        let dagger = (0..d).map(|i| (0..m).map(|j| dagger_k[j][i]).collect()).collect();
        let k0 = kernels.k0();
        Ok(Self { n, grid, kernels, unique, index, k0, drive, dagger, fft, ifft })
    }

    /// Shared instance from a small process-wide cache.
    pub fn shared(n: usize, grid: Grid, choice: ShiftChoice) -> Result<Arc<Self>> {
        let key = (n, grid.key(), choice);
        if let Some((_, sys)) = cache().lock().unwrap().iter().find(|(k, _)| *k == key) {
            return Ok(Arc::clone(sys));
        }
        let sys = Arc::new(Self::new(n, grid, choice)?);
        let mut c = cache().lock().unwrap();
        if c.len() >= CACHE_SLOTS {
            c.pop_front();
        }
        c.push_back((key, Arc::clone(&sys)));
        Ok(sys)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn kernels(&self) -> &KernelSystem {
        &self.kernels
    }

    pub fn dim(&self) -> usize {
        self.kernels.dim()
    }

    /// log b∞ from the weighted counting values of the canonical lowercase
    /// functions, checked against `log b∞ + c + K̂(0) log(1 + b∞) = 0`.
    pub fn asymptotic_constants(&self, beta: f64, mu: &[f64]) -> Result<Vec<f64>> {
        let defs = canonical_defs(self.n)?;
        let binf = defs
            .iter()
            .map(|p| asymptotic_value(&p.lower, self.n, beta, mu))
            .collect::<sln_core::Result<Vec<f64>>>()?;
        let lbi: Vec<f64> = binf.iter().map(|b| b.ln()).collect();
        let residual = self.constant_residual(beta, mu, &lbi);
        if residual > 1e-10 {
            return Err(ThermoError::Inconsistent { residual });
        }
        Ok(lbi)
    }

    /// Sup-norm residual of the constant (x → ∞) equation.
    pub fn constant_residual(&self, beta: f64, mu: &[f64], lbi: &[f64]) -> f64 {
        let d = self.dim();
        let c = self.kernels.constants(beta, mu);
        (0..d)
            .map(|i| {
                let conv: f64 = (0..d).map(|j| self.k0[i * d + j] * lbi[j].exp().ln_1p()).sum();
                (lbi[i] + c[i] + conv).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `K ∗ g` with `g → g∞` at both ends: FFT convolution of `g - g∞`
    /// plus `K̂(0) g∞`.
    pub fn convolve_with_asymptote(&self, g: &[Vec<C64>], g_inf: &[f64]) -> Vec<Vec<C64>> {
        let d = self.dim();
        let m = self.grid.points;
        let spectra: Vec<Vec<C64>> = g
            .iter()
            .zip(g_inf)
            .map(|(row, &inf)| {
                let mut buf: Vec<C64> = row.iter().map(|z| z - inf).collect();
                self.fft.process(&mut buf);
                buf
            })
            .collect();
        let scale = 1.0 / m as f64;
        (0..d)
            .map(|i| {
                let mut acc = vec![C64::new(0.0, 0.0); m];
                for (j, spec) in spectra.iter().enumerate() {
                    let kern = &self.unique[self.index[i * d + j]];
                    for ((a, &kv), &s) in acc.iter_mut().zip(kern).zip(spec) {
                        *a += s * kv;
                    }
                }
                self.ifft.process(&mut acc);
                let shift: f64 = (0..d).map(|j| self.k0[i * d + j] * g_inf[j]).sum();
                acc.into_iter().map(|z| z * scale + shift).collect()
            })
            .collect()
    }

    /// Solve from the asymptotic constants or from a previous state on the
    /// same grid.
    pub fn solve(&self, params: &NlieParams, warm: Option<&NlieState>) -> Result<NlieState> {
        params.validate()?;
        if params.n != self.n {
            return Err(ThermoError::Config(format!("system is for n = {}, params for n = {}", self.n, params.n)));
        }
        let d = self.dim();
        let m = self.grid.points;
        let beta = params.beta();
        let mut warnings = Vec::new();
        if params.coupling < 0.0 {
            warnings.push("J < 0 lies outside the regime of the Γ-term derivation".to_string());
        }
        if params.mu.iter().any(|v| (beta * v).abs() > 1.0) {
            warnings.push("|βμ| > 1: strip shifts are only established at μ = 0".to_string());
        }
        let lbi = self.asymptotic_constants(beta, &params.mu)?;
        let big_inf: Vec<f64> = lbi.iter().map(|v| v.exp().ln_1p()).collect();
        let c = self.kernels.constants(beta, &params.mu);
        let bj = beta * params.coupling;
        let source: Vec<Vec<C64>> =
            (0..d).map(|i| self.drive[i].iter().map(|dv| -(c[i] + bj * dv)).collect()).collect();

        let mut logb: Vec<Vec<C64>> = match warm {
            Some(s) if s.grid == self.grid && s.logb.len() == d => s.logb.clone(),
            _ => lbi.iter().map(|&v| vec![C64::new(v, 0.0); m]).collect(),
        };
        let (residuals, theta) = if params.anderson > 0 {
            self.iterate_anderson(&mut logb, &source, &big_inf, params)?
        } else {
            self.iterate_damped(&mut logb, &source, &big_inf, params)?
        };
        let iterations = residuals.len();
        let residual = residuals.last().copied().unwrap_or(f64::INFINITY);
        if residual >= params.tol {
            return Err(ThermoError::NoConvergence { iterations, residual });
        }
        let tail = (0..d)
            .flat_map(|i| [0, m - 1].map(|j| (log1p_exp(logb[i][j]) - big_inf[i]).norm()))
            .fold(0.0, f64::max);
        if tail > TAIL_LIMIT {
            return Err(ThermoError::GridTooSmall { tail });
        }
        let mut state = NlieState {
            params: params.clone(),
            grid: self.grid,
            logb,
            asymptote: lbi,
            iterations,
            residual,
            residuals,
            damping_used: theta,
            tail,
            log_lambda: 0.0,
            f: 0.0,
            warnings,
        };
        state.log_lambda = self.log_eigenvalue(&state, 0.0)?;
        state.f = -params.temperature * state.log_lambda;
        Ok(state)
    }

    /// One map application `G(logb) = source - K ∗ log(1 + e^{logb})`.
    fn map(&self, logb: &[Vec<C64>], source: &[Vec<C64>], big_inf: &[f64]) -> Vec<Vec<C64>> {
        let big: Vec<Vec<C64>> = logb.iter().map(|r| r.iter().map(|&z| log1p_exp(z)).collect()).collect();
        let mut conv = self.convolve_with_asymptote(&big, big_inf);
        for (c, s) in conv.iter_mut().zip(source) {
            for (cv, sv) in c.iter_mut().zip(s) {
                *cv = sv - *cv;
            }
        }
        conv
    }

    fn iterate_damped(
        &self,
        logb: &mut [Vec<C64>],
        source: &[Vec<C64>],
        big_inf: &[f64],
        params: &NlieParams,
    ) -> Result<(Vec<f64>, f64)> {
        let mut theta = params.damping;
        let auto = theta == 0.0;
        let mut all = Vec::new();
        let mut history: Vec<f64> = Vec::new();
        let mut iterations = 0;
        while iterations < params.max_iter {
            iterations += 1;
            let new = self.map(logb, source, big_inf);
            let mut residual: f64 = 0.0;
            for (row, nrow) in logb.iter_mut().zip(&new) {
                for (z, nz) in row.iter_mut().zip(nrow) {
                    residual = residual.max((nz - *z).norm());
                    *z = nz * (1.0 - theta) + *z * theta;
                }
            }
            if !residual.is_finite() {
                return Err(ThermoError::NotFinite { iteration: iterations });
            }
            history.push(residual);
            all.push(residual);
            if residual < params.tol {
                break;
            }
            let h = history.len();
            if h > 10 && (1..10).all(|s| history[h - s] >= history[h - s - 1]) {
                if auto && theta == 0.0 {
                    theta = 0.5;
                    history.clear();
                } else if (1..10).all(|s| history[h - s] > history[h - s - 1]) && residual > history[h - 10] * 10.0 {
                    return Err(ThermoError::Diverged { iterations, residual });
                }
            }
        }
        Ok((all, theta))
    }

    /// Anderson mixing on the residual `G(x) - x`, restarted from the best
    /// iterate whenever the residual grows a hundredfold.
    fn iterate_anderson(
        &self,
        logb: &mut Vec<Vec<C64>>,
        source: &[Vec<C64>],
        big_inf: &[f64],
        params: &NlieParams,
    ) -> Result<(Vec<f64>, f64)> {
        let flat = |v: &[Vec<C64>]| -> Vec<C64> { v.iter().flatten().copied().collect() };
        let dot = |a: &[C64], b: &[C64]| -> f64 { a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum() };
        let m = self.grid.points;
        let depth = params.anderson;
        let mut x = flat(logb);
        let mut df: VecDeque<Vec<C64>> = VecDeque::new();
        let mut dg: VecDeque<Vec<C64>> = VecDeque::new();
        let mut prev: Option<(Vec<C64>, Vec<C64>)> = None;
        let mut best = (f64::INFINITY, x.clone());
        let mut all = Vec::new();
        let mut iterations = 0;
        while iterations < params.max_iter {
            iterations += 1;
            let rows: Vec<Vec<C64>> = x.chunks(m).map(|c| c.to_vec()).collect();
            let g = flat(&self.map(&rows, source, big_inf));
            let f: Vec<C64> = g.iter().zip(&x).map(|(a, b)| a - b).collect();
            let residual = f.iter().fold(0.0f64, |r, z| r.max(z.norm()));
            all.push(residual);
            if !residual.is_finite() {
                return Err(ThermoError::NotFinite { iteration: iterations });
            }
            if residual < params.tol {
                x = g;
                break;
            }
            if residual > 100.0 * best.0 {
                df.clear();
                dg.clear();
                prev = None;
                x = best.1.clone();
                continue;
            }
            if residual < best.0 {
                best = (residual, x.clone());
            }
            if let Some((pf, pg)) = prev.take() {
                df.push_back(f.iter().zip(&pf).map(|(a, b)| a - b).collect());
                dg.push_back(g.iter().zip(&pg).map(|(a, b)| a - b).collect());
                if df.len() > depth {
                    df.pop_front();
                    dg.pop_front();
                }
            }
            let k = df.len();
            let mut next = g.clone();
            if k > 0 {
                let gram = nalgebra::DMatrix::from_fn(k, k, |i, j| dot(&df[i], &df[j]));
                let reg = 1e-14 * gram.trace() / k as f64;
                let gram = gram + nalgebra::DMatrix::identity(k, k) * reg;
                let rhs = nalgebra::DVector::from_fn(k, |i, _| dot(&df[i], &f));
                if let Some(gamma) = gram.lu().solve(&rhs) {
                    for (i, d) in dg.iter().enumerate() {
                        for (nv, dv) in next.iter_mut().zip(d) {
                            *nv -= dv * gamma[i];
                        }
                    }
                }
            }
            prev = Some((f, g));
            x = next;
        }
        *logb = x.chunks(m).map(|c| c.to_vec()).collect();
        Ok((all, 0.0))
    }

    /// Re log Λ(x) of the dominant eigenvalue.
    pub fn log_eigenvalue(&self, state: &NlieState, x: f64) -> Result<f64> {
        let p = &state.params;
        let n = self.n as f64;
        let beta = p.beta();
        let bj = beta * p.coupling;
        let d = self.dim();
        let m = self.grid.points;
        let big_inf: Vec<f64> = state.asymptote.iter().map(|v| v.exp().ln_1p()).collect();
        let mut total = vec![C64::new(0.0, 0.0); m];
        for i in 0..d {
            let mut buf: Vec<C64> = state.logb[i].iter().map(|&z| log1p_exp(z) - big_inf[i]).collect();
            self.fft.process(&mut buf);
            for ((t, b), &dg) in total.iter_mut().zip(&buf).zip(&self.dagger[i]) {
                *t += b * dg;
            }
        }
        let x0 = self.grid.x(0);
        let conv: C64 = (0..m)
            .map(|j| total[j] * C64::from_polar(1.0, self.grid.k(j) * (x - x0)))
            .sum::<C64>()
            / m as f64;
        let at_infinity: f64 = (0..d).map(|i| self.dagger[i][0] * big_inf[i]).sum();
        Ok(gamma_term(self.n, x) * bj + beta * p.mu.iter().sum::<f64>() / n + conv.re + at_infinity - bj)
    }
}

/// `(1/n) Re[ψ(1+ix/n) + ψ(1-ix/n) - ψ(1/n+ix/n) - ψ(1/n-ix/n)]`, the
/// coefficient of βJ in log Λ.
pub fn gamma_term(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let z = C64::new(0.0, x / nf);
    let one = C64::new(1.0, 0.0);
    let inv = C64::new(1.0 / nf, 0.0);
    (digamma(one + z) + digamma(one - z) - digamma(inv + z) - digamma(inv - z)).re / nf
}

/// One-shot solve on a fresh (cached) system.
pub fn solve_nlie(params: &NlieParams, grid: Grid) -> Result<NlieState> {
    NlieSystem::shared(params.n, grid, params.shifts)?.solve(params, None)
}

/// Re log Λ(x) for a converged state.
pub fn log_eigenvalue(state: &NlieState, x: f64) -> Result<f64> {
    NlieSystem::shared(state.params.n, state.grid, state.params.shifts)?.log_eigenvalue(state, x)
}

pub fn free_energy(state: &NlieState) -> f64 {
    state.f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_conventions() {
        let g = Grid::new(16, 4.0).unwrap();
        assert_eq!(g.x(g.origin()), 0.0);
        assert!((g.k(1) - 2.0 * std::f64::consts::PI / 8.0).abs() < 1e-15);
        assert!(g.k(8) < 0.0);
        assert!(Grid::new(100, 4.0).is_err());
        assert_eq!(Grid::adaptive(1.0).points, 2048);
        assert_eq!(Grid::adaptive(0.05).points, 4096);
        assert_eq!(Grid::adaptive(0.01).points, 8192);
    }

    #[test]
    fn log1p_exp_limits() {
        assert!((log1p_exp(C64::new(800.0, 0.3)) - C64::new(800.0, 0.3)).norm() < 1e-12);
        let z = C64::new(-40.0, 0.1);
        assert!(((log1p_exp(z) - z.exp()) / z.exp()).norm() < 1e-12);
        assert!((log1p_exp(C64::new(0.0, 0.0)).re - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn gamma_term_at_origin() {
        let want = 1.5 * 2f64.ln() + std::f64::consts::FRAC_PI_4;
        assert!((gamma_term(4, 0.0) - want).abs() < 1e-13);
    }

    fn solve(n: usize, t: f64) -> NlieState {
        let mut p = NlieParams::new(n, t, &vec![0.0; n]);
        p.tol = 1e-12;
        solve_nlie(&p, Grid::for_temperature(t)).unwrap()
    }

    #[test]
    fn reference_eigenvalues() {
        let s = solve(4, 1.0);
        eprintln!("n=4 T=1 {} it {} tail {}", s.log_lambda, s.iterations, s.tail);
        assert!((s.log_lambda - 1.5550604594).abs() < 1e-8);
        let s = solve(4, 0.1);
        eprintln!("n=4 T=0.1 f {} it {}", s.f, s.iterations);
        assert!((s.f + 0.8354643281).abs() < 1e-8);
        let s = solve(5, 1.0);
        eprintln!("n=5 T=1 {} it {}", s.log_lambda, s.iterations);
        assert!((s.log_lambda - 1.8274446401).abs() < 1e-8);
        let s = solve(5, 0.1);
        eprintln!("n=5 T=0.1 f {} it {} {}", s.f, s.iterations, s.damping_used);
        assert!((s.f + 0.9025329527).abs() < 1e-8);
    }
}
