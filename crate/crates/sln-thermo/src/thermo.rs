//! Thermodynamic observables from the NLIE free energy: entropy and
//! specific heat by differentiation in ln T, densities and the
//! susceptibility matrix by differentiation in μ.
//!
//! Every derivative uses a five-point stencil at steps h and 2h combined by
//! one Richardson level, `(16 D_h - D_{2h}) / 15`. All stencil solves share
//! the grid of the central point and start from its solution.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sln_core::kernels::ShiftChoice;

use crate::error::{Result, ThermoError};
use crate::nlie::{Grid, NlieParams, NlieState, NlieSystem, TAIL_LIMIT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoOptions {
    pub coupling: f64,
    pub densities: bool,
    pub susceptibilities: bool,
    pub shifts: ShiftChoice,
    /// Grid points (default: `Grid::adaptive`); the half width follows the
    /// temperature.
    pub points: Option<usize>,
    pub tol: f64,
    /// Step in ln T.
    pub log_step: f64,
    /// μ step in units of max(T, 1).
    pub mu_step: f64,
    /// Anderson depth of the stencil solves.
    pub anderson: usize,
}

impl Default for ThermoOptions {
    fn default() -> Self {
        Self {
            coupling: 1.0,
            densities: true,
            susceptibilities: false,
            shifts: ShiftChoice::Bounded,
            points: None,
            tol: 1e-13,
            log_step: 1e-3,
            mu_step: 1e-4,
            anderson: 6,
        }
    }
}

/// One (T, μ) record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoPoint {
    pub temperature: f64,
    pub mu: Vec<f64>,
    pub f: f64,
    pub entropy: f64,
    pub specific_heat: f64,
    /// n_i = -∂f/∂μ_i (empty unless requested).
    pub densities: Vec<f64>,
    /// `chi[i][j] = ∂n_j/∂μ_i` (empty unless requested).
    pub chi: Vec<Vec<f64>>,
    /// Iterations of the central solve.
    pub iterations: usize,
    pub warnings: Vec<String>,
}

impl ThermoPoint {
    /// χ_i = ∂n_i/∂μ_i.
    pub fn compressibility(&self, i: usize) -> f64 {
        self.chi[i][i]
    }

    /// χ_{i,j} = -∂n_j/∂μ_i.
    pub fn convertibility(&self, i: usize, j: usize) -> f64 {
        -self.chi[i][j]
    }
}

/// Five-point first and second derivatives at steps h and 2h, Richardson
/// combined. `v` holds samples at offsets -4, -2, -1, 0, 1, 2, 4 (units of h).
fn stencil(v: &[f64; 7], h: f64) -> (f64, f64) {
    let [m4, m2, m1, c, p1, p2, p4] = *v;
    let d1 = |a: f64, b: f64, y: f64, z: f64, s: f64| (a - 8.0 * b + 8.0 * y - z) / (12.0 * s);
    let d2 = |a: f64, b: f64, y: f64, z: f64, s: f64| (-a + 16.0 * b - 30.0 * c + 16.0 * y - z) / (12.0 * s * s);
    let first = (16.0 * d1(m2, m1, p1, p2, h) - d1(m4, m2, p2, p4, 2.0 * h)) / 15.0;
    let second = (16.0 * d2(m2, m1, p1, p2, h) - d2(m4, m2, p2, p4, 2.0 * h)) / 15.0;
    (first, second)
}

const OFFSETS: [f64; 6] = [-4.0, -2.0, -1.0, 1.0, 2.0, 4.0];

fn with_centre(c: f64, s: &[f64]) -> [f64; 7] {
    [s[0], s[1], s[2], c, s[3], s[4], s[5]]
}

/// Free energy around one central point.
const MAX_WIDENINGS: usize = 3;

struct Evaluator {
    sys: Arc<NlieSystem>,
    base: NlieParams,
    central: NlieState,
}

impl Evaluator {
    /// Large |βμ| slows the decay of the tails; the window (and the point
    /// count, at fixed spacing) doubles until the central tail sits below
    /// half the limit, so that stencil neighbours stay inside it too.
    fn new(n: usize, t: f64, mu: &[f64], opts: &ThermoOptions) -> Result<Self> {
        let mut grid = match opts.points {
            Some(m) => Grid::new(m, Grid::for_temperature(t).half_width)?,
            None => Grid::adaptive(t),
        };
        let mut base = NlieParams::new(n, t, mu);
        base.coupling = opts.coupling;
        base.shifts = opts.shifts;
        base.tol = opts.tol;
        base.anderson = opts.anderson;
        for widenings in 0..=MAX_WIDENINGS {
            let sys = NlieSystem::shared(n, grid, opts.shifts)?;
            let last = widenings == MAX_WIDENINGS;
            match sys.solve(&base, None) {
                Ok(central) if last || central.tail <= 0.5 * TAIL_LIMIT => return Ok(Self { sys, base, central }),
                Err(e) if last || !matches!(e, ThermoError::GridTooSmall { .. }) => return Err(at(t, mu, e)),
                _ => grid = Grid::new(2 * grid.points, 2.0 * grid.half_width)?,
            }
        }
        unreachable!("the last widening returns")
    }

    fn f(&self, t: f64, mu: &[f64]) -> Result<f64> {
        let mut p = self.base.clone();
        p.temperature = t;
        p.mu = mu.to_vec();
        self.sys.solve(&p, Some(&self.central)).map(|s| s.f).map_err(|e| at(t, mu, e))
    }

    fn f_many(&self, pts: &[(f64, Vec<f64>)]) -> Result<Vec<f64>> {
        pts.par_iter().map(|(t, mu)| self.f(*t, mu)).collect()
    }

    fn t(&self) -> f64 {
        self.base.temperature
    }

    fn mu(&self) -> &[f64] {
        &self.base.mu
    }

    /// (∂f/∂u, ∂²f/∂u²), u = ln T.
    fn log_t_derivatives(&self, h: f64) -> Result<(f64, f64)> {
        let pts: Vec<(f64, Vec<f64>)> =
            OFFSETS.iter().map(|o| (self.t() * (o * h).exp(), self.mu().to_vec())).collect();
        let v = self.f_many(&pts)?;
        Ok(stencil(&with_centre(self.central.f, &v), h))
    }

    /// First and second derivative along direction `dir` in μ.
    fn mu_derivatives(&self, dir: &[f64], h: f64) -> Result<(f64, f64)> {
        let pts: Vec<(f64, Vec<f64>)> = OFFSETS
            .iter()
            .map(|o| (self.t(), self.mu().iter().zip(dir).map(|(m, d)| m + o * h * d).collect()))
            .collect();
        let v = self.f_many(&pts)?;
        Ok(stencil(&with_centre(self.central.f, &v), h))
    }
}

fn at(t: f64, mu: &[f64], e: ThermoError) -> ThermoError {
    match e {
        ThermoError::AtPoint { .. } => e,
        other => ThermoError::AtPoint { temperature: t, mu: mu.to_vec(), source: Box::new(other) },
    }
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect()
}

fn densities_and_chi(ev: &Evaluator, n: usize, opts: &ThermoOptions) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let h = opts.mu_step * ev.t().max(1.0);
    let diag: Vec<(f64, f64)> = (0..n).map(|i| ev.mu_derivatives(&unit(n, i), h)).collect::<Result<_>>()?;
    let densities: Vec<f64> = diag.iter().map(|d| -d.0).collect();
    if !opts.susceptibilities {
        return Ok((densities, Vec::new()));
    }
    let mut chi = vec![vec![0.0; n]; n];
    for i in 0..n {
        chi[i][i] = -diag[i].1;
        for j in i + 1..n {
            let mut dir = unit(n, i);
            dir[j] = 1.0;
            let (_, d2) = ev.mu_derivatives(&dir, h)?;
            let mixed = (d2 - diag[i].1 - diag[j].1) / 2.0;
            chi[i][j] = -mixed;
            chi[j][i] = -mixed;
        }
    }
    Ok((densities, chi))
}

/// f, S, C and optionally n_i and χ at one point.
pub fn thermo_point(n: usize, t: f64, mu: &[f64], opts: &ThermoOptions) -> Result<ThermoPoint> {
    let ev = Evaluator::new(n, t, mu, opts)?;
    let (fu, fuu) = ev.log_t_derivatives(opts.log_step)?;
    let (densities, chi) = if opts.densities || opts.susceptibilities {
        densities_and_chi(&ev, n, opts)?
    } else {
        (Vec::new(), Vec::new())
    };
    Ok(ThermoPoint {
        temperature: t,
        mu: mu.to_vec(),
        f: ev.central.f,
        entropy: -fu / t,
        specific_heat: -(fuu - fu) / t,
        densities,
        chi,
        iterations: ev.central.iterations,
        warnings: ev.central.warnings.clone(),
    })
}

/// χ alone (densities recomputed on the way).
pub fn susceptibilities(n: usize, t: f64, mu: &[f64], opts: &ThermoOptions) -> Result<Vec<Vec<f64>>> {
    let ev = Evaluator::new(n, t, mu, opts)?;
    let o = ThermoOptions { susceptibilities: true, ..opts.clone() };
    Ok(densities_and_chi(&ev, n, &o)?.1)
}

/// `(∂n_i/∂T)_μ = -(1/T) ∂²f/∂(ln T)∂μ_i` for every species, from the mixed
/// four-point stencil at steps (h, δ) and (2h, 2δ), Richardson combined.
pub fn density_temperature_derivative(n: usize, t: f64, mu: &[f64], opts: &ThermoOptions) -> Result<Vec<f64>> {
    let ev = Evaluator::new(n, t, mu, opts)?;
    let (h, d) = (opts.log_step, opts.mu_step * t.max(1.0));
    let mut pts = Vec::new();
    for i in 0..n {
        for s in [1.0, 2.0] {
            for (a, b) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut m = mu.to_vec();
                m[i] += b * s * d;
                pts.push((t * (a * s * h).exp(), m));
            }
        }
    }
    let v = ev.f_many(&pts)?;
    Ok(v.chunks(8)
        .map(|c| {
            let mixed = |k: usize, s: f64| (c[k] - c[k + 1] - c[k + 2] + c[k + 3]) / (4.0 * s * s * h * d);
            -(4.0 * mixed(0, 1.0) - mixed(4, 2.0)) / 3.0 / t
        })
        .collect())
}

/// Maxwell pair `(∂S/∂μ_i, ∂n_i/∂T)` for one species along independent
/// routes: entropies at μ ± δ e_i against densities at T e^{±h}.
pub fn maxwell_pair(n: usize, t: f64, mu: &[f64], species: usize, opts: &ThermoOptions) -> Result<(f64, f64)> {
    let (h, d) = (opts.log_step, opts.mu_step * t.max(1.0));
    let entropy = |m: &[f64]| -> Result<f64> {
        let ev = Evaluator::new(n, t, m, opts)?;
        Ok(-ev.log_t_derivatives(h)?.0 / t)
    };
    let density = |tt: f64| -> Result<f64> {
        let ev = Evaluator::new(n, tt, mu, opts)?;
        Ok(-ev.mu_derivatives(&unit(n, species), d)?.0)
    };
    let mut up = mu.to_vec();
    up[species] += d;
    let mut down = mu.to_vec();
    down[species] -= d;
    let ds = (entropy(&up)? - entropy(&down)?) / (2.0 * d);
    let (tp, tm) = (t * h.exp(), t * (-h).exp());
    let dn = (density(tp)? - density(tm)?) / (tp - tm);
    Ok((ds, dn))
}

/// Rayon pool bounded by `QTM_THREADS` (default: available cores).
pub fn sweep_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("QTM_THREADS") {
        let k: usize = v.parse().map_err(|_| ThermoError::Config(format!("QTM_THREADS must be a positive integer, got {v:?}")))?;
        if k == 0 {
            return Err(ThermoError::Config("QTM_THREADS must be positive".into()));
        }
        b = b.num_threads(k);
    }
    b.build().map_err(|e| ThermoError::Config(e.to_string()))
}

/// Temperature spacing of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spacing {
    Log,
    Linear,
}

pub fn temperatures(min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if !(min > 0.0 && max >= min && count >= 1) {
        return Err(ThermoError::Config(format!("bad temperature range {min}:{max}:{count}")));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    let s = (count - 1) as f64;
    Ok((0..count)
        .map(|k| {
            let a = k as f64 / s;
            match spacing {
                Spacing::Log => (min.ln() * (1.0 - a) + max.ln() * a).exp(),
                Spacing::Linear => min * (1.0 - a) + max * a,
            }
        })
        .collect())
}

/// Sweep result: successful points in temperature order plus failures.
#[derive(Debug, Clone, Serialize)]
pub struct Sweep {
    pub points: Vec<ThermoPoint>,
    pub failures: Vec<(f64, String)>,
}

/// Independent thermo points over a list of temperatures.
pub fn sweep(n: usize, temps: &[f64], mu: &[f64], opts: &ThermoOptions) -> Result<Sweep> {
    let pool = sweep_pool()?;
    let results: Vec<Result<ThermoPoint>> =
        pool.install(|| temps.par_iter().map(|&t| thermo_point(n, t, mu, opts)).collect());
    let mut out = Sweep { points: Vec::new(), failures: Vec::new() };
    for (t, r) in temps.iter().zip(results) {
        match r {
            Ok(p) => out.points.push(p),
            Err(e) => out.failures.push((*t, e.to_string())),
        }
    }
    Ok(out)
}

/// Stopping tolerance on the densities; their finite-difference noise
/// floor is a few 1e-10.
pub const DENSITY_TOL: f64 = 1e-9;

/// Per temperature, Newton iteration on μ (gauge Σμ = 0) until the
/// densities match `target`. The residual is ln n - ln target, nearly
/// linear in μ; its Jacobian χ_ij/n_j is regularized along the uniform
/// direction, which leaves every density unchanged.
pub fn density_tuned_sweep(n: usize, target: &[f64], temps: &[f64], opts: &ThermoOptions) -> Result<Vec<ThermoPoint>> {
    if target.len() != n || target.iter().any(|v| !(*v > 0.0 && *v < 1.0)) || (target.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(ThermoError::Config("target densities must lie inside the simplex".into()));
    }
    let mut o = opts.clone();
    o.densities = true;
    let mut mu = vec![0.0; n];
    let mut out = Vec::with_capacity(temps.len());
    for &t in temps {
        let mut point = None;
        for _ in 0..30 {
            let p = thermo_point(n, t, &mu, &o)?;
            let err = p.densities.iter().zip(target).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            if err <= DENSITY_TOL {
                point = Some(p);
                break;
            }
            let chi = if p.chi.is_empty() { susceptibilities(n, t, &mu, opts)? } else { p.chi.clone() };
            let dens = &p.densities;
            if dens.iter().any(|v| *v <= 0.0) {
                return Err(ThermoError::Unreachable(format!("non-positive density at T = {t}")));
            }
            let jac = nalgebra::DMatrix::from_fn(n, n, |j, i| chi[i][j] / dens[j] + 1.0 / n as f64);
            let rhs = nalgebra::DVector::from_fn(n, |j, _| (target[j] / dens[j]).ln());
            let step = jac
                .lu()
                .solve(&rhs)
                .ok_or_else(|| ThermoError::Unreachable(format!("singular density Jacobian at T = {t}")))?;
            let limit = 2.0 * t.max(1.0);
            let scale = (limit / step.amax()).min(1.0);
            for (m, s) in mu.iter_mut().zip(step.iter()) {
                *m += scale * s;
            }
            let mean = mu.iter().sum::<f64>() / n as f64;
            mu.iter_mut().for_each(|m| *m -= mean);
        }
        out.push(point.ok_or_else(|| ThermoError::Unreachable(format!("densities {target:?} not reached at T = {t}")))?);
    }
    Ok(out)
}

/// CSV with columns T, mu_1..mu_n, f, S, C, n_1..n_n, chi_11..chi_nn.
/// Missing densities or susceptibilities are written as empty fields.
pub fn write_csv<W: Write>(out: W, n: usize, points: &[ThermoPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["T".to_string()];
    header.extend((1..=n).map(|i| format!("mu_{i}")));
    header.extend(["f", "S", "C"].map(String::from));
    header.extend((1..=n).map(|i| format!("n_{i}")));
    for i in 1..=n {
        header.extend((1..=n).map(|j| format!("chi_{i}{j}")));
    }
    w.write_record(&header)?;
    let fmt = |v: f64| format!("{v:.15e}");
    for p in points {
        let mut row = vec![fmt(p.temperature)];
        row.extend(p.mu.iter().map(|v| fmt(*v)));
        row.extend([p.f, p.entropy, p.specific_heat].map(fmt));
        if p.densities.is_empty() {
            row.extend((0..n).map(|_| String::new()));
        } else {
            row.extend(p.densities.iter().map(|v| fmt(*v)));
        }
        if p.chi.is_empty() {
            row.extend((0..n * n).map(|_| String::new()));
        } else {
            row.extend(p.chi.iter().flatten().map(|v| fmt(*v)));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
