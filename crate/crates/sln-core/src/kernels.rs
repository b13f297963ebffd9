//! Fourier-space kernel matrices, driving terms and constants of the
//! non-linear integral equations for sl(4) and sl(5).
//!
//! Entries are built from the common kernel
//! `K^{(a,b)}(k) = e^{|k|/2} sinh(min k/2) sinh((n-max) k/2) / (sinh(k/2) sinh(nk/2)) - δ_ab`
//! plus a short list of exponential corrections `c e^{α k - γ|k|}`. After the
//! diagonal conjugation `𝒯_i^{-1} M_ij 𝒯_j` every entry is, for |k| ≥ 1, a
//! finite sum of exponentials divided by `(1-w)(1-w^n)`, `w = e^{-|k|}`. The
//! slopes are multiples of 1/4 and are kept exactly as integers.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::binomial;

/// One correction term `c e^{α k - γ|k|}`.
type Term = (i32, f64, f64);

#[derive(Debug, Clone, Copy)]
struct TableEntry {
    a: usize,
    b: usize,
    terms: &'static [Term],
}

const fn te(a: usize, b: usize, terms: &'static [Term]) -> TableEntry {
    TableEntry { a, b, terms }
}

static TABLE4: [TableEntry; 20] = [
    te(1, 1, &[]),
    te(1, 1, &[(1, -0.5, 0.5)]),
    te(1, 1, &[(1, 0.5, 0.5)]),
    te(2, 2, &[]),
    te(2, 2, &[(1, -0.5, 0.5)]),
    te(2, 2, &[(1, 0.5, 0.5)]),
    te(2, 2, &[(1, -1.0, 1.0), (-1, -1.0, 0.0)]),
    te(2, 2, &[(1, 1.0, 1.0), (-1, 1.0, 0.0)]),
    te(2, 2, &[(2, -0.5, 0.5)]),
    te(2, 2, &[(2, 0.5, 0.5)]),
    te(2, 2, &[(1, 0.0, 1.0)]),
    te(1, 2, &[]),
    te(1, 2, &[(1, -1.0, 0.5), (-1, -0.5, 0.0)]),
    te(1, 2, &[(1, 1.0, 0.5), (-1, 0.5, 0.0)]),
    te(1, 2, &[(1, 0.0, 0.5)]),
    te(1, 3, &[]),
    te(1, 3, &[(1, -1.5, 0.5), (-1, -1.0, 0.0)]),
    te(1, 3, &[(1, 1.5, 0.5), (-1, 1.0, 0.0)]),
    te(1, 3, &[(1, -0.5, 0.5)]),
    te(1, 3, &[(1, 0.5, 0.5)]),
];

static TABLE5: [TableEntry; 40] = [
    te(1, 1, &[]),
    te(1, 1, &[(1, -0.5, 0.5)]),
    te(1, 1, &[(1, 0.5, 0.5)]),
    te(1, 2, &[]),
    te(1, 2, &[(1, 1.0, 0.5), (-1, 0.5, 0.0)]),
    te(1, 2, &[(1, 0.0, 0.5)]),
    te(1, 2, &[(1, -1.0, 0.5), (-1, -0.5, 0.0)]),
    te(1, 3, &[]),
    te(1, 3, &[(1, 1.5, 0.5), (-1, 1.0, 0.0)]),
    te(1, 3, &[(1, 0.5, 0.5)]),
    te(1, 3, &[(1, -0.5, 0.5)]),
    te(1, 3, &[(1, -1.5, 0.5), (-1, -1.0, 0.0)]),
    te(1, 4, &[]),
    te(1, 4, &[(1, 2.0, 0.5), (-1, 1.5, 0.0)]),
    te(1, 4, &[(1, 1.0, 0.5)]),
    te(1, 4, &[(1, 0.0, 0.5)]),
    te(1, 4, &[(1, -1.0, 0.5)]),
    te(1, 4, &[(1, -2.0, 0.5), (-1, -1.5, 0.0)]),
    te(2, 2, &[]),
    te(2, 2, &[(1, 0.5, 0.5)]),
    te(2, 2, &[(1, 1.0, 1.0), (-1, 1.0, 0.0)]),
    te(2, 2, &[(1, -0.5, 0.5)]),
    te(2, 2, &[(2, 0.5, 0.5)]),
    te(2, 2, &[(1, 0.0, 1.0)]),
    te(2, 2, &[(2, -0.5, 0.5)]),
    te(2, 2, &[(1, -1.0, 1.0), (-1, -1.0, 0.0)]),
    te(2, 3, &[]),
    te(2, 3, &[(1, 1.0, 0.5), (-1, 0.5, 0.0)]),
    te(2, 3, &[(1, 0.0, 0.5)]),
    te(2, 3, &[(1, -1.0, 0.5), (-1, -0.5, 0.0)]),
    te(2, 3, &[(1, 1.5, 1.0), (-1, 1.5, 0.0), (-1, 0.5, 0.0)]),
    te(2, 3, &[(2, 1.0, 0.5), (-1, 0.5, 0.0)]),
    te(2, 3, &[(1, 0.5, 1.0), (-1, 0.5, 0.0)]),
    te(2, 3, &[(1, 0.5, 1.0)]),
    te(2, 3, &[(2, 0.0, 0.5)]),
    te(2, 3, &[(1, 0.0, 1.5), (-1, 0.0, 0.5)]),
    te(2, 3, &[(1, -0.5, 1.0)]),
    te(2, 3, &[(1, -0.5, 1.0), (-1, -0.5, 0.0)]),
    te(2, 3, &[(2, -1.0, 0.5), (-1, -0.5, 0.0)]),
    te(2, 3, &[(1, -1.5, 1.0), (-1, -1.5, 0.0), (-1, -0.5, 0.0)]),
];

type Block = &'static [&'static [u8]];

static BLOCKS4: [((usize, usize), Block); 4] = [
    ((1, 1), &[&[0, 1, 1, 1], &[2, 0, 1, 1], &[2, 2, 0, 1], &[2, 2, 2, 0]]),
    (
        (2, 2),
        &[
            &[3, 4, 4, 4, 4, 6],
            &[5, 3, 4, 4, 8, 4],
            &[5, 5, 3, 10, 4, 4],
            &[5, 5, 10, 3, 4, 4],
            &[5, 9, 5, 5, 3, 4],
            &[7, 5, 5, 5, 5, 3],
        ],
    ),
    (
        (1, 2),
        &[
            &[11, 11, 11, 12, 12, 12],
            &[11, 14, 14, 11, 11, 12],
            &[13, 11, 14, 11, 14, 11],
            &[13, 13, 11, 13, 11, 11],
        ],
    ),
    ((1, 3), &[&[15, 15, 15, 16], &[15, 15, 18, 15], &[15, 19, 15, 15], &[17, 15, 15, 15]]),
];

static BLOCKS5: [((usize, usize), Block); 6] = [
    (
        (1, 1),
        &[&[0, 1, 1, 1, 1], &[2, 0, 1, 1, 1], &[2, 2, 0, 1, 1], &[2, 2, 2, 0, 1], &[2, 2, 2, 2, 0]],
    ),
    (
        (1, 2),
        &[
            &[3, 3, 6, 3, 3, 6, 6, 6, 6, 6],
            &[3, 5, 3, 5, 5, 3, 3, 6, 6, 6],
            &[4, 3, 3, 5, 5, 5, 5, 3, 3, 6],
            &[4, 4, 4, 3, 5, 3, 5, 3, 5, 3],
            &[4, 4, 4, 4, 3, 4, 3, 4, 3, 3],
        ],
    ),
    (
        (1, 3),
        &[
            &[7, 7, 7, 7, 7, 11, 11, 7, 11, 11],
            &[7, 7, 7, 10, 10, 7, 7, 10, 7, 11],
            &[7, 9, 9, 7, 7, 7, 7, 10, 10, 7],
            &[8, 7, 9, 7, 9, 7, 9, 7, 7, 7],
            &[8, 8, 7, 8, 7, 8, 7, 7, 7, 7],
        ],
    ),
    (
        (1, 4),
        &[&[12, 12, 12, 12, 17], &[12, 12, 12, 16, 12], &[12, 12, 15, 12, 12], &[12, 14, 12, 12, 12], &[13, 12, 12, 12, 12]],
    ),
    (
        (2, 2),
        &[
            &[18, 21, 21, 21, 21, 21, 21, 25, 25, 25],
            &[19, 18, 21, 21, 21, 24, 24, 21, 21, 25],
            &[19, 19, 18, 23, 23, 21, 21, 21, 21, 25],
            &[19, 19, 23, 18, 21, 21, 24, 21, 24, 21],
            &[19, 19, 23, 19, 18, 23, 21, 23, 21, 21],
            &[19, 22, 19, 19, 23, 18, 21, 21, 24, 21],
            &[19, 22, 19, 22, 19, 19, 18, 23, 21, 21],
            &[20, 19, 19, 19, 23, 19, 23, 18, 21, 21],
            &[20, 19, 19, 22, 19, 22, 19, 19, 18, 21],
            &[20, 20, 20, 19, 19, 19, 19, 19, 19, 18],
        ],
    ),
    (
        (2, 3),
        &[
            &[26, 26, 26, 29, 29, 29, 29, 29, 29, 39],
            &[26, 28, 28, 26, 26, 29, 29, 29, 38, 29],
            &[26, 28, 28, 28, 28, 26, 26, 37, 29, 29],
            &[27, 26, 28, 26, 28, 29, 36, 26, 29, 29],
            &[27, 27, 26, 27, 26, 35, 29, 26, 29, 29],
            &[27, 26, 28, 28, 34, 26, 28, 28, 26, 29],
            &[27, 27, 26, 33, 28, 27, 26, 28, 26, 29],
            &[27, 27, 32, 26, 28, 26, 28, 28, 28, 26],
            &[27, 31, 27, 27, 26, 27, 26, 28, 28, 26],
            &[30, 27, 27, 27, 27, 27, 27, 26, 26, 26],
        ],
    ),
];

/// Diagonal conjugation exponents, in units of k/2, per representation.
static SHIFTS4: [&[f64]; 3] = [&[0.0; 4], &[-1.0, 0.0, 0.0, 0.0, 0.0, 1.0], &[0.0; 4]];
static SHIFTS5_PRINTED: [&[f64]; 4] = [
    &[0.0, 0.0, 0.0, 0.5, 0.5],
    &[-1.0, -1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.5],
    &[-1.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    &[-0.5, -0.5, 0.0, 0.5, 0.5],
];
static SHIFTS5_BOUNDED: [&[f64]; 4] = [
    &[0.0, 0.0, 0.0, 0.5, 0.5],
    &[-1.0, -1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.5],
    &[-1.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.5, 2.0],
    &[-0.5, -0.5, 0.0, 1.0, 1.0],
];

static CONST4: [[i32; 4]; 14] = [
    [-3, 1, 1, 1],
    [1, -3, 1, 1],
    [1, 1, -3, 1],
    [1, 1, 1, -3],
    [-2, -2, 2, 2],
    [-2, 2, -2, 2],
    [-2, 2, 2, -2],
    [2, -2, -2, 2],
    [2, -2, 2, -2],
    [2, 2, -2, -2],
    [-1, -1, -1, 3],
    [-1, -1, 3, -1],
    [-1, 3, -1, -1],
    [3, -1, -1, -1],
];

static CONST5: [[i32; 5]; 30] = [
    [-4, 1, 1, 1, 1],
    [1, -4, 1, 1, 1],
    [1, 1, -4, 1, 1],
    [1, 1, 1, -4, 1],
    [1, 1, 1, 1, -4],
    [-3, -3, 2, 2, 2],
    [-3, 2, -3, 2, 2],
    [2, -3, -3, 2, 2],
    [-3, 2, 2, -3, 2],
    [-3, 2, 2, 2, -3],
    [2, -3, 2, -3, 2],
    [2, -3, 2, 2, -3],
    [2, 2, -3, -3, 2],
    [2, 2, -3, 2, -3],
    [2, 2, 2, -3, -3],
    [-2, -2, -2, 3, 3],
    [-2, -2, 3, -2, 3],
    [-2, -2, 3, 3, -2],
    [-2, 3, -2, -2, 3],
    [-2, 3, -2, 3, -2],
    [3, -2, -2, -2, 3],
    [3, -2, -2, 3, -2],
    [-2, 3, 3, -2, -2],
    [3, -2, 3, -2, -2],
    [3, 3, -2, -2, -2],
    [-1, -1, -1, -1, 4],
    [-1, -1, -1, 4, -1],
    [-1, -1, 4, -1, -1],
    [-1, 4, -1, -1, -1],
    [4, -1, -1, -1, -1],
];

/// Which diagonal conjugation to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ShiftChoice {
    /// The tabulated shifts; for sl(5) some entries then grow like e^{|k|/4}.
    Printed,
    /// Shifts for which every entry stays bounded in k (identical for sl(4)).
    #[default]
    Bounded,
}

/// A kernel entry before conjugation: table index, and whether it is
/// evaluated at -k (Hermitian partner of a tabulated entry).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntryRef {
    pub index: u8,
    pub flipped: bool,
}

/// An entry of the conjugated matrix whose large-|k| growth is not bounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    /// +1 or -1: the side of the k axis on which the entry grows.
    pub side: i32,
    /// Growth rate per unit |k|.
    pub rate: f64,
}

/// `e^{|k|/2}`-scaled common kernel, evaluated directly (used for |k| < 1).
pub fn common_kernel(n: usize, a: usize, b: usize, k: f64) -> f64 {
    let (mi, ma) = (a.min(b) as f64, a.max(b) as f64);
    let nf = n as f64;
    let delta = if a == b { 1.0 } else { 0.0 };
    if k.abs() < 1e-14 {
        return mi * (nf - ma) / nf - delta;
    }
    (k.abs() / 2.0).exp() * (mi * k / 2.0).sinh() * ((nf - ma) * k / 2.0).sinh()
        / ((k / 2.0).sinh() * (nf * k / 2.0).sinh())
        - delta
}

fn table(n: usize) -> Result<&'static [TableEntry]> {
    match n {
        4 => Ok(&TABLE4),
        5 => Ok(&TABLE5),
        _ => Err(CoreError::Unsupported(alloc::format!("kernel tables exist for n = 4, 5 only, got {n}"))),
    }
}

/// Number of distinct tabulated kernels for rank n.
pub fn table_len(n: usize) -> Result<usize> {
    table(n).map(<[TableEntry]>::len)
}

/// Tabulated kernel number `idx` at k, before any conjugation.
pub fn table_kernel(n: usize, idx: usize, k: f64) -> Result<f64> {
    let t = *table(n)?
        .get(idx)
        .ok_or_else(|| CoreError::Unsupported(alloc::format!("no kernel {idx} for n = {n}")))?;
    Ok(common_kernel(n, t.a, t.b, k)
        + t.terms.iter().map(|&(c, alpha, gamma)| c as f64 * (alpha * k - gamma * k.abs()).exp()).sum::<f64>())
}

/// Representations (a, b) of tabulated kernel `idx`.
pub fn table_reps(n: usize, idx: usize) -> Result<(usize, usize)> {
    let t = table(n)?[idx];
    Ok((t.a, t.b))
}

/// Correction terms `(c, α, γ)` of tabulated kernel `idx`.
pub fn table_terms(n: usize, idx: usize) -> Result<&'static [(i32, f64, f64)]> {
    Ok(table(n)?[idx].terms)
}

fn quarter(x: f64) -> i32 {
    (x * 4.0).round() as i32
}

/// Complete kernel system for one rank.
#[derive(Debug, Clone)]
pub struct KernelSystem {
    n: usize,
    choice: ShiftChoice,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    table: &'static [TableEntry],
    entries: Vec<EntryRef>,
    /// Conjugation exponent per row (units of k/2), flattened.
    shifts: Vec<f64>,
}

impl KernelSystem {
    pub fn new(n: usize, choice: ShiftChoice) -> Result<Self> {
        let table = table(n)?;
        let (blocks, shifts): (&[((usize, usize), Block)], &[&[f64]]) = match (n, choice) {
            (4, _) => (&BLOCKS4, &SHIFTS4),
            (_, ShiftChoice::Printed) => (&BLOCKS5, &SHIFTS5_PRINTED),
            (_, ShiftChoice::Bounded) => (&BLOCKS5, &SHIFTS5_BOUNDED),
        };
        let dims: Vec<usize> = (1..n).map(|a| binomial(n, a)).collect();
        let mut offsets = vec![0];
        for d in &dims {
            offsets.push(offsets.last().unwrap() + d);
        }
        let total = *offsets.last().unwrap();
        let blocks = fill_blocks(n, &dims, blocks);
        let mut entries = Vec::with_capacity(total * total);
        for i in 1..n {
            for r in 0..dims[i - 1] {
                for j in 1..n {
                    entries.extend_from_slice(&blocks[(i - 1) * (n - 1) + j - 1][r]);
                }
            }
        }
        let shifts = shifts.iter().flat_map(|s| s.iter().copied()).collect();
        Ok(Self { n, choice, dims, offsets, table, entries, shifts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn choice(&self) -> ShiftChoice {
        self.choice
    }

    /// Total number of auxiliary functions, 2^n - 2.
    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Block sizes C(n, a), a = 1..n-1.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Row offset of representation a.
    pub fn offset(&self, a: usize) -> usize {
        self.offsets[a - 1]
    }

    /// Representation a of a flattened index.
    pub fn rep_of(&self, idx: usize) -> usize {
        (1..self.n).find(|&a| idx < self.offsets[a]).unwrap_or(self.n - 1)
    }

    pub fn entry_ref(&self, r: usize, c: usize) -> EntryRef {
        self.entries[r * self.dim() + c]
    }

    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }

    /// Conjugation exponent p of entry (r, c): the entry carries e^{pk}.
    fn p(&self, r: usize, c: usize) -> f64 {
        (self.shifts[c] - self.shifts[r]) / 2.0
    }

    /// Exact numerator of entry (r, c) on one side of the k axis: map from
    /// slope (quarter units) to integer coefficient, to be divided by
    /// `(1-w)(1-w^n)`.
    pub fn entry_slopes(&self, r: usize, c: usize, side: i32) -> BTreeMap<i32, i64> {
        let e = self.entry_ref(r, c);
        let t = self.table[e.index as usize];
        let s = if e.flipped { -1 } else { 1 };
        let n = self.n as i32;
        let (mi, ma) = (t.a.min(t.b) as i32, t.a.max(t.b) as i32);
        let p4 = quarter(self.p(r, c));
        let mut out = BTreeMap::new();
        let mut add = |slope: i32, coef: i64| {
            let v = out.entry(slope).or_insert(0);
            *v += coef;
        };
        // (1 - w^mi)(1 - w^(n-ma)) e^{-(ma-mi)|k|/2}, minus δ(1-w)(1-w^n).
        for (e1, c1) in [(0, 1i64), (mi, -1)] {
            for (e2, c2) in [(0, 1i64), (n - ma, -1)] {
                add(p4 - 2 * (ma - mi) * side - 4 * (e1 + e2) * side, c1 * c2);
            }
        }
        let denom = [(0, 1i64), (1, -1), (n, -1), (n + 1, 1)];
        if t.a == t.b {
            for (ex, cd) in denom {
                add(p4 - 4 * ex * side, -cd);
            }
        }
        for &(cc, alpha, gamma) in t.terms {
            let base = p4 + quarter(alpha) * s - quarter(gamma) * side;
            for (ex, cd) in denom {
                add(base - 4 * ex * side, cc as i64 * cd);
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Conjugated entry (r, c) at k.
    pub fn entry(&self, r: usize, c: usize, k: f64) -> f64 {
        if k.abs() < 1.0 {
            let e = self.entry_ref(r, c);
            let t = self.table[e.index as usize];
            let ks = if e.flipped { -k } else { k };
            let mut v = common_kernel(self.n, t.a, t.b, k);
            for &(cc, alpha, gamma) in t.terms {
                v += cc as f64 * (alpha * ks - gamma * k.abs()).exp();
            }
            return (self.p(r, c) * k).exp() * v;
        }
        let side = if k > 0.0 { 1 } else { -1 };
        let w = (-k.abs()).exp();
        let den = (1.0 - w) * (1.0 - w.powi(self.n as i32));
        let num: f64 = self
            .entry_slopes(r, c, side)
            .iter()
            .map(|(&sl, &cf)| cf as f64 * (sl as f64 / 4.0 * k).exp())
            .sum();
        num / den
    }

    /// Entry (r, c) at k without the diagonal conjugation.
    pub fn raw_entry(&self, r: usize, c: usize, k: f64) -> f64 {
        let e = self.entry_ref(r, c);
        table_kernel(self.n, e.index as usize, if e.flipped { -k } else { k }).expect("valid index")
    }

    /// Unconjugated matrix at k, row-major.
    pub fn raw_matrix(&self, k: f64) -> Vec<f64> {
        let d = self.dim();
        (0..d * d).map(|i| self.raw_entry(i / d, i % d, k)).collect()
    }

    /// Coefficient rows of the constant terms (multiply by β/n · μ).
    pub fn constant_rows(&self) -> Vec<Vec<i32>> {
        match self.n {
            4 => CONST4.iter().map(|r| r.to_vec()).collect(),
            _ => CONST5.iter().map(|r| r.to_vec()).collect(),
        }
    }

    /// Full conjugated kernel matrix at k, row-major.
    pub fn matrix(&self, k: f64) -> Vec<f64> {
        let d = self.dim();
        let mut out = vec![0.0; d * d];
        for r in 0..d {
            for c in 0..d {
                out[r * d + c] = self.entry(r, c, k);
            }
        }
        out
    }

    /// K̂(0), which multiplies the asymptotic values in the equations.
    pub fn k0(&self) -> Vec<f64> {
        self.matrix(0.0)
    }

    /// Conjugated driving term: `sinh((n-a)k/2)/sinh(nk/2) · e^{-e k/2}`.
    pub fn driving(&self, k: f64) -> Vec<f64> {
        let n = self.n as f64;
        let ak = k.abs();
        (0..self.dim())
            .map(|idx| {
                let a = self.rep_of(idx) as f64;
                let base = if ak < 1e-12 {
                    (n - a) / n
                } else {
                    (-a * ak / 2.0).exp() * (-(-(n - a) * ak).exp_m1()) / (-(-n * ak).exp_m1())
                };
                base * (-self.shifts[idx] * k / 2.0).exp()
            })
            .collect()
    }

    /// Constant terms: `c_i = (β/n) Σ_j C_ij μ_j`.
    pub fn constants(&self, beta: f64, mu: &[f64]) -> Vec<f64> {
        let n = self.n as f64;
        self.constant_rows()
            .iter()
            .map(|r| beta / n * r.iter().zip(mu).map(|(&c, &m)| c as f64 * m).sum::<f64>())
            .collect()
    }

    /// Entries that grow exponentially in |k|.
    pub fn violations(&self) -> Vec<Violation> {
        let d = self.dim();
        let mut out = Vec::new();
        for r in 0..d {
            for c in 0..d {
                for side in [1, -1] {
                    let worst = self.entry_slopes(r, c, side).keys().map(|&s| s * side).max();
                    if let Some(m) = worst.filter(|&m| m > 0) {
                        out.push(Violation { row: r, col: c, side, rate: m as f64 / 4.0 });
                    }
                }
            }
        }
        out
    }
}

/// Completes the tabulated blocks using the Hermitian partner
/// `M_ij(k) = M_ji(-k)^T` and the reflection
/// `M_ij[r][c] = M_{n-j,n-i}[d_j-1-c][d_i-1-r]`.
fn fill_blocks(n: usize, dims: &[usize], given: &[((usize, usize), Block)]) -> Vec<Vec<Vec<EntryRef>>> {
    let m = n - 1;
    let mut blocks: Vec<Option<Vec<Vec<EntryRef>>>> = vec![None; m * m];
    for &((i, j), rows) in given {
        blocks[(i - 1) * m + j - 1] = Some(
            rows.iter()
                .map(|row| row.iter().map(|&index| EntryRef { index, flipped: false }).collect())
                .collect(),
        );
    }
    let mut changed = true;
    while changed {
        changed = false;
        for i in 1..n {
            for j in 1..n {
                if blocks[(i - 1) * m + j - 1].is_some() {
                    continue;
                }
                let (di, dj) = (dims[i - 1], dims[j - 1]);
                let filled = if let Some(src) = &blocks[(j - 1) * m + i - 1] {
                    (0..di)
                        .map(|r| (0..dj).map(|c| EntryRef { flipped: !src[c][r].flipped, ..src[c][r] }).collect())
                        .collect()
                } else if let Some(src) = &blocks[(n - j - 1) * m + n - i - 1] {
                    (0..di).map(|r| (0..dj).map(|c| src[dj - 1 - c][di - 1 - r]).collect()).collect()
                } else {
                    continue;
                };
                blocks[(i - 1) * m + j - 1] = Some(filled);
                changed = true;
            }
        }
    }
    blocks.into_iter().map(|b| b.expect("tables determine every block")).collect()
}

/// Reflection of a square matrix across its anti-diagonal within the block
/// structure: `R(M)_ij[r][c] = M_{n-j,n-i}[d_j-1-c][d_i-1-r]`.
pub fn reflect(sys: &KernelSystem, m: &[f64]) -> Vec<f64> {
    let d = sys.dim();
    let n = sys.n;
    let mut out = vec![0.0; d * d];
    for i in 1..n {
        for j in 1..n {
            let (di, dj) = (sys.dims[i - 1], sys.dims[j - 1]);
            for r in 0..di {
                for c in 0..dj {
                    let sr = sys.offset(n - j) + dj - 1 - c;
                    let sc = sys.offset(n - i) + di - 1 - r;
                    out[(sys.offset(i) + r) * d + sys.offset(j) + c] = m[sr * d + sc];
                }
            }
        }
    }
    out
}
