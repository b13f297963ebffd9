//! Pole-cancellation structure of the fundamental representations.
//!
//! Each vertex of the adjacency graph is a strictly increasing a-tuple (one
//! term of the column sum). Two vertices are joined when they differ in a
//! single row r by k ↔ k+1; the pole of q_k at `x + iδ`, `δ = r - (a+1)/2`,
//! then cancels between the two terms by the Bethe equations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use core::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::auxiliary::combinations;
use crate::error::{CoreError, Result};
use crate::tableau::half_shift;
use crate::{RangeTableau, RootData, C64};

/// A factor q_level(x + i·shift2/2). Levels 0 and n stand for Φ₋ and Φ₊.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub level: usize,
    /// Shift in units of i/2.
    pub shift2: i32,
}

impl Factor {
    /// Shift δ in units of i.
    pub fn delta(&self) -> f64 {
        self.shift2 as f64 / 2.0
    }

    pub fn eval(&self, data: &RootData, x: C64) -> Result<C64> {
        data.q(self.level, half_shift(x, self.shift2))
    }
}

/// One labelled edge between vertices i < j (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub level: usize,
    /// δ in units of i.
    pub shift: f64,
}

impl Edge {
    pub fn factor(&self) -> Factor {
        Factor { level: self.level, shift2: (2.0 * self.shift).round() as i32 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjacencyMatrix {
    pub n: usize,
    pub a: usize,
    pub vertices: Vec<Vec<u8>>,
    pub edges: Vec<Edge>,
}

fn format_shift(shift2: i32) -> String {
    if shift2 % 2 == 0 {
        format!("{}", shift2 / 2)
    } else {
        format!("{shift2}/2")
    }
}

impl AdjacencyMatrix {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    /// Label at (i, j), symmetric, `None` on the diagonal and for
    /// unconnected pairs.
    pub fn entry(&self, i: usize, j: usize) -> Option<Factor> {
        let (lo, hi) = (i.min(j), i.max(j));
        self.edges.iter().find(|e| e.i == lo && e.j == hi).map(Edge::factor)
    }

    /// Matrix rows as `0 & q_1^{(0)} & …`, one line per row.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.size() {
            let row: Vec<String> = (0..self.size())
                .map(|j| match self.entry(i, j) {
                    None => String::from("0"),
                    Some(f) => format!("q_{}^{{({})}}", f.level, format_shift(f.shift2)),
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(" & "));
        }
        out
    }
}

/// Adjacency matrix of representation a of sl(n), vertices in lexicographic
/// order.
pub fn adjacency_matrix(n: usize, a: usize) -> Result<AdjacencyMatrix> {
    if a == 0 || a >= n {
        return Err(crate::error::domain("need 1 <= a <= n-1"));
    }
    let vertices = combinations(n, a);
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let diff: Vec<usize> = (0..a).filter(|&r| vertices[i][r] != vertices[j][r]).collect();
            if let [r] = diff[..] {
                let (u, v) = (vertices[i][r], vertices[j][r]);
                if u.abs_diff(v) == 1 {
                    let shift2 = 2 * (r as i32 + 1) - a as i32 - 1;
                    edges.push(Edge { i, j, level: u.min(v) as usize, shift: shift2 as f64 / 2.0 });
                }
            }
        }
    }
    Ok(AdjacencyMatrix { n, a, vertices, edges })
}

/// Partial column sum together with the factors that turn it into a
/// polynomial p(x).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EafFactorization {
    pub n: usize,
    pub a: usize,
    /// Vertex indices (0-based, sorted).
    pub subset: Vec<usize>,
    /// Per-row index ranges of the equivalent range column.
    pub ranges: Vec<(u8, u8)>,
    /// q factors multiplied in (poles not cancelled inside the subset).
    pub unremoved_poles: Vec<Factor>,
    /// Poles cancelled between members of the subset.
    pub removed_poles: Vec<Factor>,
    /// Φ factors (level 0 or n) shared by every term, with multiplicity.
    pub common_zeros: Vec<(Factor, u32)>,
}

/// Exponent bookkeeping of one term: factor → power.
fn term_factors(n: usize, tuple: &[u8]) -> BTreeMap<Factor, i32> {
    let a = tuple.len();
    let mut out = BTreeMap::new();
    let mut add = |level: usize, shift2: i32, p: i32| {
        *out.entry(Factor { level, shift2 }).or_insert(0) += p;
    };
    for (r, &v) in tuple.iter().enumerate() {
        let v = v as usize;
        let h = 2 * (r as i32 + 1) - a as i32 - 1;
        add(0, h, 1);
        add(n, h, 1);
        add(v - 1, h - 2, 1);
        add(v - 1, h, -1);
        add(v, h + 2, 1);
        add(v, h, -1);
    }
    out.retain(|_, p| *p != 0);
    out
}

impl EafFactorization {
    pub fn column(&self) -> RangeTableau {
        RangeTableau::column(&self.ranges)
    }

    /// Degree of p for the given data: a·N + Σ deg(unremoved) - Σ N/2 per
    /// common Φ.
    pub fn degree(&self, data: &RootData) -> usize {
        let plus: usize = self.a * data.trotter + self.unremoved_poles.iter().map(|f| data.degree(f.level)).sum::<usize>();
        let minus: usize = self.common_zeros.iter().map(|(_, m)| *m as usize * data.trotter / 2).sum();
        plus - minus
    }

    /// Σ over the subset of the tableau terms.
    pub fn eval_sum(&self, data: &RootData, x: C64) -> Result<C64> {
        self.column().eval(data, x)
    }

    /// p(x) = Π unremoved / Π common · Σ.
    pub fn eval_p(&self, data: &RootData, x: C64) -> Result<C64> {
        let mut v = self.eval_sum(data, x)?;
        for f in &self.unremoved_poles {
            v *= f.eval(data, x)?;
        }
        for (f, m) in &self.common_zeros {
            let z = f.eval(data, x)?;
            if z.norm() == 0.0 {
                return Err(CoreError::ZeroDenominator(format!("common factor {f:?}")));
            }
            v /= z.powu(*m);
        }
        Ok(v)
    }
}

/// Range column equivalent to a vertex subset, if one exists.
fn as_range(vertices: &[Vec<u8>], subset: &[usize]) -> Option<Vec<(u8, u8)>> {
    let a = vertices[0].len();
    let ranges: Vec<(u8, u8)> = (0..a)
        .map(|r| {
            let vals = subset.iter().map(|&i| vertices[i][r]);
            (vals.clone().min().unwrap(), vals.max().unwrap())
        })
        .collect();
    let family = RangeTableau::column(&ranges).column_family();
    let want: BTreeSet<Vec<u8>> = subset.iter().map(|&i| vertices[i].clone()).collect();
    (family == want).then_some(ranges)
}

pub fn eaf_factorization(n: usize, a: usize, subset: &[usize]) -> Result<EafFactorization> {
    let adj = adjacency_matrix(n, a)?;
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    if subset.is_empty() || subset.iter().any(|&i| i >= adj.size()) {
        return Err(CoreError::Unsupported(String::from("subset must be nonempty and within the vertex list")));
    }
    let ranges = as_range(&adj.vertices, &subset)
        .ok_or_else(|| CoreError::Unsupported(format!("subset {subset:?} is not a range column")))?;
    let inside: BTreeSet<usize> = subset.iter().copied().collect();
    let mut unremoved = BTreeSet::new();
    let mut removed = BTreeSet::new();
    for e in &adj.edges {
        match (inside.contains(&e.i), inside.contains(&e.j)) {
            (true, true) => {
                removed.insert(e.factor());
            }
            (true, false) | (false, true) => {
                unremoved.insert(e.factor());
            }
            _ => {}
        }
    }
    let terms: Vec<_> = subset.iter().map(|&i| term_factors(n, &adj.vertices[i])).collect();
    let candidates: BTreeSet<Factor> =
        terms.iter().flat_map(|t| t.keys().copied()).filter(|f| f.level == 0 || f.level == n).collect();
    let common_zeros = candidates
        .into_iter()
        .filter_map(|f| {
            let m = terms.iter().map(|t| t.get(&f).copied().unwrap_or(0)).min().unwrap_or(0);
            (m > 0).then_some((f, m as u32))
        })
        .collect();
    Ok(EafFactorization {
        n,
        a,
        subset,
        ranges,
        unremoved_poles: unremoved.into_iter().collect(),
        removed_poles: removed.into_iter().collect(),
        common_zeros,
    })
}

/// Every distinct nonempty range column of representation a, as vertex
/// subsets.
pub fn range_subsets(n: usize, a: usize) -> Result<Vec<Vec<usize>>> {
    let adj = adjacency_matrix(n, a)?;
    let index: BTreeMap<&Vec<u8>, usize> = adj.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut seen = BTreeSet::new();
    for lo in &adj.vertices {
        for hi in &adj.vertices {
            if lo.iter().zip(hi).any(|(l, h)| l > h) {
                continue;
            }
            let ranges: Vec<(u8, u8)> = lo.iter().zip(hi).map(|(&l, &h)| (l, h)).collect();
            let set: Vec<usize> = RangeTableau::column(&ranges).column_family().iter().map(|t| index[t]).collect();
            if !set.is_empty() {
                seen.insert(set);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Largest residue of Σ at the cancelled pole positions, relative to
/// `rho · mean|Σ|` on the circle. Positions that are also carried by an
/// unremoved factor are skipped (the pole is genuine there).
pub fn residue_check(fact: &EafFactorization, data: &RootData, rho: f64, points: usize) -> Result<f64> {
    let unremoved: BTreeSet<Factor> = fact.unremoved_poles.iter().copied().collect();
    let mut worst: f64 = 0.0;
    for f in fact.removed_poles.iter().filter(|f| !unremoved.contains(f)) {
        for &root in &data.roots[f.level - 1] {
            let x0 = half_shift(root, -f.shift2);
            let mut acc = C64::new(0.0, 0.0);
            let mut scale = 0.0;
            for k in 0..points {
                let th = 2.0 * core::f64::consts::PI * (k as f64 + 0.5) / points as f64;
                let d = C64::from_polar(rho, th);
                let s = fact.eval_sum(data, x0 + d)?;
                acc += d * s;
                scale += s.norm();
            }
            let res = acc.norm() / points as f64;
            let scale = rho * scale / points as f64;
            worst = worst.max(res / scale.max(f64::MIN_POSITIVE));
        }
    }
    Ok(worst)
}

/// Laurent-coefficient test of polynomiality on a circle of radius `radius`:
/// the largest |c_m| R^m over m < 0 and m > degree, relative to max |p|.
pub fn polynomial_defect(fact: &EafFactorization, data: &RootData, radius: f64, points: usize) -> Result<f64> {
    let deg = fact.degree(data) as i32;
    let samples: Vec<(C64, C64)> = (0..points)
        .map(|k| {
            let th = 2.0 * core::f64::consts::PI * (k as f64 + 0.5) / points as f64;
            let z = C64::from_polar(radius, th);
            fact.eval_p(data, z).map(|p| (z, p))
        })
        .collect::<Result<_>>()?;
    let pmax = samples.iter().map(|(_, p)| p.norm()).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for m in (-4..0).chain(deg + 1..deg + 5) {
        let c: C64 = samples.iter().map(|(z, p)| p * z.powi(-m)).sum::<C64>() / points as f64;
        worst = worst.max(c.norm() / pmax);
    }
    Ok(worst)
}
