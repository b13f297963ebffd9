//! Rectangular Yangian Young tableaux with index-range cells.
//!
//! A cell at 1-based (row r, column c) of an a×s tableau evaluates its box at
//! `x + i(r - a/2) - i(c - s/2)`: the spectral parameter grows downwards and
//! shrinks to the right. Shifts are kept as integers in units of i/2.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::{rel_residual, RootData, C64};

/// One cell: the admissible index range `lo..=hi` (fixed when `lo == hi`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub lo: u8,
    pub hi: u8,
}

impl Cell {
    pub const fn fixed(j: u8) -> Self {
        Self { lo: j, hi: j }
    }

    pub const fn range(lo: u8, hi: u8) -> Self {
        Self { lo, hi }
    }
}

/// Rectangular tableau of range cells with a global shift (units of i/2).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RangeTableau {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
    shift: i32,
}

impl RangeTableau {
    /// `cells` in row-major order.
    pub fn new(rows: usize, cols: usize, cells: Vec<Cell>) -> Result<Self> {
        if cells.len() != rows * cols {
            return Err(domain("cell count does not match the shape"));
        }
        if cells.iter().any(|c| c.lo == 0 || c.lo > c.hi) {
            return Err(domain("cell ranges must satisfy 1 <= lo <= hi"));
        }
        Ok(Self { rows, cols, cells, shift: 0 })
    }

    /// Single column from `(lo, hi)` ranges, top to bottom.
    pub fn column(ranges: &[(u8, u8)]) -> Self {
        let cells = ranges.iter().map(|&(lo, hi)| Cell::range(lo, hi)).collect();
        Self { rows: ranges.len(), cols: 1, cells, shift: 0 }
    }

    /// a×s rectangle with every cell ranging over 1..=n: the fused eigenvalue
    /// Λ_{a,s}.
    pub fn full(n: usize, a: usize, s: usize) -> Self {
        Self { rows: a, cols: s, cells: vec![Cell::range(1, n as u8); a * s], shift: 0 }
    }

    pub fn with_shift(mut self, half_units: i32) -> Self {
        self.shift = half_units;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Global shift in units of i/2.
    pub fn shift(&self) -> i32 {
        self.shift
    }

    /// Cell at 0-based (row, col).
    pub fn cell(&self, r: usize, c: usize) -> Cell {
        self.cells[r * self.cols + c]
    }

    pub fn max_index(&self) -> u8 {
        self.cells.iter().map(|c| c.hi).max().unwrap_or(0)
    }

    /// Shift of the box at 0-based (row, col) in units of i/2.
    pub fn box_shift(&self, r: usize, c: usize) -> i32 {
        self.shift + 2 * (r as i32 + 1) - self.rows as i32 - 2 * (c as i32 + 1) + self.cols as i32
    }

    // ub[r][c] = min(hi[r][c], ub[r+1][c] - 1): prunes fillings that cannot
    // complete the strictly increasing column below.
    fn upper_bounds(&self) -> Vec<i32> {
        let (a, s) = (self.rows, self.cols);
        let mut ub = vec![0i32; a * s];
        for c in 0..s {
            for r in (0..a).rev() {
                let own = self.cell(r, c).hi as i32;
                ub[r * s + c] = if r + 1 < a { own.min(ub[(r + 1) * s + c] - 1) } else { own };
            }
        }
        ub
    }

    fn bounds(&self, idx: usize, fill: &[u8], ub: &[i32]) -> (i32, i32) {
        let a = self.rows;
        let s = self.cols;
        let (c, r) = (idx / a, idx % a);
        let mut lo = self.cell(r, c).lo as i32;
        if r > 0 {
            lo = lo.max(fill[(r - 1) * s + c] as i32 + 1);
        }
        if c > 0 {
            lo = lo.max(fill[r * s + c - 1] as i32);
        }
        (lo, ub[r * s + c])
    }

    /// Visit every admissible filling (row-major slice) in lexicographic
    /// column-major order.
    pub fn for_each_filling<F: FnMut(&[u8])>(&self, mut f: F) {
        let total = self.rows * self.cols;
        let ub = self.upper_bounds();
        let mut fill = vec![0u8; total];
        self.visit(0, &mut fill, &ub, &mut f);
    }

    fn visit<F: FnMut(&[u8])>(&self, idx: usize, fill: &mut [u8], ub: &[i32], f: &mut F) {
        if idx == fill.len() {
            f(fill);
            return;
        }
        let (lo, hi) = self.bounds(idx, fill, ub);
        let (c, r) = (idx / self.rows, idx % self.rows);
        for v in lo..=hi {
            fill[r * self.cols + c] = v as u8;
            self.visit(idx + 1, fill, ub, f);
        }
    }

    pub fn fillings(&self) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        self.for_each_filling(|f| out.push(f.to_vec()));
        out
    }

    pub fn count(&self) -> usize {
        let mut n = 0;
        self.for_each_filling(|_| n += 1);
        n
    }

    /// True when no admissible filling exists (the value is an exact zero).
    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// Sum over fillings of the product of box values, memoizing λ per
    /// (species, box shift).
    pub fn eval(&self, data: &RootData, x: C64) -> Result<C64> {
        if self.rows * self.cols == 0 {
            return Ok(C64::new(1.0, 0.0));
        }
        let mut memo = Memo::new(self, data.n);
        let ub = self.upper_bounds();
        let mut fill = vec![0u8; self.rows * self.cols];
        self.sum_from(0, &mut fill, &ub, &mut memo, data, x)
    }

    fn sum_from(
        &self,
        idx: usize,
        fill: &mut [u8],
        ub: &[i32],
        memo: &mut Memo,
        data: &RootData,
        x: C64,
    ) -> Result<C64> {
        if idx == fill.len() {
            return Ok(C64::new(1.0, 0.0));
        }
        let (lo, hi) = self.bounds(idx, fill, ub);
        let (c, r) = (idx / self.rows, idx % self.rows);
        let h = self.box_shift(r, c);
        let mut acc = C64::new(0.0, 0.0);
        for v in lo..=hi {
            fill[r * self.cols + c] = v as u8;
            let rest = self.sum_from(idx + 1, fill, ub, memo, data, x)?;
            if rest != C64::new(0.0, 0.0) {
                acc += memo.get(data, v as usize, h, x)? * rest;
            }
        }
        Ok(acc)
    }

    /// Reference evaluator: enumerate fillings, multiply box values directly.
    pub fn eval_naive(&self, data: &RootData, x: C64) -> Result<C64> {
        let mut total = C64::new(0.0, 0.0);
        for f in self.fillings() {
            let mut p = C64::new(1.0, 0.0);
            for r in 0..self.rows {
                for c in 0..self.cols {
                    let h = self.box_shift(r, c);
                    p *= data.lambda(f[r * self.cols + c] as usize, half_shift(x, h))?;
                }
            }
            total += p;
        }
        Ok(total)
    }

    /// Columns only: the set of index tuples a single-column tableau admits.
    pub fn column_family(&self) -> BTreeSet<Vec<u8>> {
        let mut out = BTreeSet::new();
        self.for_each_filling(|f| {
            out.insert(f.to_vec());
        });
        out
    }
}

/// `x + i h / 2`.
pub fn half_shift(x: C64, h: i32) -> C64 {
    x + C64::new(0.0, 0.5 * h as f64)
}

struct Memo {
    hmin: i32,
    n: usize,
    vals: Vec<Option<C64>>,
}

impl Memo {
    fn new(t: &RangeTableau, n: usize) -> Self {
        let mut hmin = i32::MAX;
        let mut hmax = i32::MIN;
        for r in 0..t.rows {
            for c in 0..t.cols {
                let h = t.box_shift(r, c);
                hmin = hmin.min(h);
                hmax = hmax.max(h);
            }
        }
        let span = (hmax - hmin + 1) as usize;
        Self { hmin, n, vals: vec![None; span * n] }
    }

    fn get(&mut self, data: &RootData, j: usize, h: i32, x: C64) -> Result<C64> {
        let k = (h - self.hmin) as usize * self.n + (j - 1);
        if let Some(v) = self.vals[k] {
            return Ok(v);
        }
        let v = data.lambda(j, half_shift(x, h))?;
        self.vals[k] = Some(v);
        Ok(v)
    }
}

/// T^{(a,s)}(x) with the conventions T^{(0,s)} = T^{(a,0)} = 1 and
/// T^{(a,s)} = 0 for a > n.
pub fn fused(data: &RootData, a: usize, s: usize, x: C64) -> Result<C64> {
    if a == 0 || s == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    if a > data.n {
        return Ok(C64::new(0.0, 0.0));
    }
    RangeTableau::full(data.n, a, s).eval(data, x)
}

/// Functional identities among tableau sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// T(x-i/2) T(x+i/2) = T^{(a-1,s)} T^{(a+1,s)} + T^{(a,s-1)} T^{(a,s+1)}.
    TSystem { a: usize, s: usize },
    /// Two single boxes split by j < j' (column) or j' <= j (row).
    SimplestFusion,
    /// Two height-a columns split by the cases i..v into (a-1, a+1) column
    /// pairs and one 2-column rectangle.
    FusionMove { a: usize },
}

/// Relative residual of the named identity on arbitrary (not necessarily
/// Bethe) data.
pub fn check_functional_relation(data: &RootData, rel: Relation, x: C64) -> Result<f64> {
    let n = data.n;
    match rel {
        Relation::TSystem { a, s } => {
            if a == 0 || a >= n || s == 0 {
                return Err(domain("t-system needs 1 <= a <= n-1 and s >= 1"));
            }
            let lhs = fused(data, a, s, half_shift(x, -1))? * fused(data, a, s, half_shift(x, 1))?;
            let rhs = fused(data, a - 1, s, x)? * fused(data, a + 1, s, x)?
                + fused(data, a, s - 1, x)? * fused(data, a, s + 1, x)?;
            Ok(rel_residual(lhs, rhs))
        }
        Relation::SimplestFusion => {
            let mut col = C64::new(0.0, 0.0);
            let mut row = C64::new(0.0, 0.0);
            for j in 1..=n {
                let lo = data.lambda(j, half_shift(x, -1))?;
                for jh in 1..=n {
                    let v = lo * data.lambda(jh, half_shift(x, 1))?;
                    if j < jh {
                        col += v;
                    } else {
                        row += v;
                    }
                }
            }
            let lhs = col + row;
            let r_col = rel_residual(col, fused(data, 2, 1, x)?);
            let r_row = rel_residual(row, fused(data, 1, 2, x)?);
            let r_all = rel_residual(lhs, fused(data, 2, 1, x)? + fused(data, 1, 2, x)?);
            Ok(r_col.max(r_row).max(r_all))
        }
        Relation::FusionMove { a } => {
            if a == 0 || a >= n {
                return Err(domain("fusion move needs 1 <= a <= n-1"));
            }
            let sums = fusion_case_sums(data, a, x)?;
            let pairs: C64 = sums[..a].iter().sum();
            let rect = sums[a];
            let r1 = rel_residual(pairs, fused(data, a - 1, 1, x)? * fused(data, a + 1, 1, x)?);
            let r2 = rel_residual(rect, fused(data, a, 2, x)?);
            Ok(r1.max(r2))
        }
    }
}

/// Column filling values of an a×1 full column at shift h.
fn column_terms(data: &RootData, a: usize, h: i32, x: C64) -> Result<Vec<(Vec<u8>, C64)>> {
    let t = RangeTableau::full(data.n, a, 1).with_shift(h);
    t.fillings()
        .into_iter()
        .map(|f| {
            let mut p = C64::new(1.0, 0.0);
            for (r, &j) in f.iter().enumerate() {
                p *= data.lambda(j as usize, half_shift(x, t.box_shift(r, 0)))?;
            }
            Ok((f, p))
        })
        .collect()
}

/// Case index 0..a-1 for i..iv-type splits (first m from the bottom with
/// j_{m+1} > i_m), or a for the rectangle case.
pub fn fusion_case(upper: &[u8], lower: &[u8]) -> usize {
    let a = upper.len();
    for m in (1..=a).rev() {
        if lower[m - 1] > upper[m - 1] {
            return a - m;
        }
    }
    a
}

/// Rearranges a non-rectangle case into the (a-1, a+1) column pair.
pub fn fusion_rearrange(upper: &[u8], lower: &[u8]) -> Option<(Vec<u8>, Vec<u8>)> {
    let a = upper.len();
    let case = fusion_case(upper, lower);
    if case == a {
        return None;
    }
    let m = a - case;
    // short = (j_2..j_m, i_{m+1}..i_a), long = (i_1..i_m, j_{m+1}..j_{a+1})
    let mut short: Vec<u8> = lower[..m - 1].to_vec();
    short.extend_from_slice(&upper[m..]);
    let mut long: Vec<u8> = upper[..m].to_vec();
    long.extend_from_slice(&lower[m - 1..]);
    Some((short, long))
}

fn fusion_case_sums(data: &RootData, a: usize, x: C64) -> Result<Vec<C64>> {
    // Upper column i_1..i_a at x - i/2, lower column j_2..j_{a+1} at x + i/2.
    let upper = column_terms(data, a, -1, x)?;
    let lower = column_terms(data, a, 1, x)?;
    let mut sums = vec![C64::new(0.0, 0.0); a + 1];
    for (fu, vu) in &upper {
        for (fl, vl) in &lower {
            sums[fusion_case(fu, fl)] += vu * vl;
        }
    }
    Ok(sums)
}

/// Checks that the case i..iv rearrangement is a bijection onto all pairs of
/// admissible (a-1, a+1) columns.
pub fn fusion_move_is_bijective(n: usize, a: usize) -> bool {
    let up = RangeTableau::full(n, a, 1).fillings();
    let mut seen = BTreeSet::new();
    for u in &up {
        for l in &up {
            if let Some((s, g)) = fusion_rearrange(u, l) {
                let ok = s.windows(2).all(|w| w[0] < w[1]) && g.windows(2).all(|w| w[0] < w[1]);
                if !ok || !seen.insert((s, g)) {
                    return false;
                }
            }
        }
    }
    let short = if a == 1 { 1 } else { RangeTableau::full(n, a - 1, 1).count() };
    let long = RangeTableau::full(n, a + 1, 1).count();
    seen.len() == short * long
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::binomial;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_data(n: usize, rng: &mut ChaCha8Rng) -> RootData {
        let roots = (1..n)
            .map(|_| (0..2).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.2..0.2))).collect())
            .collect();
        let mu = (0..n).map(|_| rng.gen_range(-0.3..0.3)).collect();
        RootData::new(n, 2, 0.3, 1.0, mu, roots).unwrap()
    }

    #[test]
    fn counting_examples() {
        let d = RootData::counting(4);
        let x = C64::new(0.3, 0.0);
        assert_eq!(RangeTableau::column(&[(1, 4)]).eval(&d, x).unwrap().re, 4.0);
        let t = RangeTableau::column(&[(1, 2), (2, 4)]);
        assert_eq!(t.count(), 5);
        assert_eq!(t.eval(&d, x).unwrap().re, 5.0);
        let d2 = RootData::counting(2);
        assert_eq!(RangeTableau::full(2, 1, 2).eval(&d2, x).unwrap().re, 3.0);
        assert_eq!(RangeTableau::full(2, 2, 1).eval(&d2, x).unwrap().re, 1.0);
    }

    #[test]
    fn column_counts_are_binomial() {
        for n in 1..=6 {
            for a in 1..=n {
                assert_eq!(RangeTableau::full(n, a, 1).count(), binomial(n, a));
            }
        }
    }

    #[test]
    fn filling_order_is_column_major_lexicographic() {
        let f = RangeTableau::full(4, 2, 1).fillings();
        let expect: Vec<Vec<u8>> =
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]];
        assert_eq!(f, expect);
    }

    #[test]
    fn empty_filling_is_zero() {
        let t = RangeTableau::column(&[(3, 3), (2, 3)]);
        assert!(t.is_empty());
        assert_eq!(t.eval(&RootData::counting(3), C64::new(0.1, 0.0)).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn box_shift_convention() {
        // 2x2 rectangle: top-left at x, bottom-left at x+i, top-right at x-i.
        let t = RangeTableau::full(3, 2, 2);
        assert_eq!(t.box_shift(0, 0), 0);
        assert_eq!(t.box_shift(1, 0), 2);
        assert_eq!(t.box_shift(0, 1), -2);
        let c = RangeTableau::full(3, 2, 1);
        assert_eq!((c.box_shift(0, 0), c.box_shift(1, 0)), (-1, 1));
    }

    #[test]
    fn simplest_fusion_counting() {
        let d = RootData::counting(2);
        let r = check_functional_relation(&d, Relation::TSystem { a: 1, s: 1 }, C64::new(0.2, 0.0));
        assert_eq!(r.unwrap(), 0.0);
    }

    #[test]
    fn relations_on_random_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=5 {
            let d = random_data(n, &mut rng);
            let x = C64::new(0.37, 0.61);
            assert!(check_functional_relation(&d, Relation::SimplestFusion, x).unwrap() < 1e-12);
            for a in 1..n {
                let r = check_functional_relation(&d, Relation::FusionMove { a }, x).unwrap();
                assert!(r < 1e-11, "n={n} a={a} r={r}");
                assert!(fusion_move_is_bijective(n, a));
            }
        }
    }

    #[test]
    fn memo_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = random_data(4, &mut rng);
        let x = C64::new(-0.21, 0.55);
        for (a, s) in [(1, 3), (2, 2), (3, 2), (2, 3)] {
            let t = RangeTableau::full(4, a, s);
            let m = t.eval(&d, x).unwrap();
            let v = t.eval_naive(&d, x).unwrap();
            assert!((m - v).norm() <= 1e-12 * v.norm());
        }
    }
}
