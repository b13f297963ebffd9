//! Auxiliary functions B = 1 + b as ratios of shifted tableau products.
//!
//! Explicit sets are written in a compact notation: a factor is
//! `cells@h` with cells top to bottom separated by `;` (each `j` or `lo:hi`)
//! and `h` the shift in units of i/2; a ratio is `num factors / den factors`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, CoreError, Result};
use crate::tableau::{fused, half_shift, Cell};
use crate::{rel_residual, RangeTableau, RootData, C64};

/// Uppercase (B) or lowercase (b) member of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Upper,
    Lower,
}

/// Product of tableaux over product of tableaux.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ratio {
    pub num: Vec<RangeTableau>,
    pub den: Vec<RangeTableau>,
}

impl Ratio {
    /// Parses the compact notation described in the module docs.
    pub fn parse(src: &str) -> Result<Self> {
        let (num, den) = src.split_once('/').ok_or_else(|| domain("ratio needs a '/'"))?;
        let side = |s: &str| s.split_whitespace().map(parse_factor).collect::<Result<Vec<_>>>();
        Ok(Self { num: side(num)?, den: side(den)? })
    }

    pub fn eval(&self, data: &RootData, x: C64) -> Result<C64> {
        let mut num = C64::new(1.0, 0.0);
        for t in &self.num {
            num *= t.eval(data, x)?;
        }
        let mut den = C64::new(1.0, 0.0);
        for t in &self.den {
            den *= t.eval(data, x)?;
        }
        if den == C64::new(0.0, 0.0) {
            return Err(CoreError::ZeroDenominator(format!("{}", self)));
        }
        Ok(num / den)
    }

    /// Every tableau shifted by `h` half units.
    pub fn shifted(&self, h: i32) -> Self {
        let sh = |v: &Vec<RangeTableau>| {
            v.iter().map(|t| t.clone().with_shift(t.shift() + h)).collect()
        };
        Self { num: sh(&self.num), den: sh(&self.den) }
    }
}

impl core::fmt::Display for Ratio {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let side = |v: &[RangeTableau]| -> String {
            v.iter().map(format_factor).collect::<Vec<_>>().join(" ")
        };
        write!(f, "{} / {}", side(&self.num), side(&self.den))
    }
}

fn parse_factor(s: &str) -> Result<RangeTableau> {
    let (cells, shift) = s.split_once('@').ok_or_else(|| domain(format!("factor '{s}' lacks '@'")))?;
    let shift: i32 = shift.parse().map_err(|_| domain(format!("bad shift in '{s}'")))?;
    let mut ranges = Vec::new();
    for c in cells.split(';') {
        let num = |t: &str| t.parse::<u8>().map_err(|_| domain(format!("bad index in '{s}'")));
        ranges.push(match c.split_once(':') {
            Some((lo, hi)) => (num(lo)?, num(hi)?),
            None => (num(c)?, num(c)?),
        });
    }
    Ok(RangeTableau::column(&ranges).with_shift(shift))
}

fn format_factor(t: &RangeTableau) -> String {
    let mut cols = Vec::new();
    for c in 0..t.cols() {
        let cells: Vec<String> = (0..t.rows())
            .map(|r| {
                let Cell { lo, hi } = t.cell(r, c);
                if lo == hi { format!("{lo}") } else { format!("{lo}:{hi}") }
            })
            .collect();
        cols.push(cells.join(";"));
    }
    format!("{}@{}", cols.join("|"), t.shift())
}

/// One auxiliary function: representation a, label j, and its ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxFunctionDef {
    pub a: usize,
    pub j: Vec<u8>,
    pub kind: Kind,
    pub ratio: Ratio,
}

impl AuxFunctionDef {
    pub fn eval(&self, data: &RootData, x: C64) -> Result<C64> {
        self.ratio.eval(data, x)
    }
}

/// Uppercase/lowercase pair sharing a label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxPair {
    pub upper: AuxFunctionDef,
    pub lower: AuxFunctionDef,
}

pub fn eval_aux(def: &AuxFunctionDef, data: &RootData, x: C64) -> Result<C64> {
    def.eval(data, x)
}

/// Strictly increasing a-tuples from 1..=n in lexicographic order.
pub fn combinations(n: usize, a: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (1..=a as u8).collect();
    if a == 0 || a > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = a;
        while i > 0 && cur[i - 1] as usize == n - a + i {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for k in i..a {
            cur[k] = cur[k - 1] + 1;
        }
    }
}

/// The hierarchy order of labels within representation a. For n = 5 the
/// two middle representations follow the order of the kernel tables, which
/// is not lexicographic.
pub fn label_order(n: usize, a: usize) -> Vec<Vec<u8>> {
    const SL5_A2: [[u8; 2]; 10] =
        [[1, 2], [1, 3], [2, 3], [1, 4], [1, 5], [2, 4], [2, 5], [3, 4], [3, 5], [4, 5]];
    const SL5_A3: [[u8; 3]; 10] = [
        [1, 2, 3],
        [1, 2, 4],
        [1, 2, 5],
        [1, 3, 4],
        [1, 3, 5],
        [2, 3, 4],
        [2, 3, 5],
        [1, 4, 5],
        [2, 4, 5],
        [3, 4, 5],
    ];
    match (n, a) {
        (5, 2) => SL5_A2.iter().map(|j| j.to_vec()).collect(),
        (5, 3) => SL5_A3.iter().map(|j| j.to_vec()).collect(),
        _ => combinations(n, a),
    }
}

/// All labels (a, j) in kernel row order.
pub fn labels(n: usize) -> Vec<(usize, Vec<u8>)> {
    (1..n).flat_map(|a| label_order(n, a).into_iter().map(move |j| (a, j))).collect()
}

/// Canonical pair for representation a and label j.
pub fn canonical_pair(n: usize, j: &[u8]) -> AuxPair {
    let a = j.len();
    let nn = n as u8;
    let mut jj = vec![1u8];
    jj.extend_from_slice(j);
    jj.push(nn);
    let rng = |m: usize| (jj[m], jj[m + 1]);
    let upper_col = RangeTableau::column(&(0..a).map(rng).collect::<Vec<_>>());
    let lower_col = RangeTableau::column(&(0..a).map(|m| rng(m + 1)).collect::<Vec<_>>());
    let big = RangeTableau::column(&(0..=a).map(rng).collect::<Vec<_>>());
    let mut den = vec![big];
    if a > 1 {
        den.push(RangeTableau::column(&(0..a - 1).map(|m| rng(m + 1)).collect::<Vec<_>>()));
    }
    let rect_cells = j.iter().flat_map(|&v| [Cell::fixed(v), Cell::fixed(v)]).collect();
    let rect = RangeTableau::new(a, 2, rect_cells).expect("valid rectangle");
    AuxPair {
        upper: AuxFunctionDef {
            a,
            j: j.to_vec(),
            kind: Kind::Upper,
            ratio: Ratio { num: vec![upper_col.with_shift(-1), lower_col.with_shift(1)], den: den.clone() },
        },
        lower: AuxFunctionDef { a, j: j.to_vec(), kind: Kind::Lower, ratio: Ratio { num: vec![rect], den } },
    }
}

/// Canonical auxiliary functions for 2 <= n <= 6, 2^n - 2 pairs in
/// hierarchy order.
pub fn canonical_defs(n: usize) -> Result<Vec<AuxPair>> {
    if !(2..=6).contains(&n) {
        return Err(domain("canonical construction supports 2 <= n <= 6"));
    }
    Ok(labels(n).iter().map(|(_, j)| canonical_pair(n, j)).collect())
}

const EXPLICIT_SL4: [(&str, &str); 14] = [
    ("1:4@1 / 2:4@1", "1@1 / 2:4@1"),
    ("1:2@-1 2:4@1 / 1:2;2:4@0", "2@-1 2@1 / 1:2;2:4@0"),
    ("1:3@-1 3:4@1 / 1:3;3:4@0", "3@-1 3@1 / 1:3;3:4@0"),
    ("1:4@-1 / 1:3@-1", "4@-1 / 1:3@-1"),
    ("1:2;2:4@1 / 1:2@0 3:4@2", "1;2@1 / 1:2@0 3:4@2"),
    ("2:3@0 1:3;3:4@1 / 1:3@0 2:3;3:4@1", "3@0 1;3@1 / 1:3@0 2:3;3:4@1"),
    ("1:3@0 2:4@0 / 1:4@0 2:3@0", "1@0 4@0 / 1:4@0 2:3@0"),
    ("2:3;3:4@1 1:2;2:3@-1 / 2:3@0 1:2;2:3;3:4@0", "2;3@1 2;3@-1 / 2:3@0 1:2;2:3;3:4@0"),
    ("2:3@0 1:2;2:4@-1 / 2:4@0 1:2;2:3@-1", "2@0 2;4@-1 / 2:4@0 1:2;2:3@-1"),
    // Denominator [3,4] sits at x in both members (the printed uppercase
    // shift x - i/2 breaks B = 1 + b).
    ("1:3;3:4@-1 / 1:2@-2 3:4@0", "3;4@-1 / 1:2@-2 3:4@0"),
    ("1:2;2:3;3:4@1 / 1:2;2:3;4@1", "1;2;3@1 / 1:2;2:3;4@1"),
    ("3:4@1 1:2;2:3@0 / 3@1 1:2;2:4@0", "4@1 1;2@0 / 3@1 1:2;2:4@0"),
    ("1:2@-1 2:3;3:4@0 / 2@-1 1:3;3:4@0", "1@-1 3;4@0 / 2@-1 1:3;3:4@0"),
    ("1:2;2:3;3:4@-1 / 1;2:3;3:4@-1", "2;3;4@-1 / 1;2:3;3:4@-1"),
];

const EXPLICIT_SL5: [(&str, &str); 30] = [
    ("1:5@1 / 2:5@1", "1@1 / 2:5@1"),
    ("1:2@-1 2:5@1 / 1:2;2:5@0", "2@-1 2@1 / 1:2;2:5@0"),
    ("1:3@-1 3:5@1 / 1:3;3:5@0", "3@-1 3@1 / 1:3;3:5@0"),
    // One numerator box at x + i/2 (printed with both at x - i/2).
    ("1:4@-1 4:5@1 / 1:4;4:5@0", "4@-1 4@1 / 1:4;4:5@0"),
    ("1:5@-1 / 1:4@-1", "5@-1 / 1:4@-1"),
    ("1:2;2:5@1 / 1:2@0 3:5@2", "1;2@1 / 1:2@0 3:5@2"),
    ("2:3@0 1:3;3:5@1 / 1:3@0 2:3;3:5@1", "3@0 1;3@1 / 1:3@0 2:3;3:5@1"),
    ("1:2;2:3@-1 2:3;3:5@1 / 2:3@0 1:2;2:3;3:5@0", "2;3@-1 2;3@1 / 2:3@0 1:2;2:3;3:5@0"),
    ("2:4@0 1:4;4:5@1 / 1:4@0 2:4;4:5@1", "4@0 1;4@1 / 1:4@0 2:4;4:5@1"),
    ("1:4@0 2:5@0 / 1:5@0 2:4@0", "1@0 5@0 / 1:5@0 2:4@0"),
    ("1:2;2:4@-1 2:4;4:5@1 / 2:4@0 1:2;2:4;4:5@0", "2;4@-1 2;4@1 / 2:4@0 1:2;2:4;4:5@0"),
    ("2:4@0 1:2;2:5@-1 / 2:5@0 1:2;2:4@-1", "2@0 2;5@-1 / 2:5@0 1:2;2:4@-1"),
    ("1:3;3:4@-1 3:4;4:5@1 / 3:4@0 1:3;3:4;4:5@0", "3;4@-1 3;4@1 / 3:4@0 1:3;3:4;4:5@0"),
    ("3:4@0 1:3;3:5@-1 / 3:5@0 1:3;3:4@-1", "3@0 3;5@-1 / 3:5@0 1:3;3:4@-1"),
    ("1:4;4:5@-1 / 1:3@-2 4:5@0", "4;5@-1 / 1:3@-2 4:5@0"),
    ("1:2;2:3;3:5@1 / 4:5@3 1:2;2:3@0", "1;2;3@1 / 4:5@3 1:2;2:3@0"),
    ("3:4@1 1:2;2:4;4:5@1 / 1:2;2:4@0 3:4;4:5@2", "1;4@0 2;4@2 / 1:2;2:4@0 3:4;4:5@2"),
    ("3:5@1 1:2;2:4@0 / 3:4@1 1:2;2:5@0", "5@1 1;2@0 / 3:4@1 1:2;2:5@0"),
    ("2:3;3:4@0 1:3;3:4;4:5@1 / 1:3;3:4@0 2:3;3:4;4:5@1", "3;4@0 1;3;4@1 / 1:3;3:4@0 2:3;3:4;4:5@1"),
    ("1:3;3:4@0 2:3;3:5@0 / 2:3;3:4@0 1:3;3:5@0", "1;3@0 3;5@0 / 2:3;3:4@0 1:3;3:5@0"),
    (
        "1:2;2:3;3:4@-1 2:3;3:4;4:5@1 / 2:3;3:4@0 1:2;2:3;3:4;4:5@0",
        "2;3;4@-1 2;3;4@1 / 2:3;3:4@0 1:2;2:3;3:4;4:5@0",
    ),
    ("2:3;3:4@0 1:2;2:3;3:5@-1 / 2:3;3:5@0 1:2;2:3;3:4@-1", "2;3@0 2;3;5@-1 / 2:3;3:5@0 1:2;2:3;3:4@-1"),
    ("1:3@-1 2:4;4:5@0 / 2:3@-1 1:4;4:5@0", "1@-1 4;5@0 / 2:3@-1 1:4;4:5@0"),
    ("2:3@-1 1:2;2:4;4:5@-1 / 1:2;2:3@-2 2:4;4:5@0", "2;4@-2 2;5@0 / 1:2;2:3@-2 2:4;4:5@0"),
    ("1:3;3:4;4:5@-1 / 1:2@-3 3:4;4:5@0", "3;4;5@-1 / 1:2@-3 3:4;4:5@0"),
    ("1:2;2:3;3:4;4:5@1 / 1:2;2:3;3:4;5@1", "1;2;3;4@1 / 1:2;2:3;3:4;5@1"),
    ("4:5@2 1:2;2:3;3:4@0 / 4@2 1:2;2:3;3:5@0", "5@2 1;2;3@0 / 4@2 1:2;2:3;3:5@0"),
    ("1:2;2:3@-1 3:4;4:5@1 / 3@0 1:2;2:4;4:5@0", "2@0 1;4;5@0 / 3@0 1:2;2:4;4:5@0"),
    ("1:2@-2 2:3;3:4;4:5@0 / 2@-2 1:3;3:4;4:5@0", "1@-2 3;4;5@0 / 2@-2 1:3;3:4;4:5@0"),
    ("1:2;2:3;3:4;4:5@-1 / 1;2:3;3:4;4:5@-1", "2;3;4;5@-1 / 1;2:3;3:4;4:5@-1"),
];

const LEGACY_SL2: [&str; 2] = ["1:2@0 / 2@0", "1:2@0 / 1@0"];

const LEGACY_SL3: [&str; 6] = [
    "1:3@1 / 2:3@1",
    "1;2:3@0 1:2;3@0 / 1;3@0 1:2;2:3@0",
    "1:3@-1 / 1:2@-1",
    "1:2;2:3@1 / 1:2;3@1",
    "1:2@0 2:3@0 / 2@0 1:3@0",
    "1:2;2:3@-1 / 1;2:3@-1",
];

const LEGACY_SL4: [&str; 14] = [
    "1:4@1 / 2:4@1",
    "1;2:4@0 1:3;3:4@0 / 1;3:4@0 1:3;2:4@0",
    "1:3;4@0 1;3:4@0 / 1;4@0 1:3;3:4@0",
    "1:4@-1 / 1:3@-1",
    "1:3;2:4@-1 / 1:3;3:4@-1",
    "2:3;4@1 1:3;3:4@1 / 1:3;4@1 2:3;3:4@1",
    "1:3@0 2:4@0 / 1:4@0 2:3@0",
    "1;2:3;3:4@0 1:2;2:3;4@0 / 1;2:3;4@0 1:2;2:3;3:4@0",
    "1;2:3@-1 1:2;2:4@-1 / 1;2:4@-1 1:2;2:3@-1",
    "1:3;2:4@-1 / 1:2;2:4@-1",
    "1:2;2:3;3:4@1 / 1:2;2:3;4@1",
    "2;3:4@0 1:2;2:3@0 / 2;3@0 1:2;2:4@0",
    "2:3;3:4@0 1:2;2:4@0 / 2;3:4@0 1:3;2:4@0",
    "1:2;2:3;3:4@-1 / 1;2:3;3:4@-1",
];

/// The explicit sl4 / sl5 sets, in hierarchy order.
pub fn explicit_defs(n: usize) -> Result<Vec<AuxPair>> {
    let table: &[(&str, &str)] = match n {
        4 => &EXPLICIT_SL4,
        5 => &EXPLICIT_SL5,
        _ => return Err(CoreError::Unsupported(format!("explicit definitions exist for n = 4, 5, not {n}"))),
    };
    labels(n)
        .into_iter()
        .zip(table)
        .map(|((a, j), (up, lo))| {
            Ok(AuxPair {
                upper: AuxFunctionDef { a, j: j.clone(), kind: Kind::Upper, ratio: Ratio::parse(up)? },
                lower: AuxFunctionDef { a, j, kind: Kind::Lower, ratio: Ratio::parse(lo)? },
            })
        })
        .collect()
}

/// Uppercase functions of earlier constructions for n = 2, 3, 4.
pub fn legacy_defs(n: usize) -> Result<Vec<AuxFunctionDef>> {
    let table: &[&str] = match n {
        2 => &LEGACY_SL2,
        3 => &LEGACY_SL3,
        4 => &LEGACY_SL4,
        _ => return Err(CoreError::Unsupported(format!("legacy definitions exist for n = 2, 3, 4, not {n}"))),
    };
    labels(n)
        .into_iter()
        .zip(table)
        .map(|((a, j), src)| Ok(AuxFunctionDef { a, j, kind: Kind::Upper, ratio: Ratio::parse(src)? }))
        .collect()
}

/// The gauge function f^{(4)} or f^{(5)} relating Y-system and uppercase
/// products.
pub fn f_ratio(n: usize) -> Result<Ratio> {
    match n {
        4 => Ratio::parse("1:2;2:4@0 1:3;3:4@0 / 1:3;2:4@0 1:2;3:4@0"),
        5 => Ratio::parse("1:2;2:5@0 1:3;3:5@0 1:4;4:5@0 / 1:4;2:5@0 1:2;3:5@0 1:3;4:5@0"),
        _ => Err(CoreError::Unsupported(format!("f is defined for n = 4, 5, not {n}"))),
    }
}

pub fn eval_f(n: usize, data: &RootData, x: C64) -> Result<C64> {
    f_ratio(n)?.eval(data, x)
}

/// Range column whose fillings are the complements (in 1..=n) of the
/// fillings of `col`. Fails when the complement family is not a range column.
pub fn complement_column(col: &RangeTableau, n: usize) -> Result<RangeTableau> {
    if col.cols() != 1 {
        return Err(domain("complement is defined for single columns"));
    }
    let comp: Vec<Vec<u8>> = col
        .column_family()
        .into_iter()
        .map(|f| (1..=n as u8).filter(|v| !f.contains(v)).collect())
        .collect();
    let h = n - col.rows();
    let ranges: Vec<(u8, u8)> = (0..h)
        .map(|r| {
            let lo = comp.iter().map(|c| c[r]).min().unwrap_or(1);
            let hi = comp.iter().map(|c| c[r]).max().unwrap_or(1);
            (lo, hi)
        })
        .collect();
    let out = RangeTableau::column(&ranges).with_shift(col.shift());
    let mut want = comp;
    want.sort();
    let got: Vec<Vec<u8>> = out.column_family().into_iter().collect();
    if got != want {
        return Err(CoreError::Unsupported(String::from("complement family is not range-expressible")));
    }
    Ok(out)
}

/// Representation conjugate of a column ratio: each column replaced by its
/// complement.
pub fn conjugate_ratio(r: &Ratio, n: usize) -> Result<Ratio> {
    let map = |v: &Vec<RangeTableau>| v.iter().map(|t| complement_column(t, n)).collect::<Result<Vec<_>>>();
    Ok(Ratio { num: map(&r.num)?, den: map(&r.den)? })
}

/// f̄^{(5)}, the conjugate of f^{(5)}.
pub fn f_bar_ratio() -> Result<Ratio> {
    conjugate_ratio(&f_ratio(5)?, 5)
}

pub fn eval_f_bar(data: &RootData, x: C64) -> Result<C64> {
    f_bar_ratio()?.eval(data, x)
}

/// Y_a = T_a(x-i/2) T_a(x+i/2) / (T_{a-1}(x) T_{a+1}(x)) for single columns.
pub fn y_function(data: &RootData, a: usize, x: C64) -> Result<C64> {
    let num = fused(data, a, 1, half_shift(x, -1))? * fused(data, a, 1, half_shift(x, 1))?;
    let den = fused(data, a - 1, 1, x)? * fused(data, a + 1, 1, x)?;
    if den == C64::new(0.0, 0.0) {
        return Err(CoreError::ZeroDenominator(format!("Y_{a}")));
    }
    Ok(num / den)
}

/// Residuals of Y_a against the f-dressed product of uppercase functions,
/// one entry per representation a = 1..n-1.
pub fn check_y_relations(n: usize, data: &RootData, x: C64) -> Result<Vec<f64>> {
    let defs = canonical_defs(n)?;
    let f = f_ratio(n)?;
    let fv = |h: i32| f.eval(data, half_shift(x, h));
    let fbar = if n == 5 { Some(f_bar_ratio()?) } else { None };
    let fb = |h: i32| fbar.as_ref().expect("n = 5").eval(data, half_shift(x, h));
    let mut out = Vec::new();
    for a in 1..n {
        let mut prod = C64::new(1.0, 0.0);
        for p in defs.iter().filter(|p| p.upper.a == a) {
            prod *= p.upper.eval(data, x)?;
        }
        let dressed = match (n, a) {
            (4, 2) => prod / (fv(-1)? * fv(1)?),
            (4, _) => fv(0)? * prod,
            (5, 1) => fv(0)? * prod,
            (5, 2) => fb(0)? * prod / (fv(1)? * fv(-1)?),
            (5, 3) => fv(0)? * prod / (fb(1)? * fb(-1)?),
            (5, 4) => fb(0)? * prod,
            _ => return Err(CoreError::Unsupported(format!("Y relations for n = {n}"))),
        };
        out.push(rel_residual(y_function(data, a, x)?, dressed));
    }
    Ok(out)
}

/// Residuals of the four relations between the legacy and canonical sl4
/// uppercase functions:
/// 𝖡_{1,2} = f B_{1,2}, 𝖡_{3,3} = f B_{3,3},
/// 𝖡_{2,1}(x) = B_{2,1}(x-i)/f(x-i/2), 𝖡_{2,6}(x) = B_{2,6}(x)/f(x-i/2).
pub fn legacy_relations(data: &RootData, x: C64) -> Result<[f64; 4]> {
    let legacy = legacy_defs(4)?;
    let canon = canonical_defs(4)?;
    let f = |h: i32| eval_f(4, data, half_shift(x, h));
    let lg = |i: usize| legacy[i].eval(data, x);
    let b = |i: usize, h: i32| canon[i].upper.eval(data, half_shift(x, h));
    Ok([
        rel_residual(lg(1)?, f(0)? * b(1, 0)?),
        rel_residual(lg(12)?, f(0)? * b(12, 0)?),
        rel_residual(lg(4)?, b(4, -2)? / f(-1)?),
        rel_residual(lg(9)?, b(9, 0)? / f(-1)?),
    ])
}

/// x → ∞ value of an auxiliary function: the e^{βμ}-weighted filling count.
pub fn asymptotic_value(def: &AuxFunctionDef, n: usize, beta: f64, mu: &[f64]) -> Result<f64> {
    Ok(def.eval(&RootData::weighted(n, beta, mu), C64::new(0.0, 0.0))?.re)
}

/// Label map under species conjugation: j ↦ sorted(n + 1 - j).
pub fn conjugate_label(n: usize, j: &[u8]) -> Vec<u8> {
    let mut out: Vec<u8> = j.iter().map(|&v| n as u8 + 1 - v).collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::tests::random_data;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn counts() {
        for n in 2..=6 {
            let defs = canonical_defs(n).unwrap();
            assert_eq!(defs.len(), (1 << n) - 2);
            for a in 1..n {
                assert_eq!(defs.iter().filter(|p| p.upper.a == a).count(), crate::binomial(n, a));
            }
        }
        assert_eq!(legacy_defs(2).unwrap().len(), 2);
        assert_eq!(legacy_defs(3).unwrap().len(), 6);
        assert_eq!(legacy_defs(4).unwrap().len(), 14);
        assert!(legacy_defs(5).is_err());
    }

    #[test]
    fn counting_values() {
        let d = RootData::counting(4);
        let x = C64::new(0.3, 0.0);
        let defs = canonical_defs(4).unwrap();
        assert!((defs[0].lower.eval(&d, x).unwrap().re - 1.0 / 3.0).abs() < 1e-15);
        assert!((defs[0].upper.eval(&d, x).unwrap().re - 4.0 / 3.0).abs() < 1e-15);
        assert!((eval_f(4, &d, x).unwrap().re - 25.0 / 24.0).abs() < 1e-15);
        let y = check_y_relations(4, &d, x).unwrap();
        assert!(y.iter().all(|&r| r < 1e-15));
        assert!((y_function(&d, 1, x).unwrap().re - 8.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn parse_roundtrip() {
        let r = Ratio::parse("1:2;2:4@1 / 1:2@0 3:4@2").unwrap();
        assert_eq!(r.num.len(), 1);
        assert_eq!(r.den[1].shift(), 2);
        assert_eq!(format!("{r}"), "1:2;2:4@1 / 1:2@0 3:4@2");
        assert!(Ratio::parse("1:2@x / 1@0").is_err());
    }

    #[test]
    fn f_bar_is_complement() {
        let fb = f_bar_ratio().unwrap();
        assert_eq!(
            format!("{fb}"),
            "1:3;3:4;4:5@0 1:2;2:4;4:5@0 1:2;2:3;3:5@0 / 1:3;2:4;3:5@0 1:2;3:4;4:5@0 1:2;2:3;4:5@0"
        );
    }

    #[test]
    fn explicit_match_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [4, 5] {
            let d = random_data(n, &mut rng);
            let x = C64::new(0.31, 0.07);
            for (e, c) in explicit_defs(n).unwrap().iter().zip(canonical_defs(n).unwrap()) {
                assert_eq!(e.upper.j, c.upper.j);
                let (eu, cu) = (e.upper.eval(&d, x).unwrap(), c.upper.eval(&d, x).unwrap());
                let (el, cl) = (e.lower.eval(&d, x).unwrap(), c.lower.eval(&d, x).unwrap());
                assert!(rel_residual(eu, cu) < 1e-12, "{n} {:?}", e.upper.j);
                assert!(rel_residual(el, cl) < 1e-12, "{n} {:?}", e.lower.j);
            }
        }
    }

    #[test]
    fn conjugate_labels() {
        assert_eq!(conjugate_label(5, &[1, 2]), vec![4, 5]);
        assert_eq!(conjugate_label(5, &[1, 5]), vec![1, 5]);
    }
}
