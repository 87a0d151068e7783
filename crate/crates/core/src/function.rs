//! Boolean functions on `{-1, +1}^n`, subset masks and input bias.
//!
//! Points of the hypercube are encoded as integers: bit `b` of the index is
//! set exactly when coordinate `x_{b+1}` equals `-1`. Index 0 is therefore
//! the all-`+1` point.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{BfnError, Result};

/// Largest supported arity for dense truth tables.
pub const MAX_ARITY: usize = 24;

/// Magnitudes at or below this are treated as zero when taking signs.
pub const ZERO_TOL: f64 = 1e-12;

/// `sign(x) = +1` for `x >= 0` and `-1` otherwise.
///
/// Values within [`ZERO_TOL`] of zero count as zero, so rounding noise on
/// an exactly balanced conditional expectation still maps to `+1`.
pub fn sign(x: f64) -> i8 {
    if x >= -ZERO_TOL {
        1
    } else {
        -1
    }
}

/// A subset of `[n]` stored as a bitmask; bit `b` stands for variable `b + 1`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// The full set `[n]`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 32);
        if n == 32 {
            SubsetMask(u32::MAX)
        } else {
            SubsetMask((1u32 << n) - 1)
        }
    }

    /// Builds a mask from 1-based variable indices.
    pub fn from_vars(vars: &[usize]) -> Self {
        SubsetMask(vars.iter().fold(0, |acc, &v| acc | (1u32 << (v - 1))))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Cardinality `|S|`.
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Whether 0-based coordinate `i` is in the set.
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn fits_arity(self, n: usize) -> bool {
        self.is_subset_of(SubsetMask::full(n))
    }

    /// 0-based coordinates in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits >> i & 1 == 1)
    }

    /// Human-readable form with 1-based indices, e.g. `{1,3}`.
    pub fn pretty(self) -> String {
        let vars: Vec<String> = self.indices().map(|i| (i + 1).to_string()).collect();
        format!("{{{}}}", vars.join(","))
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// Places the low `mask.len()` bits of `compact` onto the positions of `mask`.
pub(crate) fn deposit(compact: u32, mask: SubsetMask) -> u32 {
    let mut out = 0;
    for (j, i) in mask.indices().enumerate() {
        if compact >> j & 1 == 1 {
            out |= 1 << i;
        }
    }
    out
}

/// Iterates all subsets of `[n]` with exactly `k` elements in increasing mask order.
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = SubsetMask> {
    let limit: u64 = 1u64 << n;
    let mut next: Option<u64> = if k > n { None } else { Some((1u64 << k) - 1) };
    std::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit {
            next = None;
            return None;
        }
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(SubsetMask(cur as u32))
    })
}

/// Marginal law of one input bit: `p = P(X_i = -1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bias {
    p: f64,
}

impl Bias {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(Bias { p })
        } else {
            Err(BfnError::BiasOutOfRange(p))
        }
    }

    /// Builds the bias from `P(X_i = +1)`, the convention used on plot axes.
    pub fn from_p_one(p_one: f64) -> Result<Self> {
        if p_one > 0.0 && p_one < 1.0 {
            Ok(Bias { p: 1.0 - p_one })
        } else {
            Err(BfnError::BiasOutOfRange(p_one))
        }
    }

    pub fn uniform() -> Self {
        Bias { p: 0.5 }
    }

    /// `P(X_i = -1)`.
    pub fn p(self) -> f64 {
        self.p
    }

    /// `P(X_i = +1)`.
    pub fn p_one(self) -> f64 {
        1.0 - self.p
    }

    /// Mean of a single input, `1 - 2p`.
    pub fn mu(self) -> f64 {
        1.0 - 2.0 * self.p
    }

    /// Standard deviation of a single input, `2 sqrt(p (1 - p))`.
    pub fn sigma(self) -> f64 {
        2.0 * (self.p * (1.0 - self.p)).sqrt()
    }

    /// `P(X = x)` indexed by the number of `-1` coordinates, for `n` inputs.
    pub fn weight_by_popcount(self, n: usize) -> Vec<f64> {
        (0..=n)
            .map(|k| self.p.powi(k as i32) * (1.0 - self.p).powi((n - k) as i32))
            .collect()
    }
}

/// A dense `±1` truth table over `n` inputs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<i8>,
}

pub(crate) fn check_arity(n: usize) -> Result<()> {
    if n == 0 {
        return Err(BfnError::InvalidParameter(
            "arity must be at least 1".into(),
        ));
    }
    if n > MAX_ARITY {
        return Err(BfnError::SizeExceeded(format!(
            "arity {n} exceeds the maximum of {MAX_ARITY}"
        )));
    }
    Ok(())
}

impl BooleanFunction {
    pub fn from_table(n: usize, table: Vec<i8>) -> Result<Self> {
        check_arity(n)?;
        if table.len() != 1 << n {
            return Err(BfnError::InvalidParameter(format!(
                "truth table of arity {n} needs {} entries, got {}",
                1usize << n,
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&v| v != 1 && v != -1) {
            return Err(BfnError::InvalidParameter(format!(
                "truth table entries must be +1 or -1, found {bad}"
            )));
        }
        Ok(BooleanFunction { n, table })
    }

    /// Tabulates `f` on every point; `f` receives the point index.
    pub fn from_fn(n: usize, f: impl Fn(u32) -> i8) -> Result<Self> {
        check_arity(n)?;
        let table = (0..1u32 << n)
            .map(|x| if f(x) >= 0 { 1 } else { -1 })
            .collect();
        Ok(BooleanFunction { n, table })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[i8] {
        &self.table
    }

    pub fn evaluate(&self, point: SubsetMask) -> Result<i8> {
        self.table
            .get(point.0 as usize)
            .copied()
            .filter(|_| point.fits_arity(self.n))
            .ok_or(BfnError::PointOutOfRange {
                point: point.0,
                arity: self.n,
            })
    }

    /// Value at index `x`; panics when out of range.
    pub fn at(&self, x: u32) -> i8 {
        self.table[x as usize]
    }

    pub fn negate(&self) -> Self {
        BooleanFunction {
            n: self.n,
            table: self.table.iter().map(|v| -v).collect(),
        }
    }

    /// True when flipping any coordinate outside `support` leaves `f` unchanged.
    pub fn depends_only_on(&self, support: SubsetMask) -> bool {
        (0..self.n).filter(|&i| !support.contains(i)).all(|i| {
            let bit = 1u32 << i;
            (0..1u32 << self.n)
                .filter(|x| x & bit == 0)
                .all(|x| self.at(x) == self.at(x | bit))
        })
    }
}
