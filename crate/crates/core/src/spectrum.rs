//! p-biased Fourier transform over the hypercube.
//!
//! The basis is `phi_S(x) = prod_{i in S} (x_i - mu) / sigma`, orthonormal under
//! the product measure with `P(x_i = -1) = p`. Both directions are computed
//! with one 2x2 butterfly per coordinate, `O(n 2^n)` overall.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{BfnError, Result};
use crate::function::{check_arity, deposit, Bias, BooleanFunction, SubsetMask};

/// Below this length the butterflies run sequentially.
const PAR_THRESHOLD: usize = 1 << 14;

/// A real-valued function on `{-1, +1}^n`, indexed like [`BooleanFunction`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealTable {
    n: usize,
    values: Vec<f64>,
}

impl RealTable {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_arity(n)?;
        if values.len() != 1 << n {
            return Err(BfnError::InvalidParameter(format!(
                "table of arity {n} needs {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        Ok(RealTable { n, values })
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        RealTable::new(n, vec![c; 1 << n])
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, x: u32) -> f64 {
        self.values[x as usize]
    }

    /// True when flipping any coordinate outside `support` leaves every value unchanged.
    pub fn depends_only_on(&self, support: SubsetMask) -> bool {
        (0..self.n).filter(|&i| !support.contains(i)).all(|i| {
            let bit = 1u32 << i;
            (0..1u32 << self.n)
                .filter(|x| x & bit == 0)
                .all(|x| self.at(x) == self.at(x | bit))
        })
    }
}

/// Anything that can be read as a real table on the hypercube.
pub trait HypercubeFunction {
    fn arity(&self) -> usize;
    fn real_values(&self) -> Vec<f64>;
}

impl HypercubeFunction for BooleanFunction {
    fn arity(&self) -> usize {
        BooleanFunction::arity(self)
    }

    fn real_values(&self) -> Vec<f64> {
        self.table().iter().map(|&v| f64::from(v)).collect()
    }
}

impl HypercubeFunction for RealTable {
    fn arity(&self) -> usize {
        self.n
    }

    fn real_values(&self) -> Vec<f64> {
        self.values.clone()
    }
}

/// Coefficients `f(S) = E[f(X) phi_S(X)]`, entry `S` at index `S.bits()`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasedSpectrum {
    n: usize,
    bias: Bias,
    coeffs: Vec<f64>,
}

impl BiasedSpectrum {
    pub fn from_coefficients(n: usize, bias: Bias, coeffs: Vec<f64>) -> Result<Self> {
        check_arity(n)?;
        if coeffs.len() != 1 << n {
            return Err(BfnError::InvalidParameter(format!(
                "spectrum of arity {n} needs {} coefficients, got {}",
                1usize << n,
                coeffs.len()
            )));
        }
        Ok(BiasedSpectrum { n, bias, coeffs })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn bias(&self) -> Bias {
        self.bias
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coefficient(&self, s: SubsetMask) -> f64 {
        self.coeffs[s.bits() as usize]
    }

    /// `sum_S f(S)^2`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Spectral weight on subsets of `j`: `||f^{subset J}||_2^2`.
    pub fn weight_within(&self, j: SubsetMask) -> f64 {
        let mut total = self.coeffs[0] * self.coeffs[0];
        // enumerate nonempty submasks of j
        let mut s = j.bits();
        while s != 0 {
            let c = self.coeffs[s as usize];
            total += c * c;
            s = (s - 1) & j.bits();
        }
        total
    }

    /// Zeroes every coefficient whose set is not contained in `j`.
    pub fn truncate(&self, j: SubsetMask) -> BiasedSpectrum {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, &c)| {
                if SubsetMask(s as u32).is_subset_of(j) {
                    c
                } else {
                    0.0
                }
            })
            .collect();
        BiasedSpectrum {
            n: self.n,
            bias: self.bias,
            coeffs,
        }
    }

    /// The projection `f^{subset J}` restricted to the coordinates of `j`.
    ///
    /// Entry `a` of the result is the value at the point whose `J`-coordinates
    /// are the bits of `a` deposited onto `j`; the table has `2^|J|` entries.
    pub fn compact_projection(&self, j: SubsetMask) -> Vec<f64> {
        let k = j.len();
        let mut v: Vec<f64> = (0..1u32 << k)
            .map(|a| self.coeffs[deposit(a, j) as usize])
            .collect();
        inverse_butterflies(&mut v, self.bias);
        v
    }

    /// `||f^{subset J}||_1 = E|f^{subset J}(X)|`, evaluated on the `2^|J|` subcube.
    pub fn projection_l1(&self, j: SubsetMask) -> f64 {
        let k = j.len();
        let w = self.bias.weight_by_popcount(k);
        self.compact_projection(j)
            .iter()
            .enumerate()
            .map(|(a, v)| w[(a as u32).count_ones() as usize] * v.abs())
            .sum()
    }
}

fn for_each_pair(values: &mut [f64], kernel: impl Fn(f64, f64) -> (f64, f64) + Sync) {
    let len = values.len();
    let mut half = 1;
    while half < len {
        let apply = |block: &mut [f64]| {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (na, nb) = kernel(*a, *b);
                *a = na;
                *b = nb;
            }
        };
        if len >= PAR_THRESHOLD {
            values.par_chunks_mut(2 * half).for_each(apply);
        } else {
            values.chunks_mut(2 * half).for_each(apply);
        }
        half *= 2;
    }
}

/// Table values to coefficients, in place.
pub(crate) fn forward_butterflies(values: &mut [f64], bias: Bias) {
    let p = bias.p();
    let half_sigma = bias.sigma() / 2.0;
    // (f(x_i=+1), f(x_i=-1)) -> (coefficient without i, coefficient with i)
    for_each_pair(values, |plus, minus| {
        ((1.0 - p) * plus + p * minus, half_sigma * (plus - minus))
    });
}

/// Coefficients to table values, in place.
pub(crate) fn inverse_butterflies(values: &mut [f64], bias: Bias) {
    let p = bias.p();
    let sigma = bias.sigma();
    // phi_{i}(+1) = 2p / sigma, phi_{i}(-1) = -2(1-p) / sigma
    let up = 2.0 * p / sigma;
    let down = 2.0 * (1.0 - p) / sigma;
    for_each_pair(values, |without, with| {
        (without + up * with, without - down * with)
    });
}

/// p-biased Fourier transform of a Boolean or real-valued table.
pub fn transform(f: &impl HypercubeFunction, bias: Bias) -> BiasedSpectrum {
    let mut coeffs = f.real_values();
    forward_butterflies(&mut coeffs, bias);
    BiasedSpectrum {
        n: f.arity(),
        bias,
        coeffs,
    }
}

/// Reconstructs `f(x) = sum_S f(S) phi_S(x)`.
pub fn inverse_transform(spec: &BiasedSpectrum) -> RealTable {
    let mut values = spec.coeffs.clone();
    inverse_butterflies(&mut values, spec.bias);
    RealTable { n: spec.n, values }
}

/// `f^{subset J} = E[f | X^J]`, by spectral truncation.
pub fn project(f: &BooleanFunction, j: SubsetMask, bias: Bias) -> Result<RealTable> {
    if !j.fits_arity(f.arity()) {
        return Err(BfnError::InvalidParameter(format!(
            "subset {j} is not contained in [{}]",
            f.arity()
        )));
    }
    Ok(inverse_transform(&transform(f, bias).truncate(j)))
}

/// `E|t(X)|` under the biased measure.
pub fn l1_norm(t: &RealTable, bias: Bias) -> f64 {
    let w = bias.weight_by_popcount(t.n);
    t.values
        .iter()
        .enumerate()
        .map(|(x, v)| w[(x as u32).count_ones() as usize] * v.abs())
        .sum()
}

/// `E[t(X)^2]` under the biased measure.
pub fn l2_norm_sq(t: &RealTable, bias: Bias) -> f64 {
    let w = bias.weight_by_popcount(t.n);
    t.values
        .iter()
        .enumerate()
        .map(|(x, v)| w[(x as u32).count_ones() as usize] * v * v)
        .sum()
}
