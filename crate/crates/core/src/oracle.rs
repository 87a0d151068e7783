//! Definition-level recomputation of every closed form.
//!
//! Nothing here touches a spectrum: probabilities are summed point by point
//! (or sampled), so these routines share no code path with the transforms
//! they are used to check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{BfnError, Result};
use crate::function::{subsets_of_size, Bias, BooleanFunction, SubsetMask};
use crate::joint::JointInputModel;
use crate::spectrum::RealTable;

pub const MAX_ENUM_MISMATCH_ARITY: usize = 12;
pub const MAX_ENUM_JUNTA_ARITY: usize = 8;
pub const MAX_ENUM_JUNTA_K: usize = 4;
pub const MAX_ENUM_LINEAR_ARITY: usize = 16;

/// Candidates within this distance of the minimum are listed as witnesses.
const WITNESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub seed: u64,
    pub samples: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            seed: 0x5eed,
            samples: 1_000_000,
        }
    }
}

impl OracleConfig {
    pub fn new(seed: u64, samples: u64) -> Result<Self> {
        if samples == 0 {
            return Err(BfnError::InvalidParameter(
                "sample count must be at least 1".into(),
            ));
        }
        Ok(OracleConfig { seed, samples })
    }
}

/// `P(X = x)` computed coordinate by coordinate.
pub fn point_probability(x: u32, n: usize, bias: Bias) -> f64 {
    (0..n)
        .map(|i| {
            if x >> i & 1 == 1 {
                bias.p()
            } else {
                1.0 - bias.p()
            }
        })
        .product()
}

fn coordinate(x: u32, i: usize) -> f64 {
    if x >> i & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `prod_{i in S} x_i`.
pub fn character(x: u32, s: SubsetMask) -> i8 {
    if (x & s.bits()).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `E[f(X) phi_S(X)]` summed over all points.
pub fn naive_coefficient(values: &[f64], n: usize, s: SubsetMask, bias: Bias) -> f64 {
    let (mu, sigma) = (bias.mu(), bias.sigma());
    (0..1u32 << n)
        .map(|x| {
            let phi: f64 = s
                .indices()
                .map(|i| (coordinate(x, i) - mu) / sigma)
                .product();
            point_probability(x, n, bias) * values[x as usize] * phi
        })
        .sum()
}

/// `E[t(X) g(X)]` under the biased measure.
pub fn inner_product(a: &[f64], b: &[f64], n: usize, bias: Bias) -> f64 {
    (0..1u32 << n)
        .map(|x| point_probability(x, n, bias) * a[x as usize] * b[x as usize])
        .sum()
}

/// `E[f(X) prod_{i in S} X_i]`.
pub fn correlation(f: &BooleanFunction, s: SubsetMask, bias: Bias) -> f64 {
    let n = f.arity();
    (0..1u32 << n)
        .map(|x| point_probability(x, n, bias) * f64::from(f.at(x) * character(x, s)))
        .sum()
}

/// `E[f | X^J]` by summing over the coordinates outside `J` at each point.
pub fn conditional_expectation(f: &BooleanFunction, j: SubsetMask, bias: Bias) -> RealTable {
    let n = f.arity();
    let outside = SubsetMask::full(n).bits() & !j.bits();
    let values = (0..1u32 << n)
        .map(|x| {
            let fixed = x & j.bits();
            let mut total = 0.0;
            let mut mass = 0.0;
            // every completion of the J coordinates
            let mut r = outside;
            loop {
                let y = fixed | r;
                let w = point_probability(y, n, bias);
                total += w * f64::from(f.at(y));
                mass += w;
                if r == 0 {
                    break;
                }
                r = (r - 1) & outside;
            }
            total / mass
        })
        .collect();
    RealTable::new(n, values).expect("arity already validated")
}

/// Pointwise MAP label of `f` given `X^J`: `+1` iff `P(f = +1 | x^J) >= 1/2`.
pub fn map_estimator(f: &BooleanFunction, j: SubsetMask, bias: Bias) -> BooleanFunction {
    let n = f.arity();
    let outside = SubsetMask::full(n).bits() & !j.bits();
    BooleanFunction::from_fn(n, |x| {
        let fixed = x & j.bits();
        let (mut plus, mut minus) = (0.0, 0.0);
        let mut r = outside;
        loop {
            let y = fixed | r;
            let w = point_probability(y, n, bias);
            if f.at(y) > 0 {
                plus += w;
            } else {
                minus += w;
            }
            if r == 0 {
                break;
            }
            r = (r - 1) & outside;
        }
        // ties to +1, with slack for summation order
        if plus >= minus - 1e-12 * (plus + minus) {
            1
        } else {
            -1
        }
    })
    .expect("arity already validated")
}

fn check_arity(f: &BooleanFunction, g: &BooleanFunction) -> Result<()> {
    if f.arity() != g.arity() {
        return Err(BfnError::ArityMismatch {
            expected: f.arity(),
            actual: g.arity(),
        });
    }
    Ok(())
}

/// `P(f(X) != g(Y))` summed over all `4^n` input pairs.
pub fn enum_mismatch(f: &BooleanFunction, g: &BooleanFunction, m: &JointInputModel) -> Result<f64> {
    check_arity(f, g)?;
    let n = f.arity();
    if n > MAX_ENUM_MISMATCH_ARITY {
        return Err(BfnError::SizeExceeded(format!(
            "pair enumeration is limited to n <= {MAX_ENUM_MISMATCH_ARITY}; use the Monte Carlo estimator"
        )));
    }
    let pair = |x: u32, y: u32| -> f64 {
        (0..n)
            .map(|i| {
                let xi = if x >> i & 1 == 1 { -1 } else { 1 };
                let yi = if y >> i & 1 == 1 { -1 } else { 1 };
                m.pmf(xi, yi)
            })
            .product()
    };
    let mut total = 0.0;
    for x in 0..1u32 << n {
        for y in 0..1u32 << n {
            if f.at(x) != g.at(y) {
                total += pair(x, y);
            }
        }
    }
    Ok(total)
}

/// A k-junta found by exhaustive search: `h` is indexed by the compact
/// assignment to the coordinates of `support`, bit `b` for its `b`-th member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JuntaWitness {
    pub support: SubsetMask,
    pub h: u64,
}

impl JuntaWitness {
    /// The witness as a function of all `n` inputs; set bits of `h` mean `-1`.
    pub fn to_function(&self, n: usize) -> BooleanFunction {
        let idx: Vec<usize> = self.support.indices().collect();
        BooleanFunction::from_fn(n, |x| {
            let a = idx
                .iter()
                .enumerate()
                .fold(0u32, |acc, (b, &i)| acc | ((x >> i) & 1) << b);
            if self.h >> a & 1 == 1 {
                -1
            } else {
                1
            }
        })
        .expect("arity already validated")
    }
}

/// Minimum mismatch over every `J` with `|J| = k` and every `h: {-1,1}^k -> {-1,1}`.
pub fn enum_best_junta(
    f: &BooleanFunction,
    k: usize,
    bias: Bias,
) -> Result<(f64, Vec<JuntaWitness>)> {
    let n = f.arity();
    if n > MAX_ENUM_JUNTA_ARITY || k > MAX_ENUM_JUNTA_K {
        return Err(BfnError::SizeExceeded(format!(
            "junta enumeration is limited to n <= {MAX_ENUM_JUNTA_ARITY}, k <= {MAX_ENUM_JUNTA_K}"
        )));
    }
    if k >= n {
        return Err(BfnError::InvalidParameter(format!(
            "junta size k = {k} must be smaller than the arity {n}"
        )));
    }
    let points = 1usize << k;
    let mut best = f64::INFINITY;
    let mut witnesses = Vec::new();

    for j in subsets_of_size(n, k) {
        let idx: Vec<usize> = j.indices().collect();
        // loss[a][0]: mass where h(a) = +1 disagrees with f; loss[a][1] for h(a) = -1
        let mut loss = vec![[0.0f64; 2]; points];
        for x in 0..1u32 << n {
            let a = idx
                .iter()
                .enumerate()
                .fold(0usize, |acc, (b, &i)| acc | (((x >> i) & 1) as usize) << b);
            let w = point_probability(x, n, bias);
            if f.at(x) > 0 {
                loss[a][1] += w;
            } else {
                loss[a][0] += w;
            }
        }
        for h in 0..1u64 << points {
            let mismatch: f64 = (0..points).map(|a| loss[a][(h >> a & 1) as usize]).sum();
            if mismatch < best - WITNESS_TOL {
                witnesses.clear();
            }
            if mismatch <= best + WITNESS_TOL {
                best = best.min(mismatch);
                witnesses.push((JuntaWitness { support: j, h }, mismatch));
            }
        }
    }
    let witnesses = witnesses
        .into_iter()
        .filter(|&(_, m)| m <= best + WITNESS_TOL)
        .map(|(w, _)| w)
        .collect();
    Ok((best, witnesses))
}

/// `P(f(X) != g(X))` under the biased measure.
pub fn mismatch_of(f: &BooleanFunction, g: &BooleanFunction, bias: Bias) -> f64 {
    let n = f.arity();
    (0..1u32 << n)
        .filter(|&x| f.at(x) != g.at(x))
        .map(|x| point_probability(x, n, bias))
        .sum()
}

/// A linear Boolean function `c * prod_{i in S} x_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearWitness {
    pub support: SubsetMask,
    pub sign: i8,
}

/// Minimum mismatch over all `2 * 2^n` linear Boolean functions.
pub fn enum_best_linear(f: &BooleanFunction, bias: Bias) -> Result<(f64, Vec<LinearWitness>)> {
    let n = f.arity();
    if n > MAX_ENUM_LINEAR_ARITY {
        return Err(BfnError::SizeExceeded(format!(
            "linear enumeration is limited to n <= {MAX_ENUM_LINEAR_ARITY}"
        )));
    }
    let probs: Vec<f64> = (0..1u32 << n)
        .map(|x| point_probability(x, n, bias))
        .collect();
    let mut results = Vec::with_capacity(2 << n);
    for s in 0..1u32 << n {
        for c in [1i8, -1] {
            let mismatch: f64 = (0..1u32 << n)
                .filter(|&x| f.at(x) != c * character(x, SubsetMask(s)))
                .map(|x| probs[x as usize])
                .sum();
            results.push((
                LinearWitness {
                    support: SubsetMask(s),
                    sign: c,
                },
                mismatch,
            ));
        }
    }
    let best = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let witnesses = results
        .into_iter()
        .filter(|r| r.1 <= best + WITNESS_TOL)
        .map(|r| r.0)
        .collect();
    Ok((best, witnesses))
}

/// Monte Carlo estimate of `P(f(X) != g(Y))` with its binomial standard error.
pub fn mc_mismatch(
    f: &BooleanFunction,
    g: &BooleanFunction,
    m: &JointInputModel,
    cfg: OracleConfig,
) -> Result<(f64, f64)> {
    check_arity(f, g)?;
    let n = f.arity();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    // inverse CDF over (+1,+1), (+1,-1), (-1,+1), (-1,-1)
    let outcomes = [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)];
    let mut cdf = [0.0; 4];
    let mut acc = 0.0;
    for (slot, &(x, y)) in cdf.iter_mut().zip(outcomes.iter()) {
        acc += m.pmf(x, y);
        *slot = acc;
    }
    let mut mismatches = 0u64;
    for _ in 0..cfg.samples {
        let (mut x, mut y) = (0u32, 0u32);
        for i in 0..n {
            let u: f64 = rng.gen::<f64>() * acc;
            let pick = cdf.iter().position(|&c| u < c).unwrap_or(3);
            let (xi, yi) = outcomes[pick];
            if xi < 0 {
                x |= 1 << i;
            }
            if yi < 0 {
                y |= 1 << i;
            }
        }
        if f.at(x) != g.at(y) {
            mismatches += 1;
        }
    }
    let est = mismatches as f64 / cfg.samples as f64;
    let se = (est * (1.0 - est) / cfg.samples as f64).sqrt();
    Ok((est, se))
}

/// A uniformly random truth table on `n` inputs.
pub fn random_function(n: usize, rng: &mut impl Rng) -> BooleanFunction {
    let table = (0..1usize << n)
        .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
        .collect();
    BooleanFunction::from_table(n, table).expect("arity in range")
}

/// The whole-function generator used by the seeded test suites.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
