//! Optimal approximation by k-juntas and by linear Boolean functions.
//!
//! For a k-junta on the coordinates `J`, the best choice is the MAP rule
//! `sign(f^{subset J})` and its mismatch is `(1 - ||f^{subset J}||_1) / 2`;
//! the optimum is found by scanning every `J` of size `k`. For the linear
//! class `c * prod_{i in S} x_i` the mismatch is `(1 - c I_S[f]) / 2` with
//! `I_S[f] = E[f(X) prod_{i in S} X_i]`, so the optimum is the largest `|I_S|`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{BfnError, Result};
use crate::function::{sign, subsets_of_size, Bias, BooleanFunction, SubsetMask};
use crate::spectrum::{transform, BiasedSpectrum};
use crate::truth_table::emit_truth_table;

/// Scores within this distance of the best one are reported as ties.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ApproximationClass {
    #[serde(rename = "k-junta")]
    KJunta,
    #[serde(rename = "linear")]
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MismatchBounds {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproximationReport {
    pub class: ApproximationClass,
    pub bias: Bias,
    /// `J*` for juntas, `S*` for linear functions.
    pub support: SubsetMask,
    /// `c*`, linear class only.
    pub sign_constant: Option<i8>,
    pub approximant: BooleanFunction,
    pub mismatch: f64,
    /// `||f^{subset J*}||_1`, junta class only.
    pub l1: Option<f64>,
    /// Spectral-weight bounds on the optimum, junta class only.
    pub bounds: Option<MismatchBounds>,
    /// Every support reaching the optimum, canonical winner first.
    pub ties: Vec<SubsetMask>,
}

impl ApproximationReport {
    /// Size of the chosen support; for linear approximants this is the degree.
    pub fn degree(&self) -> usize {
        self.support.len()
    }
}

/// Picks the canonical maximiser and all ties: smallest popcount, then smallest mask.
fn select_max(scores: &[(SubsetMask, f64)]) -> (SubsetMask, f64, Vec<SubsetMask>) {
    let best = scores
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut ties: Vec<SubsetMask> = scores
        .iter()
        .filter(|&&(_, v)| v >= best - TIE_TOL)
        .map(|&(s, _)| s)
        .collect();
    ties.sort_by_key(|s| (s.len(), s.bits()));
    let winner = ties[0];
    let score = scores.iter().find(|&&(s, _)| s == winner).unwrap().1;
    (winner, score, ties)
}

/// Bounds from the spectral weight on subsets of `j`:
/// `(1 - ||f^J||_2) / 2` and `(1 - ||f^J||_2^2) / 2`.
pub fn junta_bounds(f: &BooleanFunction, j: SubsetMask, bias: Bias) -> Result<MismatchBounds> {
    if !j.fits_arity(f.arity()) {
        return Err(BfnError::InvalidParameter(format!(
            "subset {j} is not contained in [{}]",
            f.arity()
        )));
    }
    Ok(bounds_from_weight(transform(f, bias).weight_within(j)))
}

fn bounds_from_weight(w: f64) -> MismatchBounds {
    MismatchBounds {
        lower: 0.5 * (1.0 - w.sqrt()),
        upper: 0.5 * (1.0 - w),
    }
}

/// Expands the compact MAP rule on `j` to a full truth table.
fn junta_table(n: usize, j: SubsetMask, compact: &[f64]) -> BooleanFunction {
    let signs: Vec<i8> = compact.iter().map(|&v| sign(v)).collect();
    let idx: Vec<usize> = j.indices().collect();
    BooleanFunction::from_fn(n, |x| {
        let a = idx
            .iter()
            .enumerate()
            .fold(0usize, |acc, (b, &i)| acc | (((x >> i) & 1) as usize) << b);
        signs[a]
    })
    .expect("arity already validated")
}

pub fn best_k_junta(f: &BooleanFunction, k: usize, bias: Bias) -> Result<ApproximationReport> {
    let n = f.arity();
    if k >= n {
        return Err(BfnError::InvalidParameter(format!(
            "junta size k = {k} must be smaller than the arity {n}"
        )));
    }
    let spec = transform(f, bias);
    best_k_junta_from_spectrum(f.arity(), &spec, k)
}

fn best_k_junta_from_spectrum(
    n: usize,
    spec: &BiasedSpectrum,
    k: usize,
) -> Result<ApproximationReport> {
    let candidates: Vec<SubsetMask> = subsets_of_size(n, k).collect();
    // ||f^J||_1 is monotone under inclusion, so |J| = k is enough
    let scored: Vec<(SubsetMask, f64, f64)> = candidates
        .par_iter()
        .map(|&j| (j, spec.projection_l1(j), spec.weight_within(j)))
        .collect();

    let l1_scores: Vec<(SubsetMask, f64)> = scored.iter().map(|&(j, l1, _)| (j, l1)).collect();
    let (support, l1, ties) = select_max(&l1_scores);
    let max_weight = scored
        .iter()
        .map(|&(_, _, w)| w)
        .fold(f64::NEG_INFINITY, f64::max);

    let approximant = junta_table(n, support, &spec.compact_projection(support));
    Ok(ApproximationReport {
        class: ApproximationClass::KJunta,
        bias: spec.bias(),
        support,
        sign_constant: None,
        approximant,
        mismatch: (1.0 - l1) / 2.0,
        l1: Some(l1),
        bounds: Some(bounds_from_weight(max_weight)),
        ties,
    })
}

/// `I_S[f] = sum_{S' subset S} f(S') sigma^|S'| mu^(|S| - |S'|)` for every `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSubsetStats {
    n: usize,
    values: Vec<f64>,
}

impl WeightedSubsetStats {
    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, s: SubsetMask) -> f64 {
        self.values[s.bits() as usize]
    }
}

pub fn weighted_subset_transform(spec: &BiasedSpectrum) -> WeightedSubsetStats {
    let n = spec.arity();
    let (mu, sigma) = (spec.bias().mu(), spec.bias().sigma());
    let sigma_pow: Vec<f64> = (0..=n).map(|k| sigma.powi(k as i32)).collect();
    let mut a: Vec<f64> = spec
        .coefficients()
        .iter()
        .enumerate()
        .map(|(s, c)| c * sigma_pow[(s as u32).count_ones() as usize])
        .collect();
    // weighted zeta transform over subsets
    for i in 0..n {
        let bit = 1usize << i;
        for s in 0..a.len() {
            if s & bit == 0 {
                a[s | bit] += mu * a[s];
            }
        }
    }
    WeightedSubsetStats { n, values: a }
}

fn linear_table(n: usize, s: SubsetMask, c: i8) -> BooleanFunction {
    BooleanFunction::from_fn(n, |x| {
        if (x & s.bits()).count_ones().is_multiple_of(2) {
            c
        } else {
            -c
        }
    })
    .expect("arity already validated")
}

pub fn best_linear(f: &BooleanFunction, bias: Bias) -> ApproximationReport {
    let spec = transform(f, bias);
    let stats = weighted_subset_transform(&spec);
    let scores: Vec<(SubsetMask, f64)> = stats
        .values
        .iter()
        .enumerate()
        .map(|(s, v)| (SubsetMask(s as u32), v.abs()))
        .collect();
    let (support, _, ties) = select_max(&scores);
    let i_star = stats.get(support);
    let c = sign(i_star);
    ApproximationReport {
        class: ApproximationClass::Linear,
        bias,
        support,
        sign_constant: Some(c),
        approximant: linear_table(f.arity(), support, c),
        mismatch: (1.0 - i_star.abs()) / 2.0,
        l1: None,
        bounds: None,
        ties,
    }
}

#[derive(Debug, Clone, Serialize)]
struct SupportJson {
    mask: u32,
    pretty: String,
}

impl From<SubsetMask> for SupportJson {
    fn from(s: SubsetMask) -> Self {
        SupportJson {
            mask: s.bits(),
            pretty: s.pretty(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct ReportJson<'a> {
    class: ApproximationClass,
    p: f64,
    p_one: f64,
    support_mask: u32,
    support_pretty: String,
    degree: usize,
    sign_constant: Option<i8>,
    mismatch: f64,
    l1: Option<f64>,
    bounds: Option<&'a MismatchBounds>,
    ties: Vec<SupportJson>,
    approximant_truth_table: String,
}

impl ApproximationReport {
    pub fn to_json(&self) -> serde_json::Value {
        let r = ReportJson {
            class: self.class,
            p: self.bias.p(),
            p_one: self.bias.p_one(),
            support_mask: self.support.bits(),
            support_pretty: self.support.pretty(),
            degree: self.degree(),
            sign_constant: self.sign_constant,
            mismatch: self.mismatch,
            l1: self.l1,
            bounds: self.bounds.as_ref(),
            ties: self.ties.iter().copied().map(SupportJson::from).collect(),
            approximant_truth_table: emit_truth_table(&self.approximant),
        };
        serde_json::to_value(r).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;

    #[test]
    fn or5_four_junta_uniform() {
        let f = builtin("or:5").unwrap();
        let r = best_k_junta(&f, 4, Bias::uniform()).unwrap();
        assert!((r.mismatch - 1.0 / 32.0).abs() < 1e-12);
        assert!((r.l1.unwrap() - 15.0 / 16.0).abs() < 1e-12);
        assert_eq!(r.ties.len(), 5);
        assert_eq!(r.support, SubsetMask(0b01111));
        assert!(r.approximant.depends_only_on(r.support));
    }

    #[test]
    fn or_below_half_gives_constant_minus_one() {
        let f = builtin("or:5").unwrap();
        for p_one in [0.05, 0.3, 0.49] {
            for k in 0..5 {
                let r = best_k_junta(&f, k, Bias::from_p_one(p_one).unwrap()).unwrap();
                assert!(r.approximant.table().iter().all(|&v| v == -1));
            }
        }
    }

    #[test]
    fn zero_junta_is_sign_of_mean() {
        let f = builtin("maj:5").unwrap();
        for p in [0.2, 0.5, 0.65] {
            let b = Bias::new(p).unwrap();
            let mean = transform(&f, b).coefficient(SubsetMask::EMPTY);
            let r = best_k_junta(&f, 0, b).unwrap();
            assert_eq!(r.support, SubsetMask::EMPTY);
            assert!(r.approximant.table().iter().all(|&v| v == sign(mean)));
            assert!((r.mismatch - (1.0 - mean.abs()) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn junta_size_must_be_smaller_than_arity() {
        let f = builtin("maj:3").unwrap();
        assert!(matches!(
            best_k_junta(&f, 3, Bias::uniform()),
            Err(BfnError::InvalidParameter(_))
        ));
    }

    #[test]
    fn bounds_examples() {
        let f = builtin("maj:5").unwrap();
        let b = Bias::uniform();
        let full = junta_bounds(&f, SubsetMask::full(5), b).unwrap();
        assert!(full.lower.abs() < 1e-12 && full.upper.abs() < 1e-12);

        // a 2-junta of 4 inputs: its projection onto its own support is Boolean
        let g = builtin("parity:1,2:4").unwrap();
        let r = best_k_junta(&g, 2, b).unwrap();
        let bd = r.bounds.unwrap();
        assert!(r.mismatch.abs() < 1e-12 && bd.lower.abs() < 1e-12 && bd.upper.abs() < 1e-12);

        let r = best_k_junta(&f, 4, b).unwrap();
        let bd = r.bounds.unwrap();
        assert!(bd.lower <= r.mismatch + 1e-12 && r.mismatch <= bd.upper + 1e-12);
        assert!(junta_bounds(&f, SubsetMask(64), b).is_err());
    }

    #[test]
    fn weighted_stats_examples() {
        let one = builtin("constant:+1:3").unwrap();
        let b = Bias::new(0.3).unwrap();
        let stats = weighted_subset_transform(&transform(&one, b));
        for s in 0..8u32 {
            let expected = b.mu().powi(s.count_ones() as i32);
            assert!((stats.get(SubsetMask(s)) - expected).abs() < 1e-12);
        }

        let maj = builtin("maj:5").unwrap();
        let spec = transform(&maj, Bias::uniform());
        let stats = weighted_subset_transform(&spec);
        for (a, c) in stats.values().iter().zip(spec.coefficients()) {
            assert!((a - c).abs() < 1e-12);
        }

        for p in [0.1, 0.45, 0.9] {
            let dict = builtin("parity:1:3").unwrap();
            let stats = weighted_subset_transform(&transform(&dict, Bias::new(p).unwrap()));
            assert!((stats.get(SubsetMask(1)) - 1.0).abs() < 1e-12);
            assert!((stats.get(SubsetMask::EMPTY) - (1.0 - 2.0 * p)).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_function_is_its_own_approximation() {
        let f = builtin("parity:2").unwrap();
        let r = best_linear(&f, Bias::uniform());
        assert_eq!(r.support, SubsetMask(0b11));
        assert_eq!(r.sign_constant, Some(1));
        assert!(r.mismatch.abs() < 1e-12);
        assert_eq!(r.approximant, f);
    }

    #[test]
    fn majority5_linear_regions() {
        let f = builtin("maj:5").unwrap();
        let at = |t: f64| best_linear(&f, Bias::from_p_one(t).unwrap());
        let low = at(0.2);
        assert_eq!((low.degree(), low.sign_constant), (0, Some(-1)));
        let mid = at(0.5);
        assert_eq!(mid.degree(), 1);
        // |f({i})| = |f([5])| = 3/8 at p = 1/2; smaller support wins
        assert_eq!(mid.ties.len(), 6);
        assert_eq!(mid.support, SubsetMask(1));
        assert_eq!(*mid.ties.last().unwrap(), SubsetMask::full(5));
        let high = at(0.8);
        assert_eq!((high.degree(), high.sign_constant), (0, Some(1)));
    }

    #[test]
    fn or5_linear_regions() {
        let f = builtin("or:5").unwrap();
        let at = |t: f64| best_linear(&f, Bias::from_p_one(t).unwrap());
        assert_eq!((at(0.5).degree(), at(0.5).sign_constant), (0, Some(-1)));
        assert_eq!(at(0.85).degree(), 5);
        assert_eq!(at(0.9).degree(), 5);
    }

    #[test]
    fn report_json_shape() {
        let f = builtin("or:5").unwrap();
        let j = best_k_junta(&f, 4, Bias::uniform()).unwrap().to_json();
        assert_eq!(j["class"], "k-junta");
        assert_eq!(j["support_pretty"], "{1,2,3,4}");
        assert!(j["sign_constant"].is_null());
        assert!(j["bounds"]["lower"].is_number());
        assert_eq!(j["ties"].as_array().unwrap().len(), 5);
        let l = best_linear(&f, Bias::uniform()).to_json();
        assert_eq!(l["class"], "linear");
        assert_eq!(l["sign_constant"], -1);
        assert!(l["bounds"].is_null());
    }
}
