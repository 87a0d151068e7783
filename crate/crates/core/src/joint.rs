//! Correlated input pairs and the mismatch identities.
//!
//! Each coordinate pair `(X_i, Y_i)` is drawn independently from a law on
//! `{-1, +1}^2` fixed by the marginals `p = P(X = -1)`, `q = P(Y = -1)` and the
//! correlation coefficient `rho`. With `f` expanded at bias `p` and `g` at
//! bias `q`, `E[f(X) g(Y)] = sum_S f(S) g(S) rho^|S|`.

use serde::Serialize;

use crate::error::{BfnError, Result};
use crate::function::{Bias, BooleanFunction};
use crate::spectrum::transform;

/// Slack allowed on the nonnegativity of the joint pmf.
pub const FEASIBILITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointInputModel {
    x_bias: Bias,
    y_bias: Bias,
    rho: f64,
    /// `pmf[a][b]` = P(X = x_a, Y = y_b) with index 0 for `+1`, 1 for `-1`.
    pmf: [[f64; 2]; 2],
}

fn sign_index(v: i8) -> usize {
    if v > 0 {
        0
    } else {
        1
    }
}

/// Interval of correlations that give a valid pmf for the marginals `p`, `q`.
pub fn feasible_rho_interval(p: Bias, q: Bias) -> (f64, f64) {
    let (mu, mu_y) = (p.mu(), q.mu());
    let scale = p.sigma() * q.sigma();
    // P(x, y) = (1 + x mu + y mu' + x y E[XY]) / 4 >= 0 for all four sign pairs
    let exy_lo = -(1.0 - (mu + mu_y).abs());
    let exy_hi = 1.0 - (mu - mu_y).abs();
    let lo = ((exy_lo - mu * mu_y) / scale).max(-1.0);
    let hi = ((exy_hi - mu * mu_y) / scale).min(1.0);
    (lo, hi)
}

/// Builds the model, rejecting triples whose joint pmf would be negative.
pub fn make_joint(p: Bias, q: Bias, rho: f64) -> Result<JointInputModel> {
    let infeasible = || {
        let (rho_min, rho_max) = feasible_rho_interval(p, q);
        BfnError::Infeasible {
            p: p.p(),
            q: q.p(),
            rho,
            rho_min,
            rho_max,
        }
    };
    if !(-1.0..=1.0).contains(&rho) {
        return Err(infeasible());
    }
    let (mu, mu_y) = (p.mu(), q.mu());
    let exy = mu * mu_y + rho * p.sigma() * q.sigma();
    let mut pmf = [[0.0; 2]; 2];
    for (a, x) in [1.0, -1.0].into_iter().enumerate() {
        for (b, y) in [1.0, -1.0].into_iter().enumerate() {
            let v = (1.0 + x * mu + y * mu_y + x * y * exy) / 4.0;
            if v < -FEASIBILITY_SLACK {
                return Err(infeasible());
            }
            pmf[a][b] = if v.abs() <= FEASIBILITY_SLACK { 0.0 } else { v };
        }
    }
    Ok(JointInputModel {
        x_bias: p,
        y_bias: q,
        rho,
        pmf,
    })
}

impl JointInputModel {
    pub fn x_bias(&self) -> Bias {
        self.x_bias
    }

    pub fn y_bias(&self) -> Bias {
        self.y_bias
    }

    pub fn p(&self) -> f64 {
        self.x_bias.p()
    }

    pub fn q(&self) -> f64 {
        self.y_bias.p()
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `P(X_i = x, Y_i = y)` for `x, y` in `{-1, +1}`.
    pub fn pmf(&self, x: i8, y: i8) -> f64 {
        self.pmf[sign_index(x)][sign_index(y)]
    }

    /// The same model with the roles of `X` and `Y` exchanged.
    pub fn swapped(&self) -> JointInputModel {
        let pmf = [
            [self.pmf[0][0], self.pmf[1][0]],
            [self.pmf[0][1], self.pmf[1][1]],
        ];
        JointInputModel {
            x_bias: self.y_bias,
            y_bias: self.x_bias,
            rho: self.rho,
            pmf,
        }
    }
}

fn check_same_arity(f: &BooleanFunction, g: &BooleanFunction) -> Result<()> {
    if f.arity() != g.arity() {
        return Err(BfnError::ArityMismatch {
            expected: f.arity(),
            actual: g.arity(),
        });
    }
    Ok(())
}

/// `E[f(X) g(Y)]`.
pub fn cross_expectation(
    f: &BooleanFunction,
    g: &BooleanFunction,
    m: &JointInputModel,
) -> Result<f64> {
    check_same_arity(f, g)?;
    let fx = transform(f, m.x_bias);
    let gy = transform(g, m.y_bias);
    let powers: Vec<f64> = (0..=f.arity()).map(|k| m.rho.powi(k as i32)).collect();
    Ok(fx
        .coefficients()
        .iter()
        .zip(gy.coefficients())
        .enumerate()
        .map(|(s, (a, b))| a * b * powers[(s as u32).count_ones() as usize])
        .sum())
}

/// Clamps a probability that may have drifted just outside `[0, 1]`.
pub(crate) fn clamp_probability(v: f64) -> f64 {
    if (-FEASIBILITY_SLACK..0.0).contains(&v) {
        0.0
    } else if v > 1.0 && v <= 1.0 + FEASIBILITY_SLACK {
        1.0
    } else {
        v
    }
}

/// `P(f(X) != g(Y))`.
pub fn mismatch_probability(
    f: &BooleanFunction,
    g: &BooleanFunction,
    m: &JointInputModel,
) -> Result<f64> {
    Ok(clamp_probability((1.0 - cross_expectation(f, g, m)?) / 2.0))
}

/// `P(f(X) != f(Y))`.
pub fn noise_sensitivity(f: &BooleanFunction, m: &JointInputModel) -> f64 {
    mismatch_probability(f, f, m).expect("same function has matching arity")
}

/// Serializable summary of a mismatch query.
#[derive(Debug, Clone, Serialize)]
pub struct JointReport {
    pub p: f64,
    pub q: f64,
    pub p_one: f64,
    pub q_one: f64,
    pub rho: f64,
    pub cross_expectation: f64,
    pub mismatch_probability: f64,
}

impl JointReport {
    pub fn compute(f: &BooleanFunction, g: &BooleanFunction, m: &JointInputModel) -> Result<Self> {
        let e = cross_expectation(f, g, m)?;
        Ok(JointReport {
            p: m.p(),
            q: m.q(),
            p_one: m.x_bias.p_one(),
            q_one: m.y_bias.p_one(),
            rho: m.rho,
            cross_expectation: e,
            mismatch_probability: clamp_probability((1.0 - e) / 2.0),
        })
    }
}
