//! Bias sweeps: one row of approximation and noise quantities per grid point.
//!
//! The columns written for a sweep are a fixed-order subset of
//! [`ALL_COLUMNS`]; selecting a quantity also brings along its companion
//! columns (the chosen support, degree and sign).

use std::fmt;
use std::str::FromStr;

use bfn_core::export::fmt_sig;
use bfn_core::{
    best_k_junta, best_linear, make_joint, noise_sensitivity, BfnError, Bias, BooleanFunction,
    Result,
};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantity {
    JuntaMismatch,
    JuntaLowerBound,
    JuntaUpperBound,
    LinearMismatch,
    NoiseSensitivity,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::JuntaMismatch,
        Quantity::JuntaLowerBound,
        Quantity::JuntaUpperBound,
        Quantity::LinearMismatch,
        Quantity::NoiseSensitivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::JuntaMismatch => "junta_mismatch",
            Quantity::JuntaLowerBound => "junta_lower_bound",
            Quantity::JuntaUpperBound => "junta_upper_bound",
            Quantity::LinearMismatch => "linear_mismatch",
            Quantity::NoiseSensitivity => "noise_sensitivity",
        }
    }

    fn columns(self) -> &'static [&'static str] {
        match self {
            Quantity::JuntaMismatch => &["junta_mismatch", "junta_support_mask"],
            Quantity::JuntaLowerBound => &["junta_lower_bound"],
            Quantity::JuntaUpperBound => &["junta_upper_bound"],
            Quantity::LinearMismatch => &[
                "linear_mismatch",
                "linear_support_mask",
                "linear_degree",
                "linear_sign",
            ],
            Quantity::NoiseSensitivity => &["noise_sensitivity"],
        }
    }

    fn needs_junta(self) -> bool {
        matches!(
            self,
            Quantity::JuntaMismatch | Quantity::JuntaLowerBound | Quantity::JuntaUpperBound
        )
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s.trim())
            .ok_or_else(|| format!("unknown quantity `{s}`"))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every column a sweep can emit, in output order.
pub const ALL_COLUMNS: [&str; 11] = [
    "p_one",
    "p",
    "junta_mismatch",
    "junta_support_mask",
    "junta_lower_bound",
    "junta_upper_bound",
    "linear_mismatch",
    "linear_support_mask",
    "linear_degree",
    "linear_sign",
    "noise_sensitivity",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            start: 0.01,
            stop: 0.99,
            step: 0.005,
        }
    }
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        let inside = |v: f64| v > 0.0 && v < 1.0;
        if !(inside(self.start) && inside(self.stop)) {
            return Err(BfnError::InvalidParameter(format!(
                "grid [{}, {}] must lie strictly inside (0, 1)",
                self.start, self.stop
            )));
        }
        if self.step.is_nan() || self.step <= 0.0 || self.start > self.stop {
            return Err(BfnError::InvalidParameter(format!(
                "grid needs step > 0 and start <= stop (start {}, stop {}, step {})",
                self.start, self.stop, self.step
            )));
        }
        Ok(())
    }

    /// `start + i * step` up to `stop`, rounded to 12 decimals.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub grid: Grid,
    pub quantities: Vec<Quantity>,
    pub function: BooleanFunction,
    pub k: Option<usize>,
    /// Fixed `P(Y = +1)`; when absent it follows the grid value.
    pub q_one: Option<f64>,
    pub rho: Option<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.quantities.is_empty() {
            return Err(BfnError::InvalidParameter("no quantities selected".into()));
        }
        if self.quantities.iter().any(|q| q.needs_junta()) {
            match self.k {
                None => {
                    return Err(BfnError::InvalidParameter(
                        "junta quantities need --k".into(),
                    ))
                }
                Some(k) if k >= self.function.arity() => {
                    return Err(BfnError::InvalidParameter(format!(
                        "junta size k = {k} must be smaller than the arity {}",
                        self.function.arity()
                    )))
                }
                _ => {}
            }
        }
        if self.quantities.contains(&Quantity::NoiseSensitivity) {
            let rho = self.rho.ok_or_else(|| {
                BfnError::InvalidParameter("noise_sensitivity needs --rho".into())
            })?;
            if !(-1.0..=1.0).contains(&rho) {
                return Err(BfnError::InvalidParameter(format!(
                    "rho = {rho} must lie in [-1, 1]"
                )));
            }
            if let Some(q) = self.q_one {
                Bias::from_p_one(q)?;
            }
        }
        Ok(())
    }

    fn selected(&self) -> Vec<Quantity> {
        let mut q = self.quantities.clone();
        q.sort();
        q.dedup();
        q
    }

    pub fn header(&self) -> Vec<&'static str> {
        let mut cols = vec!["p_one", "p"];
        for q in self.selected() {
            cols.extend_from_slice(q.columns());
        }
        cols
    }
}

fn cell(v: f64) -> String {
    fmt_sig(v)
}

fn evaluate_row(spec: &SweepSpec, quantities: &[Quantity], t: f64) -> Result<Vec<String>> {
    let bias = Bias::from_p_one(t)?;
    let mut row = vec![cell(t), cell(bias.p())];
    let junta = if quantities.iter().any(|q| q.needs_junta()) {
        Some(best_k_junta(
            &spec.function,
            spec.k.expect("validated"),
            bias,
        )?)
    } else {
        None
    };
    for &q in quantities {
        match q {
            Quantity::JuntaMismatch => {
                let r = junta.as_ref().expect("junta computed");
                row.push(cell(r.mismatch));
                row.push(r.support.bits().to_string());
            }
            Quantity::JuntaLowerBound => row.push(cell(
                junta
                    .as_ref()
                    .expect("junta computed")
                    .bounds
                    .unwrap()
                    .lower,
            )),
            Quantity::JuntaUpperBound => row.push(cell(
                junta
                    .as_ref()
                    .expect("junta computed")
                    .bounds
                    .unwrap()
                    .upper,
            )),
            Quantity::LinearMismatch => {
                let r = best_linear(&spec.function, bias);
                row.push(cell(r.mismatch));
                row.push(r.support.bits().to_string());
                row.push(r.degree().to_string());
                row.push(format!("{:+}", r.sign_constant.unwrap()));
            }
            Quantity::NoiseSensitivity => {
                let q_bias = Bias::from_p_one(spec.q_one.unwrap_or(t))?;
                let ns = match make_joint(bias, q_bias, spec.rho.expect("validated")) {
                    Ok(m) => noise_sensitivity(&spec.function, &m),
                    Err(BfnError::Infeasible { .. }) => f64::NAN,
                    Err(e) => return Err(e),
                };
                row.push(cell(ns));
            }
        }
    }
    Ok(row)
}

/// Evaluates every grid point (in parallel) and returns rows in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<Vec<String>>> {
    spec.validate()?;
    let quantities = spec.selected();
    spec.grid
        .points()
        .par_iter()
        .map(|&t| evaluate_row(spec, &quantities, t))
        .collect()
}

pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// JSON array of row objects; numeric cells are emitted as numbers.
pub fn to_json(header: &[&str], rows: &[Vec<String>]) -> serde_json::Value {
    let objects = rows
        .iter()
        .map(|r| {
            let map = header
                .iter()
                .zip(r)
                .map(|(h, v)| {
                    let value = v
                        .parse::<f64>()
                        .ok()
                        .and_then(serde_json::Number::from_f64)
                        .map(serde_json::Value::Number)
                        .unwrap_or(serde_json::Value::Null);
                    (h.to_string(), value)
                })
                .collect::<serde_json::Map<_, _>>();
            serde_json::Value::Object(map)
        })
        .collect();
    serde_json::Value::Array(objects)
}
