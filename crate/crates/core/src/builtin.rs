//! Named function families.
//!
//! Throughout, `-1` plays the role of "true": `or(n)` is `-1` as soon as one
//! input is `-1`, and is `+1` only at the all-`+1` point.

use std::fmt;
use std::str::FromStr;

use crate::error::{BfnError, Result};
use crate::function::{check_arity, BooleanFunction, SubsetMask};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    Or(usize),
    And(usize),
    /// Requires odd arity.
    Majority(usize),
    /// Product of the coordinates in the set.
    Parity {
        vars: SubsetMask,
        n: usize,
    },
    Constant {
        value: i8,
        n: usize,
    },
    /// `-1` iff at least `t` inputs are `-1`.
    Threshold {
        n: usize,
        t: usize,
    },
    /// `s` disjoint tribes of width `w`: `-1` iff some tribe is all `-1`.
    Tribes {
        w: usize,
        s: usize,
    },
}

impl Builtin {
    pub fn arity(&self) -> usize {
        match *self {
            Builtin::Or(n) | Builtin::And(n) | Builtin::Majority(n) => n,
            Builtin::Parity { n, .. }
            | Builtin::Constant { n, .. }
            | Builtin::Threshold { n, .. } => n,
            Builtin::Tribes { w, s } => w * s,
        }
    }

    pub fn build(&self) -> Result<BooleanFunction> {
        let n = self.arity();
        check_arity(n)?;
        match *self {
            Builtin::Or(n) => BooleanFunction::from_fn(n, |x| if x == 0 { 1 } else { -1 }),
            Builtin::And(n) => {
                let all = SubsetMask::full(n).bits();
                BooleanFunction::from_fn(n, |x| if x == all { -1 } else { 1 })
            }
            Builtin::Majority(n) => {
                if n % 2 == 0 {
                    return Err(BfnError::InvalidParameter(format!(
                        "majority needs an odd arity, got {n}"
                    )));
                }
                // sign(sum x_i): more +1 than -1 coordinates
                BooleanFunction::from_fn(n, |x| {
                    if 2 * (x.count_ones() as usize) < n {
                        1
                    } else {
                        -1
                    }
                })
            }
            Builtin::Parity { vars, n } => {
                if !vars.fits_arity(n) {
                    return Err(BfnError::InvalidParameter(format!(
                        "parity set {vars} is not contained in [{n}]"
                    )));
                }
                BooleanFunction::from_fn(n, |x| {
                    if (x & vars.bits()).count_ones() % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                })
            }
            Builtin::Constant { value, n } => {
                if value != 1 && value != -1 {
                    return Err(BfnError::InvalidParameter(format!(
                        "constant must be +1 or -1, got {value}"
                    )));
                }
                BooleanFunction::from_fn(n, |_| value)
            }
            Builtin::Threshold { n, t } => {
                if t > n {
                    return Err(BfnError::InvalidParameter(format!(
                        "threshold {t} exceeds arity {n}"
                    )));
                }
                BooleanFunction::from_fn(n, |x| if x.count_ones() as usize >= t { -1 } else { 1 })
            }
            Builtin::Tribes { w, s } => {
                if w == 0 || s == 0 {
                    return Err(BfnError::InvalidParameter(
                        "tribes width and count must be positive".into(),
                    ));
                }
                let tribe = (1u32 << w) - 1;
                BooleanFunction::from_fn(w * s, |x| {
                    if (0..s).any(|j| (x >> (j * w)) & tribe == tribe) {
                        -1
                    } else {
                        1
                    }
                })
            }
        }
    }
}

fn parse_usize(field: &str, what: &str) -> Result<usize> {
    field
        .trim()
        .parse()
        .map_err(|_| BfnError::InvalidParameter(format!("bad {what} `{field}`")))
}

impl FromStr for Builtin {
    type Err = BfnError;

    /// Accepts `or:5`, `and:5`, `maj:5`, `parity:5` (all variables),
    /// `parity:1,3:5`, `constant:+1:5`, `threshold:5:2` and `tribes:2:3`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let bad = || BfnError::InvalidParameter(format!("unrecognised function spec `{s}`"));
        let f = match parts.as_slice() {
            ["or", n] => Builtin::Or(parse_usize(n, "arity")?),
            ["and", n] => Builtin::And(parse_usize(n, "arity")?),
            ["maj", n] | ["majority", n] => Builtin::Majority(parse_usize(n, "arity")?),
            ["parity", n] => {
                let n = parse_usize(n, "arity")?;
                check_arity(n)?;
                Builtin::Parity {
                    vars: SubsetMask::full(n),
                    n,
                }
            }
            ["parity", vars, n] => {
                let n = parse_usize(n, "arity")?;
                check_arity(n)?;
                let mut idx = Vec::new();
                for v in vars.split(',').filter(|v| !v.trim().is_empty()) {
                    let v = parse_usize(v, "variable index")?;
                    if v == 0 || v > n {
                        return Err(BfnError::InvalidParameter(format!(
                            "variable index {v} outside 1..={n}"
                        )));
                    }
                    idx.push(v);
                }
                Builtin::Parity {
                    vars: SubsetMask::from_vars(&idx),
                    n,
                }
            }
            ["constant", v, n] | ["const", v, n] => {
                let value = match v.trim() {
                    "+1" | "1" | "+" => 1,
                    "-1" | "-" => -1,
                    _ => return Err(bad()),
                };
                Builtin::Constant {
                    value,
                    n: parse_usize(n, "arity")?,
                }
            }
            ["threshold", n, t] => Builtin::Threshold {
                n: parse_usize(n, "arity")?,
                t: parse_usize(t, "threshold")?,
            },
            ["tribes", w, s] => Builtin::Tribes {
                w: parse_usize(w, "tribe width")?,
                s: parse_usize(s, "tribe count")?,
            },
            _ => return Err(bad()),
        };
        Ok(f)
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Or(n) => write!(f, "or:{n}"),
            Builtin::And(n) => write!(f, "and:{n}"),
            Builtin::Majority(n) => write!(f, "maj:{n}"),
            Builtin::Parity { vars, n } => {
                let v: Vec<String> = vars.indices().map(|i| (i + 1).to_string()).collect();
                write!(f, "parity:{}:{n}", v.join(","))
            }
            Builtin::Constant { value, n } => write!(f, "constant:{value:+}:{n}"),
            Builtin::Threshold { n, t } => write!(f, "threshold:{n}:{t}"),
            Builtin::Tribes { w, s } => write!(f, "tribes:{w}:{s}"),
        }
    }
}

/// Parses a spec string and builds the function in one step.
pub fn builtin(spec: &str) -> Result<BooleanFunction> {
    spec.parse::<Builtin>()?.build()
}
