//! CSV and JSON renderings shared by the command-line tools.

use serde::Serialize;

use crate::function::SubsetMask;
use crate::spectrum::BiasedSpectrum;

/// Formats `x` with 9 significant digits, trimming trailing zeros.
///
/// The output is a pure function of the bits of `x`, so identical inputs give
/// byte-identical files.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // round to 9 significant digits first, then decide on notation
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (DIGITS - 1 - exp).max(0) as usize;
    let rounded: f64 = sci.parse().expect("valid float");
    trim_zeros(&format!("{rounded:.decimals$}"))
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientRow {
    pub subset_mask: u32,
    pub subset_pretty: String,
    pub coefficient: f64,
}

/// Rows of a spectrum, skipping coefficients of magnitude `<= drop_below`.
pub fn spectrum_rows(spec: &BiasedSpectrum, drop_below: Option<f64>) -> Vec<CoefficientRow> {
    spec.coefficients()
        .iter()
        .enumerate()
        .filter(|(_, c)| drop_below.is_none_or(|tol| c.abs() > tol))
        .map(|(s, &c)| CoefficientRow {
            subset_mask: s as u32,
            subset_pretty: SubsetMask(s as u32).pretty(),
            coefficient: c,
        })
        .collect()
}

pub const SPECTRUM_CSV_HEADER: &str = "subset_mask,subset_pretty,coefficient";

pub fn spectrum_csv(rows: &[CoefficientRow]) -> String {
    let mut out = String::from(SPECTRUM_CSV_HEADER);
    out.push('\n');
    for r in rows {
        // pretty subsets contain commas
        out.push_str(&format!(
            "{},\"{}\",{}\n",
            r.subset_mask,
            r.subset_pretty,
            fmt_sig(r.coefficient)
        ));
    }
    out
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    n: usize,
    p: f64,
    p_one: f64,
    coefficients: &'a [CoefficientRow],
}

pub fn spectrum_json(spec: &BiasedSpectrum, rows: &[CoefficientRow]) -> serde_json::Value {
    serde_json::to_value(SpectrumJson {
        n: spec.arity(),
        p: spec.bias().p(),
        p_one: spec.bias().p_one(),
        coefficients: rows,
    })
    .expect("spectrum serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;
    use crate::function::Bias;
    use crate::spectrum::transform;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.03125), "0.03125");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_sig(-0.5), "-0.5");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(123456789.4), "123456789");
        assert_eq!(fmt_sig(1.5e-7), "1.5e-7");
        assert_eq!(fmt_sig(0.999999999999), "1");
        assert_eq!(fmt_sig(2.0 / 3.0 * 1e-3), "0.000666666667");
    }

    #[test]
    fn majority_rows() {
        let spec = transform(&builtin("maj:3").unwrap(), Bias::uniform());
        let rows = spectrum_rows(&spec, Some(1e-12));
        let pretty: Vec<&str> = rows.iter().map(|r| r.subset_pretty.as_str()).collect();
        assert_eq!(pretty, ["{1}", "{2}", "{3}", "{1,2,3}"]);
        let csv = spectrum_csv(&rows);
        assert!(csv.starts_with("subset_mask,subset_pretty,coefficient\n1,\"{1}\",0.5\n"));
        assert!(csv.ends_with("7,\"{1,2,3}\",-0.5\n"));
        assert_eq!(spectrum_rows(&spec, None).len(), 8);
    }
}
