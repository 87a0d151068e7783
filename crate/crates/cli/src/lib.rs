//! Library side of the `bfn` command-line tool.

pub mod sweep;

use std::path::Path;

use bfn_core::{builtin, parse_truth_table, BfnError, BooleanFunction};

/// Failures of a subcommand, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 1.
    Io(String),
    /// Exit code 2.
    Invalid(String),
    /// Exit code 3: a closed form disagreed with its oracle.
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::CheckFailed(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Invalid(m) | CliError::CheckFailed(m) => m,
        }
    }
}

impl From<BfnError> for CliError {
    fn from(e: BfnError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

/// Resolves `--fn <spec>` or `--fn-file <path>` to a truth table.
pub fn load_function(spec: Option<&str>, file: Option<&Path>) -> Result<BooleanFunction, CliError> {
    match (spec, file) {
        (Some(s), None) => Ok(builtin(s)?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
            Ok(parse_truth_table(&text)?)
        }
        (Some(_), Some(_)) => Err(CliError::Invalid(
            "pass only one of --fn and --fn-file".into(),
        )),
        (None, None) => Err(CliError::Invalid(
            "one of --fn or --fn-file is required".into(),
        )),
    }
}

/// Writes to `path`, or stdout when absent.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}
