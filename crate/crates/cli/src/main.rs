use std::path::PathBuf;
use std::process::ExitCode;

use bfn_cli::sweep::{self, Grid, Quantity, SweepSpec};
use bfn_cli::{load_function, write_output, CliError};
use bfn_core::export::{fmt_sig, spectrum_csv, spectrum_json, spectrum_rows};
use bfn_core::oracle::{self, OracleConfig};
use bfn_core::{
    best_k_junta, best_linear, make_joint, noise_sensitivity, transform, ApproximationReport, Bias,
    BooleanFunction, JointReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Biased Fourier analysis of Boolean functions.
///
/// Biases are given as P(X = +1) (`--p-one`); reports also show p = P(X = -1).
#[derive(Parser)]
#[command(name = "bfn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Biased Fourier coefficients of a function.
    Spectrum {
        #[command(flatten)]
        input: FunctionArgs,
        #[arg(long)]
        p_one: f64,
        /// Include coefficients that are zero.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Optimal k-junta or linear Boolean approximation.
    Approx {
        #[command(flatten)]
        input: FunctionArgs,
        #[arg(long, value_enum)]
        class: ClassArg,
        /// Junta size; required for `--class junta`.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p_one: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Noise sensitivity under a correlated input pair.
    Noise {
        #[command(flatten)]
        input: FunctionArgs,
        #[arg(long)]
        p_one: f64,
        /// P(Y = +1); defaults to `--p-one`.
        #[arg(long)]
        q_one: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
        /// Also report a Monte Carlo estimate.
        #[arg(long)]
        mc: bool,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep P(X = +1) over a grid, one row per point.
    Sweep {
        #[command(flatten)]
        input: FunctionArgs,
        /// Comma-separated subset of junta_mismatch, junta_lower_bound,
        /// junta_upper_bound, linear_mismatch, noise_sensitivity.
        #[arg(long, value_delimiter = ',')]
        quantities: Option<Vec<Quantity>>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        q_one: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        start: f64,
        #[arg(long, default_value_t = 0.99)]
        stop: f64,
        #[arg(long, default_value_t = 0.005)]
        step: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cross-check every closed form against brute force and Monte Carlo.
    Oracle {
        #[command(flatten)]
        input: FunctionArgs,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.3,0.5,0.7,0.9")]
        p_one: Vec<f64>,
        #[arg(long)]
        q_one: Option<f64>,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        rho: f64,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FunctionArgs {
    /// Builtin function, e.g. `or:5`, `maj:5`, `parity:1,3:5`, `threshold:5:2`,
    /// `tribes:2:3`, `constant:+1:5`.
    #[arg(long = "fn")]
    function: Option<String>,
    /// Truth-table file (`n=<arity>` header, then `+`/`-` entries).
    #[arg(long)]
    fn_file: Option<PathBuf>,
}

impl FunctionArgs {
    fn load(&self) -> Result<BooleanFunction, CliError> {
        load_function(self.function.as_deref(), self.fn_file.as_deref())
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Junta,
    Linear,
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json renders");
    s.push('\n');
    s
}

fn cmd_spectrum(
    input: &FunctionArgs,
    p_one: f64,
    all: bool,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let bias = Bias::from_p_one(p_one)?;
    let f = input.load()?;
    let spec = transform(&f, bias);
    let rows = spectrum_rows(&spec, if all { None } else { Some(1e-12) });
    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => spectrum_csv(&rows),
        Format::Json => json_text(&spectrum_json(&spec, &rows)),
    };
    write_output(output.out.as_deref(), &text)
}

fn report_csv(r: &ApproximationReport) -> String {
    let opt = |v: Option<f64>| v.map(fmt_sig).unwrap_or_default();
    let ties: Vec<String> = r.ties.iter().map(|s| s.bits().to_string()).collect();
    format!(
        "class,p_one,p,support_mask,support_pretty,degree,sign_constant,mismatch,l1,lower_bound,upper_bound,ties\n{},{},{},{},\"{}\",{},{},{},{},{},{},{}\n",
        r.to_json()["class"].as_str().unwrap_or_default(),
        fmt_sig(r.bias.p_one()),
        fmt_sig(r.bias.p()),
        r.support.bits(),
        r.support.pretty(),
        r.degree(),
        r.sign_constant.map(|c| format!("{c:+}")).unwrap_or_default(),
        fmt_sig(r.mismatch),
        opt(r.l1),
        opt(r.bounds.map(|b| b.lower)),
        opt(r.bounds.map(|b| b.upper)),
        ties.join(";"),
    )
}

fn cmd_approx(
    input: &FunctionArgs,
    class: ClassArg,
    k: Option<usize>,
    p_one: f64,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let bias = Bias::from_p_one(p_one)?;
    let f = input.load()?;
    let report = match (class, k) {
        (ClassArg::Junta, Some(k)) => best_k_junta(&f, k, bias)?,
        (ClassArg::Junta, None) => {
            return Err(CliError::Invalid("--class junta requires --k".into()))
        }
        (ClassArg::Linear, None) => best_linear(&f, bias),
        (ClassArg::Linear, Some(_)) => {
            return Err(CliError::Invalid(
                "--k only applies to --class junta".into(),
            ))
        }
    };
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&report.to_json()),
        Format::Csv => report_csv(&report),
    };
    write_output(output.out.as_deref(), &text)
}

#[allow(clippy::too_many_arguments)]
fn cmd_noise(
    input: &FunctionArgs,
    p_one: f64,
    q_one: Option<f64>,
    rho: f64,
    mc: bool,
    samples: u64,
    seed: u64,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let p = Bias::from_p_one(p_one)?;
    let q = Bias::from_p_one(q_one.unwrap_or(p_one))?;
    let f = input.load()?;
    let model = make_joint(p, q, rho)?;
    let report = JointReport::compute(&f, &f, &model)?;
    let ns = noise_sensitivity(&f, &model);
    let mut value = serde_json::to_value(&report).expect("report serializes");
    value["noise_sensitivity"] = ns.into();
    let mut mc_fields = None;
    if mc {
        let cfg = OracleConfig::new(seed, samples)?;
        let (est, se) = oracle::mc_mismatch(&f, &f, &model, cfg)?;
        value["monte_carlo"] = serde_json::json!({
            "estimate": est, "std_error": se, "samples": samples, "seed": seed,
        });
        mc_fields = Some((est, se));
    }
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&value),
        Format::Csv => {
            let mut header = "p_one,q_one,p,q,rho,noise_sensitivity".to_string();
            let mut row = format!(
                "{},{},{},{},{},{}",
                fmt_sig(report.p_one),
                fmt_sig(report.q_one),
                fmt_sig(report.p),
                fmt_sig(report.q),
                fmt_sig(rho),
                fmt_sig(ns)
            );
            if let Some((est, se)) = mc_fields {
                header.push_str(",mc_estimate,mc_std_error,mc_samples,mc_seed");
                row.push_str(&format!(
                    ",{},{},{samples},{seed}",
                    fmt_sig(est),
                    fmt_sig(se)
                ));
            }
            format!("{header}\n{row}\n")
        }
    };
    write_output(output.out.as_deref(), &text)
}

fn cmd_sweep(spec: SweepSpec, output: &OutputArgs) -> Result<(), CliError> {
    let rows = sweep::run_sweep(&spec)?;
    let header = spec.header();
    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => sweep::to_csv(&header, &rows),
        Format::Json => json_text(&sweep::to_json(&header, &rows)),
    };
    write_output(output.out.as_deref(), &text)
}

struct CheckLog {
    lines: Vec<String>,
    failures: usize,
}

impl CheckLog {
    fn record(&mut self, pass: bool, what: String) {
        if !pass {
            self.failures += 1;
        }
        self.lines
            .push(format!("{} {what}", if pass { "PASS" } else { "FAIL" }));
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle(
    input: &FunctionArgs,
    p_ones: &[f64],
    q_one: Option<f64>,
    rho: f64,
    samples: u64,
    seed: u64,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    const TOL: f64 = 1e-9;
    let f = input.load()?;
    let n = f.arity();
    let cfg = OracleConfig::new(seed, samples)?;
    let mut log = CheckLog {
        lines: Vec::new(),
        failures: 0,
    };

    for &t in p_ones {
        let bias = Bias::from_p_one(t)?;
        if n <= oracle::MAX_ENUM_JUNTA_ARITY {
            for k in 0..n.min(oracle::MAX_ENUM_JUNTA_K + 1) {
                let closed = best_k_junta(&f, k, bias)?.mismatch;
                let (brute, _) = oracle::enum_best_junta(&f, k, bias)?;
                log.record(
                    (closed - brute).abs() <= TOL,
                    format!(
                        "junta p_one={t} k={k}: closed form {closed:.12} exhaustive {brute:.12}"
                    ),
                );
            }
        }
        if n <= oracle::MAX_ENUM_LINEAR_ARITY {
            let closed = best_linear(&f, bias).mismatch;
            let (brute, _) = oracle::enum_best_linear(&f, bias)?;
            log.record(
                (closed - brute).abs() <= TOL,
                format!("linear p_one={t}: closed form {closed:.12} exhaustive {brute:.12}"),
            );
        }
        let q = Bias::from_p_one(q_one.unwrap_or(t))?;
        let model = make_joint(bias, q, rho)?;
        let closed = noise_sensitivity(&f, &model);
        if n <= oracle::MAX_ENUM_MISMATCH_ARITY {
            let brute = oracle::enum_mismatch(&f, &f, &model)?;
            log.record(
                (closed - brute).abs() <= TOL,
                format!("noise p_one={t} q_one={} rho={rho}: closed form {closed:.12} enumeration {brute:.12}", fmt_sig(q.p_one())),
            );
        }
        let (est, se) = oracle::mc_mismatch(&f, &f, &model, cfg)?;
        log.record(
            (est - closed).abs() <= 3.0 * se,
            format!(
                "monte-carlo p_one={t} q_one={} rho={rho}: closed form {closed:.6} estimate {est:.6} +- {se:.6} (seed {seed}, {samples} samples)",
                fmt_sig(q.p_one())
            ),
        );
    }

    let mut text = log.lines.join("\n");
    text.push_str(&format!(
        "\n{} checks, {} failed\n",
        log.lines.len(),
        log.failures
    ));
    write_output(out, &text)?;
    if log.failures > 0 {
        return Err(CliError::CheckFailed(format!(
            "{} oracle checks failed",
            log.failures
        )));
    }
    Ok(())
}

fn default_quantities(k: Option<usize>, rho: Option<f64>) -> Vec<Quantity> {
    let mut q = Vec::new();
    if k.is_some() {
        q.extend([
            Quantity::JuntaMismatch,
            Quantity::JuntaLowerBound,
            Quantity::JuntaUpperBound,
        ]);
    }
    q.push(Quantity::LinearMismatch);
    if rho.is_some() {
        q.push(Quantity::NoiseSensitivity);
    }
    q
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum {
            input,
            p_one,
            all,
            output,
        } => cmd_spectrum(&input, p_one, all, &output),
        Command::Approx {
            input,
            class,
            k,
            p_one,
            output,
        } => cmd_approx(&input, class, k, p_one, &output),
        Command::Noise {
            input,
            p_one,
            q_one,
            rho,
            mc,
            samples,
            seed,
            output,
        } => cmd_noise(&input, p_one, q_one, rho, mc, samples, seed, &output),
        Command::Sweep {
            input,
            quantities,
            k,
            q_one,
            rho,
            start,
            stop,
            step,
            output,
        } => {
            let spec = SweepSpec {
                grid: Grid { start, stop, step },
                quantities: quantities.unwrap_or_else(|| default_quantities(k, rho)),
                function: input.load()?,
                k,
                q_one,
                rho,
            };
            cmd_sweep(spec, &output)
        }
        Command::Oracle {
            input,
            p_one,
            q_one,
            rho,
            samples,
            seed,
            out,
        } => cmd_oracle(&input, &p_one, q_one, rho, samples, seed, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bfn: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
