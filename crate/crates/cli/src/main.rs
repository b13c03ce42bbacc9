use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gwc_cli::config::{ComplexInput, OutputFormat, RawConfig};
use gwc_cli::error::CliError;
use gwc_cli::report::{render_text, render_weights_text, run_experiment, weight_table};
use gwc_cli::scan::{scan_grid, split_values, ScanAxis};

#[derive(Parser)]
#[command(name = "gwc", version, about = "Defect checks for compressed generalized weighted composition operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single experiment.
    Verify(Common),
    /// Run one experiment per value of a parameter.
    Scan {
        #[command(flatten)]
        common: Common,
        /// Parameter to vary: a0, a1, a2, w, m, n or a.
        #[arg(long)]
        axis: String,
        /// Comma-separated values; empty for an empty scan.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        values: String,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print the weight sequence beta(0..=N).
    Weights(Common),
}

#[derive(Args)]
struct Common {
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// hardy, bergman, dirichlet, deriv_hardy or custom.
    #[arg(long)]
    space: Option<String>,
    /// Comma-separated beta(0..=N) for --space custom.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    /// Truncation order N.
    #[arg(long)]
    n: Option<usize>,
    /// Derivative order m.
    #[arg(long)]
    m: Option<usize>,
    /// Conjugation parameter, e.g. "1+0i" or "exp:0.5".
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a2: Option<String>,
    /// Automorphism point a.
    #[arg(long = "auto-a", allow_hyphen_values = true)]
    auto_a: Option<String>,
    /// Free rotation for --auto-a 0.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Comma-separated coefficients of phi.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Comma-separated coefficients of psi.
    #[arg(long, allow_hyphen_values = true)]
    psi: Option<String>,
    /// Comma-separated subset of symmetry, hermitian, normality, adjoint_kernel.
    #[arg(long, value_delimiter = ',')]
    defects: Option<Vec<String>>,
    #[arg(long)]
    margin: Option<usize>,
    /// Evaluation point of the adjoint-kernel check.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long = "tol-pass")]
    tol_pass: Option<f64>,
    #[arg(long = "tol-fail")]
    tol_fail: Option<f64>,
    /// text or json.
    #[arg(long)]
    format: Option<String>,
}

fn list(s: &Option<String>) -> Option<Vec<ComplexInput>> {
    s.as_ref().map(|s| split_values(s).into_iter().map(ComplexInput::Text).collect())
}

impl Common {
    fn raw(&self) -> Result<RawConfig, CliError> {
        let file = match &self.config {
            Some(path) => RawConfig::from_file(path)?,
            None => RawConfig::default(),
        };
        let text = |s: &Option<String>| s.clone().map(ComplexInput::Text);
        let flags = RawConfig {
            space: self.space.clone(),
            weights: self.weights.clone(),
            n: self.n,
            m: self.m,
            w: text(&self.w),
            a0: text(&self.a0),
            a1: text(&self.a1),
            a2: text(&self.a2),
            auto_a: text(&self.auto_a),
            lambda: text(&self.lambda),
            phi: list(&self.phi),
            psi: list(&self.psi),
            defects: self.defects.clone(),
            margin: self.margin,
            alpha: text(&self.alpha),
            tol_pass: self.tol_pass,
            tol_fail: self.tol_fail,
            format: self.format.clone(),
        };
        Ok(file.merged(flags))
    }
}

fn output_format(raw: &RawConfig) -> Result<OutputFormat, CliError> {
    match raw.format.as_deref() {
        None => Ok(OutputFormat::Text),
        Some(s) => s.parse().map_err(|e: String| CliError::config("format", e)),
    }
}

// A closed pipe (`gwc ... | head`) is not an error worth a panic.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify(common) => {
            let config = common.raw()?.resolve()?;
            let report = run_experiment(&config)?;
            match config.format {
                OutputFormat::Json => emit(&format!("{}\n", report.to_json())),
                OutputFormat::Text => emit(&render_text(&report)),
            }
            Ok(report.exit_code)
        }
        Command::Scan { common, axis, values, jobs } => {
            let raw = common.raw()?;
            let format = output_format(&raw)?;
            let axis: ScanAxis = axis.parse().map_err(|e: String| CliError::config("axis", e))?;
            if jobs == 0 {
                return Err(CliError::config("jobs", "must be at least 1"));
            }
            let result = scan_grid(&raw, axis, &split_values(&values), jobs);
            match format {
                OutputFormat::Json => emit(&format!("{}\n", result.to_json())),
                OutputFormat::Text => emit(&result.render_text()),
            }
            Ok(result.exit_code())
        }
        Command::Weights(common) => {
            let raw = common.raw()?;
            let table = weight_table(&raw)?;
            match output_format(&raw)? {
                OutputFormat::Json => {
                    emit(&format!("{}\n", serde_json::to_string_pretty(&table).expect("table serialises")))
                }
                OutputFormat::Text => emit(&render_weights_text(&table)),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
