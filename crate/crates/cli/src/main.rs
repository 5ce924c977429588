mod error;
mod output;
mod points;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use curvjet::curvature::{bcoef_row, jmax, jmax_table, MAX_ORDER};
use curvjet::field::CurveSpec;
use curvjet::oracle::verify_curvature;

use error::{CliError, CliResult};
use output::{eval_csv, eval_sample, json_bytes, report_csv, update_csv, update_sample, EvalOutput, UpdateOutput, UpdateSpecs};

/// Curvature derivatives of rotation fields given by a rotation vector.
#[derive(Debug, Parser)]
#[command(name = "curvjet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rotation, spatial, material and co-rotational curvature jets.
    Eval(EvalArgs),
    /// Curvature of an incrementally rotated field.
    Update(UpdateArgs),
    /// Print the jmax and bcoef tables.
    Tables {
        /// Largest m to print.
        #[arg(value_parser = clap::value_parser!(u8).range(0..=12))]
        max_m: u8,
    },
    /// Compare closed forms against finite differences.
    Verify(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Sampling {
    /// Evenly spaced points `a:b:count`.
    #[arg(long, conflicts_with = "points", required_unless_present = "points", allow_hyphen_values = true)]
    xi: Option<String>,
    /// Comma-separated points.
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    /// Highest derivative order.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=MAX_ORDER as i64))]
    order: u8,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Sampling {
    fn points(&self) -> CliResult<Vec<f64>> {
        match (&self.xi, &self.points) {
            (Some(range), None) => points::parse_range(range),
            (None, Some(list)) => points::parse_list(list),
            _ => Err(CliError::Usage("give exactly one of --xi or --points".into())),
        }
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// JSON curve spec.
    #[arg(long)]
    spec: PathBuf,
    #[command(flatten)]
    sampling: Sampling,
}

#[derive(Debug, Args)]
struct UpdateArgs {
    /// JSON spec of the initial field.
    #[arg(long)]
    spec: PathBuf,
    /// JSON spec of the incremental rotation vector.
    #[arg(long)]
    increment: PathBuf,
    /// Append mixed errors against the composed-field oracle.
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    sampling: Sampling,
}

fn read_spec(path: &Path) -> CliResult<CurveSpec> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    let spec: CurveSpec =
        serde_json::from_str(&text).map_err(|source| CliError::SpecFormat { path: path.into(), source })?;
    Ok(spec.validated()?)
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, bytes)
            .map_err(|source| CliError::Write { path: path.display().to_string(), source }),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|source| CliError::Write { path: "stdout".into(), source }),
    }
}

fn cmd_eval(args: &EvalArgs) -> CliResult<()> {
    let spec = read_spec(&args.spec)?;
    let order = args.sampling.order as usize;
    let samples = args
        .sampling
        .points()?
        .into_iter()
        .map(|xi| eval_sample(&spec, xi, order))
        .collect::<CliResult<Vec<_>>>()?;
    let bytes = match args.sampling.format {
        Format::Csv => eval_csv(&samples),
        Format::Json => json_bytes(&EvalOutput { spec: &spec, order, samples }),
    };
    emit(&args.sampling.out, &bytes)
}

fn cmd_update(args: &UpdateArgs) -> CliResult<()> {
    let initial = read_spec(&args.spec)?;
    let increment = read_spec(&args.increment)?;
    let order = args.sampling.order as usize;
    let samples = args
        .sampling
        .points()?
        .into_iter()
        .map(|xi| update_sample(&initial, &increment, xi, order, args.verify))
        .collect::<CliResult<Vec<_>>>()?;
    let bytes = match args.sampling.format {
        Format::Csv => update_csv(&samples, args.verify),
        Format::Json => json_bytes(&UpdateOutput {
            spec: UpdateSpecs { initial: &initial, increment: &increment },
            order,
            samples,
        }),
    };
    emit(&args.sampling.out, &bytes)
}

fn cmd_verify(args: &EvalArgs) -> CliResult<()> {
    let spec = read_spec(&args.spec)?;
    let order = args.sampling.order as usize;
    let points = args.sampling.points()?;
    for xi in &points {
        spec.check_point(*xi).map_err(CliError::at(*xi))?;
    }
    let reports: Vec<_> = points.iter().map(|xi| verify_curvature(&spec, *xi, order)).collect();
    let bytes = match args.sampling.format {
        Format::Csv => report_csv(&reports),
        Format::Json => json_bytes(&reports),
    };
    emit(&args.sampling.out, &bytes)?;
    let total: usize = reports.iter().map(|r| r.rows.len()).sum();
    let failed: usize = reports.iter().map(|r| r.failures().count()).sum();
    if failed > 0 {
        let domain = reports.iter().any(|r| r.has_domain_error());
        return Err(CliError::Verification { failed, total, domain });
    }
    Ok(())
}

fn render_tables(max_m: usize) -> String {
    let mut s = String::new();
    s.push_str("jmax(m)\nm\tjmax\n");
    for m in 0..=max_m {
        s.push_str(&format!("{m}\t{}\n", jmax(m)));
    }
    s.push_str("\nbcoef(m, j) for j = 0..=jmax(m)\nm\tbcoef\n");
    for m in 0..=max_m {
        let row = bcoef_row(m).expect("m within the binomial table");
        let cells: Vec<String> = row.iter().map(i64::to_string).collect();
        s.push_str(&format!("{m}\t{}\n", cells.join("\t")));
    }
    s.push_str("\njmax(n - i) by row n and column i\nn\\i");
    for i in 0..=max_m {
        s.push_str(&format!("\t{i}"));
    }
    s.push('\n');
    for (n, row) in jmax_table(max_m).iter().enumerate() {
        s.push_str(&n.to_string());
        for i in 0..=max_m {
            match row.get(i) {
                Some(v) => s.push_str(&format!("\t{v}")),
                None => s.push_str("\t-"),
            }
        }
        s.push('\n');
    }
    s
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Eval(args) => cmd_eval(&args),
        Command::Update(args) => cmd_update(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Tables { max_m } => emit(&None, render_tables(max_m as usize).as_bytes()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
