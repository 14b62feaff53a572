//! `exptype`: run scenarios against the library and emit JSON, CSV or tables.
//!
//! Exit codes: 0 success, 1 input error, 2 property violation.

mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use exptype::scenario::{
    parse_rect, parse_scenario, Command, GridSpec, OutputFormat, Scenario, TaskDescriptor,
    TaskParams,
};
use exptype::zeros::Rectangle;

use commands::Demo;
use render::Report;

#[derive(Debug, Parser)]
#[command(
    name = "exptype",
    version,
    about = "Entire functions of exponential type from Stieltjes measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Args)]
struct Flags {
    /// Uniform grid `a:b:step`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<GridSpec>,
    /// Rectangle `x0,x1,y0,y1` for zero counting.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_rect)]
    rect: Option<Rectangle>,
    /// Phase τ of the inequality.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tau: Option<f64>,
    /// Power n in ω(z) = zⁿF(z), one of -1, 0, 1.
    #[arg(long, global = true, allow_negative_numbers = true)]
    n: Option<i32>,
    /// Angle α for h_α, the sampling nodes, or the kernel exponent.
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Tolerance overriding the command's default.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output format: csv, json or table.
    #[arg(long, global = true)]
    out: Option<OutputFormat>,
    /// Number of symmetric terms in the interpolation series.
    #[arg(long, global = true)]
    terms: Option<usize>,
}

impl Flags {
    fn params(&self) -> TaskParams {
        TaskParams {
            grid: self.grid,
            rect: self.rect,
            tau: self.tau,
            n: self.n,
            alpha: self.alpha,
            tol: self.tol,
            out: OutputFormat::default(),
            terms: self.terms,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run the task embedded in a scenario file.
    Run { scenario: PathBuf },
    /// Sample F, G, H, C, S, Δ, E and the margin on a grid.
    Eval { scenario: PathBuf },
    /// Residuals of the identities linking the transforms.
    Identities { scenario: PathBuf },
    /// Check the sharp inequality on a grid.
    Ineq { scenario: PathBuf },
    /// Compare both sides of the sampling interpolation formula.
    Interp { scenario: PathBuf },
    /// Count zeros in a rectangle by the argument principle.
    ZerosCount { scenario: PathBuf },
    /// Classify the zero set (Hermite–Biehler type or one lower zero).
    ZerosClassify { scenario: PathBuf },
    /// Zero of F on the negative imaginary axis.
    ZerosImag { scenario: PathBuf },
    /// Positive definiteness of the profile and related checks.
    Posdef { scenario: PathBuf },
    /// Built-in fixtures.
    Demo {
        #[arg(value_enum)]
        name: Demo,
        /// Parameter of the counterexample family, in (-1, -1/2).
        #[arg(long, allow_negative_numbers = true)]
        a: Option<f64>,
    },
}

fn load(path: &PathBuf) -> Result<Scenario> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_scenario(&text).with_context(|| format!("parsing {}", path.display()))
}

fn execute(cmd: Cmd, flags: &Flags) -> Result<(Report, OutputFormat)> {
    let overrides = flags.params();
    let (command, path) = match cmd {
        Cmd::Demo { name, a } => {
            let task = TaskDescriptor::resolve(Command::Demo, 1.0, None, &overrides)?;
            let report = commands::demo(name, a, &task.params)?;
            return Ok((report, flags.out.unwrap_or(task.params.out)));
        }
        Cmd::Run { scenario } => (None, scenario),
        Cmd::Eval { scenario } => (Some(Command::Eval), scenario),
        Cmd::Identities { scenario } => (Some(Command::Identities), scenario),
        Cmd::Ineq { scenario } => (Some(Command::Ineq), scenario),
        Cmd::Interp { scenario } => (Some(Command::Interp), scenario),
        Cmd::ZerosCount { scenario } => (Some(Command::ZerosCount), scenario),
        Cmd::ZerosClassify { scenario } => (Some(Command::ZerosClassify), scenario),
        Cmd::ZerosImag { scenario } => (Some(Command::ZerosImag), scenario),
        Cmd::Posdef { scenario } => (Some(Command::Posdef), scenario),
    };
    let scenario = load(&path)?;
    let command = match command {
        Some(c) => c,
        None => {
            scenario
                .task
                .as_ref()
                .with_context(|| format!("{} has no task to run", path.display()))?
                .command
        }
    };
    let task = TaskDescriptor::resolve(
        command,
        scenario.measure.sigma(),
        scenario.task.as_ref(),
        &overrides,
    )?;
    let report = commands::run(command, &scenario.measure, &task.params)?;
    Ok((report, flags.out.unwrap_or(task.params.out)))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match execute(cli.command, &cli.flags) {
        Ok((report, format)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(report.render(format).as_bytes());
            match &report.violation {
                Some(v) => {
                    eprintln!("{}", v.to_json());
                    ExitCode::from(2)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
