use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use powersum::commands::{
    self, BoundsArgs, Context, OptimizeArgs, Outcome, PhiArgs, UsageError, VerifyArgs, WarmStart,
};
use powersum::report;

#[derive(Parser, Debug)]
#[command(
    name = "powersum",
    version,
    about = "Lower bounds, constructions and searches for power sums on the unit circle"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Format written to stdout.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Directory receiving one JSON report per invocation.
    #[arg(long, default_value = "runs", global = true)]
    out: PathBuf,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads; 0 uses every available core. Never affects results.
    #[arg(long, default_value_t = 0, global = true)]
    workers: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum WarmStartArg {
    None,
    Auto,
    RootsOfUnity,
    Montgomery,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of every lower bound for the given parameters.
    Bounds {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, conflicts_with = "j")]
        m: Option<u64>,
        /// Use m = n² + j.
        #[arg(long)]
        j: Option<u64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Lower and upper bounds at m = n² + n − 1.
        #[arg(long)]
        corollary3: bool,
        /// Range ratio for the CNS row.
        #[arg(long)]
        c: Option<f64>,
    },
    /// Check the one-sided inequalities on seeded random systems.
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 12)]
        n_max: u64,
        #[arg(long, default_value_t = 200)]
        m_max: u64,
    },
    /// Certify the Gauss-sum system for a prime p.
    Construct {
        #[arg(long)]
        p: u64,
    },
    /// Search for systems with a small maximum over 1..m.
    Optimize {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 64)]
        restarts: u64,
        #[arg(long, default_value_t = 2000)]
        iters: u64,
        #[arg(long, default_value_t = 1e-2)]
        step: f64,
        #[arg(long, default_value_t = 0.999)]
        step_decay: f64,
        /// Starting system for restart 0.
        #[arg(long, value_enum, default_value_t = WarmStartArg::None)]
        warm_start: WarmStartArg,
        /// Compare analytic and finite-difference gradients at each start.
        #[arg(long)]
        check_gradient: bool,
    },
    /// Emit the asymptotic bound curve over an alpha grid.
    Phi {
        #[arg(long, default_value_t = 1.0)]
        alpha_min: f64,
        #[arg(long, default_value_t = 10.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
}

fn dispatch(ctx: &Context, command: Command) -> Result<Outcome, UsageError> {
    match command {
        Command::Bounds {
            n,
            m,
            j,
            alpha,
            corollary3,
            c,
        } => commands::bounds(
            ctx,
            &BoundsArgs {
                n,
                m,
                j,
                alpha,
                corollary3,
                c,
            },
        ),
        Command::Verify {
            trials,
            n_max,
            m_max,
        } => commands::verify(
            ctx,
            &VerifyArgs {
                trials,
                n_max,
                m_max,
            },
        ),
        Command::Construct { p } => commands::construct(ctx, p),
        Command::Optimize {
            n,
            m,
            restarts,
            iters,
            step,
            step_decay,
            warm_start,
            check_gradient,
        } => {
            let mut args = OptimizeArgs::new(n, m);
            args.restarts = restarts;
            args.iterations = iters;
            args.step = step;
            args.step_decay = step_decay;
            args.check_gradient = check_gradient;
            args.warm_start = match warm_start {
                WarmStartArg::None => WarmStart::None,
                WarmStartArg::Auto => WarmStart::Auto,
                WarmStartArg::RootsOfUnity => WarmStart::RootsOfUnity,
                WarmStartArg::Montgomery => WarmStart::Montgomery,
            };
            commands::optimize(ctx, &args)
        }
        Command::Phi {
            alpha_min,
            alpha_max,
            step,
        } => commands::phi_curve(
            ctx,
            &PhiArgs {
                alpha_min,
                alpha_max,
                step,
            },
        ),
    }
}

fn emit(global: &Global, outcome: &Outcome) -> io::Result<()> {
    let path = outcome.report.persist(&global.out)?;
    if outcome.report.command == "phi" && !outcome.table.rows.is_empty() {
        let (csv_path, file) =
            report::create_unique(&global.out, &outcome.report.file_stem(), "csv")?;
        outcome.table.write_csv(io::BufWriter::new(file))?;
        eprintln!("curve written to {}", csv_path.display());
    }

    let stdout = io::stdout();
    let mut out = stdout.lock();
    match global.format {
        Format::Csv => outcome.table.write_csv(&mut out)?,
        Format::Json => writeln!(out, "{}", outcome.report.to_json())?,
    }
    out.flush()?;

    for line in &outcome.summary {
        eprintln!("{line}");
    }
    eprintln!("report written to {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context {
        seed: cli.global.seed,
        workers: cli.global.workers,
    };
    let outcome = match dispatch(&ctx, cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli.global, &outcome) {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.status.exit_code())
}
