use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use telecloning::channel::DisentanglementParams;
use telecloning::protocol::{run_probabilistic, run_protocol, CopySlot, InputState, Outcome};
use telecloning::quantum::C64;
use telecloning::sweep::{figure_table, Axis, Figure, MPolicy, McColumns, SweepSpec, Table};
use telecloning::verify::{run_suite, Suite};
use telecloning::Error;

#[derive(Parser)]
#[command(name = "gtc", version, about = "Generalized 1->2 telecloning simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the protocol once and print every outcome.
    Run(RunArgs),
    /// Write the data behind one of the standard plots as CSV.
    Figure(FigureArgs),
    /// Sweep parameters on a grid and write CSV.
    Sweep(SweepArgs),
    /// Compare closed forms against the simulator.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Amplitude of |0>, e.g. 0.6 or 0.6+0.2i.
    #[arg(long)]
    alpha: C64,
    #[arg(long)]
    beta: C64,
    /// Disentanglement parameters nP,nA,nC1,nC2.
    #[arg(long, default_value = "1,1,1,1")]
    n: String,
    /// A value in [0, 1], `port` (m = nP) or `max`.
    #[arg(long, default_value = "1")]
    m: MPolicy,
    /// Keep only these outcomes, e.g. phi-,psi+.
    #[arg(long, value_delimiter = ',')]
    accept: Option<Vec<Outcome>>,
}

#[derive(Args)]
struct McArgs {
    /// Add Monte Carlo columns with this many samples per point.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// eg1-curve, eg1-surface, cpro-vs-eg-port or cpro-vs-eg-copy.
    name: Figure,
    #[arg(long, default_value_t = 0.01)]
    grid: f64,
    #[command(flatten)]
    mc: McArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Swept parameter as name:start:stop:step (repeatable), e.g. n_p:0:1:0.1.
    #[arg(long = "vary", required = true)]
    axes: Vec<Axis>,
    /// Values of the parameters that are not swept.
    #[arg(long, default_value = "1,1,1,1")]
    n: String,
    #[arg(long, default_value = "1")]
    m: MPolicy,
    #[command(flatten)]
    mc: McArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// formulas, montecarlo or conversion.
    suite: Suite,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
}

enum Failure {
    Usage(String),
    Io(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(msg) => Failure::Io(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn parse_params(s: &str) -> Result<DisentanglementParams, Failure> {
    let values: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("--n expects four numbers, got {s:?}")))?;
    let arr: [f64; 4] = values
        .try_into()
        .map_err(|_| Failure::Usage(format!("--n expects four numbers, got {s:?}")))?;
    let p = DisentanglementParams::from_array(arr);
    p.check_physical()?;
    Ok(p)
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let input = InputState::new(args.alpha, args.beta)?;
    let params = parse_params(&args.n)?;
    let m = args.m.resolve(&params);
    println!("params {params}  m {m}");
    match args.accept {
        None => {
            let run = run_protocol(&input, &params, m)?;
            println!("{:<6} {:>12} {:>12} {:>12}", "outcome", "P", "F1", "F2");
            for r in &run.outcomes {
                let f = |c| r.fidelity(c).map_or("-".to_owned(), |v| format!("{v:.10}"));
                println!(
                    "{:<6} {:>12.10} {:>12} {:>12}",
                    r.outcome.name(),
                    r.probability,
                    f(CopySlot::First),
                    f(CopySlot::Second)
                );
            }
            println!(
                "sum P_j F_j: copy 1 {:.10}, copy 2 {:.10}",
                run.weighted_fidelity_sum(CopySlot::First),
                run.weighted_fidelity_sum(CopySlot::Second)
            );
        }
        Some(accepted) => {
            let res = run_probabilistic(&input, &params, m, &accepted)?;
            println!("success probability {:.10}", res.success_probability);
            for r in &res.accepted {
                let f = |c| r.fidelity(c).map_or("-".to_owned(), |v| format!("{v:.10}"));
                println!(
                    "{:<6} P|acc {:.10}  F1 {}  F2 {}",
                    r.outcome.name(),
                    r.probability,
                    f(CopySlot::First),
                    f(CopySlot::Second)
                );
            }
            println!(
                "conditional fidelity: copy 1 {:.10}, copy 2 {:.10}",
                res.conditional_fidelity(CopySlot::First),
                res.conditional_fidelity(CopySlot::Second)
            );
        }
    }
    Ok(())
}

fn header_comment(seed: Option<u64>) -> Vec<String> {
    // the output path does not affect the data, so leave it out
    let mut args = Vec::new();
    let mut raw = std::env::args().skip(1);
    while let Some(a) = raw.next() {
        if a == "--out" {
            raw.next();
        } else if !a.starts_with("--out=") {
            args.push(a);
        }
    }
    let seed = seed.map_or("none".to_owned(), |s| s.to_string());
    vec![format!(
        "gtc {} | seed {} | telecloning {}",
        args.join(" "),
        seed,
        env!("CARGO_PKG_VERSION")
    )]
}

fn emit(table: &Table, mc: &McArgs) -> Result<(), Failure> {
    let comments = header_comment(mc.samples.map(|_| mc.seed));
    match &mc.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            table.write_csv(BufWriter::new(file), &comments)?;
        }
        None => table.write_csv(io::stdout().lock(), &comments)?,
    }
    Ok(())
}

fn mc_columns(mc: &McArgs) -> Option<McColumns> {
    mc.samples.map(|samples| McColumns { samples, seed: mc.seed })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Figure(args) => figure_table(args.name, args.grid, mc_columns(&args.mc))
            .map_err(Failure::from)
            .and_then(|t| emit(&t, &args.mc)),
        Command::Sweep(args) => parse_params(&args.n).and_then(|fixed| {
            let spec = SweepSpec {
                axes: args.axes,
                fixed,
                m: args.m,
                mc: mc_columns(&args.mc),
            };
            let table = spec.run()?;
            emit(&table, &args.mc)
        }),
        Command::Verify(args) => run_suite(args.suite, args.seed, args.samples)
            .map_err(Failure::from)
            .and_then(|checks| {
                let mut out = io::stdout().lock();
                for c in &checks {
                    let _ = writeln!(out, "{c}");
                }
                if checks.iter().all(|c| c.passed()) {
                    Ok(())
                } else {
                    Err(Failure::Verify)
                }
            }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
