//! `linset`: batch frontend for the scatteredness toolkit.

mod commands;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::render::Format;

#[derive(Parser, Debug)]
#[command(name = "linset", version, about = "Scattered linearized polynomials over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format of the report on stdout.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Largest admissible field size q^n.
    #[arg(long, global = true, default_value_t = linset_core::DEFAULT_CAP)]
    cap: u64,

    /// Drop wall-clock fields so reports are byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,

    /// Re-verify every witness in the report by direct evaluation.
    #[arg(long, global = true)]
    verify: bool,
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    p: u64,
    /// q = p^e.
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Extension degree of F_{q^n} over F_q.
    #[arg(long)]
    n: u32,
}

#[derive(Args, Debug, Clone)]
struct PolyArgs {
    /// Polynomial text, e.g. "a1=g^0; a2=g^5", or a JSON array of n elements.
    #[arg(long, group = "poly_source")]
    poly: Option<String>,
    /// Lunardon-Polverino binomial x^σ + δ x^{σ^{n-1}} with this δ.
    #[arg(long, group = "poly_source")]
    lp: Option<String>,
    /// Binomial x^σ + b x^{σ^2} with this b.
    #[arg(long, group = "poly_source")]
    b2: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Definition,
    Kernel,
    Minor,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Expect {
    NoneScattered,
    SomeScattered,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe the deterministic construction of F_{q^n}.
    FieldInfo {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Decide whether a σ-polynomial is scattered.
    Check {
        #[command(flatten)]
        field: FieldArgs,
        /// σ = q^s.
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
    },
    /// Rank of a σ-polynomial, by nested Dickson minors and by image size.
    Rank {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[command(flatten)]
        poly: PolyArgs,
    },
    /// Tabulate the Lunardon-Polverino binomials by norm of δ.
    ClassifyLp {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// Generic decider auditing every norm-based verdict.
        #[arg(long, value_enum, default_value_t = MethodArg::Minor)]
        method: MethodArg,
    },
    /// Search x^σ + b x^{σ^2} over all norm classes of b.
    SearchL2 {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// Exit 1 unless the conclusion matches.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
        /// Allow q > 9.
        #[arg(long)]
        large_q: bool,
    },
    /// Compare the curve-point test with the trace-sum test for x^σ + b x^{σ^2}.
    CurveTest {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// A single b; all norm-class representatives when omitted.
        #[arg(long)]
        b: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::USAGE } else { 0 });
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
        eprintln!("error: cannot start worker pool: {e}");
        return ExitCode::from(commands::USAGE);
    }
    match commands::run(&cli) {
        Ok(out) => {
            if let Err(e) = render::emit(&out, cli.format) {
                eprintln!("error: {e:#}");
                return ExitCode::from(commands::USAGE);
            }
            ExitCode::from(out.code)
        }
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}
