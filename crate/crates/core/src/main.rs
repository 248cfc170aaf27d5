use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use halfplane_bounds::frontend::{self, json::to_pretty, OracleArgs, Options, Outcome};
use halfplane_bounds::oracle::Region;
use halfplane_bounds::Result;

/// Boundedness of f/g near the origin on the product of upper half-planes.
#[derive(Parser)]
#[command(name = "hpb", version)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Recursion cap for the branch expansion.
    #[arg(long, global = true, value_name = "N")]
    depth_cap: Option<usize>,
    /// Number of x-adic terms carried in series (default 4·deg g + 8).
    #[arg(long, global = true, value_name = "N")]
    x_precision: Option<usize>,
    /// Blow-up cap for monomialization (default 16 × generator degree).
    #[arg(long, global = true, value_name = "N")]
    max_blowups: Option<usize>,
    /// Truncation degree for refutation with explicit generators.
    #[arg(long, global = true, value_name = "N")]
    trunc: Option<u32>,
    /// Exit with 0/1/2 for a positive/negative/inconclusive verdict.
    #[arg(long, global = true)]
    exit_verdict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Is f/g bounded near the origin?
    Check { f: String, g: String },
    /// Admissibility of a denominator.
    Admissible { g: String },
    /// The product ideal I(g).
    Ideal { g: String },
    /// Exact membership of f in I(g) or in an ideal spec.
    Member {
        f: String,
        g: Option<String>,
        /// Ideal spec JSON file.
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Blow up until the ideal is principal monomial.
    Monomialize {
        /// A denominator g or an ideal spec `.json` file.
        ideal: String,
    },
    /// Integral dependence by divisorial orders.
    Valmember { f: String, ideal: String },
    /// Sampled ratios near the origin.
    Oracle {
        f: String,
        g: String,
        /// H2, R2 or C2; omit for the full equivalence report.
        #[arg(long)]
        region: Option<String>,
        #[arg(long, default_value_t = 10)]
        levels: u32,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Verify an integral-dependence equation.
    Certify {
        f: String,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        equation: String,
    },
}

fn run(cli: &Cli) -> Result<Outcome> {
    let opts = Options {
        depth_cap: cli.depth_cap,
        x_precision: cli.x_precision,
        max_blowups: cli.max_blowups,
        trunc: cli.trunc,
    };
    match &cli.command {
        Command::Check { f, g } => frontend::cmd_check(f, g, &opts),
        Command::Admissible { g } => frontend::cmd_admissible(g, &opts),
        Command::Ideal { g } => frontend::cmd_ideal(g, &opts),
        Command::Member { f, g, ideal } => match (g, ideal) {
            (Some(g), None) => frontend::cmd_member(f, g, &opts),
            (None, Some(spec)) => frontend::cmd_member(f, spec, &opts),
            _ => Err(halfplane_bounds::Error::InvalidInput("member needs exactly one of g or --ideal".into())),
        },
        Command::Monomialize { ideal } => frontend::cmd_monomialize(ideal, &opts),
        Command::Valmember { f, ideal } => frontend::cmd_valmember(f, ideal, &opts),
        Command::Oracle { f, g, region, levels, samples, seed } => {
            let region = region.as_deref().map(str::parse::<Region>).transpose()?;
            let args = OracleArgs { region, levels: *levels, samples: *samples, seed: *seed };
            frontend::cmd_oracle(f, g, &args, &opts)
        }
        Command::Certify { f, ideal, equation } => frontend::cmd_certify(f, ideal, equation, &opts),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = if cli.json { to_pretty(&out.json) + "\n" } else { out.text };
            // A closed pipe is not an error worth reporting.
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(if cli.exit_verdict { out.verdict.exit_code() as u8 } else { 0 })
        }
        Err(e) => {
            if cli.json {
                let v = frontend::envelope("error", serde_json::json!({"error": e.to_string()}));
                println!("{}", to_pretty(&v));
            }
            eprintln!("error: {e}");
            ExitCode::from(frontend::error_exit_code(&e) as u8)
        }
    }
}
