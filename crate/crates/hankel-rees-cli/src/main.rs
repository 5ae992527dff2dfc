use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hankel_rees::campaign::{
    check_initial_commutes, check_product_gb, replay_golden, reproduce_counterexample,
    straighten_campaign, CampaignConfig, Report, Status,
};
use hankel_rees::chains::{Ambient, Label, LabeledChain};
use hankel_rees::rees::MarkedSet;
use hankel_rees::tabel::Tabel;

#[derive(Debug, Parser)]
#[command(
    name = "hankel-rees",
    about = "Standard-form rewriting and Gröbner verification for products of Hankel minor ideals"
)]
struct Cli {
    /// Worker threads (overrides HANKEL_REES_WORKERS).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seed recorded in campaign identifiers.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Emit reports without the timing field (byte-stable across runs).
    #[arg(long, global = true)]
    canonical: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct IdealArgs {
    /// Ambient variable count n.
    #[arg(long)]
    n: u32,

    /// Ideal selector `lo,hi:r` (repeatable), e.g. `--ideal 1,6:2`.
    #[arg(long = "ideal", value_name = "LO,HI:R", required = true)]
    ideals: Vec<String>,

    /// Abort the Buchberger sweep after this many S-pairs (status becomes
    /// inconclusive, exit code 3).
    #[arg(long)]
    max_spairs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rewrite a tabel (JSON on stdin) to its standard form (JSON on stdout).
    ReduceTabel,
    /// Straighten a product of two minors into its standard representation.
    Straighten {
        #[arg(long)]
        n: u32,
        /// First labeled chain, e.g. "(1,9)|2,4".
        p: String,
        /// Second labeled chain.
        q: String,
    },
    /// Print the marked binomial set G for rows up to the given length.
    GenG {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
    },
    /// Check that the natural generators of a product of close-cut
    /// determinantal ideals form a Gröbner basis.
    CheckGb(IdealArgs),
    /// Check that taking initial ideals commutes with the product, including
    /// a degreewise dimension sweep.
    CheckCommute {
        #[command(flatten)]
        ideals: IdealArgs,
        /// Highest degree swept by the dimension cross-check.
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Reproduce the non-close-cut counterexample where the initial ideal of
    /// the product differs from the product of initial ideals.
    Counterexample {
        #[arg(long, default_value_t = 6)]
        n: u32,
    },
    /// Replay the embedded worked examples against frozen outputs.
    Golden,
}

fn parse_selector(ambient: Ambient, s: &str) -> Result<(Label, usize), String> {
    let (window, size) = s
        .split_once(':')
        .ok_or_else(|| format!("selector `{s}` is not of the form LO,HI:R"))?;
    let (lo, hi) = window
        .split_once(',')
        .ok_or_else(|| format!("selector `{s}` is not of the form LO,HI:R"))?;
    let lo: u32 = lo.trim().parse().map_err(|e| format!("bad LO in `{s}`: {e}"))?;
    let hi: u32 = hi.trim().parse().map_err(|e| format!("bad HI in `{s}`: {e}"))?;
    let r: usize = size.trim().parse().map_err(|e| format!("bad R in `{s}`: {e}"))?;
    let label = Label::new(ambient, lo, hi).map_err(|e| e.to_string())?;
    Ok((label, r))
}

fn config_from(args: &IdealArgs, seed: u64) -> Result<CampaignConfig, String> {
    let ambient = Ambient::new(args.n).map_err(|e| e.to_string())?;
    let selectors = args
        .ideals
        .iter()
        .map(|s| parse_selector(ambient, s))
        .collect::<Result<Vec<_>, _>>()?;
    let mut config = CampaignConfig::new(ambient, selectors).map_err(|e| e.to_string())?;
    config.seed = seed;
    config.max_spairs = args.max_spairs;
    Ok(config)
}

fn emit(report: Report, canonical: bool) -> ExitCode {
    let body = if canonical { report.canonical_json() } else { report.to_json() };
    println!("{body}");
    match report.status {
        Status::Pass => ExitCode::SUCCESS,
        Status::Fail => ExitCode::from(1),
        Status::Inconclusive => ExitCode::from(3),
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::ReduceTabel => {
            let mut input = String::new();
            std::io::stdin()
                .read_to_string(&mut input)
                .map_err(|e| format!("reading stdin: {e}"))?;
            let tabel = Tabel::from_json(input.trim()).map_err(|e| e.to_string())?;
            println!("{}", tabel.reduce().to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Straighten { n, p, q } => {
            let ambient = Ambient::new(n).map_err(|e| e.to_string())?;
            let p = LabeledChain::parse(ambient, &p).map_err(|e| e.to_string())?;
            let q = LabeledChain::parse(ambient, &q).map_err(|e| e.to_string())?;
            Ok(emit(straighten_campaign(&p, &q), cli.canonical))
        }
        Command::GenG { n, max_len } => {
            let ambient = Ambient::new(n).map_err(|e| e.to_string())?;
            println!("{}", MarkedSet::generate(ambient, max_len).to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckGb(args) => {
            let config = config_from(&args, cli.seed)?;
            Ok(emit(check_product_gb(&config), cli.canonical))
        }
        Command::CheckCommute { ideals, bound } => {
            let mut config = config_from(&ideals, cli.seed)?;
            if let Some(b) = bound {
                config.degree_bound = b;
            }
            Ok(emit(check_initial_commutes(&config), cli.canonical))
        }
        Command::Counterexample { n } => {
            let ambient = Ambient::new(n).map_err(|e| e.to_string())?;
            Ok(emit(reproduce_counterexample(ambient), cli.canonical))
        }
        Command::Golden => Ok(emit(replay_golden(), cli.canonical)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    hankel_rees::init_workers(cli.workers);
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
