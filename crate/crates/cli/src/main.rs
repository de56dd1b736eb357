use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use correlated_optimin::optimin::{Variant, DEFAULT_RULE_CAP};
use correlated_optimin::rational::{self, Rational};
use correlated_optimin::search::DEFAULT_PATTERN_CAP;
use optimin_cli::{cmd_check, cmd_eval, cmd_find, cmd_value, exit_code_for, CheckKind, FindMode, Options};

#[derive(Parser)]
#[command(
    name = "optimin",
    version,
    about = "Exact correlated optimin analysis of finite games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,
    /// Add decimal hints to text output
    #[arg(long, global = true)]
    approx: bool,
    /// Maximum number of deviation rule profiles enumerated per minimization
    #[arg(long, global = true, default_value_t = DEFAULT_RULE_CAP)]
    cap: u128,
    /// Maximum number of gain inequalities for region enumeration
    #[arg(long, global = true, default_value_t = DEFAULT_PATTERN_CAP)]
    pattern_cap: usize,
    /// Worker threads for region solving
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Random samples for the dominance check after a search
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    /// Seed for the dominance check sampler
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the guarantees of a distribution
    Eval {
        game: PathBuf,
        dist: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::Outside)]
        variant: VariantArg,
        /// Evaluate one player only (1-based)
        #[arg(long)]
        player: Option<usize>,
    },
    /// Check the correlated or coarse correlated equilibrium conditions
    Check {
        game: PathBuf,
        dist: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Ce)]
        kind: KindArg,
    },
    /// Compute a correlated equilibrium or an optimin distribution
    Find {
        game: PathBuf,
        #[arg(value_enum)]
        mode: ModeArg,
        /// Positive weights such as "3,2"
        #[arg(long, value_parser = parse_weights)]
        weights: Option<WeightList>,
        /// Correlated equilibrium to dominate (optimin-dominating)
        #[arg(long)]
        ce: Option<PathBuf>,
    },
    /// Value and optimal strategies of a two-player zero-sum game
    Value { game: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Outside,
    Inside,
    SelectorOut,
    SelectorIn,
    Coarse,
    Mixed,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Outside => Variant::Outside,
            VariantArg::Inside => Variant::Inside,
            VariantArg::SelectorOut => Variant::SelectorOutside,
            VariantArg::SelectorIn => Variant::SelectorInside,
            VariantArg::Coarse => Variant::Coarse,
            VariantArg::Mixed => Variant::Mixed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Ce,
    Cce,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ce,
    Optimin,
    OptiminDominating,
}

// A bare Vec<T> would make clap collect repeated values instead.
type WeightList = Vec<Rational>;

fn parse_weights(s: &str) -> Result<WeightList, String> {
    rational::parse_list(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let opts = Options {
        cap: c.cap,
        pattern_cap: c.pattern_cap,
        jobs: c.jobs,
        trials: c.trials,
        seed: c.seed,
        approx: c.approx,
    };
    let report = match cli.command {
        Command::Eval {
            game,
            dist,
            variant,
            player,
        } => cmd_eval(&game, &dist, variant.into(), player, &opts),
        Command::Check { game, dist, kind } => {
            let kind = match kind {
                KindArg::Ce => CheckKind::Ce,
                KindArg::Cce => CheckKind::Cce,
            };
            cmd_check(&game, &dist, kind, &opts)
        }
        Command::Find {
            game,
            mode,
            weights,
            ce,
        } => {
            let mode = match mode {
                ModeArg::Ce => FindMode::Ce,
                ModeArg::Optimin => FindMode::Optimin,
                ModeArg::OptiminDominating => FindMode::OptiminDominating,
            };
            cmd_find(&game, mode, weights, ce.as_deref(), &opts)
        }
        Command::Value { game } => cmd_value(&game, &opts),
    };
    match report {
        Ok(r) => {
            let out = if c.json {
                serde_json::to_string_pretty(&r.to_json()).unwrap_or_default() + "\n"
            } else {
                r.render_text()
            };
            // A closed pipe is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::from(r.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
