//! Command-line surface.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::json;
use superbase_core::hydra::play_with_limit;
use superbase_core::{
    length_via_hardy, to_hereditary, BaseSchedule, GoodsteinState, Hydra, Ordinal,
    Strategy, TraceRecord,
};

use crate::session::parse_path;

#[derive(Debug, Parser)]
#[command(name = "superbase", version, about = "Hereditary bases, ordinals below epsilon-zero, Goodstein sequences and the hydra game")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a number in hereditary base notation.
    Hb {
        n: BigUint,
        #[arg(long, default_value = "2")]
        base: BigUint,
        /// Also print the ordinal obtained by replacing the base with w.
        #[arg(long)]
        ordinal: bool,
    },
    /// Ordinal arithmetic in Cantor normal form.
    #[command(subcommand)]
    Ordinal(OrdinalCommand),
    /// Goodstein sequences under a base schedule.
    #[command(subcommand)]
    Goodstein(GoodsteinCommand),
    /// The hydra game.
    #[command(subcommand)]
    Hydra(HydraCommand),
    /// Serve hydra sessions and Goodstein traces over HTTP.
    Serve {
        /// Port to listen on; 0 picks a free port.
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory holding one JSON file per session.
        #[arg(long)]
        state: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum OrdinalCommand {
    /// Print LT, EQ or GT.
    Cmp { a: Ordinal, b: Ordinal },
    /// Ordinal sum a + b.
    Add { a: Ordinal, b: Ordinal },
    /// Natural (Hessenberg) sum.
    Nsum { a: Ordinal, b: Ordinal },
    /// The n-th element of the fundamental sequence of a limit ordinal.
    Fs { alpha: Ordinal, n: BigUint },
    /// The Hardy function H_alpha(n).
    Hardy {
        alpha: Ordinal,
        n: BigUint,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    #[arg(long)]
    seed: BigUint,
    /// classic, const:<c>, table:<v0>,<v1>,... or affine:<a>,<b>
    #[arg(long, default_value = "classic")]
    schedule: BaseSchedule,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
pub enum GoodsteinCommand {
    /// Print the sequence until it reaches 0 or the step limit.
    Run {
        #[command(flatten)]
        args: SequenceArgs,
        #[arg(long, default_value_t = 100)]
        max_steps: u64,
    },
    /// Take one step from the seed and print its descent witness.
    Step {
        #[command(flatten)]
        args: SequenceArgs,
    },
    /// Predict the index of the first zero via the Hardy hierarchy.
    Length {
        #[command(flatten)]
        args: SequenceArgs,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum HydraCommand {
    /// Play a game with a fixed strategy.
    Play {
        #[arg(long)]
        tree: Hydra,
        /// leftmost, rightmost, deepest or random
        #[arg(long, default_value = "leftmost")]
        strategy: String,
        /// Seed for the random strategy.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10_000)]
        max_moves: u64,
        #[arg(long, default_value_t = superbase_core::hydra::DEFAULT_MAX_NODES)]
        max_nodes: u64,
        #[arg(long)]
        json: bool,
    },
    /// Print the canonical form and ordinal of a tree.
    Ord {
        tree: Hydra,
    },
    /// Chop one head and print the resulting tree.
    Chop {
        tree: Hydra,
        /// Comma-separated child indices, e.g. 0,1
        #[arg(long)]
        path: String,
        /// Move number n of this chop.
        #[arg(long = "move", default_value_t = 1)]
        move_number: u64,
    },
}

/// Runs a parsed command, writing results to `out` and notes to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Hb { n, base, ordinal } => {
            let rep = to_hereditary(&n, &base)?;
            writeln!(out, "{rep}")?;
            if ordinal {
                writeln!(out, "{}", rep.ordinalize())?;
            }
        }
        Command::Ordinal(cmd) => run_ordinal(cmd, out)?,
        Command::Goodstein(cmd) => run_goodstein(cmd, out, err)?,
        Command::Hydra(cmd) => run_hydra(cmd, out, err)?,
        Command::Serve { port, host, state } => {
            let rt = tokio::runtime::Runtime::new().context("cannot start runtime")?;
            rt.block_on(crate::server::serve(&host, port, &state))?;
        }
    }
    Ok(())
}

fn run_ordinal(cmd: OrdinalCommand, out: &mut dyn Write) -> Result<()> {
    match cmd {
        OrdinalCommand::Cmp { a, b } => {
            let word = match superbase_core::compare(&a, &b) {
                std::cmp::Ordering::Less => "LT",
                std::cmp::Ordering::Equal => "EQ",
                std::cmp::Ordering::Greater => "GT",
            };
            writeln!(out, "{word}")?;
        }
        OrdinalCommand::Add { a, b } => writeln!(out, "{}", a.add(&b))?,
        OrdinalCommand::Nsum { a, b } => writeln!(out, "{}", a.natural_sum(&b))?,
        OrdinalCommand::Fs { alpha, n } => writeln!(out, "{}", alpha.fundamental_sequence(&n)?)?,
        OrdinalCommand::Hardy { alpha, n, budget } => writeln!(out, "{}", alpha.hardy(&n, budget)?)?,
    }
    Ok(())
}

fn run_goodstein(cmd: GoodsteinCommand, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cmd {
        GoodsteinCommand::Run { args, max_steps } => {
            // Streams one record per step; only the current term is kept.
            let mut state = GoodsteinState::new(&args.seed, args.schedule.clone())?;
            let mut records = Vec::new();
            let mut emit = |record: TraceRecord, out: &mut dyn Write| -> Result<()> {
                if args.json {
                    records.push(record);
                } else {
                    writeln!(out, "{record}")?;
                }
                Ok(())
            };
            emit(TraceRecord::new(0, state.value()), out)?;
            while state.step_index() < max_steps {
                let Some((next, _)) = state.step()? else {
                    break;
                };
                emit(TraceRecord::new(next.step_index(), next.value()), out)?;
                state = next;
            }
            let terminated = state.value().is_zero();
            if args.json {
                let body = json!({
                    "seed": args.seed.to_string(),
                    "schedule": args.schedule.to_string(),
                    "terminated": terminated,
                    "records": records,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&body)?)?;
            }
            if terminated {
                writeln!(err, "terminated at step {}", state.step_index())?;
            } else {
                writeln!(err, "not terminated within {max_steps} steps")?;
            }
        }
        GoodsteinCommand::Step { args } => {
            let state = GoodsteinState::new(&args.seed, args.schedule)?;
            let Some((_, w)) = state.step()? else {
                bail!("the sequence has already terminated");
            };
            let before = TraceRecord::new(w.step, &w.before_value);
            let after = TraceRecord::new(w.step + 1, &w.after_value);
            if args.json {
                let body = json!({
                    "step": w.step,
                    "base_from": w.base_from.to_string(),
                    "base_to": w.base_to.to_string(),
                    "before": before,
                    "after": after,
                    "descent": w.is_descent(),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&body)?)?;
            } else {
                writeln!(out, "{before}")?;
                writeln!(out, "{after}")?;
                let word = if w.is_descent() { "descends" } else { "DOES NOT descend" };
                writeln!(out, "{} -> {} {word}", w.before_ordinal, w.after_ordinal)?;
            }
        }
        GoodsteinCommand::Length { args, budget } => {
            let length = length_via_hardy(&args.seed, &args.schedule, budget)?;
            if args.json {
                let body = json!({ "seed": args.seed.to_string(), "length": length.to_string() });
                writeln!(out, "{body}")?;
            } else {
                writeln!(out, "{length}")?;
            }
        }
    }
    Ok(())
}

fn run_hydra(cmd: HydraCommand, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cmd {
        HydraCommand::Play {
            tree,
            strategy,
            seed,
            max_moves,
            max_nodes,
            json,
        } => {
            let mut strategy: Strategy = strategy.parse().map_err(anyhow::Error::msg)?;
            if let (Strategy::Random(_), Some(s)) = (&strategy, seed) {
                strategy = Strategy::Random(s);
            }
            let record = play_with_limit(&tree, strategy, max_moves, max_nodes)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&record)?)?;
            } else {
                writeln!(
                    out,
                    "start | tree {} | nodes {} | {}",
                    record.initial_tree,
                    tree.node_count(),
                    record.initial_ordinal
                )?;
                for m in &record.moves {
                    writeln!(out, "{m}")?;
                }
            }
            if record.won {
                writeln!(err, "won in {} moves", record.moves.len())?;
            } else {
                writeln!(err, "not won after {} moves", record.moves.len())?;
            }
        }
        HydraCommand::Ord { tree } => {
            writeln!(out, "{tree}")?;
            writeln!(out, "{}", tree.ord_of())?;
        }
        HydraCommand::Chop {
            tree,
            path,
            move_number,
        } => {
            let path = parse_path(&path).map_err(anyhow::Error::msg)?;
            let after = tree.with_move_counter(move_number).chop(&path)?;
            writeln!(out, "{after}")?;
            writeln!(out, "{}", after.ord_of())?;
        }
    }
    Ok(())
}
