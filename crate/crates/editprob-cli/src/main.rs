//! Command-line front end for edit-probability scoring, decoding, and the
//! synthetic training lab. Exit status: 0 on success, 1 when a check ran and
//! failed (gradcheck over tolerance, bench mismatch), 2 on usage or input
//! errors.

mod commands;
mod files;
mod fmt;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::LossArg;
use toylab::{SynthConfig, TrainConfig};

#[derive(Parser)]
#[command(name = "editprob", version, about = "Alignment-tolerant string scoring and decoding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by everything that reads a stored emission sequence.
#[derive(Args)]
struct EmissionsArg {
    /// Emission sequence JSON file
    #[arg(long)]
    emissions: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Score a target string against an emission sequence
    Score {
        #[command(flatten)]
        emissions: EmissionsArg,
        /// Target string; the end-of-string symbol is appended when missing
        #[arg(long)]
        target: String,
        /// Lower-case the target before parsing
        #[arg(long)]
        fold_case: bool,
    },
    /// Dump the forward lattice and best edit path as CSV
    Matrix {
        #[command(flatten)]
        emissions: EmissionsArg,
        #[arg(long)]
        target: String,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        fold_case: bool,
    },
    /// Predict the most probable string, optionally lexicon-constrained
    Decode {
        #[command(flatten)]
        emissions: EmissionsArg,
        /// Lexicon file, one word per line
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Lexicon weight in [0.5, 1]; requires --lexicon
        #[arg(long)]
        lambda: Option<f64>,
        /// Lower-case lexicon words before parsing
        #[arg(long)]
        fold_case: bool,
    },
    /// Compare trie-based lexicon decoding against plain enumeration
    BenchLexicon {
        #[command(flatten)]
        emissions: EmissionsArg,
        #[arg(long)]
        lexicon: PathBuf,
        /// Queries per timing loop
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        repeat: u32,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Generate a synthetic frame/transcript corpus
    Gen {
        /// Number of samples
        #[arg(long)]
        count: usize,
        /// Output corpus path
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 6)]
        alphabet_size: usize,
        #[arg(long, default_value_t = 8)]
        feature_dim: usize,
        #[arg(long, default_value_t = 2)]
        len_min: usize,
        #[arg(long, default_value_t = 5)]
        len_max: usize,
        #[arg(long, default_value_t = 0.3)]
        noise_sigma: f64,
        #[arg(long, default_value_t = 0.15)]
        p_drop: f64,
        #[arg(long, default_value_t = 0.15)]
        p_dup: f64,
        #[arg(long)]
        seed: u64,
    },
    /// Train the toy frame classifier on a corpus
    Train {
        /// Training corpus path
        #[arg(long)]
        corpus: PathBuf,
        /// Held-out corpus; defaults to the last fifth of --corpus
        #[arg(long)]
        heldout: Option<PathBuf>,
        /// Alphabet size the corpus was generated with
        #[arg(long, default_value_t = 6)]
        alphabet_size: usize,
        /// Training objective
        #[arg(long, value_enum, default_value_t = LossArg::Ep)]
        loss: LossArg,
        #[arg(long, default_value_t = 30)]
        epochs: usize,
        #[arg(long, default_value_t = 32)]
        batch_size: usize,
        #[arg(long, default_value_t = 0.95)]
        rho: f64,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        /// Shuffling seed
        #[arg(long)]
        seed: u64,
        /// Output model JSON path
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure exact-match accuracy of a trained model on a corpus
    Eval {
        /// Model JSON path
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Compare analytic emission gradients against central differences
    Gradcheck {
        /// Random instances to check
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Cross-check the fast kernels against brute-force enumeration
    /// (debugging aid; tiny instances only)
    #[command(hide = true)]
    Oracle {
        #[command(flatten)]
        emissions: EmissionsArg,
        /// Enumerate every edit path for this target next to the fast score
        #[arg(long)]
        target: Option<String>,
        /// Score every string up to this many characters (EOS included)
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        fold_case: bool,
    },
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Score { emissions, target, fold_case } => {
            commands::score(&emissions.emissions, &target, fold_case)
        }
        Command::Matrix { emissions, target, out, fold_case } => {
            commands::matrix(&emissions.emissions, &target, &out, fold_case)
        }
        Command::Decode { emissions, lexicon, lambda, fold_case } => {
            commands::decode(&emissions.emissions, lexicon.as_deref(), lambda, fold_case)
        }
        Command::BenchLexicon { emissions, lexicon, repeat, lambda } => {
            commands::bench_lexicon(&emissions.emissions, &lexicon, repeat, lambda)
        }
        Command::Gen {
            count,
            out,
            alphabet_size,
            feature_dim,
            len_min,
            len_max,
            noise_sigma,
            p_drop,
            p_dup,
            seed,
        } => {
            let cfg = SynthConfig {
                alphabet_size,
                feature_dim,
                len_min,
                len_max,
                noise_sigma,
                p_drop,
                p_dup,
                seed,
            };
            commands::gen(cfg, count, &out)
        }
        Command::Train {
            corpus,
            heldout,
            alphabet_size,
            loss,
            epochs,
            batch_size,
            rho,
            eps,
            seed,
            out,
        } => {
            let cfg = TrainConfig { loss: loss.into(), epochs, batch_size, rho, eps, seed };
            commands::train_cmd(&corpus, heldout.as_deref(), alphabet_size, cfg, &out)
        }
        Command::Eval { model, corpus, lexicon, lambda } => {
            commands::eval(&model, &corpus, lexicon.as_deref(), lambda)
        }
        Command::Gradcheck { cases, seed } => commands::gradcheck(cases, seed),
        Command::Oracle { emissions, target, max_len, fold_case } => {
            commands::oracle(&emissions.emissions, target.as_deref(), max_len, fold_case)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
