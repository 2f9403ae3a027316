//! One function per subcommand. Every function returns the process exit
//! status: `SUCCESS` for a completed command, `1` for a failed check
//! (gradcheck over tolerance, bench result mismatch). Usage and input errors
//! propagate as `anyhow` errors and the caller maps them to exit code 2.

use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};

use editprob::oracle::{enumerate_paths, enumerate_strings, total_mass};
use editprob::{
    best_edit_path, ep_backward, ep_forward, ep_score, predict_free, predict_lex,
    predict_lex_enumerated, validate_emissions, Alphabet, EmissionSequence, Frame, Lexicon,
    Prediction, PredictionSource, TargetString,
};
use toylab::{
    evaluate, generate_corpus, read_corpus, toy_alphabet, train, write_corpus, LossKind,
    SplitMix64, SynthConfig, ToyModel, TrainConfig, DEFAULT_LAMBDA,
};

use crate::files;
use crate::fmt::format_sig;

/// Slack allowed between a stored distribution and an exact unit sum before
/// a file is rejected; accepted residues are renormalized away.
const VALIDATE_TOL: f64 = 1e-6;

/// Significant digits in printed scores.
const SIG: usize = 12;

fn load_valid_emissions(path: &Path) -> Result<(Alphabet, EmissionSequence<f64>)> {
    let (alphabet, raw) = files::read_emissions(path)?;
    let em = validate_emissions(raw, &alphabet, VALIDATE_TOL)?;
    Ok((alphabet, em))
}

/// Parses a CLI target, appending the EOS symbol when absent.
fn parse_target(alphabet: &Alphabet, text: &str, fold_case: bool) -> Result<TargetString> {
    let text = if fold_case { text.to_lowercase() } else { text.to_string() };
    let eos = alphabet.symbol(alphabet.eos());
    let parsed = if text.ends_with(eos) {
        TargetString::parse(alphabet, &text)
    } else {
        TargetString::parse_word(alphabet, &text)
    };
    Ok(parsed?)
}

fn load_lexicon(path: &Path, alphabet: &Alphabet, fold_case: bool) -> Result<Lexicon> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading lexicon {}", path.display()))?;
    let text = if fold_case { text.to_lowercase() } else { text };
    let lexicon = Lexicon::from_text(&text, alphabet);
    for word in lexicon.skipped() {
        eprintln!("warning: skipped lexicon word {word:?}");
    }
    Ok(lexicon)
}

pub fn score(emissions: &Path, target: &str, fold_case: bool) -> Result<ExitCode> {
    let (alphabet, em) = load_valid_emissions(emissions)?;
    let t = parse_target(&alphabet, target, fold_case)?;
    let log_ep = ep_score(&em, &t);
    println!("log_ep={} ep={}", format_sig(log_ep, SIG), format_sig(log_ep.exp(), SIG));
    Ok(ExitCode::SUCCESS)
}

pub fn matrix(emissions: &Path, target: &str, out: &Path, fold_case: bool) -> Result<ExitCode> {
    let (alphabet, em) = load_valid_emissions(emissions)?;
    let t = parse_target(&alphabet, target, fold_case)?;
    let grid = ep_forward(&em, &t);
    let (path, _) = best_edit_path(&em, &t);

    let mut text = String::from("i");
    for j in 0..grid.cols() {
        text.push_str(&format!(",j={j}"));
    }
    text.push('\n');
    for i in 0..grid.rows() {
        text.push_str(&i.to_string());
        for j in 0..grid.cols() {
            text.push_str(&format!(",{:?}", grid.get(i, j)));
        }
        text.push('\n');
    }
    text.push_str("\nop,i,j\n");
    for op in &path {
        text.push_str(&format!("{},{},{}\n", op.kind.name(), op.i, op.j));
    }
    fs::write(out, text).with_context(|| format!("writing matrix {}", out.display()))?;
    Ok(ExitCode::SUCCESS)
}

fn print_prediction(alphabet: &Alphabet, p: &Prediction<f64>) {
    let source = match p.source {
        PredictionSource::Free => "free",
        PredictionSource::Lexicon => "lexicon",
    };
    println!(
        "prediction={} log_ep={} ep={} source={}",
        p.target.render(alphabet),
        format_sig(p.log_score, SIG),
        format_sig(p.log_score.exp(), SIG),
        source
    );
}

pub fn decode(
    emissions: &Path,
    lexicon: Option<&Path>,
    lambda: Option<f64>,
    fold_case: bool,
) -> Result<ExitCode> {
    let (alphabet, em) = load_valid_emissions(emissions)?;
    let prediction = match lexicon {
        Some(path) => {
            let lexicon = load_lexicon(path, &alphabet, fold_case)?;
            predict_lex(&em, &alphabet, &lexicon, lambda.unwrap_or(DEFAULT_LAMBDA))?
        }
        None => {
            if lambda.is_some() {
                bail!("--lambda only applies with --lexicon");
            }
            predict_free(&em, &alphabet)
        }
    };
    print_prediction(&alphabet, &prediction);
    Ok(ExitCode::SUCCESS)
}

pub fn bench_lexicon(
    emissions: &Path,
    lexicon: &Path,
    repeat: u32,
    lambda: Option<f64>,
) -> Result<ExitCode> {
    let (alphabet, em) = load_valid_emissions(emissions)?;
    let lexicon = load_lexicon(lexicon, &alphabet, false)?;
    if lexicon.is_empty() {
        bail!("lexicon has no usable words");
    }
    let lambda = lambda.unwrap_or(DEFAULT_LAMBDA);

    let started = Instant::now();
    let mut enumerated = Vec::with_capacity(repeat as usize);
    for _ in 0..repeat {
        enumerated.push(predict_lex_enumerated(&em, &alphabet, &lexicon, lambda)?);
    }
    let enum_secs = started.elapsed().as_secs_f64();

    let started = Instant::now();
    let mut trie = Vec::with_capacity(repeat as usize);
    for _ in 0..repeat {
        trie.push(predict_lex(&em, &alphabet, &lexicon, lambda)?);
    }
    let trie_secs = started.elapsed().as_secs_f64();

    for (e, t) in enumerated.iter().zip(&trie) {
        if e != t {
            eprintln!(
                "mismatch: enumeration {} vs trie {}",
                e.target.render(&alphabet),
                t.target.render(&alphabet)
            );
            return Ok(ExitCode::from(1));
        }
    }
    print_prediction(&alphabet, &trie[0]);
    println!("enumeration: {:.3} ms/query", enum_secs * 1e3 / repeat as f64);
    println!("trie: {:.3} ms/query", trie_secs * 1e3 / repeat as f64);
    println!("speedup: {:.2}x", enum_secs / trie_secs);
    Ok(ExitCode::SUCCESS)
}

pub fn gen(cfg: SynthConfig, count: usize, out: &Path) -> Result<ExitCode> {
    let samples = generate_corpus(&cfg, count)?;
    let alphabet = cfg.alphabet()?;
    let file =
        fs::File::create(out).with_context(|| format!("creating corpus {}", out.display()))?;
    let mut writer = BufWriter::new(file);
    write_corpus(&samples, &alphabet, &mut writer)?;
    eprintln!("wrote {count} samples to {}", out.display());
    Ok(ExitCode::SUCCESS)
}

fn read_corpus_file(path: &Path, alphabet: &Alphabet) -> Result<Vec<toylab::Sample>> {
    let file =
        fs::File::open(path).with_context(|| format!("opening corpus {}", path.display()))?;
    Ok(read_corpus(&mut BufReader::new(file), alphabet)?)
}

pub fn train_cmd(
    corpus: &Path,
    heldout: Option<&Path>,
    alphabet_size: usize,
    cfg: TrainConfig,
    out: &Path,
) -> Result<ExitCode> {
    let alphabet = toy_alphabet(alphabet_size)?;
    let samples = read_corpus_file(corpus, &alphabet)?;
    let (train_set, heldout_set) = match heldout {
        Some(path) => (samples, read_corpus_file(path, &alphabet)?),
        None => {
            // No separate held-out file: reserve the last fifth.
            let cut = samples.len() - samples.len() / 5;
            let mut train_set = samples;
            let heldout_set = train_set.split_off(cut);
            (train_set, heldout_set)
        }
    };
    if train_set.is_empty() {
        bail!("corpus {} has no training samples", corpus.display());
    }
    let feature_dim = train_set[0].frames[0].len();
    let model = ToyModel::new(alphabet, feature_dim)?;
    let (trained, report) = train(&model, &train_set, &heldout_set, &cfg)?;
    for (epoch, (loss, acc)) in
        report.epoch_losses.iter().zip(&report.epoch_heldout_accuracy).enumerate()
    {
        eprintln!("epoch {}: loss={loss:.4} heldout={acc:.4}", epoch + 1);
    }
    files::write_model(out, &trained, &report)?;
    println!("final_accuracy={}", format_sig(report.final_accuracy, SIG));
    Ok(ExitCode::SUCCESS)
}

pub fn eval(
    model: &Path,
    corpus: &Path,
    lexicon: Option<&Path>,
    lambda: Option<f64>,
) -> Result<ExitCode> {
    let model = files::read_model(model)?;
    let samples = read_corpus_file(corpus, model.alphabet())?;
    let lexicon = match lexicon {
        Some(path) => Some(load_lexicon(path, model.alphabet(), false)?),
        None => {
            if lambda.is_some() {
                bail!("--lambda only applies with --lexicon");
            }
            None
        }
    };
    let accuracy = evaluate(&model, &samples, lexicon.as_ref(), lambda)?;
    println!("accuracy={}", format_sig(accuracy, SIG));
    Ok(ExitCode::SUCCESS)
}

/// Adds `delta` to the `slot`-th probability entry, counting through each
/// frame's y, r, ins and then the closing distribution.
fn perturb(em: &EmissionSequence<f64>, slot: usize, delta: f64) -> EmissionSequence<f64> {
    let mut out = em.clone();
    let mut remaining = slot;
    for frame in &mut out.frames {
        for v in frame.y.iter_mut().chain(frame.r.iter_mut()).chain(frame.ins.iter_mut()) {
            if remaining == 0 {
                *v += delta;
                return out;
            }
            remaining -= 1;
        }
    }
    out.final_ins[remaining] += delta;
    out
}

fn grad_entry(grads: &editprob::EmissionGradients<f64>, slot: usize) -> f64 {
    let mut remaining = slot;
    for frame in &grads.frames {
        for v in frame.y.iter().chain(frame.r.iter()).chain(frame.ins.iter()) {
            if remaining == 0 {
                return *v;
            }
            remaining -= 1;
        }
    }
    grads.final_ins[remaining]
}

pub fn gradcheck(cases: usize, seed: u64) -> Result<ExitCode> {
    const STEP: f64 = 1e-6;
    const REL_TOL: f64 = 1e-5;
    const ABS_TOL: f64 = 1e-8;

    let mut rng = SplitMix64::new(seed);
    let simplex = |rng: &mut SplitMix64, k: usize| -> Vec<f64> {
        let raw: Vec<f64> = (0..k).map(|_| 0.05 + rng.next_f64()).collect();
        let sum: f64 = raw.iter().sum();
        raw.iter().map(|v| v / sum).collect()
    };
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let k = 2 + rng.below(4);
        let n = rng.below(7);
        let word_len = rng.below(5);
        let alphabet = toy_alphabet(k)?;
        let frames = (0..n)
            .map(|_| Frame {
                y: simplex(&mut rng, k),
                r: simplex(&mut rng, 3).try_into().expect("three entries"),
                ins: simplex(&mut rng, k),
            })
            .collect();
        let em = EmissionSequence { frames, final_ins: simplex(&mut rng, k) };
        let word: Vec<usize> = (0..word_len).map(|_| rng.below(k - 1)).collect();
        let target = TargetString::from_word_indices(&word, &alphabet)?;
        let (_, grads) = ep_backward(&em, &target)?;
        let slots = n * (2 * k + 3) + k;
        for slot in 0..slots {
            let up = -ep_score(&perturb(&em, slot, STEP), &target);
            let down = -ep_score(&perturb(&em, slot, -STEP), &target);
            let fd = (up - down) / (2.0 * STEP);
            let an = grad_entry(&grads, slot);
            // ≤ REL_TOL exactly when |fd − an| ≤ max(REL_TOL·|an|, ABS_TOL).
            worst = worst.max((fd - an).abs() / an.abs().max(ABS_TOL / REL_TOL));
        }
    }
    println!("max_rel_err={worst:.3e}");
    Ok(if worst > REL_TOL { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

/// Keeps the `n` highest-probability entries, in descending order.
fn top_by_prob<T>(mut entries: Vec<(T, f64)>, n: usize) -> Vec<(T, f64)> {
    entries.sort_by(|a, b| b.1.total_cmp(&a.1));
    entries.truncate(n);
    entries
}

/// Hidden debugging surface over the brute-force reference module: prints the
/// closed-form total string mass, and on request the explicit path or string
/// enumeration next to the fast score it must reproduce. Instances beyond the
/// enumeration size guards are rejected as input errors.
pub fn oracle(
    emissions: &Path,
    target: Option<&str>,
    max_len: Option<usize>,
    fold_case: bool,
) -> Result<ExitCode> {
    const TOP: usize = 10;

    let (alphabet, em) = load_valid_emissions(emissions)?;
    let mass = total_mass(&em, &alphabet)?;
    println!("total_mass={}", format_sig(mass, SIG));
    if let Some(text) = target {
        let t = parse_target(&alphabet, text, fold_case)?;
        let enumeration = enumerate_paths(&em, &t)?;
        println!(
            "paths={} enum_total={} ep={}",
            enumeration.paths.len(),
            format_sig(enumeration.total, SIG),
            format_sig(ep_score(&em, &t).exp(), SIG),
        );
        for (path, prob) in top_by_prob(enumeration.paths, TOP) {
            let ops: Vec<String> =
                path.iter().map(|op| format!("{}({},{})", op.kind.name(), op.i, op.j)).collect();
            println!("{} p={}", ops.join(" "), format_sig(prob, SIG));
        }
    }
    if let Some(max_len) = max_len {
        let scored = enumerate_strings(&em, &alphabet, max_len)?;
        let truncated: f64 = scored.iter().map(|(_, p)| p).sum();
        println!("strings={} truncated_mass={}", scored.len(), format_sig(truncated, SIG));
        for (t, prob) in top_by_prob(scored, TOP) {
            println!("{} p={}", t.render(&alphabet), format_sig(prob, SIG));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Maps the CLI's loss flag onto the lab's enum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LossArg {
    Ep,
    Fp,
}

impl From<LossArg> for LossKind {
    fn from(v: LossArg) -> LossKind {
        match v {
            LossArg::Ep => LossKind::Ep,
            LossArg::Fp => LossKind::Fp,
        }
    }
}
