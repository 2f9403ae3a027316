//! End-to-end checks of the `editprob` binary: exact printed scores, exit
//! codes, and file outputs, driven through the real argv surface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

/// One frame over {A, #}: y=(0.7, 0.3), r=(0.7, 0.2, 0.1), uniform
/// insertions, final insertions (0.6, 0.4). The probability of the bare
/// end-of-string target works out to 0.35 by hand:
/// consume '#' (0.7·0.3) + delete-then-insert (0.1·0.4) + insert-then-delete
/// (0.2·0.5·1).
const SINGLE_FRAME: &str = r##"{
  "alphabet": ["A", "#"],
  "eos": "#",
  "frames": [
    {"y": [0.7, 0.3], "r": [0.7, 0.2, 0.1], "ins": [0.5, 0.5]}
  ],
  "final_ins": [0.6, 0.4]
}"##;

/// No frames at all: every target must be built from final insertions.
const NO_FRAMES: &str = r##"{
  "alphabet": ["A", "B", "#"],
  "eos": "#",
  "frames": [],
  "final_ins": [0.0, 0.6, 0.4]
}"##;

/// Two consume-heavy frames pointing at 'A' then '#'.
const TWO_FRAMES: &str = r##"{
  "alphabet": ["A", "B", "#"],
  "eos": "#",
  "frames": [
    {"y": [0.8, 0.1, 0.1], "r": [0.9, 0.05, 0.05], "ins": [0.4, 0.3, 0.3]},
    {"y": [0.1, 0.1, 0.8], "r": [0.9, 0.05, 0.05], "ins": [0.4, 0.3, 0.3]}
  ],
  "final_ins": [0.3, 0.3, 0.4]
}"##;

fn write_file(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).expect("fixture write");
    path
}

fn editprob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_editprob"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "expected success, got {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn path_arg(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn score_prints_twelve_significant_digits() {
    let dir = TempDir::new().unwrap();
    let em = write_file(&dir, "em.json", SINGLE_FRAME);
    let out = editprob(&["score", "--emissions", path_arg(&em), "--target", ""]);
    assert_eq!(stdout_of(&out), "log_ep=-1.04982212450 ep=0.350000000000\n");
}

#[test]
fn score_handles_pure_insertion_instances() {
    let dir = TempDir::new().unwrap();
    let em = write_file(&dir, "em.json", NO_FRAMES);
    let out = editprob(&["score", "--emissions", path_arg(&em), "--target", ""]);
    assert_eq!(stdout_of(&out), "log_ep=-0.916290731874 ep=0.400000000000\n");
}

#[test]
fn unknown_target_characters_exit_two_and_name_the_character() {
    let dir = TempDir::new().unwrap();
    let em = write_file(&dir, "em.json", SINGLE_FRAME);
    let out = editprob(&["score", "--emissions", path_arg(&em), "--target", "Z"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains('Z'), "stderr should name the character: {stderr}");
}

#[test]
fn fold_case_lowercases_the_target() {
    let folded = r##"{
      "alphabet": ["a", "#"],
      "eos": "#",
      "frames": [
        {"y": [0.7, 0.3], "r": [0.7, 0.2, 0.1], "ins": [0.5, 0.5]}
      ],
      "final_ins": [0.6, 0.4]
    }"##;
    let dir = TempDir::new().unwrap();
    let em = write_file(&dir, "em.json", folded);
    let upper =
        editprob(&["score", "--emissions", path_arg(&em), "--target", "A", "--fold-case"]);
    let lower = editprob(&["score", "--emissions", path_arg(&em), "--target", "a"]);
    assert_eq!(stdout_of(&upper), stdout_of(&lower));
}

#[test]
fn matrix_dump_contains_lattice_and_best_path_sections() {
    let dir = TempDir::new().unwrap();
    let em = write_file(&dir, "em.json", NO_FRAMES);
    let out_path = dir.path().join("matrix.csv");
    let out = editprob(&[
        "matrix",
        "--emissions",
        path_arg(&em),
        "--target",
        "A",
        "--out",
        path_arg(&out_path),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,j=0"));
    assert_eq!(lines.next(), Some("0,0.0"), "the empty prefix always has mass 1");
    assert!(text.contains("-inf"), "impossible cells print as -inf: {text}");
    assert!(text.contains("\nop,i,j\n"), "best-path section present: {text}");
    assert!(text.contains("insert,1,0"), "path ops listed as op,i,j: {text}");
}

#[test]
fn decode_with_full_trust_returns_a_lexicon_word() {
    let dir = TempDir::new().unwrap();
    let em = write_file(&dir, "em.json", TWO_FRAMES);
    let lex = write_file(&dir, "lex.txt", "B\nBA\nBB\n");
    let out = editprob(&[
        "decode",
        "--emissions",
        path_arg(&em),
        "--lexicon",
        path_arg(&lex),
        "--lambda",
        "1.0",
    ]);
    let stdout = stdout_of(&out);
    let prediction = stdout
        .split_whitespace()
        .find_map(|field| field.strip_prefix("prediction="))
        .expect("prediction field");
    assert!(
        ["B#", "BA#", "BB#"].contains(&prediction),
        "full lexicon trust must pick a lexicon word, got {prediction}"
    );
    assert!(stdout.contains("source=lexicon"), "{stdout}");
}

#[test]
fn decode_without_a_lexicon_prints_the_free_prediction() {
    let dir = TempDir::new().unwrap();
    let em = write_file(&dir, "em.json", TWO_FRAMES);
    let out = editprob(&["decode", "--emissions", path_arg(&em)]);
    let stdout = stdout_of(&out);
    assert!(stdout.starts_with("prediction=A# "), "{stdout}");
    assert!(stdout.contains("source=free"), "{stdout}");
}

#[test]
fn lambda_outside_the_trust_range_exits_two() {
    let dir = TempDir::new().unwrap();
    let em = write_file(&dir, "em.json", TWO_FRAMES);
    let lex = write_file(&dir, "lex.txt", "A\n");
    let out = editprob(&[
        "decode",
        "--emissions",
        path_arg(&em),
        "--lexicon",
        path_arg(&lex),
        "--lambda",
        "0.4",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lambda_without_a_lexicon_exits_two() {
    let dir = TempDir::new().unwrap();
    let em = write_file(&dir, "em.json", TWO_FRAMES);
    let out = editprob(&["decode", "--emissions", path_arg(&em), "--lambda", "0.9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_lexicon_prints_timings_and_speedup() {
    let dir = TempDir::new().unwrap();
    let em = write_file(&dir, "em.json", TWO_FRAMES);
    let lex = write_file(&dir, "lex.txt", "A\nB\nAB\nBA\n");
    let out = editprob(&[
        "bench-lexicon",
        "--emissions",
        path_arg(&em),
        "--lexicon",
        path_arg(&lex),
        "--repeat",
        "2",
    ]);
    let stdout = stdout_of(&out);
    assert!(stdout.contains("enumeration: "), "{stdout}");
    assert!(stdout.contains("trie: "), "{stdout}");
    assert!(stdout.contains("speedup: "), "{stdout}");
}

#[test]
fn bench_lexicon_rejects_zero_repeats() {
    let dir = TempDir::new().unwrap();
    let em = write_file(&dir, "em.json", TWO_FRAMES);
    let lex = write_file(&dir, "lex.txt", "A\n");
    let out = editprob(&[
        "bench-lexicon",
        "--emissions",
        path_arg(&em),
        "--lexicon",
        path_arg(&lex),
        "--repeat",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generation_is_reproducible_per_seed() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("a.txt");
    let second = dir.path().join("b.txt");
    let third = dir.path().join("c.txt");
    for (out, seed) in [(&first, "9"), (&second, "9"), (&third, "10")] {
        let run = editprob(&["gen", "--count", "20", "--out", path_arg(out), "--seed", seed]);
        assert!(run.status.success());
    }
    let a = std::fs::read(&first).unwrap();
    assert_eq!(a, std::fs::read(&second).unwrap(), "same seed, same bytes");
    assert_ne!(a, std::fs::read(&third).unwrap(), "different seed, different corpus");
}

#[test]
fn generation_requires_a_seed() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("corpus.txt");
    let out = editprob(&["gen", "--count", "5", "--out", path_arg(&out_path)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gradcheck_reports_max_relative_error() {
    let out = editprob(&["gradcheck", "--cases", "10", "--seed", "3"]);
    let stdout = stdout_of(&out);
    assert!(stdout.starts_with("max_rel_err="), "{stdout}");
}

#[test]
fn both_losses_train_into_models_that_eval_accepts() {
    let dir = TempDir::new().unwrap();
    let corpus = dir.path().join("corpus.txt");
    let run = editprob(&["gen", "--count", "50", "--out", path_arg(&corpus), "--seed", "21"]);
    assert!(run.status.success());

    for loss in ["ep", "fp"] {
        let model = dir.path().join(format!("model_{loss}.json"));
        let trained = editprob(&[
            "train",
            "--corpus",
            path_arg(&corpus),
            "--loss",
            loss,
            "--epochs",
            "2",
            "--seed",
            "1",
            "--out",
            path_arg(&model),
        ]);
        let stdout = stdout_of(&trained);
        assert!(stdout.starts_with("final_accuracy="), "{stdout}");

        let evaluated = editprob(&[
            "eval",
            "--model",
            path_arg(&model),
            "--corpus",
            path_arg(&corpus),
        ]);
        let stdout = stdout_of(&evaluated);
        assert!(stdout.starts_with("accuracy="), "{stdout}");
    }
}

#[test]
fn oracle_subcommand_cross_checks_the_fast_score() {
    let dir = TempDir::new().unwrap();
    let em = write_file(&dir, "em.json", SINGLE_FRAME);
    let out = editprob(&[
        "oracle",
        "--emissions",
        path_arg(&em),
        "--target",
        "#",
        "--max-len",
        "3",
    ]);
    assert_eq!(
        stdout_of(&out),
        "total_mass=1.00000000000\n\
         paths=3 enum_total=0.350000000000 ep=0.350000000000\n\
         consume(1,1) p=0.210000000000\n\
         insert(1,0) delete(1,1) p=0.100000000000\n\
         delete(0,1) insert(1,1) p=0.0400000000000\n\
         strings=3 truncated_mass=0.762500000000\n\
         # p=0.350000000000\n\
         A# p=0.255000000000\n\
         AA# p=0.157500000000\n"
    );
}

#[test]
fn oracle_is_hidden_from_help() {
    let help = stdout_of(&editprob(&["--help"]));
    assert!(help.contains("score"), "{help}");
    assert!(!help.contains("oracle"), "{help}");
}

#[test]
fn oracle_rejects_instances_beyond_the_enumeration_guards() {
    let dir = TempDir::new().unwrap();
    let em = write_file(&dir, "em.json", SINGLE_FRAME);
    let out = editprob(&["oracle", "--emissions", path_arg(&em), "--max-len", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("limit 9"), "{stderr}");
}
