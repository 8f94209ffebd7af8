use std::collections::HashMap;
use std::process::{Command, Output};

fn motzgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motzgen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = motzgen(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn size_zero_is_the_empty_word() {
    assert_eq!(
        stdout(&["gen", "--size", "0", "--count", "1", "--format", "word"]),
        "\n"
    );
}

#[test]
fn same_seed_same_output() {
    let args = [
        "gen", "--size", "4", "--count", "3", "--seed", "7", "--format", "word",
    ];
    let first = stdout(&args);
    assert_eq!(first.lines().count(), 3);
    assert_eq!(first, stdout(&args));
    let exact = [
        "gen", "--size", "40", "--count", "5", "--seed", "7", "--mode", "exact",
    ];
    assert_eq!(stdout(&exact), stdout(&exact));
}

#[test]
fn size_four_words_are_uniform() {
    let text = stdout(&["gen", "--size", "4", "--count", "90000", "--seed", "11"]);
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for line in text.lines() {
        *counts.entry(line).or_default() += 1;
    }
    let words = [
        "cccc", "cc()", "c(c)", "c()c", "(cc)", "(c)c", "()cc", "(())", "()()",
    ];
    assert_eq!(counts.len(), 9, "{counts:?}");
    let sigma = (90000.0f64 * (1.0 / 9.0) * (8.0 / 9.0)).sqrt();
    for w in words {
        let c = counts[w] as f64;
        assert!((c - 10000.0).abs() <= 5.0 * sigma, "{w}: {c}");
    }
}

#[test]
fn jobs_concatenate_seeded_shards() {
    let sharded = stdout(&[
        "gen", "--size", "30", "--count", "5", "--seed", "5", "--jobs", "2",
    ]);
    let first = stdout(&["gen", "--size", "30", "--count", "3", "--seed", "5"]);
    let second = stdout(&["gen", "--size", "30", "--count", "2", "--seed", "6"]);
    assert_eq!(sharded, first + &second);
}

#[test]
fn every_format_has_one_sample_per_line() {
    for format in ["word", "vector", "path", "chords"] {
        for family in ["motzkin", "binary"] {
            let text = stdout(&[
                "gen", "--family", family, "--size", "12", "--count", "4", "--format", format,
            ]);
            assert_eq!(text.lines().count(), 4, "{family} {format}: {text}");
        }
    }
    let path = stdout(&["gen", "--size", "12", "--format", "path"]);
    assert!(path.trim_end().chars().all(|c| "UDS".contains(c)));
    let vector = stdout(&["gen", "--size", "12", "--format", "vector"]);
    assert_eq!(vector.split_whitespace().count(), 27);
}

#[test]
fn dot_documents_are_separated_by_blank_lines() {
    let text = stdout(&[
        "gen", "--size", "3", "--count", "3", "--format", "dot", "--jobs", "2",
    ]);
    let docs: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(docs.len(), 3);
    assert!(docs.iter().all(|d| d.starts_with("digraph motzkin {")));
    let binary = stdout(&[
        "gen", "--family", "binary", "--size", "2", "--format", "dot",
    ]);
    assert!(binary.starts_with("digraph binary {"));
}

#[test]
fn precompute_writes_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("two.tsv");
    stdout(&[
        "precompute",
        "--max-n",
        "2",
        "--output",
        small.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&small).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| l.contains('\t')).collect();
    assert_eq!(data, ["2\t0.625"]);

    let big = dir.path().join("hundred.tsv");
    let big = big.to_str().unwrap();
    stdout(&["precompute", "--max-n", "100", "--output", big]);
    let first = std::fs::read(big).unwrap();
    stdout(&["precompute", "--max-n", "100", "--output", big]);
    assert_eq!(std::fs::read(big).unwrap(), first, "idempotent");
    let with_file = stdout(&["gen", "--size", "100", "--count", "3", "--table", big]);
    assert_eq!(with_file, stdout(&["gen", "--size", "100", "--count", "3"]));
    assert!(with_file.lines().all(|l| l.len() == 100));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.tsv");
    let table = table.to_str().unwrap();
    assert_eq!(
        motzgen(&["precompute", "--max-n", "1", "--output", table])
            .status
            .code(),
        Some(2)
    );
    stdout(&["precompute", "--max-n", "5", "--output", table]);
    let undersized = motzgen(&["gen", "--size", "6", "--table", table]);
    assert_eq!(undersized.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&undersized.stderr).contains("up to 5"));
    let missing = dir.path().join("missing.tsv");
    assert_eq!(
        motzgen(&["gen", "--size", "3", "--table", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(dir.path().join("bad.tsv"), "not a table\n").unwrap();
    let bad = dir.path().join("bad.tsv");
    assert_eq!(
        motzgen(&["gen", "--size", "3", "--table", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        motzgen(&["gen", "--size", "3", "--count", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(motzgen(&["gen"]).status.code(), Some(2));
    let unwritable = dir.path().join("no/such/dir/t.tsv");
    assert_ne!(
        motzgen(&[
            "precompute",
            "--max-n",
            "5",
            "--output",
            unwritable.to_str().unwrap()
        ])
        .status
        .code(),
        Some(0)
    );
}

#[test]
fn selftest_small_run_passes() {
    let text = stdout(&["selftest", "--max-size", "3"]);
    assert!(text.lines().count() >= 3);
    assert!(text.lines().all(|l| l.starts_with("PASS ")), "{text}");
}

#[test]
fn bench_prints_tsv() {
    let text = stdout(&["bench", "--sizes", "100,1000", "--reps", "1"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "size\tseconds\tns_per_edge");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("100\t") && lines[2].starts_with("1000\t"));
    assert_eq!(lines[2].split('\t').count(), 3);
    assert_eq!(
        motzgen(&["bench", "--sizes", "1000,100"]).status.code(),
        Some(2)
    );
}
