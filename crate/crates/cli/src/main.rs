//! `motzgen`: generate uniform random Motzkin and binary trees.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use motzgen::verify::{run_self_test, SelfTestOptions};
use motzgen::{
    random_binary_tree, random_motzkin, tree_to_dot, word_to_chords, word_to_path, Mode,
    MotzkinWord, RandomStream, RatioTable, GENERATOR_ID,
};

#[derive(Parser)]
#[command(
    name = "motzgen",
    version,
    about = "Uniform random Motzkin and binary trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print random trees, one per line (DOT: one document per tree).
    Gen(GenArgs),
    /// Write the case-probability table for sizes 2..=max-n.
    Precompute {
        #[arg(long)]
        max_n: usize,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Run the built-in verification suites.
    Selftest {
        /// Largest tree size the suites touch.
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        #[arg(long, default_value_t = SelfTestOptions::default().seed)]
        seed: u64,
    },
    /// Time fast-mode generation; prints `size<TAB>seconds<TAB>ns_per_edge`.
    Bench {
        /// Ascending sizes, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [10_000usize, 100_000, 1_000_000])]
        sizes: Vec<usize>,
        /// Repetitions per size; the fastest is reported.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        reps: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = Family::Motzkin)]
    family: Family,
    /// Edges of a Motzkin tree, or internal nodes of a binary tree.
    #[arg(long)]
    size: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Word)]
    format: Format,
    /// Case selection for Motzkin trees.
    #[arg(long, value_enum, default_value_t = CaseMode::Fast)]
    mode: CaseMode,
    /// Table from `precompute`; built on the fly in fast mode if absent.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Split the samples over this many streams seeded seed, seed+1, ...
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Report the generator and settings on stderr.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Motzkin,
    Binary,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Word,
    Vector,
    Dot,
    Path,
    Chords,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseMode {
    Exact,
    Fast,
}

/// Exit statuses: verification failures are 1, usage and configuration
/// problems 2.
enum Failure {
    Verification(String),
    Config(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => gen(&args),
        Command::Precompute { max_n, output } => precompute(max_n, &output),
        Command::Selftest { max_size, seed } => selftest(max_size, seed),
        Command::Bench { sizes, reps, seed } => bench(&sizes, reps, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("motzgen: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("motzgen: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Writes `text` to stdout; a closed pipe ends output quietly.
fn emit(text: &str) -> Result<(), Failure> {
    let mut out = BufWriter::new(io::stdout().lock());
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn load_table(path: &PathBuf) -> Result<RatioTable, Failure> {
    let file = File::open(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    RatioTable::read_from(BufReader::new(file))
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn gen(args: &GenArgs) -> Result<(), Failure> {
    if args.family == Family::Binary && args.mode == CaseMode::Exact {
        return Err(Failure::Config(
            "--mode applies to Motzkin trees only".into(),
        ));
    }
    let table = match (args.family, args.mode, &args.table) {
        (Family::Motzkin, CaseMode::Fast, Some(path)) => {
            let t = load_table(path)?;
            if args.size >= 2 && t.max_n() < args.size {
                return Err(Failure::Config(format!(
                    "{} covers sizes up to {}, not {}",
                    path.display(),
                    t.max_n(),
                    args.size
                )));
            }
            Some(t)
        }
        (Family::Motzkin, CaseMode::Fast, None) => Some(RatioTable::build(args.size.max(2))?),
        _ => None,
    };
    if args.verbose {
        eprintln!(
            "generator {GENERATOR_ID}, seed {}, jobs {}, {}",
            args.seed,
            args.jobs,
            match (&table, args.family) {
                (Some(t), _) => format!("fast mode, table up to n={}", t.max_n()),
                (None, Family::Motzkin) => "exact mode".to_string(),
                (None, Family::Binary) => "binary trees".to_string(),
            }
        );
    }
    let mode = table.as_ref().map_or(Mode::Exact, Mode::Fast);

    let jobs = args.jobs.min(args.count);
    let shard = |i: u64| -> motzgen::Result<String> {
        let count = shard_len(args.count, jobs, i);
        let mut rng = RandomStream::new(args.seed.wrapping_add(i));
        let mut out = String::new();
        for _ in 0..count {
            render(&mut out, args, &mut rng, mode)?;
        }
        Ok(out)
    };
    let outputs: Vec<motzgen::Result<String>> = if jobs == 1 {
        vec![shard(0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs).map(|i| scope.spawn(move || shard(i))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("generator thread panicked"))
                .collect()
        })
    };
    let mut text = String::new();
    for part in outputs {
        let part = part?;
        if args.format == Format::Dot && !text.is_empty() {
            text.push('\n');
        }
        text.push_str(&part);
    }
    emit(&text)
}

/// Samples in shard `i`: the first `count % jobs` shards take one extra.
fn shard_len(count: u64, jobs: u64, i: u64) -> u64 {
    count / jobs + u64::from(i < count % jobs)
}

fn render(
    out: &mut String,
    args: &GenArgs,
    rng: &mut RandomStream,
    mode: Mode<'_>,
) -> motzgen::Result<()> {
    let word: MotzkinWord;
    match args.family {
        Family::Motzkin => {
            let v = random_motzkin(rng, args.size, mode)?;
            match args.format {
                Format::Vector => return line(out, v),
                Format::Dot => return dot(out, tree_to_dot(&v.to_motzkin_tree())),
                _ => word = v.to_word(),
            }
        }
        Family::Binary => {
            let t = random_binary_tree(rng, args.size + 1)?;
            match args.format {
                Format::Vector => return line(out, t),
                Format::Dot => return dot(out, t.to_dot()),
                _ => word = t.to_dyck_word(),
            }
        }
    }
    match args.format {
        Format::Path => line(out, word_to_path(&word)),
        Format::Chords => line(out, word_to_chords(&word)),
        _ => line(out, word),
    }
}

fn line(out: &mut String, item: impl std::fmt::Display) -> motzgen::Result<()> {
    writeln!(out, "{item}").expect("writing to a String");
    Ok(())
}

/// DOT documents are separated by a blank line.
fn dot(out: &mut String, doc: String) -> motzgen::Result<()> {
    if !out.is_empty() {
        out.push('\n');
    }
    out.push_str(&doc);
    Ok(())
}

fn precompute(max_n: usize, output: &PathBuf) -> Result<(), Failure> {
    let table = RatioTable::build(max_n)?;
    let file =
        File::create(output).map_err(|e| Failure::Config(format!("{}: {e}", output.display())))?;
    let mut w = BufWriter::new(file);
    table
        .write_to(&mut w)
        .and_then(|()| w.flush())
        .map_err(|e| Failure::Config(format!("{}: {e}", output.display())))
}

fn selftest(max_size: usize, seed: u64) -> Result<(), Failure> {
    let outcomes = run_self_test(SelfTestOptions {
        max_size,
        seed,
        ..SelfTestOptions::default()
    });
    let mut report = String::new();
    let mut failed = Vec::new();
    for o in &outcomes {
        let status = if o.pass { "PASS" } else { "FAIL" };
        writeln!(report, "{status} {}: {}", o.name, o.detail).expect("writing to a String");
        if !o.pass {
            failed.push(o.name.as_str());
        }
    }
    emit(&report)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "failed: {}",
            failed.join(", ")
        )))
    }
}

fn bench(sizes: &[usize], reps: u32, seed: u64) -> Result<(), Failure> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::Config("--sizes must be strictly ascending".into()));
    }
    let max = *sizes.last().expect("nonempty");
    let table = RatioTable::build(max.max(2))?;
    let mut report = String::from("size\tseconds\tns_per_edge\n");
    for &n in sizes {
        let mut best = Duration::MAX;
        for rep in 0..reps {
            let mut rng = RandomStream::new(seed.wrapping_add(u64::from(rep)));
            let start = Instant::now();
            let v = random_motzkin(&mut rng, n, Mode::Fast(&table))?;
            best = best.min(start.elapsed());
            drop(v);
        }
        let secs = best.as_secs_f64();
        let per_edge = secs * 1e9 / n.max(1) as f64;
        writeln!(report, "{n}\t{secs:.6}\t{per_edge:.2}").expect("writing to a String");
    }
    emit(&report)
}
