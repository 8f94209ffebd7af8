//! Independent checks: exhaustive enumeration, the exact output
//! distribution of the sampler, and frequency-band tests.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::codec::{word_to_tree, MotzkinTree, MotzkinWord, Symbol};
use crate::error::{Error, Result};
use crate::numbers::{catalan, motzkin, motzkin_conv, RatioTable};
use crate::remy::random_binary_tree;
use crate::rng::RandomStream;
use crate::sampler::{
    base_vector, case1_step, case2_step, random_motzkin, Mode, PositionRanges, SlantingVector,
};

/// Largest size [`enumerate_motzkin`] accepts.
pub const MOTZKIN_ENUMERATION_CAP: usize = 14;
/// Largest leaf count [`enumerate_binary`] accepts.
pub const BINARY_ENUMERATION_CAP: usize = 15;
/// Largest size [`exact_sampler_distribution`] accepts.
pub const EXACT_DISTRIBUTION_CAP: usize = 6;

fn cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { got: n, cap });
    }
    Ok(())
}

/// Every Motzkin word of length `n`, sorted.
///
/// Built from `T(n) = c T(n-1) ∪ ( T(i) ) T(n-2-i)`, never from the
/// sampler or the numbers module.
pub fn enumerate_motzkin_words(n: usize) -> Result<Vec<MotzkinWord>> {
    cap(n, MOTZKIN_ENUMERATION_CAP)?;
    let mut by_len: Vec<Vec<Vec<Symbol>>> = vec![vec![vec![]]];
    for m in 1..=n {
        let mut words = Vec::new();
        for w in &by_len[m - 1] {
            let mut s = vec![Symbol::C];
            s.extend_from_slice(w);
            words.push(s);
        }
        for i in 0..=m.saturating_sub(2) {
            if m < 2 {
                break;
            }
            for inner in &by_len[i] {
                for rest in &by_len[m - 2 - i] {
                    let mut s = Vec::with_capacity(m);
                    s.push(Symbol::Open);
                    s.extend_from_slice(inner);
                    s.push(Symbol::Close);
                    s.extend_from_slice(rest);
                    words.push(s);
                }
            }
        }
        by_len.push(words);
    }
    let mut out: Vec<MotzkinWord> = by_len
        .pop()
        .expect("at least the empty length")
        .into_iter()
        .map(MotzkinWord::from_valid)
        .collect();
    out.sort();
    Ok(out)
}

/// Every Motzkin tree with `n` edges, ordered by word.
pub fn enumerate_motzkin(n: usize) -> Result<Vec<MotzkinTree>> {
    Ok(enumerate_motzkin_words(n)?
        .iter()
        .map(word_to_tree)
        .collect())
}

/// Every binary tree shape with `leaves` leaves, as sorted Dyck words.
pub fn enumerate_binary(leaves: usize) -> Result<Vec<MotzkinWord>> {
    if leaves == 0 {
        return Err(Error::SizeTooSmall {
            what: "binary enumeration",
            min: 1,
            got: 0,
        });
    }
    cap(leaves, BINARY_ENUMERATION_CAP)?;
    // by_internal[k]: shapes with k internal nodes
    let mut by_internal: Vec<Vec<Vec<Symbol>>> = vec![vec![vec![]]];
    for k in 1..leaves {
        let mut words = Vec::new();
        for i in 0..k {
            for l in &by_internal[i] {
                for r in &by_internal[k - 1 - i] {
                    let mut s = Vec::with_capacity(2 * k);
                    s.push(Symbol::Open);
                    s.extend_from_slice(l);
                    s.push(Symbol::Close);
                    s.extend_from_slice(r);
                    words.push(s);
                }
            }
        }
        by_internal.push(words);
    }
    let mut out: Vec<MotzkinWord> = by_internal
        .pop()
        .expect("at least one row")
        .into_iter()
        .map(MotzkinWord::from_valid)
        .collect();
    out.sort();
    Ok(out)
}

/// Exact probability of each shape the sampler can output.
#[derive(Clone, PartialEq)]
pub struct ExactDistribution {
    masses: BTreeMap<MotzkinWord, BigRational>,
}

impl ExactDistribution {
    pub fn masses(&self) -> &BTreeMap<MotzkinWord, BigRational> {
        &self.masses
    }

    pub fn total(&self) -> BigRational {
        self.masses
            .values()
            .fold(BigRational::zero(), |acc, m| acc + m)
    }

    /// True when exactly the shapes in `support` carry mass `1/|support|`.
    pub fn is_uniform_over(&self, support: &[MotzkinWord]) -> bool {
        let p = BigRational::new(BigInt::one(), BigInt::from(support.len()));
        self.masses.len() == support.len() && support.iter().all(|w| self.masses.get(w) == Some(&p))
    }

    /// The shape whose mass is furthest from `p`, with that mass.
    pub fn worst_deviation(&self, p: &BigRational) -> Option<(&MotzkinWord, &BigRational)> {
        self.masses
            .iter()
            .max_by(|a, b| (a.1 - p).abs().cmp(&(b.1 - p).abs()))
    }
}

impl fmt::Debug for ExactDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.masses
                    .iter()
                    .map(|(w, m)| (w.to_string(), m.to_string())),
            )
            .finish()
    }
}

/// The exact output distribution of the exact-mode sampler at size `n`.
pub fn exact_sampler_distribution(n: usize) -> Result<ExactDistribution> {
    exact_sampler_distribution_with(n, PositionRanges::BUILD)
}

/// Pushes every decision path of the sampler through the real step
/// functions, weighting case 1 by `(2m+1) M(m-1) / ((m+2) M(m))`, case 2
/// by the complement, and each position uniformly over `ranges`.
/// Labeled vectors are merged level by level, then masses are summed per
/// shape.
pub fn exact_sampler_distribution_with(
    n: usize,
    ranges: PositionRanges,
) -> Result<ExactDistribution> {
    cap(n, EXACT_DISTRIBUTION_CAP)?;
    type Level = HashMap<SlantingVector, BigRational>;
    let point = |v: SlantingVector| -> Level { [(v, BigRational::one())].into_iter().collect() };
    let mut levels: Vec<Level> = vec![point(base_vector(0)?), point(base_vector(1)?)];

    let ratio = |a: BigUint, b: BigUint| BigRational::new(BigInt::from(a), BigInt::from(b));
    for m in 2..=n {
        let mm = m as u64;
        let p1 = ratio(motzkin(m - 1) * (2 * mm + 1), motzkin(m) * (mm + 2));
        let p2 = BigRational::one() - &p1;
        let mut next: Level = HashMap::new();

        let positions = ranges.case1_positions(m);
        let w1 = &p1 / BigRational::from_integer(BigInt::from(positions));
        for (v, mass) in &levels[m - 1] {
            for k in 0..positions {
                *next
                    .entry(case1_step(v, k)?)
                    .or_insert_with(BigRational::zero) += mass * &w1;
            }
        }

        let choices = ranges.case2_choices(m);
        let w2 = &p2 / BigRational::from_integer(BigInt::from(choices));
        for (v, mass) in &levels[m - 2] {
            for r in 0..choices {
                *next
                    .entry(case2_step(v, r / 3, r % 3)?)
                    .or_insert_with(BigRational::zero) += mass * &w2;
            }
        }
        levels.push(next);
    }

    let mut masses: BTreeMap<MotzkinWord, BigRational> = BTreeMap::new();
    for (v, mass) in levels.swap_remove(n) {
        *masses.entry(v.to_word()).or_insert_with(BigRational::zero) += mass;
    }
    Ok(ExactDistribution { masses })
}

/// Outcome of checking uniformity exactly at one size.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformityVerdict {
    pub n: usize,
    pub uniform: bool,
    pub detail: String,
}

/// Compares the exact distribution at `n` against `1/M(n)` per shape.
/// On failure, names the narrowed ranges that each break uniformity
/// on their own.
pub fn check_exact_uniformity(n: usize, ranges: PositionRanges) -> Result<UniformityVerdict> {
    let support = enumerate_motzkin_words(n)?;
    let dist = exact_sampler_distribution_with(n, ranges)?;
    if dist.is_uniform_over(&support) {
        return Ok(UniformityVerdict {
            n,
            uniform: true,
            detail: format!(
                "all {} shapes at exactly 1/{}",
                support.len(),
                support.len()
            ),
        });
    }
    let p = BigRational::new(BigInt::one(), BigInt::from(support.len()));
    let (word, mass) = dist.worst_deviation(&p).expect("nonempty distribution");
    let mut culprits = Vec::new();
    for single in [
        PositionRanges {
            narrow_case1: ranges.narrow_case1,
            narrow_case2: false,
        },
        PositionRanges {
            narrow_case1: false,
            narrow_case2: ranges.narrow_case2,
        },
    ] {
        if single != PositionRanges::FULL
            && !exact_sampler_distribution_with(n, single)?.is_uniform_over(&support)
        {
            culprits.push(single.describe());
        }
    }
    let blame = if culprits.is_empty() {
        ranges.describe()
    } else {
        culprits.join("; ")
    };
    Ok(UniformityVerdict {
        n,
        uniform: false,
        detail: format!(
            "n={n}: shape {:?} has mass {mass}, expected {p} (range at fault: {blame})",
            word.to_string()
        ),
    })
}

/// Result of a frequency-band test.
#[derive(Debug, Clone, PartialEq)]
pub struct BandReport {
    pub pass: bool,
    /// Index of the tally furthest from `N p`.
    pub worst_index: usize,
    /// Its distance from `N p` in standard deviations.
    pub worst_sigmas: f64,
}

/// Passes iff every tally lies within `z sqrt(N p (1-p))` of `N p`.
pub fn frequency_band_test(counts: &[u64], samples: u64, p: f64, z: f64) -> Result<BandReport> {
    if samples < 1000 {
        return Err(Error::SizeTooSmall {
            what: "frequency band test",
            min: 1000,
            got: samples as usize,
        });
    }
    let mean = samples as f64 * p;
    let sigma = (samples as f64 * p * (1.0 - p)).sqrt();
    let (worst_index, worst_sigmas) = counts
        .iter()
        .map(|&c| (c as f64 - mean).abs() / sigma)
        .enumerate()
        .fold(
            (0, 0.0),
            |best, (i, d)| if d > best.1 { (i, d) } else { best },
        );
    Ok(BandReport {
        pass: worst_sigmas <= z,
        worst_index,
        worst_sigmas,
    })
}

/// Samples `count` Motzkin trees of size `n` and tallies them against
/// the sorted enumeration of shapes.
pub fn tally_motzkin(
    rng: &mut RandomStream,
    n: usize,
    count: u64,
    mode: Mode<'_>,
) -> Result<Vec<u64>> {
    let index: HashMap<MotzkinWord, usize> = enumerate_motzkin_words(n)?
        .into_iter()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let mut counts = vec![0u64; index.len()];
    for _ in 0..count {
        let word = random_motzkin(rng, n, mode)?.to_word();
        counts[index[&word]] += 1;
    }
    Ok(counts)
}

/// Samples `count` binary trees with `leaves` leaves and tallies shapes.
pub fn tally_binary(rng: &mut RandomStream, leaves: usize, count: u64) -> Result<Vec<u64>> {
    let index: HashMap<MotzkinWord, usize> = enumerate_binary(leaves)?
        .into_iter()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let mut counts = vec![0u64; index.len()];
    for _ in 0..count {
        let word = random_binary_tree(rng, leaves)?.to_dyck_word();
        counts[index[&word]] += 1;
    }
    Ok(counts)
}

/// Sample count used for the statistical gate at size `n`:
/// `max(10^5, 1000 M(n))`.
pub fn band_sample_count(n: usize) -> u64 {
    let m: u64 = motzkin(n).try_into().unwrap_or(u64::MAX);
    m.saturating_mul(1000).max(100_000)
}

/// One line of a self-test report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Options for [`run_self_test`].
#[derive(Debug, Clone, Copy)]
pub struct SelfTestOptions {
    /// Largest tree size any suite touches.
    pub max_size: usize,
    pub seed: u64,
    pub z: f64,
}

impl Default for SelfTestOptions {
    fn default() -> Self {
        SelfTestOptions {
            max_size: 8,
            seed: 0x6d6f_747a,
            z: 5.0,
        }
    }
}

/// Runs the verification suites: recurrence cross-checks, exact
/// distributions (n <= 5), frequency bands (n <= 8 exact, n <= 6 fast,
/// binary trees up to 6 leaves) and codec round trips, all capped by
/// `max_size`.
pub fn run_self_test(opts: SelfTestOptions) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let mut record = |name: String, res: Result<(bool, String)>| {
        let (pass, detail) = res.unwrap_or_else(|e| (false, format!("error: {e}")));
        out.push(CheckOutcome { name, pass, detail });
    };
    let max = opts.max_size;

    let upto = max.clamp(2, 64);
    record(format!("recurrences n<={upto}"), Ok(recurrence_check(upto)));

    for n in 2..=max.min(5) {
        record(
            format!("exact distribution n={n}"),
            check_exact_uniformity(n, PositionRanges::BUILD).map(|v| (v.uniform, v.detail)),
        );
    }

    let mut rng = RandomStream::new(opts.seed);
    for n in 2..=max.min(8) {
        let samples = band_sample_count(n);
        record(
            format!("exact-mode bands n={n}"),
            motzkin_band(&mut rng, n, samples, Mode::Exact, opts.z),
        );
    }
    if max >= 2 {
        let table = RatioTable::build(max.max(2));
        for n in 2..=max.min(6) {
            let samples = band_sample_count(n);
            let res = table
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|t| motzkin_band(&mut rng, n, samples, Mode::Fast(t), opts.z));
            record(format!("fast-mode bands n={n}"), res);
        }
    }
    for leaves in 3..=max.min(6) {
        record(
            format!("binary bands leaves={leaves}"),
            binary_band(&mut rng, leaves, 100_000, opts.z),
        );
    }

    record(
        "codec round trips".to_string(),
        round_trip_check(&mut rng, max.min(1000), 200),
    );
    out
}

fn recurrence_check(upto: usize) -> (bool, String) {
    for n in 0..=upto {
        if motzkin(n) != motzkin_conv(n) {
            return (
                false,
                format!("holonomic and convolution values differ at n={n}"),
            );
        }
    }
    for leaves in 2..=upto {
        let k = leaves as u64 - 1;
        if BigUint::from(k + 1) * catalan(leaves).unwrap()
            != BigUint::from(2 * (2 * k - 1)) * catalan(leaves - 1).unwrap()
        {
            return (
                false,
                format!("catalan recurrence fails at {leaves} leaves"),
            );
        }
    }
    (true, format!("M(0..={upto}) agree, M(4) = {}", motzkin(4)))
}

fn motzkin_band(
    rng: &mut RandomStream,
    n: usize,
    samples: u64,
    mode: Mode<'_>,
    z: f64,
) -> Result<(bool, String)> {
    let counts = tally_motzkin(rng, n, samples, mode)?;
    let p = 1.0 / counts.len() as f64;
    let report = frequency_band_test(&counts, samples, p, z)?;
    Ok((
        report.pass,
        format!(
            "{} shapes, N={samples}, worst {:.2} sigma",
            counts.len(),
            report.worst_sigmas
        ),
    ))
}

fn binary_band(
    rng: &mut RandomStream,
    leaves: usize,
    samples: u64,
    z: f64,
) -> Result<(bool, String)> {
    let counts = tally_binary(rng, leaves, samples)?;
    let report = frequency_band_test(&counts, samples, 1.0 / counts.len() as f64, z)?;
    Ok((
        report.pass,
        format!(
            "{} shapes, N={samples}, worst {:.2} sigma",
            counts.len(),
            report.worst_sigmas
        ),
    ))
}

fn round_trip_check(
    rng: &mut RandomStream,
    max_n: usize,
    samples: usize,
) -> Result<(bool, String)> {
    use crate::codec::{chords_to_word, path_to_word, word_to_chords, word_to_path};
    let table = RatioTable::build(max_n.max(2))?;
    for _ in 0..samples {
        let n = rng.next_index(max_n + 1)?;
        let v = random_motzkin(rng, n, Mode::Fast(&table))?;
        let word = v.to_word();
        let tree = word_to_tree(&word);
        let checks = [
            ("tree", tree.to_word() == word),
            (
                "vector",
                SlantingVector::from_motzkin_tree(&tree).to_word() == word,
            ),
            ("path", path_to_word(&word_to_path(&word)) == word),
            ("chords", chords_to_word(&word_to_chords(&word)) == word),
            ("size", tree.size() == n),
        ];
        if let Some((what, _)) = checks.iter().find(|c| !c.1) {
            return Ok((false, format!("{what} round trip failed for {word}")));
        }
    }
    Ok((true, format!("{samples} samples up to size {max_n}")))
}
