//! Motzkin and Catalan numbers, and the per-size case-1 probability table.
//!
//! Motzkin numbers come from the holonomic recurrence
//! `(n+2) M(n) = (2n+1) M(n-1) + 3(n-1) M(n-2)` with `M(0) = M(1) = 1`.
//! The division by `n+2` is always exact; it is checked, not assumed.

use std::fmt;
use std::io::{self, Read, Write};
use std::sync::{PoisonError, RwLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

static MOTZKIN_MEMO: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

/// The `n`-th Motzkin number, memoized across calls.
///
/// Reads share the table; growth takes the write lock. Memory grows
/// quadratically in the largest `n` requested, so this is meant for the
/// exact sampler and tests, not for sizes in the millions.
pub fn motzkin(n: usize) -> BigCount {
    {
        let table = MOTZKIN_MEMO.read().unwrap_or_else(PoisonError::into_inner);
        if let Some(m) = table.get(n) {
            return m.clone();
        }
    }
    let mut table = MOTZKIN_MEMO.write().unwrap_or_else(PoisonError::into_inner);
    while table.len() < 2 {
        table.push(BigUint::one());
    }
    while table.len() <= n {
        let m = table.len();
        let next = holonomic_step(m, &table[m - 1], &table[m - 2]);
        table.push(next);
    }
    table[n].clone()
}

/// `M(m)` from `M(m-1)` and `M(m-2)`, `m >= 2`.
fn holonomic_step(m: usize, prev: &BigUint, prev2: &BigUint) -> BigUint {
    let m64 = m as u64;
    let sum = prev * (2 * m64 + 1) + prev2 * (3 * (m64 - 1));
    let (q, r) = sum.div_rem(&BigUint::from(m64 + 2));
    assert!(
        r.is_zero(),
        "holonomic division by {} left a remainder",
        m + 2
    );
    q
}

/// The `n`-th Motzkin number through the convolution
/// `M(k+1) = M(k) + sum_{i<k} M(i) M(k-1-i)`.
///
/// Quadratic in `n`; kept as an independent check on [`motzkin`].
pub fn motzkin_conv(n: usize) -> BigCount {
    let mut table: Vec<BigUint> = Vec::with_capacity(n + 1);
    table.push(BigUint::one());
    for k in 0..n {
        let mut next = table[k].clone();
        for i in 0..k {
            next += &table[i] * &table[k - 1 - i];
        }
        table.push(next);
    }
    table.pop().expect("table holds M(0)")
}

/// Number of binary tree shapes with `leaves` leaves (the Catalan number
/// with index `leaves - 1`).
///
/// Uses the recurrence `m C(m) = 2(2m-3) C(m-1)` on leaf counts, with
/// exact division checked at each step.
pub fn catalan(leaves: usize) -> Result<BigCount> {
    if leaves == 0 {
        return Err(Error::SizeTooSmall {
            what: "catalan",
            min: 1,
            got: 0,
        });
    }
    let mut c = BigUint::one();
    for m in 2..=leaves as u64 {
        let (q, r) = (c * (2 * (2 * m - 3))).div_rem(&BigUint::from(m));
        assert!(r.is_zero(), "catalan division by {m} left a remainder");
        c = q;
    }
    Ok(c)
}

/// Values are kept exact until `M(n)` outgrows this many bits.
const EXACT_BITS: u64 = 1 << 14;
/// Past the exact range, the recurrence keeps this many leading bits.
const WORKING_BITS: u64 = 384;

/// Case-1 probabilities `p1[n] = (2n+1) M(n-1) / ((n+2) M(n))` for
/// `n = 2..=max_n`, stored as binary64.
///
/// Immutable once built; share it freely across threads.
#[derive(Clone, PartialEq)]
pub struct RatioTable {
    // p1[i] belongs to size i + 2
    p1: Vec<f64>,
}

impl RatioTable {
    /// Builds the table with every entry correctly rounded from the exact
    /// rational while `M(n)` fits in 16 384 bits (n up to about 10 000).
    /// Beyond that the pair `M(n-1), M(n)` is carried with 384 leading bits,
    /// which bounds the relative error far below half an ulp.
    pub fn build(max_n: usize) -> Result<Self> {
        if max_n < 2 {
            return Err(Error::SizeTooSmall {
                what: "ratio table",
                min: 2,
                got: max_n,
            });
        }
        let mut p1 = Vec::with_capacity(max_n - 1);
        let mut prev = BigUint::one();
        let mut cur = BigUint::one();
        let mut exact = true;
        for n in 2..=max_n as u64 {
            let sum = &cur * (2 * n + 1) + &prev * (3 * (n - 1));
            let (next, r) = sum.div_rem(&BigUint::from(n + 2));
            if exact {
                assert!(
                    r.is_zero(),
                    "holonomic division by {} left a remainder",
                    n + 2
                );
            }
            p1.push(ratio_to_f64(&(&cur * (2 * n + 1)), &(&next * (n + 2))));
            prev = cur;
            cur = next;

            let limit = if exact { EXACT_BITS } else { WORKING_BITS + 64 };
            if cur.bits() > limit {
                exact = false;
                let shift = cur.bits() - WORKING_BITS;
                prev >>= shift;
                cur >>= shift;
            }
        }
        Ok(RatioTable { p1 })
    }

    /// Wraps precomputed probabilities for sizes `2..=p1.len() + 1`.
    pub fn from_probabilities(p1: Vec<f64>) -> Result<Self, RatioFileError> {
        if p1.is_empty() {
            return Err(RatioFileError::MaxNTooSmall(1));
        }
        for (i, &p) in p1.iter().enumerate() {
            if !(p > 0.0 && p < 1.0) {
                return Err(RatioFileError::OutOfUnitInterval { n: i + 2, value: p });
            }
        }
        Ok(RatioTable { p1 })
    }

    pub fn max_n(&self) -> usize {
        self.p1.len() + 1
    }

    /// `p1[n]`, or `None` outside `2..=max_n`.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(2).and_then(|i| self.p1.get(i).copied())
    }

    /// `(n, p1[n])` pairs in increasing `n`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.p1.iter().enumerate().map(|(i, &p)| (i + 2, p))
    }

    /// Writes the line-oriented text format:
    ///
    /// ```text
    /// motzgen-ratio v1
    /// max_n=<n>
    /// <n>\t<p1[n]>      (one line per n = 2..=max_n)
    /// ```
    ///
    /// Probabilities are printed as the shortest decimal that parses back
    /// to the same binary64.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{RATIO_MAGIC}")?;
        writeln!(w, "max_n={}", self.max_n())?;
        for (n, p) in self.entries() {
            writeln!(w, "{n}\t{p}")?;
        }
        w.flush()
    }

    /// Parses the format produced by [`RatioTable::write_to`].
    pub fn read_from<R: Read>(mut r: R) -> Result<Self, RatioFileError> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)
            .map_err(|e| RatioFileError::Io(e.to_string()))?;
        Self::parse(&bytes)
    }

    /// Parses a ratio-table file held in memory.
    pub fn parse(bytes: &[u8]) -> Result<Self, RatioFileError> {
        let text = std::str::from_utf8(bytes).map_err(|e| RatioFileError::Encoding {
            offset: e.valid_up_to(),
        })?;
        let body = text.strip_suffix('\n').unwrap_or(text);
        let mut lines = body.split('\n');

        match lines.next() {
            Some(RATIO_MAGIC) => {}
            found => {
                return Err(RatioFileError::BadMagic {
                    found: found.unwrap_or_default().chars().take(64).collect(),
                })
            }
        }
        let max_n = lines
            .next()
            .and_then(|l| l.strip_prefix("max_n="))
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or(RatioFileError::BadMaxN)?;
        if max_n < 2 {
            return Err(RatioFileError::MaxNTooSmall(max_n));
        }

        let expected = max_n - 1;
        let mut p1 = Vec::with_capacity(expected.min(1 << 16));
        for (i, line) in lines.enumerate() {
            let line_no = i + 3;
            let n = i + 2;
            if n > max_n {
                return Err(RatioFileError::TrailingData { line: line_no });
            }
            let (index, value) = line.split_once('\t').ok_or(RatioFileError::BadEntry {
                line: line_no,
                reason: EntryDefect::MissingTab,
            })?;
            if index.parse::<usize>().ok() != Some(n) {
                return Err(RatioFileError::BadEntry {
                    line: line_no,
                    reason: EntryDefect::WrongIndex,
                });
            }
            let p: f64 = value.parse().map_err(|_| RatioFileError::BadEntry {
                line: line_no,
                reason: EntryDefect::BadNumber,
            })?;
            if !(p > 0.0 && p < 1.0) {
                return Err(RatioFileError::OutOfUnitInterval { n, value: p });
            }
            p1.push(p);
        }
        if p1.len() < expected {
            return Err(RatioFileError::Truncated {
                expected,
                found: p1.len(),
            });
        }
        Ok(RatioTable { p1 })
    }
}

impl fmt::Debug for RatioTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RatioTable")
            .field("max_n", &self.max_n())
            .finish_non_exhaustive()
    }
}

pub const RATIO_MAGIC: &str = "motzgen-ratio v1";

/// Ways a ratio-table file can be rejected.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RatioFileError {
    #[error("not a ratio table: expected header {RATIO_MAGIC:?}, found {found:?}")]
    BadMagic { found: String },
    #[error("missing or malformed max_n line")]
    BadMaxN,
    #[error("max_n must be at least 2, got {0}")]
    MaxNTooSmall(usize),
    #[error("table truncated: expected {expected} entries, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("line {line}: {reason}")]
    BadEntry { line: usize, reason: EntryDefect },
    #[error("p1[{n}] = {value} is outside (0, 1)")]
    OutOfUnitInterval { n: usize, value: f64 },
    #[error("unexpected data after the last entry at line {line}")]
    TrailingData { line: usize },
    #[error("file is not valid UTF-8 (byte {offset})")]
    Encoding { offset: usize },
    #[error("read failed: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryDefect {
    MissingTab,
    WrongIndex,
    BadNumber,
}

impl fmt::Display for EntryDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntryDefect::MissingTab => "expected <n><TAB><probability>",
            EntryDefect::WrongIndex => "size index out of sequence",
            EntryDefect::BadNumber => "probability is not a decimal number",
        })
    }
}

/// Correctly rounded binary64 value of `num / den`, for `0 < num < den`.
///
/// The quotient is scaled to 64 or 65 bits and a sticky bit records a
/// nonzero remainder, so the final integer-to-float conversion rounds
/// exactly as the true rational would.
pub(crate) fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    debug_assert!(!num.is_zero() && num < den);
    let shift = 64 + den.bits() - num.bits();
    let (q, r) = (num << shift).div_rem(den);
    let q = q.to_u128().expect("scaled quotient fits in 65 bits");
    let scaled = (q << 1) | u128::from(!r.is_zero());
    scaled as f64 * 2f64.powi(-(shift as i32 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Signed;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    /// Exact rational value of a finite f64.
    fn exact(x: f64) -> BigRational {
        BigRational::from_float(x).unwrap()
    }

    /// True when `x` is the binary64 nearest to `num/den` (ties either way).
    fn is_nearest(x: f64, num: &BigUint, den: &BigUint) -> bool {
        let target = BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()));
        let err = (exact(x) - &target).abs();
        let up = f64::from_bits(x.to_bits() + 1);
        let down = f64::from_bits(x.to_bits() - 1);
        err <= (exact(up) - &target).abs() && err <= (exact(down) - &target).abs()
    }

    #[test]
    fn motzkin_small_values() {
        let expected = [1u64, 1, 2, 4, 9, 21, 51, 127, 323, 835, 2188];
        for (n, &m) in expected.iter().enumerate() {
            assert_eq!(motzkin(n), big(m), "M({n})");
        }
    }

    #[test]
    fn convolution_base_and_small_values() {
        assert_eq!(motzkin_conv(0), big(1));
        assert_eq!(motzkin_conv(1), big(1));
        assert_eq!(motzkin_conv(6), big(51));
        assert_eq!(motzkin_conv(8), big(323));
    }

    #[test]
    fn recurrences_agree_up_to_100() {
        for n in 0..=100 {
            assert_eq!(motzkin(n), motzkin_conv(n), "n = {n}");
        }
    }

    #[test]
    fn holonomic_identity_holds() {
        for n in 2..300u64 {
            let lhs = big(n + 2) * motzkin(n as usize);
            let rhs = big(2 * n + 1) * motzkin(n as usize - 1)
                + big(3 * (n - 1)) * motzkin(n as usize - 2);
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn catalan_counts_shapes_by_leaves() {
        assert!(catalan(0).is_err());
        let expected = [1u64, 1, 2, 5, 14, 42, 132, 429];
        for (i, &c) in expected.iter().enumerate() {
            assert_eq!(catalan(i + 1).unwrap(), big(c), "leaves = {}", i + 1);
        }
        // (k+1) Cat(k) = 2(2k-1) Cat(k-1), with Cat(k) = catalan(k + 1)
        for k in 1..200u64 {
            let lhs = big(k + 1) * catalan(k as usize + 1).unwrap();
            let rhs = big(2 * (2 * k - 1)) * catalan(k as usize).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn ratio_table_small_entries() {
        assert!(RatioTable::build(1).is_err());
        let t = RatioTable::build(4).unwrap();
        assert_eq!(t.max_n(), 4);
        assert_eq!(t.get(1), None);
        assert_eq!(t.get(5), None);
        assert_eq!(t.get(2), Some(0.625));
        // 7 * 2 / (5 * 4)
        assert_eq!(t.get(3), Some(0.7));
        // 9 * 4 / (6 * 9) = 2/3
        assert_eq!(t.get(4), Some(2.0 / 3.0));
    }

    #[test]
    fn ratio_table_is_correctly_rounded_across_the_precision_switch() {
        let max_n = 11_000;
        let t = RatioTable::build(max_n).unwrap();
        // the exact range ends somewhere below max_n
        assert!(motzkin(max_n).bits() > EXACT_BITS);
        for n in (2..=max_n).filter(|n| *n < 400 || n % 97 == 0 || *n > 10_200) {
            let num = big(2 * n as u64 + 1) * motzkin(n - 1);
            let den = big(n as u64 + 2) * motzkin(n);
            let p = t.get(n).unwrap();
            assert!(p > 0.0 && p < 1.0);
            assert!(is_nearest(p, &num, &den), "p1[{n}] = {p} is not nearest");
        }
    }

    #[test]
    fn ratio_table_converges_to_two_thirds() {
        let t = RatioTable::build(200_000).unwrap();
        for n in [2000, 10_000, 50_000, 200_000] {
            let p = t.get(n).unwrap();
            assert!((p - 2.0 / 3.0).abs() < 1e-3, "p1[{n}] = {p}");
        }
        assert!(t.entries().all(|(_, p)| p > 0.0 && p < 1.0));
    }

    #[test]
    fn ratio_to_f64_rounds_to_nearest() {
        let cases = [
            (1u64, 3u64),
            (2, 3),
            (5, 8),
            (1, 10),
            (999_999, 1_000_000),
            (1, 2),
        ];
        for (a, b) in cases {
            let x = ratio_to_f64(&big(a), &big(b));
            assert_eq!(x, a as f64 / b as f64, "{a}/{b}");
            assert!(is_nearest(x, &big(a), &big(b)));
        }
        // a ratio whose 54th bit sits exactly on a tie before a tiny excess
        let num = (BigUint::one() << 60u32) + BigUint::one();
        let den = BigUint::one() << 61u32;
        let x = ratio_to_f64(&num, &den);
        assert!(is_nearest(x, &num, &den));
        assert_eq!(x, 0.5);
        let num = (BigUint::one() << 60u32) + (BigUint::one() << 7u32) + BigUint::one();
        let x = ratio_to_f64(&num, &den);
        assert!(is_nearest(x, &num, &den));
        assert_eq!(x, f64::from_bits(0.5f64.to_bits() + 1));
    }

    #[test]
    fn save_then_load_is_bit_exact() {
        let t = RatioTable::build(100).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let back = RatioTable::read_from(&buf[..]).unwrap();
        assert_eq!(back.max_n(), 100);
        for ((n, a), (m, b)) in t.entries().zip(back.entries()) {
            assert_eq!(n, m);
            assert_eq!(a.to_bits(), b.to_bits(), "p1[{n}]");
        }
    }

    #[test]
    fn written_format_is_stable() {
        let mut buf = Vec::new();
        RatioTable::build(3).unwrap().write_to(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "motzgen-ratio v1\nmax_n=3\n2\t0.625\n3\t0.7\n"
        );
    }

    #[test]
    fn load_reports_each_defect_distinctly() {
        assert!(matches!(
            RatioTable::parse(b"motzgen-ratio v2\nmax_n=2\n2\t0.625\n"),
            Err(RatioFileError::BadMagic { .. })
        ));
        assert_eq!(
            RatioTable::parse(b"motzgen-ratio v1\nmaxn=2\n2\t0.625\n"),
            Err(RatioFileError::BadMaxN)
        );
        assert_eq!(
            RatioTable::parse(b"motzgen-ratio v1\nmax_n=1\n"),
            Err(RatioFileError::MaxNTooSmall(1))
        );
        assert_eq!(
            RatioTable::parse(b"motzgen-ratio v1\nmax_n=4\n2\t0.625\n3\t0.7\n"),
            Err(RatioFileError::Truncated {
                expected: 3,
                found: 2
            })
        );
        assert_eq!(
            RatioTable::parse(b"motzgen-ratio v1\nmax_n=2\n2 0.625\n"),
            Err(RatioFileError::BadEntry {
                line: 3,
                reason: EntryDefect::MissingTab
            })
        );
        assert_eq!(
            RatioTable::parse(b"motzgen-ratio v1\nmax_n=3\n3\t0.625\n"),
            Err(RatioFileError::BadEntry {
                line: 3,
                reason: EntryDefect::WrongIndex
            })
        );
        assert!(matches!(
            RatioTable::parse(b"motzgen-ratio v1\nmax_n=2\n2\t1.5\n"),
            Err(RatioFileError::OutOfUnitInterval { n: 2, .. })
        ));
        assert_eq!(
            RatioTable::parse(b"motzgen-ratio v1\nmax_n=2\n2\t0.625\n3\t0.7\n"),
            Err(RatioFileError::TrailingData { line: 4 })
        );
    }
}
