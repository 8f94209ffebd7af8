//! Uniform random Motzkin trees in linear time.
//!
//! A Motzkin tree of size `n` is carried as a *slanting tree*: a binary
//! tree with `n + 1` internal nodes and `n + 2` leaves in which no
//! internal node has a leaf on the left and an internal node on the
//! right. Internal nodes with children (internal, internal),
//! (internal, leaf) and (leaf, leaf) stand for binary, unary and end
//! nodes of the Motzkin tree.
//!
//! The generator follows `(n+2) M(n) = (2n+1) M(n-1) + 3(n-1) M(n-2)`.
//! Reading the left side as slanting trees of size `n` with a marked
//! leaf, a draw either
//!
//! * (case 1) marks one of the `2n + 1` nodes of a size `n - 1` tree and
//!   inserts a node and a leaf above it, or
//! * (case 2) marks one of the `n - 1` internal nodes of a size `n - 2`
//!   tree and grafts two internal nodes and two leaves under it, in one
//!   of three placements.
//!
//! Sampling runs in two phases: the case draws walk down from `n` to a
//! base of size 0 or 1 and are recorded in a [`SampleHistory`]; then the
//! position draws replay the history upward on a single array of
//! `2n + 3` slots.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::codec::{word_to_tree, MotzkinTree, MotzkinWord, Symbol};
use crate::error::{Error, Result, VectorError};
use crate::numbers::{motzkin, RatioTable};
use crate::rng::RandomStream;
use crate::vector;

/// A labeled slanting tree of size `n` in the flat encoding (`2n + 3`
/// labels).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SlantingVector {
    labels: Vec<u32>,
}

impl SlantingVector {
    pub fn from_labels(labels: Vec<u32>) -> Result<Self, VectorError> {
        vector::validate(&labels, true)?;
        Ok(SlantingVector { labels })
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<u32> {
        self.labels
    }

    /// Size of the encoded Motzkin tree, in edges.
    pub fn size(&self) -> usize {
        (self.labels.len() - 3) / 2
    }

    pub fn leaf_count(&self) -> usize {
        self.labels.iter().filter(|l| *l % 2 == 0).count()
    }

    pub fn to_word(&self) -> MotzkinWord {
        slanting_word(&self.labels)
    }

    pub fn to_motzkin_tree(&self) -> MotzkinTree {
        word_to_tree(&self.to_word())
    }

    /// Canonical labeling of `tree`: internal labels in preorder from 1,
    /// leaf labels in the order their slots are filled.
    pub fn from_motzkin_tree(tree: &MotzkinTree) -> Self {
        let n = tree.size();
        let mut labels = vec![0u32; 2 * n + 3];
        let mut next_internal = 1u32;
        let mut next_leaf = 0u32;
        let mut alloc_internal = || {
            let l = next_internal;
            next_internal += 2;
            l
        };
        let root = alloc_internal();
        labels[0] = root;
        let mut stack = vec![(tree, root)];
        while let Some((t, at)) = stack.pop() {
            let slot = at as usize;
            let mut leaf = || {
                let l = next_leaf;
                next_leaf += 2;
                l
            };
            match t {
                MotzkinTree::Leaf => {
                    labels[slot] = leaf();
                    labels[slot + 1] = leaf();
                }
                MotzkinTree::Unary(c) => {
                    let child = alloc_internal();
                    labels[slot] = child;
                    labels[slot + 1] = leaf();
                    stack.push((c, child));
                }
                MotzkinTree::Binary(l, r) => {
                    let left = alloc_internal();
                    let right = alloc_internal();
                    labels[slot] = left;
                    labels[slot + 1] = right;
                    stack.push((r, right));
                    stack.push((l, left));
                }
            }
        }
        debug_assert!(vector::validate(&labels, true).is_ok());
        SlantingVector { labels }
    }
}

/// Decodes a valid slanting vector straight into its Motzkin word.
fn slanting_word(labels: &[u32]) -> MotzkinWord {
    enum Item {
        Node(u32),
        Close,
    }
    let mut out = Vec::with_capacity(labels.len().saturating_sub(3) / 2);
    let mut stack = vec![Item::Node(labels[0])];
    while let Some(item) = stack.pop() {
        match item {
            Item::Close => out.push(Symbol::Close),
            Item::Node(l) => {
                let left = labels[l as usize];
                let right = labels[l as usize + 1];
                match (left % 2 == 1, right % 2 == 1) {
                    (true, true) => {
                        out.push(Symbol::Open);
                        stack.push(Item::Node(right));
                        stack.push(Item::Close);
                        stack.push(Item::Node(left));
                    }
                    (true, false) => {
                        out.push(Symbol::C);
                        stack.push(Item::Node(left));
                    }
                    (false, false) => {}
                    (false, true) => unreachable!("validated slanting vector"),
                }
            }
        }
    }
    MotzkinWord::from_valid(out)
}

impl fmt::Debug for SlantingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SlantingVector({:?})", self.labels)
    }
}

impl fmt::Display for SlantingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&vector::format_labels(&self.labels))
    }
}

impl FromStr for SlantingVector {
    type Err = VectorError;

    fn from_str(text: &str) -> Result<Self, VectorError> {
        SlantingVector::from_labels(vector::parse_labels(text)?)
    }
}

/// Decodes, validating first; the error names the structural defect.
pub fn to_motzkin_tree(labels: &[u32]) -> Result<MotzkinTree, VectorError> {
    vector::validate(labels, true)?;
    Ok(word_to_tree(&slanting_word(labels)))
}

const BASE_0: [u32; 3] = [1, 0, 2];
const BASE_1: [u32; 5] = [1, 3, 0, 2, 4];

/// The unique slanting trees of size 0 and 1.
pub fn base_vector(n: usize) -> Result<SlantingVector> {
    let labels = match n {
        0 => BASE_0.to_vec(),
        1 => BASE_1.to_vec(),
        _ => {
            return Err(Error::OutOfRange {
                what: "base size",
                got: n as u64,
                bound: 2,
            })
        }
    };
    Ok(SlantingVector { labels })
}

/// Which side of the holonomic recurrence a size-`n` draw comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    /// Grow a size `n - 1` tree by one node and one leaf.
    One,
    /// Grow a size `n - 2` tree by two nodes and two leaves.
    Two,
}

impl Case {
    /// How much the size drops when this case is taken.
    pub fn shrink(self) -> usize {
        match self {
            Case::One => 1,
            Case::Two => 2,
        }
    }
}

/// How case selection is carried out.
#[derive(Debug, Clone, Copy)]
pub enum Mode<'a> {
    /// Integer draw below `(n+2) M(n)`; exact probabilities, quadratic
    /// bit cost over a whole sample.
    Exact,
    /// One binary64 draw against a precomputed probability; linear.
    Fast(&'a RatioTable),
}

fn check_case_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::SizeTooSmall {
            what: "case selection",
            min: 2,
            got: n,
        });
    }
    Ok(())
}

/// The case selected by an exact draw `u` in `0..(n+2) M(n)`: case 1
/// exactly when `u < (2n+1) M(n-1)`.
pub fn exact_case(n: usize, u: &BigUint) -> Result<Case> {
    check_case_size(n)?;
    let bound = motzkin(n) * (n as u64 + 2);
    if u >= &bound {
        return Err(Error::OutOfRange {
            what: "case draw",
            got: u.try_into().unwrap_or(u64::MAX),
            bound: (&bound).try_into().unwrap_or(u64::MAX),
        });
    }
    let threshold = motzkin(n - 1) * (2 * n as u64 + 1);
    Ok(if u < &threshold { Case::One } else { Case::Two })
}

fn check_table(n: usize, mode: Mode<'_>) -> Result<()> {
    if let Mode::Fast(table) = mode {
        if n >= 2 && table.max_n() < n {
            return Err(Error::TableTooSmall {
                max_n: table.max_n(),
                requested: n,
            });
        }
    }
    Ok(())
}

/// Draws the case for size `n`, consuming one draw from `rng`.
pub fn select_case(rng: &mut RandomStream, n: usize, mode: Mode<'_>) -> Result<Case> {
    check_case_size(n)?;
    check_table(n, mode)?;
    match mode {
        Mode::Exact => {
            let bound = motzkin(n) * (n as u64 + 2);
            let u = rng.next_below_big(&bound)?;
            exact_case(n, &u)
        }
        Mode::Fast(table) => {
            let p1 = table.get(n).expect("table covers n");
            Ok(if rng.next_unit() < p1 {
                Case::One
            } else {
                Case::Two
            })
        }
    }
}

/// Number of choices per step.
///
/// `FULL` matches the counts in the recurrence: `2n + 1` nodes to mark in
/// case 1, `3(n - 1)` (node, placement) pairs in case 2. `NARROW` uses
/// `2n` and `3n - 6` instead, which is biased; it is kept to show that
/// the bias is detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PositionRanges {
    pub narrow_case1: bool,
    pub narrow_case2: bool,
}

impl PositionRanges {
    pub const FULL: Self = PositionRanges {
        narrow_case1: false,
        narrow_case2: false,
    };
    pub const NARROW: Self = PositionRanges {
        narrow_case1: true,
        narrow_case2: true,
    };
    /// The ranges this build samples with (`NARROW` under the
    /// `narrow-ranges` feature).
    pub const BUILD: Self = if cfg!(feature = "narrow-ranges") {
        Self::NARROW
    } else {
        Self::FULL
    };

    /// Positions drawn in case 1 when building size `n`.
    pub fn case1_positions(self, n: usize) -> usize {
        if self.narrow_case1 {
            2 * n
        } else {
            2 * n + 1
        }
    }

    /// `(node, placement)` choices drawn in case 2 when building size `n`.
    pub fn case2_choices(self, n: usize) -> usize {
        if self.narrow_case2 {
            // scaling a unit draw by zero still yields the single value 0
            (3 * n).saturating_sub(6).max(1)
        } else {
            3 * (n - 1)
        }
    }

    /// Human-readable names of the ranges that differ from `FULL`.
    pub fn describe(self) -> String {
        let mut parts = Vec::new();
        if self.narrow_case1 {
            parts.push("case-1 positions below 2n");
        }
        if self.narrow_case2 {
            parts.push("case-2 choices below 3n-6");
        }
        if parts.is_empty() {
            "full ranges (2n+1 positions, 3(n-1) choices)".to_string()
        } else {
            parts.join(", ")
        }
    }
}

/// Case-1 insertion in place: `buf[..2n+1]` holds a size `n - 1` tree;
/// slots `2n+1` and `2n+2` are written.
///
/// When `k` is a right child holding a leaf whose left sibling is also a
/// leaf, inserting at `k` would leave a leaf left of an internal node, so
/// the insertion moves to the sibling at `k - 1`.
fn apply_case1(buf: &mut [u32], n: usize, k: usize) {
    let target = if k > 0 && k % 2 == 0 && buf[k] % 2 == 0 && buf[k - 1] % 2 == 0 {
        k - 1
    } else {
        k
    };
    let node = 2 * n as u32 + 1;
    let old = buf[target];
    buf[target] = node;
    buf[node as usize] = old;
    buf[node as usize + 1] = node + 1;
    debug_assert!(
        target == 0 || {
            let owner = if target % 2 == 1 { target } else { target - 1 };
            !(buf[owner] % 2 == 0 && buf[owner + 1] % 2 == 1)
        }
    );
}

/// Case-2 graft in place: `buf[..2n-1]` holds a size `n - 2` tree; the
/// internal node labeled `2k+1` gets two fresh internal children, one
/// over a fresh leaf pair and one over its old children. Placements 0
/// and 1 put the leaf pair on the left, 2 on the right.
fn apply_case2(buf: &mut [u32], n: usize, k: usize, c: usize) {
    let n = n as u32;
    let (left_slot, right_slot) = (2 * k + 1, 2 * k + 2);
    let (old_left, old_right) = (buf[left_slot], buf[right_slot]);
    buf[left_slot] = 2 * n - 1;
    buf[right_slot] = 2 * n + 1;
    let tail = &mut buf[2 * n as usize - 1..2 * n as usize + 3];
    if c < 2 {
        tail.copy_from_slice(&[2 * n, 2 * n + 2, old_left, old_right]);
    } else {
        tail.copy_from_slice(&[old_left, old_right, 2 * n, 2 * n + 2]);
    }
}

/// One case-1 step from a size `n - 1` tree: `k` in `0..=2n`.
pub fn case1_step(v: &SlantingVector, k: usize) -> Result<SlantingVector> {
    let n = v.size() + 1;
    let bound = 2 * n + 1;
    if k >= bound {
        return Err(Error::OutOfRange {
            what: "case-1 position",
            got: k as u64,
            bound: bound as u64,
        });
    }
    let mut labels = v.labels.clone();
    labels.resize(2 * n + 3, 0);
    apply_case1(&mut labels, n, k);
    Ok(SlantingVector { labels })
}

/// One case-2 step from a size `n - 2` tree: node `k` in `0..=n-2`,
/// placement `c` in `0..3`.
pub fn case2_step(v: &SlantingVector, k: usize, c: usize) -> Result<SlantingVector> {
    let n = v.size() + 2;
    if k > n - 2 {
        return Err(Error::OutOfRange {
            what: "case-2 node",
            got: k as u64,
            bound: (n - 1) as u64,
        });
    }
    if c > 2 {
        return Err(Error::OutOfRange {
            what: "case-2 placement",
            got: c as u64,
            bound: 3,
        });
    }
    let mut labels = v.labels.clone();
    labels.resize(2 * n + 3, 0);
    apply_case2(&mut labels, n, k, c);
    Ok(SlantingVector { labels })
}

/// Case draws recorded while descending from `n` to a base of size 0
/// or 1, one byte per step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleHistory {
    top: usize,
    cases: Vec<Case>,
}

impl SampleHistory {
    fn new(top: usize) -> Self {
        SampleHistory {
            top,
            cases: Vec::with_capacity(top * 2 / 3 + 2),
        }
    }

    fn push(&mut self, case: Case) {
        self.cases.push(case);
    }

    /// The size the sample is built to.
    pub fn top(&self) -> usize {
        self.top
    }

    /// Cases drawn, from size `top` downward.
    pub fn cases(&self) -> &[Case] {
        &self.cases
    }

    /// Sizes visited: `top`, then one entry per case, ending at the base.
    pub fn sizes(&self) -> Vec<usize> {
        let mut m = self.top;
        std::iter::once(m)
            .chain(self.cases.iter().map(move |c| {
                m -= c.shrink();
                m
            }))
            .collect()
    }

    pub fn base(&self) -> usize {
        self.top - self.cases.iter().map(|c| c.shrink()).sum::<usize>()
    }
}

/// First phase: draws the case at every size from `n` down to the base.
pub fn descend(rng: &mut RandomStream, n: usize, mode: Mode<'_>) -> Result<SampleHistory> {
    check_table(n, mode)?;
    let mut history = SampleHistory::new(n);
    let mut m = n;
    while m >= 2 {
        let case = select_case(rng, m, mode)?;
        history.push(case);
        m -= case.shrink();
    }
    Ok(history)
}

/// Second phase: replays `history` bottom-up with fresh position draws.
pub fn replay(
    rng: &mut RandomStream,
    history: &SampleHistory,
    ranges: PositionRanges,
) -> Result<SlantingVector> {
    let n = history.top;
    let mut labels = vec![0u32; 2 * n + 3];
    let mut m = history.base();
    let base_labels: &[u32] = if m == 0 { &BASE_0 } else { &BASE_1 };
    labels[..base_labels.len()].copy_from_slice(base_labels);

    for &case in history.cases().iter().rev() {
        m += case.shrink();
        match case {
            Case::One => {
                let k = rng.next_index(ranges.case1_positions(m))?;
                apply_case1(&mut labels, m, k);
            }
            Case::Two => {
                let r = rng.next_index(ranges.case2_choices(m))?;
                apply_case2(&mut labels, m, r / 3, r % 3);
            }
        }
    }
    debug_assert_eq!(m, n);
    Ok(SlantingVector { labels })
}

/// A uniformly random slanting tree of size `n`.
///
/// All case draws come first (sizes `n` downward), then one position
/// draw per step (sizes upward). Linear time in fast mode.
pub fn random_motzkin(rng: &mut RandomStream, n: usize, mode: Mode<'_>) -> Result<SlantingVector> {
    let history = descend(rng, n, mode)?;
    replay(rng, &history, PositionRanges::BUILD)
}

/// [`random_motzkin`] decoded to a tree.
pub fn random_motzkin_tree(
    rng: &mut RandomStream,
    n: usize,
    mode: Mode<'_>,
) -> Result<MotzkinTree> {
    Ok(random_motzkin(rng, n, mode)?.to_motzkin_tree())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(labels: &[u32]) -> SlantingVector {
        SlantingVector::from_labels(labels.to_vec()).unwrap()
    }

    #[test]
    fn base_vectors() {
        assert_eq!(base_vector(0).unwrap().labels(), &[1, 0, 2]);
        assert_eq!(base_vector(1).unwrap().labels(), &[1, 3, 0, 2, 4]);
        assert!(base_vector(2).is_err());
        assert_eq!(base_vector(0).unwrap().to_motzkin_tree(), MotzkinTree::Leaf);
    }

    #[test]
    fn case1_examples() {
        let v1 = sv(&[1, 3, 0, 2, 4]);
        assert_eq!(case1_step(&v1, 2).unwrap().labels(), &[1, 3, 5, 2, 4, 0, 6]);
        assert_eq!(case1_step(&v1, 4).unwrap().labels(), &[1, 3, 0, 5, 4, 2, 6]);
        // a new root above the old one: same shape as the size-1 base
        let grown = case1_step(&sv(&[1, 0, 2]), 0).unwrap();
        assert_eq!(grown.labels(), &[3, 0, 2, 1, 4]);
        assert_eq!(grown.to_word(), base_vector(1).unwrap().to_word());
        assert!(matches!(
            case1_step(&v1, 5),
            Err(Error::OutOfRange { bound: 5, .. })
        ));
    }

    #[test]
    fn case2_examples() {
        let v0 = sv(&[1, 0, 2]);
        assert_eq!(
            case2_step(&v0, 0, 0).unwrap().labels(),
            &[1, 3, 5, 4, 6, 0, 2]
        );
        assert_eq!(
            case2_step(&v0, 0, 1).unwrap().labels(),
            &[1, 3, 5, 4, 6, 0, 2]
        );
        assert_eq!(
            case2_step(&v0, 0, 2).unwrap().labels(),
            &[1, 3, 5, 0, 2, 4, 6]
        );
        assert!(case2_step(&v0, 1, 0).is_err());
        assert!(case2_step(&v0, 0, 3).is_err());
    }

    #[test]
    fn every_step_result_is_valid() {
        let mut rng = RandomStream::new(17);
        let mut trees = vec![base_vector(0).unwrap(), base_vector(1).unwrap()];
        for n in 2..200 {
            let v = if rng.next_below(2).unwrap() == 0 {
                let prev = &trees[n - 1];
                case1_step(prev, rng.next_index(2 * n + 1).unwrap()).unwrap()
            } else {
                let prev = &trees[n - 2];
                let r = rng.next_index(3 * (n - 1)).unwrap();
                case2_step(prev, r / 3, r % 3).unwrap()
            };
            assert_eq!(vector::validate(v.labels(), true), Ok(()), "size {n}");
            assert_eq!(v.size(), n);
            trees.push(v);
        }
    }

    #[test]
    fn exact_case_boundary() {
        let eight = BigUint::from(8u8);
        assert_eq!(exact_case(2, &BigUint::from(4u8)).unwrap(), Case::One);
        assert_eq!(exact_case(2, &BigUint::from(5u8)).unwrap(), Case::Two);
        assert_eq!(exact_case(2, &BigUint::from(7u8)).unwrap(), Case::Two);
        assert!(exact_case(2, &eight).is_err());
        assert!(exact_case(1, &BigUint::from(0u8)).is_err());
        let ones = (0u8..8)
            .filter(|&u| exact_case(2, &BigUint::from(u)).unwrap() == Case::One)
            .count();
        assert_eq!(ones, 5);
    }

    #[test]
    fn select_case_errors() {
        let mut rng = RandomStream::new(0);
        assert!(select_case(&mut rng, 1, Mode::Exact).is_err());
        let t = RatioTable::build(5).unwrap();
        assert_eq!(
            select_case(&mut rng, 6, Mode::Fast(&t)),
            Err(Error::TableTooSmall {
                max_n: 5,
                requested: 6
            })
        );
        assert!(random_motzkin(&mut rng, 6, Mode::Fast(&t)).is_err());
        assert!(random_motzkin(&mut rng, 5, Mode::Fast(&t)).is_ok());
    }

    #[test]
    fn tiny_sizes_are_deterministic() {
        let t = RatioTable::build(2).unwrap();
        for seed in 0..20 {
            let mut rng = RandomStream::new(seed);
            assert_eq!(
                random_motzkin(&mut rng, 0, Mode::Exact).unwrap().labels(),
                &[1, 0, 2]
            );
            assert_eq!(
                random_motzkin(&mut rng, 1, Mode::Fast(&t))
                    .unwrap()
                    .labels(),
                &[1, 3, 0, 2, 4]
            );
        }
    }

    #[test]
    fn history_shape() {
        let t = RatioTable::build(500).unwrap();
        let mut rng = RandomStream::new(4);
        for n in [0usize, 1, 2, 3, 10, 500] {
            let h = descend(&mut rng, n, Mode::Fast(&t)).unwrap();
            assert_eq!(h.sizes()[0], n);
            assert!(h.base() <= 1);
            assert_eq!(h.sizes().last(), Some(&h.base()));
            assert_eq!(h.cases().len() + 1, h.sizes().len());
            assert!(h.sizes().windows(2).all(|w| matches!(w[0] - w[1], 1 | 2)));
        }
    }

    #[test]
    fn decoding_examples() {
        assert_eq!(to_motzkin_tree(&[1, 0, 2]).unwrap(), MotzkinTree::Leaf);
        assert_eq!(
            to_motzkin_tree(&[1, 3, 0, 2, 4]).unwrap(),
            MotzkinTree::unary(MotzkinTree::Leaf)
        );
        assert_eq!(
            to_motzkin_tree(&[1, 3, 5, 4, 6, 0, 2]).unwrap(),
            MotzkinTree::binary(MotzkinTree::Leaf, MotzkinTree::Leaf)
        );
        // root 3 is unary over node 5, which is binary over two end nodes
        assert_eq!(
            sv(&[3, 0, 2, 5, 4, 7, 1, 6, 8]).to_word().to_string(),
            "c()"
        );
        assert_eq!(
            to_motzkin_tree(&[1, 0, 3, 2, 4]),
            Err(VectorError::ForbiddenConfiguration(1))
        );
        assert!(matches!(
            to_motzkin_tree(&[1, 0, 2, 2, 4]),
            Err(VectorError::NotPermutation { .. })
        ));
    }

    #[test]
    fn canonical_encoding_round_trips() {
        for w in ["", "c", "()", "c(c)", "(())()", "(c(c)c)c"] {
            let tree = word_to_tree(&w.parse().unwrap());
            let v = SlantingVector::from_motzkin_tree(&tree);
            assert_eq!(v.size(), tree.size());
            assert_eq!(v.to_motzkin_tree(), tree);
            assert_eq!(v.leaf_count(), tree.size() + 2);
        }
        assert_eq!(
            SlantingVector::from_motzkin_tree(&MotzkinTree::Leaf).labels(),
            &[1, 0, 2]
        );
    }

    #[test]
    fn ranges() {
        assert_eq!(PositionRanges::FULL.case1_positions(4), 9);
        assert_eq!(PositionRanges::FULL.case2_choices(4), 9);
        assert_eq!(PositionRanges::NARROW.case1_positions(4), 8);
        assert_eq!(PositionRanges::NARROW.case2_choices(4), 6);
        assert_eq!(PositionRanges::NARROW.case2_choices(2), 1);
    }
}
