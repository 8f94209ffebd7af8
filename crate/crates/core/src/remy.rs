//! Rémy's linear-time generator for uniform binary trees.
//!
//! Each step draws a node of the current tree and a side. A fresh
//! internal node replaces the drawn node, which becomes one of its
//! children; a fresh leaf becomes the other. In the flat encoding this
//! rewrites one slot and fills the next two.

use std::fmt;
use std::str::FromStr;

use crate::codec::{MotzkinWord, Symbol};
use crate::error::{Error, Result, VectorError};
use crate::rng::RandomStream;
use crate::vector;

/// A decorated binary tree in the flat encoding: `2n - 1` labels for `n`
/// leaves.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryTreeVector {
    labels: Vec<u32>,
}

impl BinaryTreeVector {
    pub fn single_leaf() -> Self {
        BinaryTreeVector { labels: vec![0] }
    }

    pub fn from_labels(labels: Vec<u32>) -> Result<Self, VectorError> {
        vector::validate(&labels, false)?;
        Ok(BinaryTreeVector { labels })
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn leaves(&self) -> usize {
        self.labels.len().div_ceil(2)
    }

    /// The shape as a Dyck word: a leaf is empty, an internal node with
    /// subtrees `l`, `r` is `(l)r`. Equal words mean equal shapes.
    pub fn to_dyck_word(&self) -> MotzkinWord {
        enum Item {
            Label(u32),
            Close,
        }
        let mut out = Vec::with_capacity(self.labels.len() - 1);
        let mut stack = vec![Item::Label(self.labels[0])];
        while let Some(item) = stack.pop() {
            match item {
                Item::Close => out.push(Symbol::Close),
                Item::Label(l) if l % 2 == 0 => {}
                Item::Label(l) => {
                    out.push(Symbol::Open);
                    stack.push(Item::Label(self.labels[l as usize + 1]));
                    stack.push(Item::Close);
                    stack.push(Item::Label(self.labels[l as usize]));
                }
            }
        }
        MotzkinWord::from_valid(out)
    }

    /// Graphviz rendering of the labeled tree; leaves are boxes.
    pub fn to_dot(&self) -> String {
        let mut nodes = String::new();
        let mut edges = String::new();
        let mut stack = vec![self.labels[0]];
        while let Some(l) = stack.pop() {
            let shape = if l % 2 == 0 { "box" } else { "circle" };
            nodes.push_str(&format!("  v{l} [label=\"{l}\", shape={shape}];\n"));
            if l % 2 == 1 {
                let (left, right) = (self.labels[l as usize], self.labels[l as usize + 1]);
                edges.push_str(&format!("  v{l} -> v{left};\n  v{l} -> v{right};\n"));
                stack.push(right);
                stack.push(left);
            }
        }
        format!("digraph binary {{\n{nodes}{edges}}}\n")
    }
}

impl fmt::Debug for BinaryTreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryTreeVector({:?})", self.labels)
    }
}

impl fmt::Display for BinaryTreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&vector::format_labels(&self.labels))
    }
}

impl FromStr for BinaryTreeVector {
    type Err = VectorError;

    fn from_str(text: &str) -> Result<Self, VectorError> {
        BinaryTreeVector::from_labels(vector::parse_labels(text)?)
    }
}

/// Inserts into `buf[..len]`, writing `buf[len]` and `buf[len + 1]`.
/// `x / 2` picks the node, the parity of `x` the side the old subtree
/// goes to (even: left).
fn insert(buf: &mut [u32], len: usize, x: usize) {
    let k = x / 2;
    let fresh_node = len as u32;
    let fresh_leaf = len as u32 + 1;
    let old = buf[k];
    buf[k] = fresh_node;
    if x % 2 == 0 {
        buf[len] = old;
        buf[len + 1] = fresh_leaf;
    } else {
        buf[len] = fresh_leaf;
        buf[len + 1] = old;
    }
}

/// One insertion: `x` ranges over `0..2 * len`, two choices per node.
pub fn remy_step(v: &BinaryTreeVector, x: u64) -> Result<BinaryTreeVector> {
    let len = v.labels.len();
    let bound = 2 * len as u64;
    if x >= bound {
        return Err(Error::OutOfRange {
            what: "insertion choice",
            got: x,
            bound,
        });
    }
    let mut labels = v.labels.clone();
    labels.resize(len + 2, 0);
    insert(&mut labels, len, x as usize);
    Ok(BinaryTreeVector { labels })
}

/// A uniformly random binary tree with `leaves` leaves.
///
/// Fills one array of `2 * leaves - 1` slots in place; the draw for the
/// tree with `m` leaves is uniform below `4m - 6`.
pub fn random_binary_tree(rng: &mut RandomStream, leaves: usize) -> Result<BinaryTreeVector> {
    if leaves == 0 {
        return Err(Error::SizeTooSmall {
            what: "binary tree",
            min: 1,
            got: 0,
        });
    }
    let mut labels = vec![0u32; 2 * leaves - 1];
    let mut len = 1;
    while len < labels.len() {
        let x = rng.next_index(2 * len)?;
        insert(&mut labels, len, x);
        len += 2;
    }
    Ok(BinaryTreeVector { labels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(labels: &[u32]) -> BinaryTreeVector {
        BinaryTreeVector::from_labels(labels.to_vec()).unwrap()
    }

    #[test]
    fn first_step_both_sides() {
        let leaf = BinaryTreeVector::single_leaf();
        assert_eq!(remy_step(&leaf, 0).unwrap().labels(), &[1, 0, 2]);
        assert_eq!(remy_step(&leaf, 1).unwrap().labels(), &[1, 2, 0]);
        assert!(matches!(
            remy_step(&leaf, 2),
            Err(Error::OutOfRange { bound: 2, .. })
        ));
    }

    #[test]
    fn worked_example_inserting_node_17() {
        let before = tree(&[1, 13, 0, 2, 5, 9, 7, 8, 4, 11, 6, 12, 10, 15, 3, 16, 14]);
        let after = remy_step(&before, 21).unwrap();
        assert_eq!(
            after.labels(),
            &[1, 13, 0, 2, 5, 9, 7, 8, 4, 11, 17, 12, 10, 15, 3, 16, 14, 18, 6]
        );
        assert_eq!(after.leaves(), 10);
        // x = 8: insert above node 5, old subtree on the left
        let other = remy_step(&before, 8).unwrap();
        assert_eq!(&other.labels()[4..5], &[17]);
        assert_eq!(&other.labels()[17..], &[5, 18]);
    }

    #[test]
    fn every_step_keeps_a_valid_tree() {
        let mut rng = RandomStream::new(3);
        let mut v = BinaryTreeVector::single_leaf();
        for _ in 0..300 {
            let x = rng.next_below(2 * v.labels().len() as u64).unwrap();
            v = remy_step(&v, x).unwrap();
            assert_eq!(vector::validate(v.labels(), false), Ok(()));
        }
    }

    #[test]
    fn choice_sequences_give_distinct_vectors() {
        let mut level = vec![BinaryTreeVector::single_leaf()];
        for leaves in 2..=4u64 {
            level = level
                .iter()
                .flat_map(|v| {
                    (0..2 * v.labels().len() as u64).map(move |x| remy_step(v, x).unwrap())
                })
                .collect();
            let distinct: std::collections::HashSet<_> = level.iter().collect();
            assert_eq!(distinct.len(), level.len(), "{leaves} leaves");
        }
        // 2 * 6 * 10 sequences
        assert_eq!(level.len(), 120);
    }

    #[test]
    fn random_tree_sizes() {
        let mut rng = RandomStream::new(1);
        assert!(random_binary_tree(&mut rng, 0).is_err());
        assert_eq!(random_binary_tree(&mut rng, 1).unwrap().labels(), &[0]);
        for leaves in [2, 5, 100, 10_000] {
            let t = random_binary_tree(&mut rng, leaves).unwrap();
            assert_eq!(t.leaves(), leaves);
            assert_eq!(vector::validate(t.labels(), false), Ok(()));
            assert_eq!(t.to_dyck_word().len(), 2 * (leaves - 1));
        }
    }

    #[test]
    fn two_leaves_split_evenly() {
        let mut rng = RandomStream::new(8);
        let mut left = 0;
        let draws = 100_000;
        for _ in 0..draws {
            let t = random_binary_tree(&mut rng, 2).unwrap();
            match t.labels() {
                [1, 0, 2] => left += 1,
                [1, 2, 0] => {}
                other => panic!("unexpected {other:?}"),
            }
        }
        let sigma = (draws as f64 * 0.25).sqrt();
        assert!((left as f64 - draws as f64 / 2.0).abs() < 5.0 * sigma);
    }

    #[test]
    fn dyck_word_of_small_trees() {
        assert_eq!(tree(&[0]).to_dyck_word().to_string(), "");
        assert_eq!(tree(&[1, 0, 2]).to_dyck_word().to_string(), "()");
        assert_eq!(tree(&[1, 3, 0, 2, 4]).to_dyck_word().to_string(), "(())");
        assert_eq!(tree(&[1, 0, 3, 2, 4]).to_dyck_word().to_string(), "()()");
    }

    #[test]
    fn text_round_trip() {
        let t = tree(&[1, 3, 0, 2, 4]);
        assert_eq!(t.to_string(), "1 3 0 2 4");
        assert_eq!("1 3 0 2 4".parse::<BinaryTreeVector>().unwrap(), t);
        assert!("1 0 0".parse::<BinaryTreeVector>().is_err());
    }
}
