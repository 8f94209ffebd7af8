//! Flat-array encoding shared by binary and slanting trees.
//!
//! Odd labels are internal nodes, even labels are leaves. The node
//! labeled `2k+1` keeps its children at indices `2k+1` (left) and `2k+2`
//! (right); index 0 holds the root.

use std::fmt::Write as _;

use crate::error::VectorError;

/// Checks that `labels` encodes one tree: a permutation of `0..len`,
/// a spanning decode from the root, and (for slanting trees) no internal
/// node whose left child is a leaf while its right child is internal.
pub(crate) fn validate(labels: &[u32], slanting: bool) -> Result<(), VectorError> {
    let len = labels.len();
    let min_len = if slanting { 3 } else { 1 };
    if len < min_len || len % 2 == 0 || len > u32::MAX as usize {
        return Err(VectorError::BadLength(len));
    }
    let mut seen = vec![false; len];
    for (index, &label) in labels.iter().enumerate() {
        match seen.get_mut(label as usize) {
            Some(slot) if !*slot => *slot = true,
            _ => return Err(VectorError::NotPermutation { index, label }),
        }
    }
    if len == 1 {
        return Ok(());
    }
    if labels[0] % 2 == 0 {
        return Err(VectorError::RootIsLeaf(labels[0]));
    }
    // Each index belongs to exactly one parent, so walking from the root
    // reaches every internal node at most once.
    let expected = (len - 1) / 2;
    let mut reached = 0;
    let mut stack = vec![labels[0]];
    while let Some(node) = stack.pop() {
        reached += 1;
        let left = labels[node as usize];
        let right = labels[node as usize + 1];
        if slanting && left % 2 == 0 && right % 2 == 1 {
            return Err(VectorError::ForbiddenConfiguration(node));
        }
        stack.extend([left, right].into_iter().filter(|l| l % 2 == 1));
    }
    if reached != expected {
        return Err(VectorError::Disconnected { reached, expected });
    }
    Ok(())
}

/// Whitespace-separated decimal labels.
pub(crate) fn parse_labels(text: &str) -> Result<Vec<u32>, VectorError> {
    text.split_ascii_whitespace()
        .enumerate()
        .map(|(index, token)| {
            token.parse::<u32>().map_err(|_| VectorError::BadToken {
                index,
                token: token.chars().take(32).collect(),
            })
        })
        .collect()
}

pub(crate) fn format_labels(labels: &[u32]) -> String {
    let mut out = String::with_capacity(labels.len() * 4);
    for (i, l) in labels.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{l}").expect("writing to a String");
    }
    out
}
