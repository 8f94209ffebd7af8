//! Equivalent representations of Motzkin objects and the bijections
//! between them.
//!
//! * [`MotzkinWord`]: words over `c ( )` from the grammar
//!   `M = ε | c M | ( M ) M`. The canonical serialization: two trees are
//!   equal exactly when their words are.
//! * [`MotzkinTree`]: unary-binary plane trees, size counted in edges.
//! * [`MotzkinPath`]: lattice paths over `U D S` that never dip below zero.
//! * [`ChordDiagram`]: non-crossing chords between points on a circle.
//!
//! Every conversion is iterative, so trees of depth 10^6 are fine.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Open,
    Close,
    C,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::Open => '(',
            Symbol::Close => ')',
            Symbol::C => 'c',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '(' => Some(Symbol::Open),
            ')' => Some(Symbol::Close),
            'c' => Some(Symbol::C),
            _ => None,
        }
    }
}

/// Why a symbol sequence is not a Motzkin word. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("position {position}: {found:?} is not one of 'c', '(', ')'")]
    BadSymbol { position: usize, found: char },
    #[error("position {position}: ')' closes nothing")]
    PrematureClose { position: usize },
    #[error("end of word: {open} parenthesis(es) left open")]
    Unbalanced { open: usize },
}

/// Checks the prefix condition and final balance.
pub fn validate_symbols(symbols: &[Symbol]) -> Result<(), WordError> {
    let mut depth = 0usize;
    for (i, s) in symbols.iter().enumerate() {
        match s {
            Symbol::Open => depth += 1,
            Symbol::Close => {
                depth = depth
                    .checked_sub(1)
                    .ok_or(WordError::PrematureClose { position: i + 1 })?
            }
            Symbol::C => {}
        }
    }
    match depth {
        0 => Ok(()),
        open => Err(WordError::Unbalanced { open }),
    }
}

/// Validates textual input, reporting the first violation.
pub fn validate_word(text: &str) -> Result<(), WordError> {
    text.parse::<MotzkinWord>().map(|_| ())
}

/// A well-parenthesized word with constant `c`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MotzkinWord(Vec<Symbol>);

impl MotzkinWord {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, WordError> {
        validate_symbols(&symbols)?;
        Ok(MotzkinWord(symbols))
    }

    pub(crate) fn from_valid(symbols: Vec<Symbol>) -> Self {
        debug_assert!(validate_symbols(&symbols).is_ok());
        MotzkinWord(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for MotzkinWord {
    type Err = WordError;

    fn from_str(text: &str) -> Result<Self, WordError> {
        let symbols = text
            .chars()
            .enumerate()
            .map(|(i, ch)| {
                Symbol::from_char(ch).ok_or(WordError::BadSymbol {
                    position: i + 1,
                    found: ch,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        MotzkinWord::new(symbols)
    }
}

impl fmt::Display for MotzkinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|s| s.as_char()).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for MotzkinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MotzkinWord({:?})", self.to_string())
    }
}

/// A unary-binary plane tree.
///
/// Drop, clone, equality and formatting are iterative; deep unary chains
/// do not touch the call stack.
pub enum MotzkinTree {
    Leaf,
    Unary(Box<MotzkinTree>),
    Binary(Box<MotzkinTree>, Box<MotzkinTree>),
}

impl MotzkinTree {
    pub fn unary(child: MotzkinTree) -> Self {
        MotzkinTree::Unary(Box::new(child))
    }

    pub fn binary(left: MotzkinTree, right: MotzkinTree) -> Self {
        MotzkinTree::Binary(Box::new(left), Box::new(right))
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        let mut edges = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                MotzkinTree::Leaf => {}
                MotzkinTree::Unary(c) => {
                    edges += 1;
                    stack.push(c);
                }
                MotzkinTree::Binary(l, r) => {
                    edges += 2;
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        edges
    }

    pub fn to_word(&self) -> MotzkinWord {
        tree_to_word(self)
    }
}

enum Emit<'a> {
    Node(&'a MotzkinTree),
    Close,
}

/// `f⁻¹`: `• ↦ ε`, `unary(t) ↦ c f⁻¹(t)`, `binary(l, r) ↦ ( f⁻¹(l) ) f⁻¹(r)`.
pub fn tree_to_word(tree: &MotzkinTree) -> MotzkinWord {
    let mut out = Vec::new();
    let mut stack = vec![Emit::Node(tree)];
    while let Some(item) = stack.pop() {
        match item {
            Emit::Close => out.push(Symbol::Close),
            Emit::Node(MotzkinTree::Leaf) => {}
            Emit::Node(MotzkinTree::Unary(c)) => {
                out.push(Symbol::C);
                stack.push(Emit::Node(c));
            }
            Emit::Node(MotzkinTree::Binary(l, r)) => {
                out.push(Symbol::Open);
                stack.push(Emit::Node(r));
                stack.push(Emit::Close);
                stack.push(Emit::Node(l));
            }
        }
    }
    MotzkinWord::from_valid(out)
}

/// `f`: `ε ↦ •`, `c w ↦ unary(f(w))`, `( w1 ) w2 ↦ binary(f(w1), f(w2))`.
///
/// Reads the word right to left keeping the trees of pending suffixes on
/// a stack.
pub fn word_to_tree(word: &MotzkinWord) -> MotzkinTree {
    let mut stack = vec![MotzkinTree::Leaf];
    for s in word.symbols().iter().rev() {
        match s {
            Symbol::C => {
                let t = stack.pop().expect("valid word keeps a suffix tree");
                stack.push(MotzkinTree::unary(t));
            }
            Symbol::Close => stack.push(MotzkinTree::Leaf),
            Symbol::Open => {
                let inner = stack.pop().expect("valid word keeps an inner tree");
                let rest = stack.pop().expect("valid word keeps a suffix tree");
                stack.push(MotzkinTree::binary(inner, rest));
            }
        }
    }
    debug_assert_eq!(stack.len(), 1);
    stack.pop().expect("one tree remains")
}

/// Parses a textual word and decodes it, reporting the first violation.
pub fn parse_tree(text: &str) -> Result<MotzkinTree, WordError> {
    Ok(word_to_tree(&text.parse()?))
}

impl Drop for MotzkinTree {
    fn drop(&mut self) {
        let mut pending = Vec::new();
        detach_children(self, &mut pending);
        while let Some(mut node) = pending.pop() {
            detach_children(&mut node, &mut pending);
        }
    }
}

fn detach_children(node: &mut MotzkinTree, out: &mut Vec<MotzkinTree>) {
    match node {
        MotzkinTree::Leaf => {}
        MotzkinTree::Unary(c) => out.push(std::mem::replace(&mut **c, MotzkinTree::Leaf)),
        MotzkinTree::Binary(l, r) => {
            out.push(std::mem::replace(&mut **l, MotzkinTree::Leaf));
            out.push(std::mem::replace(&mut **r, MotzkinTree::Leaf));
        }
    }
}

impl Clone for MotzkinTree {
    fn clone(&self) -> Self {
        word_to_tree(&self.to_word())
    }
}

impl PartialEq for MotzkinTree {
    fn eq(&self, other: &Self) -> bool {
        let mut stack = vec![(self, other)];
        while let Some(pair) = stack.pop() {
            match pair {
                (MotzkinTree::Leaf, MotzkinTree::Leaf) => {}
                (MotzkinTree::Unary(a), MotzkinTree::Unary(b)) => stack.push((a, b)),
                (MotzkinTree::Binary(al, ar), MotzkinTree::Binary(bl, br)) => {
                    stack.push((ar, br));
                    stack.push((al, bl));
                }
                _ => return false,
            }
        }
        true
    }
}

impl Eq for MotzkinTree {}

impl fmt::Debug for MotzkinTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MotzkinTree({:?})", self.to_word().to_string())
    }
}

/// Graphviz rendering: one line per node, then one line per edge.
/// Nodes are numbered in preorder; leaves are drawn as points.
pub fn tree_to_dot(tree: &MotzkinTree) -> String {
    let mut nodes = String::new();
    let mut edges = String::new();
    let mut next_id = 0usize;
    let mut stack: Vec<(&MotzkinTree, Option<usize>)> = vec![(tree, None)];
    while let Some((t, parent)) = stack.pop() {
        let id = next_id;
        next_id += 1;
        let shape = match t {
            MotzkinTree::Leaf => "point",
            _ => "circle",
        };
        nodes.push_str(&format!("  n{id} [shape={shape}];\n"));
        if let Some(p) = parent {
            edges.push_str(&format!("  n{p} -> n{id};\n"));
        }
        match t {
            MotzkinTree::Leaf => {}
            MotzkinTree::Unary(c) => stack.push((c, Some(id))),
            MotzkinTree::Binary(l, r) => {
                stack.push((r, Some(id)));
                stack.push((l, Some(id)));
            }
        }
    }
    format!("digraph motzkin {{\n  node [label=\"\"];\n{nodes}{edges}}}\n")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    Up,
    Down,
    Straight,
}

impl Step {
    pub fn as_char(self) -> char {
        match self {
            Step::Up => 'U',
            Step::Down => 'D',
            Step::Straight => 'S',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("step {position}: {found:?} is not one of 'U', 'D', 'S'")]
    BadStep { position: usize, found: char },
    #[error("step {position} goes below height zero")]
    BelowAxis { position: usize },
    #[error("path ends at height {height}, not zero")]
    DoesNotReturn { height: usize },
}

/// A Motzkin path: never below the axis, ends on it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MotzkinPath(Vec<Step>);

impl MotzkinPath {
    pub fn new(steps: Vec<Step>) -> Result<Self, PathError> {
        let mut height = 0usize;
        for (i, s) in steps.iter().enumerate() {
            match s {
                Step::Up => height += 1,
                Step::Down => {
                    height = height
                        .checked_sub(1)
                        .ok_or(PathError::BelowAxis { position: i + 1 })?
                }
                Step::Straight => {}
            }
        }
        if height != 0 {
            return Err(PathError::DoesNotReturn { height });
        }
        Ok(MotzkinPath(steps))
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }
}

impl FromStr for MotzkinPath {
    type Err = PathError;

    fn from_str(text: &str) -> Result<Self, PathError> {
        let steps = text
            .chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                'U' => Ok(Step::Up),
                'D' => Ok(Step::Down),
                'S' => Ok(Step::Straight),
                found => Err(PathError::BadStep {
                    position: i + 1,
                    found,
                }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        MotzkinPath::new(steps)
    }
}

impl fmt::Display for MotzkinPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|s| s.as_char()).collect();
        f.write_str(&s)
    }
}

/// `(` ↦ up, `)` ↦ down, `c` ↦ straight.
pub fn word_to_path(word: &MotzkinWord) -> MotzkinPath {
    MotzkinPath(
        word.symbols()
            .iter()
            .map(|s| match s {
                Symbol::Open => Step::Up,
                Symbol::Close => Step::Down,
                Symbol::C => Step::Straight,
            })
            .collect(),
    )
}

pub fn path_to_word(path: &MotzkinPath) -> MotzkinWord {
    MotzkinWord::from_valid(
        path.steps()
            .iter()
            .map(|s| match s {
                Step::Up => Symbol::Open,
                Step::Down => Symbol::Close,
                Step::Straight => Symbol::C,
            })
            .collect(),
    )
}

/// Largest point count accepted by [`ChordDiagram::from_str`].
pub const MAX_PARSED_POINTS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChordError {
    #[error("chord {i}-{j} is not an ordered pair of points in 1..={n_points}")]
    BadEndpoints { i: usize, j: usize, n_points: usize },
    #[error("point {0} is the endpoint of two chords")]
    SharedEndpoint(usize),
    #[error("chord {0}-{1} crosses chord {2}-{3}")]
    Crossing(usize, usize, usize, usize),
    #[error("token {token}: {reason}")]
    Syntax { token: usize, reason: &'static str },
}

/// Non-crossing chords between `n_points` points numbered
/// counterclockwise from 1. Chords are stored as `(i, j)`, `i < j`,
/// sorted by `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChordDiagram {
    n_points: usize,
    chords: Vec<(usize, usize)>,
}

impl ChordDiagram {
    pub fn new(n_points: usize, mut chords: Vec<(usize, usize)>) -> Result<Self, ChordError> {
        let mut role = vec![Symbol::C; n_points];
        for &(i, j) in &chords {
            if !(1 <= i && i < j && j <= n_points) {
                return Err(ChordError::BadEndpoints { i, j, n_points });
            }
            for p in [i, j] {
                if role[p - 1] != Symbol::C {
                    return Err(ChordError::SharedEndpoint(p));
                }
            }
            role[i - 1] = Symbol::Open;
            role[j - 1] = Symbol::Close;
        }
        chords.sort_unstable();
        // Non-crossing chords are exactly those that stack matching of the
        // open/close roles reproduces.
        let partner = match_parentheses(&role);
        for &(i, j) in &chords {
            if partner[i - 1] != j {
                // a chord with no crossing partner encloses a balanced
                // stretch and would have been matched
                let (a, b) = chords
                    .iter()
                    .copied()
                    .find(|&(a, b)| (i < a && a < j && j < b) || (a < i && i < b && b < j))
                    .expect("mismatched chord has a crossing partner");
                return Err(ChordError::Crossing(i, j, a, b));
            }
        }
        Ok(ChordDiagram { n_points, chords })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn chords(&self) -> &[(usize, usize)] {
        &self.chords
    }
}

/// For each opening position, the 1-based position of its match (0 if
/// the role sequence leaves it unmatched). Other entries are 0.
fn match_parentheses(role: &[Symbol]) -> Vec<usize> {
    let mut partner = vec![0usize; role.len()];
    let mut open = Vec::new();
    for (idx, r) in role.iter().enumerate() {
        match r {
            Symbol::Open => open.push(idx),
            Symbol::Close => {
                if let Some(o) = open.pop() {
                    partner[o] = idx + 1;
                }
            }
            Symbol::C => {}
        }
    }
    partner
}

/// Text form: the point count, then one `i-j` token per chord, separated
/// by single spaces. Parsing accepts any ASCII whitespace between tokens.
impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n_points)?;
        for (i, j) in &self.chords {
            write!(f, " {i}-{j}")?;
        }
        Ok(())
    }
}

impl FromStr for ChordDiagram {
    type Err = ChordError;

    fn from_str(text: &str) -> Result<Self, ChordError> {
        let mut tokens = text.split_ascii_whitespace();
        let n_points = tokens
            .next()
            .and_then(parse_decimal)
            .ok_or(ChordError::Syntax {
                token: 1,
                reason: "expected the point count",
            })?;
        if n_points > MAX_PARSED_POINTS {
            return Err(ChordError::Syntax {
                token: 1,
                reason: "point count too large",
            });
        }
        let mut chords = Vec::new();
        for (idx, token) in tokens.enumerate() {
            let pair = token
                .split_once('-')
                .and_then(|(a, b)| Some((parse_decimal(a)?, parse_decimal(b)?)))
                .ok_or(ChordError::Syntax {
                    token: idx + 2,
                    reason: "expected a chord as i-j",
                })?;
            chords.push(pair);
        }
        ChordDiagram::new(n_points, chords)
    }
}

fn parse_decimal(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Opening parentheses start chords, closing ones end them.
pub fn word_to_chords(word: &MotzkinWord) -> ChordDiagram {
    let partner = match_parentheses(word.symbols());
    let chords = partner
        .iter()
        .enumerate()
        .filter(|(_, &j)| j != 0)
        .map(|(i, &j)| (i + 1, j))
        .collect();
    ChordDiagram {
        n_points: word.len(),
        chords,
    }
}

pub fn chords_to_word(diagram: &ChordDiagram) -> MotzkinWord {
    let mut symbols = vec![Symbol::C; diagram.n_points];
    for &(i, j) in &diagram.chords {
        symbols[i - 1] = Symbol::Open;
        symbols[j - 1] = Symbol::Close;
    }
    MotzkinWord::from_valid(symbols)
}
