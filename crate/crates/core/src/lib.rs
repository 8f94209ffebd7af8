//! Uniform random Motzkin trees, binary trees and their encodings.
//!
//! ```
//! use motzgen::{random_motzkin, Mode, RandomStream, RatioTable};
//!
//! let table = RatioTable::build(100).unwrap();
//! let mut rng = RandomStream::new(7);
//! let tree = random_motzkin(&mut rng, 100, Mode::Fast(&table)).unwrap();
//! assert_eq!(tree.size(), 100);
//! assert_eq!(tree.to_word().len(), 100);
//! ```

pub mod codec;
mod error;
pub mod numbers;
pub mod remy;
pub mod rng;
pub mod sampler;
mod vector;
pub mod verify;

pub use codec::{
    chords_to_word, parse_tree, path_to_word, tree_to_dot, tree_to_word, validate_word,
    word_to_chords, word_to_path, word_to_tree, ChordDiagram, ChordError, MotzkinPath, MotzkinTree,
    MotzkinWord, PathError, Step, Symbol, WordError,
};
pub use error::{Error, Result, VectorError};
pub use numbers::{catalan, motzkin, BigCount, RatioFileError, RatioTable};
pub use remy::{random_binary_tree, remy_step, BinaryTreeVector};
pub use rng::{RandomStream, GENERATOR_ID};
pub use sampler::{
    random_motzkin, random_motzkin_tree, Case, Mode, PositionRanges, SampleHistory, SlantingVector,
};
