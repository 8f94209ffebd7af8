#![no_main]

use libfuzzer_sys::fuzz_target;
use motzgen::{parse_tree, word_to_tree, MotzkinWord, SlantingVector};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(word) = text.parse::<MotzkinWord>() else {
        assert!(parse_tree(text).is_err());
        return;
    };
    assert_eq!(word.to_string().parse::<MotzkinWord>().unwrap(), word);
    let tree = word_to_tree(&word);
    assert_eq!(tree.to_word(), word);
    assert_eq!(SlantingVector::from_motzkin_tree(&tree).to_word(), word);
});
