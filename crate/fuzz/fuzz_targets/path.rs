#![no_main]

use libfuzzer_sys::fuzz_target;
use motzgen::{path_to_word, word_to_path, MotzkinPath};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(path) = text.parse::<MotzkinPath>() {
        assert_eq!(path.to_string().parse::<MotzkinPath>().unwrap(), path);
        assert_eq!(word_to_path(&path_to_word(&path)), path);
    }
});
