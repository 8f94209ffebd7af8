#![no_main]

use libfuzzer_sys::fuzz_target;
use motzgen::{chords_to_word, word_to_chords, ChordDiagram};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(diagram) = text.parse::<ChordDiagram>() {
        assert_eq!(
            diagram.to_string().parse::<ChordDiagram>().unwrap(),
            diagram
        );
        assert_eq!(word_to_chords(&chords_to_word(&diagram)), diagram);
    }
});
