#![no_main]

use libfuzzer_sys::fuzz_target;
use motzgen::{BinaryTreeVector, SlantingVector};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(v) = text.parse::<SlantingVector>() {
        assert_eq!(v.to_string().parse::<SlantingVector>().unwrap(), v.clone());
        let tree = v.to_motzkin_tree();
        assert_eq!(tree.size(), v.size());
        assert_eq!(
            SlantingVector::from_motzkin_tree(&tree).to_word(),
            v.to_word()
        );
    }
    if let Ok(t) = text.parse::<BinaryTreeVector>() {
        assert_eq!(
            t.to_string().parse::<BinaryTreeVector>().unwrap(),
            t.clone()
        );
        assert_eq!(t.to_dyck_word().len(), 2 * (t.leaves() - 1));
    }
});
