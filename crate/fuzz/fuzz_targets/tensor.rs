#![no_main]
use libfuzzer_sys::fuzz_target;
use sparse_eigsolve::io::{parse_tensor, tensor_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = parse_tensor(s) {
        let text = tensor_to_json(&t);
        let back = parse_tensor(&text).expect("written tensor must parse");
        assert_eq!(tensor_to_json(&back), text);
    }
});
