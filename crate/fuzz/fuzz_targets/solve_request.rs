#![no_main]
use libfuzzer_sys::fuzz_target;
use sparse_eigsolve::io::SolveRequest;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(req) = SolveRequest::from_json(s) else {
        return;
    };
    if req.validate().is_err() {
        return;
    }
    let _ = req.equations();
    let _ = req.aux();
    if let Ok(c) = req.canonical() {
        let again = SolveRequest::from_json(&c.to_json()).expect("canonical form must parse");
        assert_eq!(again.canonical().unwrap().to_json(), c.to_json());
    }
});
