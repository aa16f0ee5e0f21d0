#![no_main]
use libfuzzer_sys::fuzz_target;
use sparse_eigsolve::io::parse_supports;
use sparse_eigsolve::lattice::convex_hull;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(supports) = parse_supports(s) else {
        return;
    };
    // Hull arithmetic is exact; keep coordinates where products fit.
    let small = supports.iter().flatten().all(|p| p.coords().iter().all(|c| c.abs() <= 1 << 12));
    if small && supports.len() <= 4 {
        for pts in &supports {
            let _ = convex_hull(pts);
        }
    }
});
