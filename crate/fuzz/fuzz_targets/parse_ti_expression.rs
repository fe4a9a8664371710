#![no_main]

use bellscope::correlations::ti_classical_bound;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(e) = bellscope::correlations::parse_ti_expression(text) else { return };
    if e.n <= 6 {
        let _ = ti_classical_bound(&e);
    }
});
