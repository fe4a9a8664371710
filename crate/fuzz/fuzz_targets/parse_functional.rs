#![no_main]

use bellscope::correlations::{local_bound_bruteforce, strategy_count};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(f) = bellscope::correlations::parse_functional(text) else { return };
    if strategy_count(f.scenario()) <= 4096 {
        let b = local_bound_bruteforce(&f).unwrap();
        assert!(b.min <= b.max);
    }
});
