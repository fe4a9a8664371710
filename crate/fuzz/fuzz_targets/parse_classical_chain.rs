#![no_main]

use bellscope::chains::classical_gibbs_mutual_info;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(c) = bellscope::chains::parse_classical_chain(text) else { return };
    if c.validate().is_ok_and(|configs| configs <= 4096) {
        let _ = classical_gibbs_mutual_info(&c, 1.0, 1);
    }
});
