#![no_main]

use bellscope::symmetric::classical_bound_symmetric;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(e) = bellscope::symmetric::parse_pi_expression(text) else { return };
    if e.n <= 64 {
        let b = classical_bound_symmetric(&e).unwrap();
        assert!(b.beta_c.is_finite());
        assert_eq!(b.witness.n(), e.n);
    }
});
