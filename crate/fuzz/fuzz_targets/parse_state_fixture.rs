#![no_main]

use bellscope::quantum::{ppt_report, Bipartition, StateFixture};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(fixture) = bellscope::quantum::parse_state_fixture(text) else { return };
    // Accepted fixtures must be usable downstream without panicking.
    if let [l, r] = *fixture.dims() {
        if l * r <= 64 {
            let _ = ppt_report(&fixture.to_density(), Bipartition::new(l, r).unwrap());
        }
    }
    if let StateFixture::Pure(p) = &fixture {
        assert!((p.amplitudes().norm() - 1.0).abs() < 1e-6);
    }
});
