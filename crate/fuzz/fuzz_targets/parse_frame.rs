#![no_main]

use libfuzzer_sys::fuzz_target;
use quarklet::json::{frame, parse_frame_str};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = parse_frame_str(text) {
        // Canonical re-encoding must decode to the same frame.
        let canonical = serde_json::to_string(&frame(&f)).unwrap();
        assert_eq!(parse_frame_str(&canonical).unwrap(), f);
    }
});
