#![no_main]

use libfuzzer_sys::fuzz_target;
use quarklet::json::parse_rational_value;
use quarklet::rational::parse_rational;

fuzz_target!(|data: &str| {
    if let Ok(r) = parse_rational(data) {
        assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
        let v = quarklet::json::rational(&r);
        assert_eq!(parse_rational_value(&v).unwrap(), r);
    }
});
