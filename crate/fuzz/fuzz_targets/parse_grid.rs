#![no_main]

use libfuzzer_sys::fuzz_target;
use quarklet::grid::GridSpec;

fuzz_target!(|data: &str| {
    let Ok(g) = data.parse::<GridSpec>() else {
        return;
    };
    assert_eq!(g.to_string().parse::<GridSpec>().unwrap(), g);
    let count = match g {
        GridSpec::Linear { count, .. } => count,
        GridSpec::Dyadic { count, .. } => 2 * count as usize + 1,
    };
    if count <= 1 << 16 {
        let pts = g.points();
        assert_eq!(pts.len(), count);
        assert!(pts.iter().all(|x| x.is_finite()));
        assert!(pts.windows(2).all(|w| w[0] <= w[1]));
    }
});
