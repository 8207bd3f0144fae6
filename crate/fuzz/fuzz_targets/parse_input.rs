#![no_main]

use hsvol_core::triangulation::{parse_input, Triangulation};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let allow_boundary = data.first().is_some_and(|b| b & 1 == 1);
    if let Ok(input) = parse_input(data, allow_boundary) {
        if input.spec.tet_count() <= 64 {
            let t = Triangulation::build(input.spec);
            if let Some(theta) = input.theta {
                let _ = hsvol_core::optimizer::AngleStructure::new(&t, theta);
            }
        }
    }
});
