#![no_main]

use hsvol_core::triangulation::{parse_triangulation, Triangulation};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(spec) = parse_triangulation(data) {
        // accepted specs must build and survive a serialization round trip
        if spec.tet_count() <= 64 {
            let t = Triangulation::build(spec.clone());
            assert!(t.is_closed());
        }
        let again = parse_triangulation(spec.to_json().as_bytes()).expect("round trip");
        assert_eq!(again, spec);
    }
});
