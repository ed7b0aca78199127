#![no_main]

use hiveflow::{is_hive_flow, FlowClass, Lattice};
use libfuzzer_sys::fuzz_target;

// Anything accepted must be a conserved flow that survives a round trip.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(f) = FlowClass::from_json(text) else { return };
    let lat = Lattice::build(f.n).unwrap();
    f.validate(&lat).unwrap();
    let _ = is_hive_flow(&lat, &f);
    assert_eq!(FlowClass::from_json(&f.to_json()).unwrap(), f);
});
