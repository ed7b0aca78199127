#![no_main]

use hiveflow::Partition;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(p) = text.parse::<Partition>() else { return };
    assert!(p.parts().windows(2).all(|w| w[0] >= w[1]));
    assert_eq!(p.to_string().parse::<Partition>().unwrap(), p);
    let _ = p.scaled(3);
});
