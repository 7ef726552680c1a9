#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(pattern) = dynsamp::io::read_pattern(text) {
            let again = dynsamp::io::read_pattern(&dynsamp::io::write_pattern(&pattern)).expect("round trip");
            assert_eq!(again, pattern);
        }
    }
});
