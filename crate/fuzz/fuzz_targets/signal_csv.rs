#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(signal) = dynsamp::io::read_signal_csv(text) {
            let again = dynsamp::io::read_signal_csv(&dynsamp::io::write_signal_csv(&signal)).expect("round trip");
            assert_eq!(again.start(), signal.start());
            assert_eq!(again.len(), signal.len());
        }
    }
});
