#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(kernel) = dynsamp::io::read_kernel_csv(text) {
            // A parsed kernel must survive its own writer.
            let again = dynsamp::io::read_kernel_csv(&dynsamp::io::write_kernel_csv(&kernel)).expect("round trip");
            assert_eq!(again, kernel);
        }
    }
});
