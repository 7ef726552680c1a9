#![no_main]

use dynsamp_cli::config::{self, *};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = config::parse::<EvolveConfig>(data);
    let _ = config::parse::<SampleConfig>(data);
    let _ = config::parse::<ReconstructConfig>(data);
    let _ = config::parse::<DiagnoseConfig>(data);
    let _ = config::parse::<FrameBoundsConfig>(data);
    let _ = config::parse::<DensityConfig>(data);
    let _ = config::parse::<NoiseSweepConfig>(data);
    let _ = config::parse::<DecayConfig>(data);
});
