//! Replays the checked-in `config_json` fuzz seeds through the config
//! parser: each valid seed parses as the config its name says, and the
//! unknown-field seed is rejected as a config error.

use std::path::PathBuf;

use dynsamp_cli::config::{self, *};
use dynsamp_cli::CliError;

fn seed(name: &str) -> Vec<u8> {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/config_json").join(name);
    std::fs::read(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn seed_count() -> usize {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/config_json");
    std::fs::read_dir(dir).unwrap().count()
}

#[test]
fn valid_seeds_parse_as_their_config() {
    config::parse::<EvolveConfig>(&seed("evolve.json")).unwrap();
    config::parse::<SampleConfig>(&seed("sample.json")).unwrap();
    config::parse::<ReconstructConfig>(&seed("reconstruct.json")).unwrap();
    config::parse::<DiagnoseConfig>(&seed("diagnose.json")).unwrap();
    config::parse::<FrameBoundsConfig>(&seed("frame_bounds_analytic.json")).unwrap();
    config::parse::<FrameBoundsConfig>(&seed("frame_bounds_empirical.json")).unwrap();
    config::parse::<DensityConfig>(&seed("density.json")).unwrap();
    config::parse::<NoiseSweepConfig>(&seed("noise_sweep.json")).unwrap();
    config::parse::<DecayConfig>(&seed("decay.json")).unwrap();
    assert_eq!(seed_count(), 10, "every seed is covered here");
}

#[test]
fn unknown_field_seed_is_a_config_error() {
    let err = config::parse::<DiagnoseConfig>(&seed("unknown_field.json")).err().unwrap();
    assert!(matches!(err, CliError::Config(_)));
    assert!(err.message().contains("colour"), "{err}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn seeds_do_not_cross_parse() {
    assert!(config::parse::<DiagnoseConfig>(&seed("evolve.json")).is_err());
    assert!(config::parse::<EvolveConfig>(&seed("decay.json")).is_err());
}
