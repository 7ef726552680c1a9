//! Fixture files and helpers shared by the CLI test targets.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const AVERAGING: &str = "offset,re,im\n0,0.5,0\n1,0.5,0\n";
pub const INTERLEAVED: &str = "offset,re,im\n-2,0.25,0\n0,0.5,0\n2,0.25,0\n";
pub const RAISED_COSINE: &str = "offset,re,im\n-1,0.125,0\n0,0.75,0\n1,0.125,0\n";
pub const DECAY_KERNEL: &str = "offset,re,im\n0,0.01,0\n1,1,0\n";

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_dynsamp")
}

pub fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

pub fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

/// Runs `sub` on `config` into `out`, with extra flags.
pub fn run_sub(sub: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![sub, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

/// Kernel files plus one working config per subcommand, keyed by name.
pub fn fixtures(dir: &Path) -> BTreeMap<&'static str, PathBuf> {
    write(dir, "averaging.csv", AVERAGING);
    write(dir, "interleaved.csv", INTERLEAVED);
    write(dir, "raised_cosine.csv", RAISED_COSINE);
    write(dir, "decay_kernel.csv", DECAY_KERNEL);
    let mut m = BTreeMap::new();
    m.insert(
        "evolve",
        write(dir, "evolve.json", r#"{"kernel":"averaging.csv","signal":{"random":{"seed":1,"width":16}},"steps":3}"#),
    );
    m.insert(
        "sample",
        write(
            dir,
            "sample.json",
            r#"{"kernel":"averaging.csv","signal":{"random":{"seed":2,"width":64,"complex":true}},
                "pattern":{"sublattice":{"m":2,"l":1}},"n_steps":2}"#,
        ),
    );
    m.insert(
        "diagnose",
        write(dir, "diagnose.json", r#"{"kernel":"averaging.csv","m":2,"l":1,"n_steps":2,"grid":256}"#),
    );
    m.insert(
        "frame-bounds",
        write(dir, "frame_bounds.json", r#"{"kernel":"averaging.csv","bounds":{"analytic":{"m":2,"grid":256}}}"#),
    );
    m.insert(
        "density",
        write(
            dir,
            "density.json",
            r#"{"kernel":"raised_cosine.csv","pattern":{"sublattice":{"m":3,"l":2}},"n_steps":2,"window":[0,149]}"#,
        ),
    );
    m.insert(
        "noise-sweep",
        write(
            dir,
            "noise_sweep.json",
            r#"{"kernel":"averaging.csv","signal":{"random":{"seed":3,"width":32}},"m":2,"l":1,"n_steps":2,
                "sigmas":[0,0.001,0.01],"trials":20,"seed":99,"grid":256}"#,
        ),
    );
    m.insert(
        "decay",
        write(dir, "decay.json", r#"{"kernel":"decay_kernel.csv","locations":[0],"dims":[16,32,64]}"#),
    );
    m
}

/// Writes a reconstruct config for samples produced by the `sample`
/// fixture into `sample_out`.
pub fn reconstruct_config(dir: &Path, sample_out: &Path, kernel: &str, pattern: &str, signal_window: (i64, i64)) -> PathBuf {
    let body = format!(
        r#"{{"kernel":"{kernel}","samples":"{}","pattern":{pattern},"signal_window":[{},{}],"truth":{{"file":"{}"}}}}"#,
        sample_out.join("samples.csv").display(),
        signal_window.0,
        signal_window.1,
        sample_out.join("signal.csv").display()
    );
    write(dir, &format!("reconstruct_{kernel}.json"), &body)
}

/// All files in a directory, name → bytes.
pub fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

pub fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}
