//! One runner per subcommand: load and validate the config (exit 2 on
//! failure), run the operation (exit 1 on failure), write the artifacts.

use serde::Serialize;

use dynsamp::frames::{self, FrameBounds};
use dynsamp::io;
use dynsamp::reconstruct::{self, NoiseSpec, ReconstructOptions, ReconstructionStatus};
use dynsamp::sampling::{self, DensityReport};
use dynsamp::spectral::{self, Verdict};
use dynsamp::{FrequencyGrid, Signal};

use crate::config::{self, BoundsSpec, Loaded};
use crate::output::{OutDir, Provenance};
use crate::{CliError, Common};

fn op(e: dynsamp::Error) -> CliError {
    CliError::Operation(e.to_string())
}

fn grid(field: &str, m: u64) -> Result<FrequencyGrid, CliError> {
    FrequencyGrid::new(m).map_err(|e| CliError::Config(format!("{field}: {e}")))
}

fn no_grid(common: &Common, sub: &str) -> Result<(), CliError> {
    match common.grid {
        Some(_) => Err(CliError::Config(format!("--grid does not apply to `{sub}`"))),
        None => Ok(()),
    }
}

fn window(field: &str, w: [i64; 2]) -> Result<(i64, i64), CliError> {
    if w[0] > w[1] {
        return Err(CliError::Config(format!("{field}: empty window [{}, {}]", w[0], w[1])));
    }
    Ok((w[0], w[1]))
}

pub fn evolve(common: &Common) -> Result<(), CliError> {
    no_grid(common, "evolve")?;
    let cfg: Loaded<config::EvolveConfig> = config::load(&common.config)?;
    let (kernel, khash) = cfg.kernel("kernel", &cfg.config.kernel)?;
    let f = cfg.signal("signal", &cfg.config.signal)?;
    let out = OutDir::create(&common.out)?;
    let evolved = dynsamp::signal::evolve(&kernel, &f, cfg.config.steps);
    let prov = Provenance::new("evolve", &cfg.bytes, khash, &cfg.config).seed("signal", config::signal_seed(&cfg.config.signal));
    out.write("evolved.csv", &io::write_signal_csv(&evolved))?;
    out.json("provenance.json", &prov)
}

#[derive(Serialize)]
struct SamplesMeta<'a> {
    window: (i64, i64),
    signal_window: (i64, i64),
    n_steps: usize,
    n_locations: usize,
    kernel_fingerprint: &'a str,
    pattern: String,
    provenance: &'a Provenance,
}

pub fn sample(common: &Common) -> Result<(), CliError> {
    no_grid(common, "sample")?;
    let cfg: Loaded<config::SampleConfig> = config::load(&common.config)?;
    let c = &cfg.config;
    let (kernel, khash) = cfg.kernel("kernel", &c.kernel)?;
    let f = cfg.signal("signal", &c.signal)?;
    let pattern = cfg.pattern("pattern", &c.pattern)?;
    if c.n_steps == 0 {
        return Err(CliError::Config("n_steps must be >= 1".into()));
    }
    let noise = match &c.noise {
        Some(n) => Some(NoiseSpec::new(n.sigma, n.seed, n.mode).map_err(|e| CliError::Config(format!("noise: {e}")))?),
        None => None,
    };
    let win = match c.window {
        Some(w) => window("window", w)?,
        None => sampling::required_window(&kernel, &f, &pattern, c.n_steps)
            .ok_or_else(|| CliError::Operation("no pattern point can carry a sample; give an explicit window".into()))?,
    };
    let out = OutDir::create(&common.out)?;
    let mut samples = sampling::collect(&kernel, &f, &pattern, c.n_steps, win).map_err(op)?;
    if let Some(spec) = &noise {
        samples = reconstruct::add_noise(&samples, spec);
    }
    let prov = Provenance::new("sample", &cfg.bytes, khash, c)
        .seed("signal", config::signal_seed(&c.signal))
        .seed("noise", c.noise.as_ref().map(|n| n.seed));
    out.write("samples.csv", &io::write_samples_csv(&samples))?;
    out.write("signal.csv", &io::write_signal_csv(&f))?;
    out.json(
        "samples.json",
        &SamplesMeta {
            window: samples.window(),
            signal_window: samples.signal_window(),
            n_steps: samples.n_steps(),
            n_locations: samples.lambdas().len(),
            kernel_fingerprint: samples.kernel_id(),
            pattern: io::write_pattern(&pattern).lines().next().unwrap_or_default().to_string(),
            provenance: &prov,
        },
    )?;
    out.json("provenance.json", &prov)
}

#[derive(Serialize)]
struct ReconstructionReport<'a> {
    status: &'a ReconstructionStatus,
    period: u64,
    bins: u64,
    base: i64,
    sigma_min_lo: f64,
    sigma_min_hi: f64,
    max_residual: f64,
    residuals: &'a [f64],
    rel_error: Option<f64>,
    rel_error_absolute: Option<bool>,
    provenance: &'a Provenance,
}

pub fn reconstruct(common: &Common, allow_partial: bool) -> Result<(), CliError> {
    no_grid(common, "reconstruct")?;
    let cfg: Loaded<config::ReconstructConfig> = config::load(&common.config)?;
    let c = &cfg.config;
    let (kernel, khash) = cfg.kernel("kernel", &c.kernel)?;
    let pattern = cfg.pattern("pattern", &c.pattern)?;
    let signal_window = window("signal_window", c.signal_window)?;
    let samples_path = cfg.resolve(&c.samples);
    let text = std::fs::read_to_string(&samples_path)
        .map_err(|e| CliError::Config(format!("samples: {}: {e}", samples_path.display())))?;
    let table = io::read_samples_csv(&text).map_err(|e| CliError::Config(format!("samples: {}: {e}", samples_path.display())))?;
    let win = match c.window {
        Some(w) => window("window", w)?,
        None => {
            let lo = table.rows.iter().map(|r| r.1).min();
            let hi = table.rows.iter().map(|r| r.1).max();
            match (lo, hi) {
                (Some(lo), Some(hi)) => (lo, hi),
                _ => return Err(CliError::Config(format!("samples: {}: no rows", samples_path.display()))),
            }
        }
    };
    let samples = table
        .into_samples(pattern, win, signal_window, "")
        .map_err(|e| CliError::Config(format!("samples: {}: {e}", samples_path.display())))?;
    let truth = match &c.truth {
        Some(spec) => Some(cfg.signal("truth", spec)?),
        None => None,
    };
    if !(c.rank_tol > 0.0 && c.rank_tol < 1.0) {
        return Err(CliError::Config("rank_tol must lie in (0, 1)".into()));
    }
    let out = OutDir::create(&common.out)?;
    let rec = reconstruct::reconstruct_with(&samples, &kernel, ReconstructOptions { rank_tol: c.rank_tol }).map_err(op)?;
    let err = truth.as_ref().map(|t| reconstruct::recon_error(t, &rec.signal));
    let prov = Provenance::new("reconstruct", &cfg.bytes, khash, c).seed("truth", c.truth.as_ref().and_then(config::signal_seed));
    out.json(
        "reconstruction.json",
        &ReconstructionReport {
            status: &rec.status,
            period: rec.model.period,
            bins: rec.model.bins,
            base: rec.model.base,
            sigma_min_lo: rec.sigma_min_range.0,
            sigma_min_hi: rec.sigma_min_range.1,
            max_residual: rec.residuals.iter().copied().fold(0.0, f64::max),
            residuals: &rec.residuals,
            rel_error: err.map(|e| e.value),
            rel_error_absolute: err.map(|e| e.absolute),
            provenance: &prov,
        },
    )?;
    out.json("provenance.json", &prov)?;
    if let ReconstructionStatus::RankDeficient { bins } = &rec.status {
        if !allow_partial {
            return Err(CliError::Operation(format!(
                "{} of {} bins are rank deficient; rerun with --allow-partial to keep the minimum-norm solution",
                bins.len(),
                rec.model.bins
            )));
        }
    }
    out.write("reconstructed.csv", &io::write_signal_csv(&rec.signal))
}

#[derive(Serialize)]
struct VerdictFile<'a> {
    #[serde(flatten)]
    verdict: &'a Verdict,
    provenance: &'a Provenance,
}

pub fn diagnose(common: &Common) -> Result<(), CliError> {
    let mut cfg: Loaded<config::DiagnoseConfig> = config::load(&common.config)?;
    if let Some(m) = common.grid {
        cfg.config.grid = m;
    }
    let c = &cfg.config;
    let (kernel, khash) = cfg.kernel("kernel", &c.kernel)?;
    let g = grid("grid", c.grid)?;
    if c.m == 0 || c.l == 0 || c.l > c.m {
        return Err(CliError::Config(format!("need 1 <= l <= m, got m = {}, l = {}", c.m, c.l)));
    }
    if c.n_steps == 0 {
        return Err(CliError::Config("n_steps must be >= 1".into()));
    }
    let out = OutDir::create(&common.out)?;
    let rows = spectral::diagnose(&kernel, c.m, c.l, c.n_steps, &g).map_err(op)?;
    let verdict = spectral::completeness_check(&kernel, c.m, c.l, c.n_steps, &g, c.rank_tol).map_err(op)?;
    let prov = Provenance::new("diagnose", &cfg.bytes, khash, c);
    out.write("diagnostics.csv", &io::write_diagnostics_csv(&rows))?;
    out.json(
        "verdict.json",
        &VerdictFile {
            verdict: &verdict,
            provenance: &prov,
        },
    )?;
    out.json("provenance.json", &prov)
}

#[derive(Serialize)]
struct BoundsFile<'a> {
    #[serde(flatten)]
    bounds: &'a FrameBounds,
    provenance: &'a Provenance,
}

pub fn frame_bounds(common: &Common) -> Result<(), CliError> {
    let mut cfg: Loaded<config::FrameBoundsConfig> = config::load(&common.config)?;
    match (&mut cfg.config.bounds, common.grid) {
        (BoundsSpec::Analytic { grid, .. }, Some(m)) => *grid = m,
        (BoundsSpec::Empirical { .. }, Some(_)) => {
            return Err(CliError::Config("--grid does not apply to empirical frame bounds".into()))
        }
        _ => {}
    }
    let (kernel, khash) = cfg.kernel("kernel", &cfg.config.kernel)?;
    let fb = match &cfg.config.bounds {
        BoundsSpec::Analytic { m, grid: gm } => {
            let g = grid("bounds.analytic.grid", *gm)?;
            if *m == 0 {
                return Err(CliError::Config("bounds.analytic.m must be >= 1".into()));
            }
            frames::analytic_frame_bounds(&kernel, *m, &g).map_err(op)?
        }
        BoundsSpec::Empirical {
            pattern,
            n_steps,
            window: w,
            interior_margin,
        } => {
            let p = cfg.pattern("bounds.empirical.pattern", pattern)?;
            let w = window("bounds.empirical.window", *w)?;
            if *n_steps == 0 {
                return Err(CliError::Config("bounds.empirical.n_steps must be >= 1".into()));
            }
            frames::empirical_frame_bounds(&kernel, &p, *n_steps, w, *interior_margin).map_err(op)?
        }
    };
    let out = OutDir::create(&common.out)?;
    let prov = Provenance::new("frame-bounds", &cfg.bytes, khash, &cfg.config);
    out.json(
        "frame_bounds.json",
        &BoundsFile {
            bounds: &fb,
            provenance: &prov,
        },
    )?;
    out.json("provenance.json", &prov)
}

#[derive(Serialize)]
struct CertificateFile<'a> {
    nu: f64,
    mu: f64,
    kappa: f64,
    #[serde(rename = "N")]
    n: u32,
    c_a: f64,
    #[serde(rename = "C_a")]
    big_c_a: f64,
    c_min: f64,
    c_max: f64,
    method: frames::FrameMethod,
    lower: f64,
    upper: f64,
    grid: u64,
    window: (i64, i64),
    columns: Option<(i64, i64)>,
    provenance: &'a Provenance,
}

#[derive(Serialize)]
struct DensityFile<'a> {
    #[serde(flatten)]
    report: &'a DensityReport,
    exact_density: Option<f64>,
    provenance: &'a Provenance,
}

pub fn density(common: &Common) -> Result<(), CliError> {
    let mut cfg: Loaded<config::DensityConfig> = config::load(&common.config)?;
    if let Some(m) = common.grid {
        cfg.config.grid = m;
    }
    let c = &cfg.config;
    let (kernel, khash) = cfg.kernel("kernel", &c.kernel)?;
    let pattern = cfg.pattern("pattern", &c.pattern)?;
    let g = grid("grid", c.grid)?;
    let w = window("window", c.window)?;
    if c.n_steps == 0 {
        return Err(CliError::Config("n_steps must be >= 1".into()));
    }
    if c.l_values.is_empty() || c.l_values.contains(&0) {
        return Err(CliError::Config("l_values must be a nonempty list of positive integers".into()));
    }
    let out = OutDir::create(&common.out)?;
    let prov = Provenance::new("density", &cfg.bytes, khash, c);
    let report = sampling::banach_density(&pattern, &c.l_values).map_err(op)?;
    out.write("density.csv", &io::write_density_csv(&report))?;
    out.json(
        "density.json",
        &DensityFile {
            report: &report,
            exact_density: pattern.exact_density(),
            provenance: &prov,
        },
    )?;
    out.json("provenance.json", &prov)?;
    let env = frames::regularity(&kernel, &g).map_err(op)?;
    let lc = frames::lemma_constants(&env, c.n_steps).map_err(op)?;
    let fb = frames::empirical_frame_bounds(&kernel, &pattern, c.n_steps, w, c.interior_margin).map_err(op)?;
    let cert = frames::density_certificate(&lc, &fb).map_err(op)?;
    out.json(
        "certificate.json",
        &CertificateFile {
            nu: env.nu,
            mu: env.mu,
            kappa: env.kappa,
            n: c.n_steps,
            c_a: cert.c_a,
            big_c_a: cert.big_c_a,
            c_min: cert.c_min,
            c_max: cert.c_max,
            method: fb.method,
            lower: cert.lower,
            upper: cert.upper,
            grid: c.grid,
            window: w,
            columns: fb.columns,
            provenance: &prov,
        },
    )
}

pub fn noise_sweep(common: &Common) -> Result<(), CliError> {
    let mut cfg: Loaded<config::NoiseSweepConfig> = config::load(&common.config)?;
    if let Some(m) = common.grid {
        cfg.config.grid = m;
    }
    let c = &cfg.config;
    let (kernel, khash) = cfg.kernel("kernel", &c.kernel)?;
    let f: Signal = cfg.signal("signal", &c.signal)?;
    let g = grid("grid", c.grid)?;
    if c.trials == 0 {
        return Err(CliError::Config("trials must be >= 1".into()));
    }
    if let Some(bad) = c.sigmas.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
        return Err(CliError::Config(format!("sigmas: {bad} is not a finite value >= 0")));
    }
    if c.m == 0 || c.l == 0 || c.l > c.m {
        return Err(CliError::Config(format!("need 1 <= l <= m, got m = {}, l = {}", c.m, c.l)));
    }
    let out = OutDir::create(&common.out)?;
    let sweep = reconstruct::NoiseSweepConfig {
        m: c.m,
        l: c.l,
        n_steps: c.n_steps,
        sigmas: c.sigmas.clone(),
        trials: c.trials,
        seed: c.seed,
        mode: c.mode,
        grid: g,
    };
    let rows = reconstruct::noise_sweep(&kernel, &f, &sweep).map_err(op)?;
    let prov = Provenance::new("noise-sweep", &cfg.bytes, khash, c)
        .seed("signal", config::signal_seed(&c.signal))
        .seed("noise", Some(c.seed));
    out.write("noise_sweep.csv", &io::write_noise_sweep_csv(&rows))?;
    out.json("provenance.json", &prov)
}

#[derive(Serialize)]
struct DecayFile<'a> {
    strictly_decreasing: bool,
    non_increasing: bool,
    ratio: f64,
    log_slope: f64,
    provenance: &'a Provenance,
}

pub fn decay(common: &Common) -> Result<(), CliError> {
    no_grid(common, "decay")?;
    let cfg: Loaded<config::DecayConfig> = config::load(&common.config)?;
    let c = &cfg.config;
    let (kernel, khash) = cfg.kernel("kernel", &c.kernel)?;
    if c.locations.is_empty() {
        return Err(CliError::Config("locations must be nonempty".into()));
    }
    if c.dims.is_empty() || c.dims[0] == 0 || c.dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config("dims must be positive and strictly increasing".into()));
    }
    if c.n_rule == frames::NRule::Fixed(0) {
        return Err(CliError::Config("n_rule.fixed must be >= 1".into()));
    }
    let out = OutDir::create(&common.out)?;
    let curve = frames::finite_set_decay(&kernel, &c.locations, &c.dims, c.n_rule, c.anchor).map_err(op)?;
    let prov = Provenance::new("decay", &cfg.bytes, khash, c);
    out.write("decay.csv", &io::write_decay_csv(&curve.points))?;
    out.json(
        "decay.json",
        &DecayFile {
            strictly_decreasing: curve.strictly_decreasing,
            non_increasing: curve.non_increasing,
            ratio: curve.ratio,
            log_slope: curve.log_slope,
            provenance: &prov,
        },
    )?;
    out.json("provenance.json", &prov)
}
