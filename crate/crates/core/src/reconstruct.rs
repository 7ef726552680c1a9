//! Recovery of the initial signal from sub-lattice space-time samples.
//!
//! The samples are embedded in a periodic model of period `P = mM` large
//! enough that no evolved state wraps onto itself. In that model the
//! sampling identity of [`crate::spectral`] is exact, so each of the `M`
//! DFT bins gives an independent `NL × m` system for the aliased
//! coefficients `F(k + rM)`, `r = 0, …, m-1`. Solving all bins and inverting
//! one length-`P` FFT recovers `f`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg;
use crate::sampling::{collect, required_window, SamplingPattern, SpaceTimeSamples};
use crate::signal::{cis_turns, Frequency, FrequencyGrid, Kernel, Signal};
use crate::spectral::{self, StackedSystem, DEFAULT_RANK_TOL};

/// Name of the pseudo-random generator used for noise, as recorded in
/// provenance blocks.
pub const NOISE_RNG: &str = "ChaCha20 (rand_chacha), one stream per time step";

/// Smallest `n' >= n` whose only prime factors are 2, 3 and 5.
fn next_smooth(n: u64) -> u64 {
    let mut k = n.max(1);
    loop {
        let mut r = k;
        for p in [2, 3, 5] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return k;
        }
        k += 1;
    }
}

/// The periodic embedding: indices `base, …, base + P - 1` with `P = mM`
/// and `base` a multiple of `m`, so offset `c` of the pattern is the
/// residue class `c` of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicModel {
    pub m: u64,
    pub bins: u64,
    pub period: u64,
    pub base: i64,
}

impl PeriodicModel {
    /// Model for a signal on `signal_window` (inclusive) evolved `N - 1`
    /// times. `P` is the smallest multiple of `m` covering the signal window
    /// plus `(N-1)·radius` on each side, with `M` rounded up to a 5-smooth
    /// transform length.
    pub fn new(kernel: &Kernel, signal_window: (i64, i64), m: u64, n_steps: u32) -> Result<Self> {
        if m == 0 || n_steps == 0 || signal_window.0 > signal_window.1 {
            return Err(Error::InvalidArgument("periodic model needs m >= 1, N >= 1 and a nonempty window".into()));
        }
        let spread = (n_steps as i64 - 1) * kernel.radius() as i64;
        let lo = signal_window.0 - spread;
        let hi = signal_window.1 + spread;
        let base = lo.div_euclid(m as i64) * m as i64;
        let need = (hi - base + 1) as u64;
        let bins = next_smooth(need.div_ceil(m));
        Ok(PeriodicModel {
            m,
            bins,
            period: m * bins,
            base,
        })
    }

    /// Index range of the model, `[base, base + P)`.
    pub fn range(&self) -> std::ops::Range<i64> {
        self.base..self.base + self.period as i64
    }

    /// Extent of the support that evolved states can reach.
    fn reach(kernel: &Kernel, signal_window: (i64, i64), n_steps: usize) -> (i64, i64) {
        let spread = n_steps as i64 - 1;
        (
            signal_window.0 + (spread * kernel.lo()).min(0),
            signal_window.1 + (spread * kernel.hi()).max(0),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReconstructionStatus {
    /// Square, well-conditioned systems at every bin.
    Exact,
    /// Overdetermined, well-conditioned systems; minimum-residual solutions.
    LeastSquares,
    /// The listed bins fell below the rank threshold; minimum-norm
    /// solutions were used there.
    RankDeficient { bins: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionResult {
    /// The recovered signal on the signal window of the samples.
    pub signal: Signal,
    /// The full recovered period, starting at `model.base`.
    pub periodic: Vec<Complex64>,
    pub model: PeriodicModel,
    /// Per-bin residual norms, in the units of the samples: the squares sum
    /// to the squared least-squares misfit of the whole sample set.
    pub residuals: Vec<f64>,
    /// Smallest and largest per-bin `σ_min`.
    pub sigma_min_range: (f64, f64),
    pub status: ReconstructionStatus,
}

impl ReconstructionResult {
    pub fn is_rank_deficient(&self) -> bool {
        matches!(self.status, ReconstructionStatus::RankDeficient { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReconstructOptions {
    /// Singular values at or below `rank_tol · σ_max` count as zero.
    pub rank_tol: f64,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions {
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

pub fn reconstruct(samples: &SpaceTimeSamples, kernel: &Kernel) -> Result<ReconstructionResult> {
    reconstruct_with(samples, kernel, ReconstructOptions::default())
}

/// Checks that the samples suit the periodic model and returns the model
/// and the pattern's offsets.
fn prepare(samples: &SpaceTimeSamples, kernel: &Kernel) -> Result<(PeriodicModel, Vec<u64>)> {
    let (m, offsets) = samples
        .pattern()
        .as_periodic()
        .ok_or_else(|| Error::InvalidPattern("reconstruction needs a periodic pattern".into()))?;
    let n_steps = samples.n_steps();
    if (n_steps * offsets.len()) < m as usize {
        return Err(Error::Dimension(format!(
            "NL = {} < m = {m}",
            n_steps * offsets.len()
        )));
    }
    if !samples.kernel_id().is_empty() && samples.kernel_id() != kernel.fingerprint() {
        return Err(Error::InvalidArgument("samples were collected with a different kernel".into()));
    }
    let model = PeriodicModel::new(kernel, samples.signal_window(), m, n_steps as u32)?;
    let (lo, hi) = PeriodicModel::reach(kernel, samples.signal_window(), n_steps);
    let pts = samples.pattern().points_in(lo, hi);
    if let (Some(&first), Some(&last)) = (pts.first(), pts.last()) {
        let (wlo, whi) = samples.window();
        if first < wlo || last > whi {
            return Err(Error::WindowCoverage {
                required: (first, last),
                given: samples.window(),
            });
        }
    }
    Ok((model, offsets.to_vec()))
}

/// Value of sample `(s, λ)`, zero for pattern points outside the window
/// (those are known to vanish once [`prepare`] has checked coverage).
fn sample_at(samples: &SpaceTimeSamples, s: usize, lambda: i64) -> Complex64 {
    match samples.lambdas().binary_search(&lambda) {
        Ok(i) => samples.values()[s][i],
        Err(_) => Complex64::default(),
    }
}

pub fn reconstruct_with(samples: &SpaceTimeSamples, kernel: &Kernel, opts: ReconstructOptions) -> Result<ReconstructionResult> {
    let (model, offsets) = prepare(samples, kernel)?;
    let n_steps = samples.n_steps();
    let (m, bins, period) = (model.m as usize, model.bins as usize, model.period as usize);

    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(bins);
    // spectra[(b, s)][k] = m · e^{-i2πck/P} · Y_{c,s}(k)
    let spectra: Vec<Vec<Complex64>> = offsets
        .iter()
        .flat_map(|&c| (0..n_steps).map(move |s| (c, s)))
        .map(|(c, s)| {
            let mut row: Vec<Complex64> = (0..bins)
                .map(|j| sample_at(samples, s, model.base + (m * j) as i64 + c as i64))
                .collect();
            fft.process(&mut row);
            for (k, v) in row.iter_mut().enumerate() {
                let turns = ((c as usize * k) % period) as f64 / period as f64;
                *v *= cis_turns(turns) * m as f64;
            }
            row
        })
        .collect();

    let scale = 1.0 / (m as f64 * (bins as f64).sqrt());
    let solved: Vec<(Vec<Complex64>, f64, f64, bool)> = (0..bins)
        .into_par_iter()
        .map(|k| {
            let nv = spectral::nodes(kernel, model.m, Frequency::ratio(k as i64, model.bins)).expect("m >= 1");
            let sys = StackedSystem::from_nodes(&nv, &offsets, n_steps as u32);
            let rhs = DVector::from_iterator(spectra.len(), spectra.iter().map(|row| row[k]));
            let ls = linalg::min_norm_solve(sys.matrix(), &rhs, opts.rank_tol);
            (ls.solution.iter().copied().collect(), ls.residual * scale, ls.sigma_min, ls.rank_deficient)
        })
        .collect();

    let mut spectrum = vec![Complex64::default(); period];
    let mut residuals = Vec::with_capacity(bins);
    let mut deficient = Vec::new();
    let mut sigma_range = (f64::INFINITY, 0.0f64);
    for (k, (sol, res, smin, bad)) in solved.into_iter().enumerate() {
        for (r, v) in sol.into_iter().enumerate() {
            spectrum[k + r * bins] = v;
        }
        residuals.push(res);
        sigma_range = (sigma_range.0.min(smin), sigma_range.1.max(smin));
        if bad {
            deficient.push(k as u64);
        }
    }
    planner.plan_fft_inverse(period).process(&mut spectrum);
    let periodic: Vec<Complex64> = spectrum.into_iter().map(|v| v / period as f64).collect();

    let (fs, fe) = samples.signal_window();
    let off = (fs - model.base) as usize;
    let signal = Signal::new(fs, periodic[off..off + (fe - fs + 1) as usize].to_vec());
    let status = if !deficient.is_empty() {
        ReconstructionStatus::RankDeficient { bins: deficient }
    } else if n_steps * offsets.len() == m {
        ReconstructionStatus::Exact
    } else {
        ReconstructionStatus::LeastSquares
    };
    Ok(ReconstructionResult {
        signal,
        periodic,
        model,
        residuals,
        sigma_min_range: sigma_range,
        status,
    })
}

/// Reference solver: minimum-norm least squares on the periodic model in
/// the time domain. Rows are indexed by `(s, λ)`, columns by the model
/// indices `n`, with entries `a^{(s)}(λ - n)` periodized modulo `P`.
/// Cost is cubic in `P`; meant for cross-checks on small models.
pub fn reconstruct_time_domain(samples: &SpaceTimeSamples, kernel: &Kernel, rank_tol: f64) -> Result<Signal> {
    let (model, _) = prepare(samples, kernel)?;
    let period = model.period as i64;
    let rows_per_step = samples.pattern().points_in(model.base, model.base + period - 1);
    let n_steps = samples.n_steps();
    let mut a = DMatrix::zeros(n_steps * rows_per_step.len(), period as usize);
    let mut b = DVector::zeros(n_steps * rows_per_step.len());
    for s in 0..n_steps {
        let power = kernel.power(s as u32);
        let mut folded = vec![Complex64::default(); period as usize];
        for (k, v) in power.range().zip(power.values()) {
            folded[k.rem_euclid(period) as usize] += v;
        }
        for (i, &lambda) in rows_per_step.iter().enumerate() {
            let row = s * rows_per_step.len() + i;
            b[row] = sample_at(samples, s, lambda);
            for col in 0..period {
                let n = model.base + col;
                a[(row, col as usize)] = folded[(lambda - n).rem_euclid(period) as usize];
            }
        }
    }
    let ls = linalg::min_norm_solve(&a, &b, rank_tol);
    let (fs, fe) = samples.signal_window();
    Ok(Signal::new(
        fs,
        (fs..=fe).map(|n| ls.solution[(n - model.base) as usize]).collect(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    /// Perturb real parts only.
    Real,
    /// Independent perturbations of real and imaginary parts.
    Complex,
}

/// Additive Gaussian noise with standard deviation `sigma` per perturbed
/// component.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
    pub mode: NoiseMode,
}

impl NoiseSpec {
    pub fn new(sigma: f64, seed: u64, mode: NoiseMode) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("noise sigma must be finite and >= 0, got {sigma}")));
        }
        Ok(NoiseSpec { sigma, seed, mode })
    }
}

/// Adds noise to the stored sample values. Each time step draws from its
/// own ChaCha20 stream of the seed, so results do not depend on how the
/// work is scheduled.
pub fn add_noise(samples: &SpaceTimeSamples, spec: &NoiseSpec) -> SpaceTimeSamples {
    if spec.sigma == 0.0 {
        return samples.clone();
    }
    let values: Vec<Vec<Complex64>> = samples
        .values()
        .par_iter()
        .enumerate()
        .map(|(s, row)| {
            let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
            rng.set_stream(s as u64);
            row.iter()
                .map(|v| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = match spec.mode {
                        NoiseMode::Real => 0.0,
                        NoiseMode::Complex => rng.sample(StandardNormal),
                    };
                    v + Complex64::new(re, im) * spec.sigma
                })
                .collect()
        })
        .collect();
    samples.with_values(values).expect("shape preserved")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReconError {
    /// `‖f_true - f_rec‖ / ‖f_true‖`, or the absolute error when `absolute`.
    pub value: f64,
    /// Set when `f_true = 0` and the error could not be normalized.
    pub absolute: bool,
}

/// Relative ℓ² error over the union of both windows.
pub fn recon_error(f_true: &Signal, f_rec: &Signal) -> ReconError {
    let one = Complex64::new(1.0, 0.0);
    let diff = f_true.combine(one, f_rec, -one).norm();
    let reference = f_true.norm();
    if reference == 0.0 {
        ReconError {
            value: diff,
            absolute: true,
        }
    } else {
        ReconError {
            value: diff / reference,
            absolute: false,
        }
    }
}

/// Parameters of a noise sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseSweepConfig {
    pub m: u64,
    pub l: u64,
    pub n_steps: u32,
    pub sigmas: Vec<f64>,
    pub trials: u32,
    pub seed: u64,
    pub mode: NoiseMode,
    /// Grid for the reported sup of the inverse norm.
    pub grid: FrequencyGrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoiseSweepRow {
    pub sigma: f64,
    pub mean_rel_err: f64,
    /// Sample standard deviation (zero for a single trial).
    pub std_rel_err: f64,
    pub trials: u32,
    pub sup_inverse_norm: f64,
}

/// Seed of trial `trial` at noise level `level`: the first eight bytes of
/// SHA-256 over the little-endian triple.
pub fn trial_seed(seed: u64, level: usize, trial: u32) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((level as u64).to_le_bytes());
    h.update(trial.to_le_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("digest has 32 bytes"))
}

/// Mean and spread of the relative reconstruction error over `trials`
/// independent noise draws at each `σ`.
pub fn noise_sweep(kernel: &Kernel, f: &Signal, cfg: &NoiseSweepConfig) -> Result<Vec<NoiseSweepRow>> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("noise sweep needs trials >= 1".into()));
    }
    let pattern = crate::sampling::sublattice(cfg.m, cfg.l)?;
    let sup = spectral::sup_inverse_norm_stacked(kernel, cfg.m, cfg.l, cfg.n_steps, &cfg.grid)?;
    let clean = collect_covering(kernel, f, &pattern, cfg.n_steps)?;
    let mut rows = Vec::with_capacity(cfg.sigmas.len());
    for (level, &sigma) in cfg.sigmas.iter().enumerate() {
        NoiseSpec::new(sigma, 0, cfg.mode)?;
        let errors = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let spec = NoiseSpec {
                    sigma,
                    seed: trial_seed(cfg.seed, level, t),
                    mode: cfg.mode,
                };
                let rec = reconstruct(&add_noise(&clean, &spec), kernel)?;
                Ok(recon_error(f, &rec.signal).value)
            })
            .collect::<Result<Vec<f64>>>()?;
        let n = errors.len() as f64;
        let mean = errors.iter().sum::<f64>() / n;
        let std = if errors.len() > 1 {
            (errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        rows.push(NoiseSweepRow {
            sigma,
            mean_rel_err: mean,
            std_rel_err: std,
            trials: cfg.trials,
            sup_inverse_norm: sup,
        });
    }
    Ok(rows)
}

/// Collects samples on the smallest window that covers every reachable
/// pattern point.
pub fn collect_covering(kernel: &Kernel, f: &Signal, pattern: &SamplingPattern, n_steps: u32) -> Result<SpaceTimeSamples> {
    let window = required_window(kernel, f, pattern, n_steps).unwrap_or((f.start(), f.start()));
    collect(kernel, f, pattern, n_steps, window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::sublattice;
    use proptest::prelude::*;
    use rand::Rng;

    fn averaging() -> Kernel {
        Kernel::from_real(&[(0, 0.5), (1, 0.5)]).unwrap()
    }

    fn interleaved() -> Kernel {
        Kernel::from_real(&[(-2, 0.25), (0, 0.5), (2, 0.25)]).unwrap()
    }

    fn random_signal(seed: u64, start: i64, len: usize) -> Signal {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        Signal::new(
            start,
            (0..len)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        )
    }

    #[test]
    fn smooth_lengths() {
        assert_eq!(next_smooth(1), 1);
        assert_eq!(next_smooth(7), 8);
        assert_eq!(next_smooth(31), 32);
        assert_eq!(next_smooth(121), 125);
    }

    #[test]
    fn model_covers_spread() {
        let k = Kernel::from_real(&[(-1, 0.3), (0, 0.4), (2, 0.3)]).unwrap();
        let model = PeriodicModel::new(&k, (-5, 20), 3, 4).unwrap();
        assert_eq!(model.base % 3, 0);
        assert!(model.base <= -5 - 6);
        assert!(model.range().end > 20 + 6);
        assert_eq!(model.period, 3 * model.bins);
    }

    #[test]
    fn identity_kernel_full_lattice() {
        let f = random_signal(1, -3, 10);
        let s = collect_covering(&Kernel::delta(0), &f, &sublattice(1, 1).unwrap(), 1).unwrap();
        let rec = reconstruct(&s, &Kernel::delta(0)).unwrap();
        assert!(recon_error(&f, &rec.signal).value < 1e-15);
        assert_eq!(rec.status, ReconstructionStatus::Exact);
    }

    #[test]
    fn averaging_kernel_recovers_random_signal() {
        let f = random_signal(2, 0, 64);
        let s = collect_covering(&averaging(), &f, &sublattice(2, 1).unwrap(), 2).unwrap();
        let rec = reconstruct(&s, &averaging()).unwrap();
        assert!(recon_error(&f, &rec.signal).value <= 1e-8);
        assert_eq!(rec.status, ReconstructionStatus::Exact);
        let norm = s.norm();
        assert!(rec.residuals.iter().all(|&r| r <= 1e-10 * norm));
    }

    #[test]
    fn interleaved_kernel_is_rank_deficient_everywhere() {
        let f = random_signal(3, 0, 16);
        let s = collect_covering(&interleaved(), &f, &sublattice(2, 1).unwrap(), 2).unwrap();
        let rec = reconstruct(&s, &interleaved()).unwrap();
        match rec.status {
            ReconstructionStatus::RankDeficient { bins } => assert_eq!(bins.len() as u64, rec.model.bins),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn too_few_rows_is_a_dimension_error() {
        let f = random_signal(4, 0, 8);
        let s = collect_covering(&averaging(), &f, &sublattice(3, 1).unwrap(), 2).unwrap();
        assert!(matches!(reconstruct(&s, &averaging()), Err(Error::Dimension(_))));
    }

    #[test]
    fn noise_examples() {
        let f = random_signal(5, 0, 40);
        let s = collect_covering(&averaging(), &f, &sublattice(2, 1).unwrap(), 2).unwrap();
        assert_eq!(add_noise(&s, &NoiseSpec::new(0.0, 9, NoiseMode::Complex).unwrap()), s);
        let spec = NoiseSpec::new(0.1, 9, NoiseMode::Complex).unwrap();
        assert_eq!(add_noise(&s, &spec), add_noise(&s, &spec));
        assert!(NoiseSpec::new(-1.0, 0, NoiseMode::Real).is_err());

        let zero = Signal::zeros(0, 5000);
        let big = collect(&Kernel::delta(0), &zero, &sublattice(1, 1).unwrap(), 2, (0, 4999)).unwrap();
        let noisy = add_noise(&big, &NoiseSpec::new(0.1, 11, NoiseMode::Real).unwrap());
        let all: Vec<f64> = noisy.values().iter().flatten().map(|v| v.re).collect();
        assert_eq!(all.len(), 10_000);
        let mean = all.iter().sum::<f64>() / all.len() as f64;
        assert!(mean.abs() < 3.0 * 0.1 / 100.0, "mean {mean}");
        assert!(noisy.values().iter().flatten().all(|v| v.im == 0.0));
    }

    #[test]
    fn recon_error_examples() {
        let d0 = Signal::delta(0);
        assert_eq!(recon_error(&d0, &d0).value, 0.0);
        assert!((recon_error(&d0, &Signal::delta(1)).value - 2f64.sqrt()).abs() < 1e-15);
        assert!((recon_error(&d0, &d0.scaled(Complex64::new(0.9, 0.0))).value - 0.1).abs() < 1e-15);
        let z = Signal::zeros(0, 3);
        let e = recon_error(&z, &d0);
        assert!(e.absolute);
        assert_eq!(e.value, 1.0);
    }

    #[test]
    fn noise_sweep_scales_linearly() {
        let f = random_signal(6, 0, 32);
        let cfg = NoiseSweepConfig {
            m: 2,
            l: 1,
            n_steps: 2,
            sigmas: vec![0.0, 1e-3, 2e-3],
            trials: 100,
            seed: 42,
            mode: NoiseMode::Complex,
            grid: FrequencyGrid::new(256).unwrap(),
        };
        let rows = noise_sweep(&averaging(), &f, &cfg).unwrap();
        assert!(rows[0].mean_rel_err <= 1e-8);
        let ratio = rows[2].mean_rel_err / rows[1].mean_rel_err;
        assert!((ratio - 2.0).abs() <= 0.4, "ratio {ratio}");
        assert!((rows[0].sup_inverse_norm - 1.618_033_988_749_895).abs() < 1e-9);
        assert_eq!(rows, noise_sweep(&averaging(), &f, &cfg).unwrap());
    }

    #[test]
    fn worse_conditioned_kernel_has_larger_error() {
        let f = random_signal(7, 0, 32);
        let cfg = NoiseSweepConfig {
            m: 2,
            l: 1,
            n_steps: 2,
            sigmas: vec![1e-2],
            trials: 100,
            seed: 3,
            mode: NoiseMode::Complex,
            grid: FrequencyGrid::new(256).unwrap(),
        };
        let good = noise_sweep(&averaging(), &f, &cfg).unwrap()[0];
        let bad = noise_sweep(&Kernel::from_real(&[(0, 0.8), (1, 0.2)]).unwrap(), &f, &cfg).unwrap()[0];
        assert!(bad.sup_inverse_norm > 2.0 * good.sup_inverse_norm);
        assert!(bad.mean_rel_err >= good.mean_rel_err);
    }

    #[test]
    fn agrees_with_time_domain_solver() {
        for (m, k) in [(2u64, averaging()), (3, Kernel::from_real(&[(0, 0.5), (1, 0.3), (2, 0.2)]).unwrap())] {
            for seed in 0..5 {
                let f = random_signal(100 + seed, -4, 20);
                let s = collect_covering(&k, &f, &sublattice(m, 1).unwrap(), m as u32).unwrap();
                let freq = reconstruct(&s, &k).unwrap().signal;
                let time = reconstruct_time_domain(&s, &k, DEFAULT_RANK_TOL).unwrap();
                assert!(recon_error(&time, &freq).value <= 1e-8);
            }
        }
    }

    #[test]
    fn rank_deficient_solution_matches_time_domain_min_norm() {
        let f = random_signal(8, 0, 12);
        let s = collect_covering(&interleaved(), &f, &sublattice(2, 1).unwrap(), 2).unwrap();
        let rec = reconstruct(&s, &interleaved()).unwrap();
        let time = reconstruct_time_domain(&s, &interleaved(), DEFAULT_RANK_TOL).unwrap();
        assert!(recon_error(&time, &rec.signal).value <= 1e-8);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn reconstruction_is_linear(seed in any::<u64>(), start in -20i64..20, len in 1usize..40) {
            let k = Kernel::from_real(&[(-1, 0.2), (0, 0.5), (1, 0.1), (2, 0.2)]).unwrap();
            let p = sublattice(3, 2).unwrap();
            let f = random_signal(seed, start, len);
            let g = random_signal(seed ^ 0xabcdef, start, len);
            let sf = collect_covering(&k, &f, &p, 2).unwrap();
            let sg = collect_covering(&k, &g, &p, 2).unwrap();
            let sum: Vec<Vec<Complex64>> = sf.values().iter().zip(sg.values())
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
            let ssum = sf.with_values(sum).unwrap();
            let one = Complex64::new(1.0, 0.0);
            let lhs = reconstruct(&ssum, &k).unwrap().signal;
            let rhs = reconstruct(&sf, &k).unwrap().signal.combine(one, &reconstruct(&sg, &k).unwrap().signal, one);
            prop_assert!(lhs.combine(one, &rhs, -one).norm() <= 1e-10 * (1.0 + rhs.norm()));
        }

        #[test]
        fn round_trip_when_complete(seed in any::<u64>(), len in 1usize..48, which in 0usize..3) {
            let (k, m, l, n) = [
                (averaging(), 2u64, 1u64, 2u32),
                (interleaved(), 2, 2, 1),
                (Kernel::from_real(&[(0, 0.6), (1, 0.3), (2, 0.1)]).unwrap(), 3, 1, 3),
            ][which].clone();
            let grid = FrequencyGrid::new(64).unwrap();
            let v = spectral::completeness_check(&k, m, l, n, &grid, DEFAULT_RANK_TOL).unwrap();
            prop_assert_eq!(v.verdict, spectral::VerdictStatus::Pass);
            let f = random_signal(seed, -7, len);
            let s = collect_covering(&k, &f, &sublattice(m, l).unwrap(), n).unwrap();
            let rec = reconstruct(&s, &k).unwrap();
            prop_assert!(recon_error(&f, &rec.signal).value <= 1e-8);
        }
    }
}
