//! Frame bounds, regularity envelopes, probe-energy constants, density
//! certificates and the finite-set decay experiment.
//!
//! The analysis operator of a space-time sampling system maps `f` to the
//! samples `(Aˢf)(λ)`; its frame bounds `c_min ≤ c_max` bracket
//! `Σ|(Aˢf)(λ)|² / ‖f‖²`. For sub-lattice sampling they follow from the
//! per-frequency stacked systems; for arbitrary patterns they are estimated
//! from a truncated analysis matrix.
//!
//! For a real, positive symbol `ν ≤ â ≤ μ` with `|â'| ≤ 𝒦`, the probe
//! `g = discrete_sinc(·)` (whose symbol is `2` on `|ω| < 1/4`) has
//! space-time energies `E(λ) = Σ_{s<N} |Aˢg(λ)|²` satisfying
//! `E(λ) ≥ c_a` for `λ ∈ {0, ±1}` and `E(λ) ≤ C_a / (1 + λ²)`. Together with
//! the frame bounds, these constants bracket the Banach densities of any
//! pattern carrying a space-time frame.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg;
use crate::sampling::SamplingPattern;
use crate::signal::{discrete_sinc, symbol, trajectory, FrequencyGrid, Kernel, Signal};
use crate::spectral;

/// Largest imaginary part of the symbol still treated as round-off.
pub const IMAG_TOL: f64 = 1e-10;

/// Certified bounds `ν ≤ â(ω) ≤ μ`, `|â'(ω)| ≤ 𝒦` on all of 𝕋.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegularityEnvelope {
    pub nu: f64,
    pub mu: f64,
    pub kappa: f64,
    /// Extremes on the grid before padding.
    pub grid_nu: f64,
    pub grid_mu: f64,
    pub grid_kappa: f64,
    pub grid_size: u64,
}

/// Extremes of the symbol and its derivative on the grid, widened by the
/// Lipschitz constant times the grid spacing so that they bound the
/// extremes over the whole circle.
pub fn regularity(kernel: &Kernel, grid: &FrequencyGrid) -> Result<RegularityEnvelope> {
    let per_point: Vec<(f64, Complex64, f64)> = (0..grid.size())
        .into_par_iter()
        .map(|k| {
            let w = grid.point(k);
            (w.value(), symbol(kernel, w), kernel.symbol_derivative(w).norm())
        })
        .collect();
    let mut grid_nu = (f64::INFINITY, 0.0);
    let mut grid_mu = f64::NEG_INFINITY;
    let mut grid_kappa = 0.0f64;
    for &(omega, v, d) in &per_point {
        if v.im.abs() > IMAG_TOL * (1.0 + v.re.abs()) {
            return Err(Error::RegularityViolation {
                omega,
                reason: format!("symbol is not real: imaginary part {:e}", v.im),
            });
        }
        if v.re < grid_nu.0 {
            grid_nu = (v.re, omega);
        }
        grid_mu = grid_mu.max(v.re);
        grid_kappa = grid_kappa.max(d);
    }
    if grid_nu.0 <= 0.0 {
        return Err(Error::RegularityViolation {
            omega: grid_nu.1,
            reason: format!("symbol is not positive: value {:e}", grid_nu.0),
        });
    }
    let h = grid.spacing();
    let nu = grid_nu.0 - kernel.symbol_lipschitz() * h;
    if nu <= 0.0 {
        return Err(Error::RegularityViolation {
            omega: grid_nu.1,
            reason: format!(
                "grid minimum {:e} does not certify positivity at spacing {h:e}; refine the grid",
                grid_nu.0
            ),
        });
    }
    Ok(RegularityEnvelope {
        nu,
        mu: grid_mu + kernel.symbol_lipschitz() * h,
        kappa: grid_kappa + kernel.derivative_lipschitz() * h,
        grid_nu: grid_nu.0,
        grid_mu,
        grid_kappa,
        grid_size: grid.size(),
    })
}

/// Constants of the probe-energy bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LemmaConstants {
    pub c_a: f64,
    #[serde(rename = "C_a")]
    pub big_c_a: f64,
    pub n_steps: u32,
    /// `E(λ) - |g(λ)|² ≤ b0` for every `λ`.
    pub b0: f64,
    /// `λ²·(E(λ) - |g(λ)|²) ≤ bx` for every `λ`.
    pub bx: f64,
}

/// `c_a = (4/π²)·Σ_{s<N} ν^{2s}` and `C_a = 1 + B₀ + B_x` with
///
/// ```text
///     B₀ = Σ_{s=1}^{N-1} μ^{2s}
///     B_x = (Σ_{s=1}^{N-1} μ^{2(s-1)}) · (8μ²/π² + (N-1)²𝒦²/(2π²))
/// ```
///
/// The `s = 0` term is bounded by `|g(λ)|² ≤ 1/(1+λ²)`. For `s ≥ 1`,
/// `‖Aˢg‖² ≤ μ^{2s}·‖g‖²` with `‖g‖² = 1` gives `B₀`, and
/// `λ·Aˢg(λ)` is the coefficient sequence of `(â^s ĝ)'/(−i2π)`, whose norm
/// picks up the jumps of `ĝ` (height 2) and the derivative of `â^s`.
/// Geometric sums are taken term by term.
pub fn lemma_constants(env: &RegularityEnvelope, n_steps: u32) -> Result<LemmaConstants> {
    if n_steps == 0 {
        return Err(Error::InvalidArgument("lemma constants need N >= 1".into()));
    }
    let nu2 = env.nu * env.nu;
    let mu2 = env.mu * env.mu;
    let c_a = 4.0 / (PI * PI) * (0..n_steps).map(|s| nu2.powi(s as i32)).sum::<f64>();
    let b0: f64 = (1..n_steps).map(|s| mu2.powi(s as i32)).sum();
    let lead: f64 = (1..n_steps).map(|s| mu2.powi(s as i32 - 1)).sum();
    let nm1 = (n_steps - 1) as f64;
    let bx = lead * (8.0 * mu2 / (PI * PI) + nm1 * nm1 * env.kappa * env.kappa / (2.0 * PI * PI));
    Ok(LemmaConstants {
        c_a,
        big_c_a: 1.0 + b0 + bx,
        n_steps,
        b0,
        bx,
    })
}

/// `E(λ) = Σ_{s<N} |Aˢg(λ)|²` for `|λ| ≤ max_lambda`, with
/// `g = discrete_sinc(g_radius)`.
pub fn probe_energies(kernel: &Kernel, n_steps: u32, g_radius: u64, max_lambda: i64) -> Result<Vec<(i64, f64)>> {
    let g = discrete_sinc(g_radius)?;
    let states = trajectory(kernel, &g, n_steps);
    Ok((-max_lambda..=max_lambda)
        .map(|l| (l, states.iter().map(|x| x.value_at(l).norm_sqr()).sum()))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameMethod {
    Analytic,
    Empirical,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameBounds {
    pub c_min: f64,
    pub c_max: f64,
    pub method: FrameMethod,
    /// Set when the lower bound vanishes and the system is not a frame.
    pub no_frame: bool,
    pub n_steps: u32,
    /// Analytic bounds: the sub-lattice period and the grid size.
    pub m: Option<u64>,
    pub grid_size: Option<u64>,
    /// Empirical bounds: the sample window and the interior columns used.
    pub window: Option<(i64, i64)>,
    pub columns: Option<(i64, i64)>,
}

/// Frame bounds of `Λ = mℤ` with `N = m` time steps from the per-frequency
/// systems: `c_min = 1/(m·sup‖𝔄⁻¹‖²)` and `c_max = sup σ_max²/m`. A
/// singular system gives `c_min = 0` with the `no_frame` flag.
pub fn analytic_frame_bounds(kernel: &Kernel, m: u64, grid: &FrequencyGrid) -> Result<FrameBounds> {
    if m == 0 || m > u32::MAX as u64 {
        return Err(Error::InvalidArgument(format!("unsupported period m = {m}")));
    }
    let n_steps = m as u32;
    let sup_inv = spectral::sup_inverse_norm(kernel, m, n_steps, grid)?;
    let sup_max = spectral::diagnose(kernel, m, 1, n_steps, grid)?
        .iter()
        .map(|r| r.sigma_max)
        .fold(0.0, f64::max);
    let c_min = if sup_inv.is_finite() {
        1.0 / (m as f64 * sup_inv * sup_inv)
    } else {
        0.0
    };
    Ok(FrameBounds {
        c_min,
        c_max: sup_max * sup_max / m as f64,
        method: FrameMethod::Analytic,
        no_frame: c_min == 0.0,
        n_steps,
        m: Some(m),
        grid_size: Some(grid.size()),
        window: None,
        columns: None,
    })
}

/// Analysis matrix with rows `(s, λ)` (step-major) and columns `n` in the
/// inclusive range `cols`; entry `a^{(s)}(λ - n)`.
fn analysis_matrix(kernel: &Kernel, n_steps: u32, lambdas: &[i64], cols: (i64, i64)) -> DMatrix<Complex64> {
    let powers = trajectory(kernel, &Signal::delta(0), n_steps);
    let width = (cols.1 - cols.0 + 1) as usize;
    let mut a = DMatrix::zeros(n_steps as usize * lambdas.len(), width);
    for (s, p) in powers.iter().enumerate() {
        for (i, &l) in lambdas.iter().enumerate() {
            let row = s * lambdas.len() + i;
            // a^{(s)}(l - n) is nonzero only for l - n inside p's window.
            let n_lo = (l - (p.range().end - 1)).max(cols.0);
            let n_hi = (l - p.start()).min(cols.1);
            for n in n_lo..=n_hi {
                a[(row, (n - cols.0) as usize)] = p.value_at(l - n);
            }
        }
    }
    a
}

/// Default interior margin, `(N-1)·radius + 8`.
pub fn default_interior_margin(kernel: &Kernel, n_steps: u32) -> u64 {
    (n_steps as u64).saturating_sub(1) * kernel.radius() + 8
}

/// Frame bounds estimated from the analysis matrix on a finite window.
/// Columns are restricted to signal indices at distance at least
/// `margin + (N-1)·radius` from both window edges, so every sample those
/// columns can reach lies inside the window and the estimate is free of
/// truncation bias: it brackets the bounds of the operator restricted to
/// signals supported on the interior.
pub fn empirical_frame_bounds(
    kernel: &Kernel,
    pattern: &SamplingPattern,
    n_steps: u32,
    window: (i64, i64),
    interior_margin: Option<u64>,
) -> Result<FrameBounds> {
    if n_steps == 0 {
        return Err(Error::InvalidArgument("frame bounds need N >= 1".into()));
    }
    let margin = interior_margin.unwrap_or_else(|| default_interior_margin(kernel, n_steps));
    let inset = (margin + (n_steps as u64 - 1) * kernel.radius()) as i64;
    let cols = (window.0 + inset, window.1 - inset);
    if cols.0 > cols.1 {
        return Err(Error::WindowTooSmall(format!(
            "window [{}, {}] leaves no interior columns at inset {inset}",
            window.0, window.1
        )));
    }
    let lambdas = pattern.points_in(window.0, window.1);
    let a = analysis_matrix(kernel, n_steps, &lambdas, cols);
    let (lo, hi) = linalg::extreme_singular_values(&a);
    Ok(FrameBounds {
        c_min: lo * lo,
        c_max: hi * hi,
        method: FrameMethod::Empirical,
        no_frame: lo == 0.0,
        n_steps,
        m: None,
        grid_size: None,
        window: Some(window),
        columns: Some(cols),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityCertificate {
    pub lower: f64,
    pub upper: f64,
    pub c_a: f64,
    #[serde(rename = "C_a")]
    pub big_c_a: f64,
    pub c_min: f64,
    pub c_max: f64,
}

/// `lower = max{c_a·c_min/(2·c_max·C_a), c_min/(3·C_a)}` bounds the lower
/// Banach density from below; `upper = min{c_max/c_a, 3/2}` bounds the
/// upper density from above.
pub fn density_certificate(lc: &LemmaConstants, fb: &FrameBounds) -> Result<DensityCertificate> {
    if fb.c_min.is_nan() || fb.c_min <= 0.0 {
        return Err(Error::NoCertificate("lower frame bound is zero".into()));
    }
    let lower = (lc.c_a * fb.c_min / (2.0 * fb.c_max * lc.big_c_a)).max(fb.c_min / (3.0 * lc.big_c_a));
    let upper = (fb.c_max / lc.c_a).min(1.5);
    Ok(DensityCertificate {
        lower,
        upper,
        c_a: lc.c_a,
        big_c_a: lc.big_c_a,
        c_min: fb.c_min,
        c_max: fb.c_max,
    })
}

/// Time horizon per window width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NRule {
    /// `N = dim`.
    Dim,
    Fixed(u32),
}

/// Placement of the width-`dim` signal window relative to index 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowAnchor {
    /// `[-dim/2, dim - 1 - dim/2]`.
    Centered,
    /// `[-(dim - 1), 0]`.
    Trailing,
    /// `[0, dim - 1]`.
    Leading,
}

impl WindowAnchor {
    pub fn window(self, dim: u64) -> (i64, i64) {
        let d = dim as i64;
        match self {
            WindowAnchor::Centered => (-(d / 2), d - 1 - d / 2),
            WindowAnchor::Trailing => (1 - d, 0),
            WindowAnchor::Leading => (0, d - 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayPoint {
    pub dim: u64,
    pub n_steps: u32,
    pub sigma_min_sq: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayCurve {
    pub points: Vec<DecayPoint>,
    pub strictly_decreasing: bool,
    pub non_increasing: bool,
    /// Last over first value.
    pub ratio: f64,
    /// Least-squares slope of `log σ²_min` against `log dim`.
    pub log_slope: f64,
}

/// Smallest squared singular value of the analysis matrix with rows
/// `(s, λ)`, `s < N`, `λ ∈ locations`, and the `dim` columns of the anchored
/// window, for each `dim`. A finite location set cannot carry a frame for
/// ℓ²(ℤ), which shows as a curve decaying to zero.
pub fn finite_set_decay(
    kernel: &Kernel,
    locations: &[i64],
    dims: &[u64],
    n_rule: NRule,
    anchor: WindowAnchor,
) -> Result<DecayCurve> {
    if locations.is_empty() {
        return Err(Error::InvalidArgument("decay needs at least one location".into()));
    }
    if dims.is_empty() || dims[0] == 0 || dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("dims must be positive and strictly increasing".into()));
    }
    let mut locs = locations.to_vec();
    locs.sort_unstable();
    locs.dedup();
    let points: Vec<DecayPoint> = dims
        .par_iter()
        .map(|&dim| {
            let n_steps = match n_rule {
                NRule::Dim => dim as u32,
                NRule::Fixed(n) => n,
            };
            let a = analysis_matrix(kernel, n_steps, &locs, anchor.window(dim));
            let (lo, _) = linalg::extreme_singular_values(&a);
            DecayPoint {
                dim,
                n_steps,
                sigma_min_sq: lo * lo,
            }
        })
        .collect();
    let vals: Vec<f64> = points.iter().map(|p| p.sigma_min_sq).collect();
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.sigma_min_sq > 0.0)
        .map(|p| ((p.dim as f64).ln(), p.sigma_min_sq.ln()))
        .collect();
    let log_slope = if logs.len() >= 2 {
        let n = logs.len() as f64;
        let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
        let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    } else {
        0.0
    };
    Ok(DecayCurve {
        strictly_decreasing: vals.windows(2).all(|w| w[1] < w[0]),
        non_increasing: vals.windows(2).all(|w| w[1] <= w[0]),
        ratio: vals[vals.len() - 1] / vals[0],
        log_slope,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::sublattice;

    const PHI: f64 = 1.618_033_988_749_895;

    fn raised_cosine() -> Kernel {
        Kernel::from_real(&[(-1, 0.125), (0, 0.75), (1, 0.125)]).unwrap()
    }

    fn averaging() -> Kernel {
        Kernel::from_real(&[(0, 0.5), (1, 0.5)]).unwrap()
    }

    #[test]
    fn regularity_examples() {
        let grid = FrequencyGrid::new(4096).unwrap();
        let env = regularity(&raised_cosine(), &grid).unwrap();
        assert!((env.grid_nu - 0.5).abs() < 1e-12);
        assert!((env.grid_mu - 1.0).abs() < 1e-12);
        assert!((env.grid_kappa - PI / 2.0).abs() < 1e-6);
        assert!(env.nu < 0.5 && env.nu > 0.499);
        assert!(env.mu > 1.0 && env.mu < 1.001);
        assert!(env.kappa >= PI / 2.0 && env.kappa < PI / 2.0 + 0.01);

        let env = regularity(&Kernel::delta(0), &grid).unwrap();
        assert_eq!((env.nu, env.mu, env.kappa), (1.0, 1.0, 0.0));

        assert!(matches!(
            regularity(&averaging(), &grid),
            Err(Error::RegularityViolation { .. })
        ));
        let negative = Kernel::from_real(&[(-1, 0.5), (0, 0.2), (1, 0.5)]).unwrap();
        assert!(matches!(regularity(&negative, &grid), Err(Error::RegularityViolation { .. })));
    }

    #[test]
    fn lemma_constant_examples() {
        let env = RegularityEnvelope {
            nu: 0.5,
            mu: 1.0,
            kappa: PI / 2.0,
            grid_nu: 0.5,
            grid_mu: 1.0,
            grid_kappa: PI / 2.0,
            grid_size: 1,
        };
        let lc = lemma_constants(&env, 1).unwrap();
        assert!((lc.c_a - 0.405_284_734_569_351).abs() < 1e-12);
        assert_eq!(lc.big_c_a, 1.0);
        let flat = RegularityEnvelope { nu: 1.0, mu: 1.0, kappa: 0.0, ..env };
        assert!((lemma_constants(&flat, 2).unwrap().c_a - 0.810_569_469_138_702).abs() < 1e-12);
        for n in 1..8 {
            let lc = lemma_constants(&env, n).unwrap();
            assert!(lc.c_a <= lc.big_c_a);
        }
        assert!(lemma_constants(&env, 0).is_err());
    }

    #[test]
    fn probe_energies_respect_constants() {
        let k = raised_cosine();
        let env = regularity(&k, &FrequencyGrid::new(4096).unwrap()).unwrap();
        for n in [1, 2, 4] {
            let lc = lemma_constants(&env, n).unwrap();
            for (l, e) in probe_energies(&k, n, 4096, 64).unwrap() {
                assert!(e <= lc.big_c_a / (1.0 + (l * l) as f64) + 1e-3, "N={n} λ={l}: {e}");
                if l.abs() <= 1 {
                    assert!(e >= lc.c_a - 1e-3, "N={n} λ={l}: {e} < {}", lc.c_a);
                }
            }
        }
    }

    #[test]
    fn halved_envelope_constant_is_too_small() {
        // Bounding the step terms by μ^{2s}/4 and the derivative terms with
        // 2μ²/π² treats the probe's symbol as if it had unit height; at N = 2
        // the evolved probe already exceeds that envelope.
        let k = raised_cosine();
        let env = regularity(&k, &FrequencyGrid::new(4096).unwrap()).unwrap();
        let mu2 = env.mu * env.mu;
        let halved = 1.0 + mu2 / 4.0 + 2.0 * mu2 / (PI * PI) + env.kappa * env.kappa / (2.0 * PI * PI);
        let worst = probe_energies(&k, 2, 4096, 64)
            .unwrap()
            .into_iter()
            .map(|(l, e)| e * (1.0 + (l * l) as f64))
            .fold(0.0, f64::max);
        assert!(worst > halved + 0.1, "{worst} vs {halved}");
        assert!(worst <= lemma_constants(&env, 2).unwrap().big_c_a);
    }

    #[test]
    fn analytic_bounds_examples() {
        let grid = FrequencyGrid::new(1024).unwrap();
        let fb = analytic_frame_bounds(&Kernel::delta(0), 1, &grid).unwrap();
        assert_eq!((fb.c_min, fb.c_max), (1.0, 1.0));
        let fb = analytic_frame_bounds(&averaging(), 2, &grid).unwrap();
        assert!((fb.c_min - 1.0 / (2.0 * PHI * PHI)).abs() < 1e-10);
        assert!((fb.c_max - PHI * PHI / 2.0).abs() < 1e-10);
        assert!(!fb.no_frame);
        let interleaved = Kernel::from_real(&[(-2, 0.25), (0, 0.5), (2, 0.25)]).unwrap();
        let fb = analytic_frame_bounds(&interleaved, 2, &grid).unwrap();
        assert_eq!(fb.c_min, 0.0);
        assert!(fb.no_frame);
    }

    #[test]
    fn empirical_bounds_examples() {
        let fb = empirical_frame_bounds(&Kernel::delta(0), &sublattice(1, 1).unwrap(), 1, (0, 63), None).unwrap();
        assert!((fb.c_min - 1.0).abs() < 1e-12 && (fb.c_max - 1.0).abs() < 1e-12);

        let grid = FrequencyGrid::new(1024).unwrap();
        let analytic = analytic_frame_bounds(&averaging(), 2, &grid).unwrap();
        let fb = empirical_frame_bounds(&averaging(), &sublattice(2, 1).unwrap(), 2, (0, 511), None).unwrap();
        assert!(fb.c_min >= analytic.c_min * (1.0 - 1e-9));
        assert!(fb.c_max <= analytic.c_max * (1.0 + 1e-9));
        assert!((fb.c_min / analytic.c_min - 1.0).abs() < 0.05);
        assert!((fb.c_max / analytic.c_max - 1.0).abs() < 0.05);

        assert!(matches!(
            empirical_frame_bounds(&averaging(), &sublattice(2, 1).unwrap(), 2, (0, 10), None),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn empirical_bounds_are_monotone_in_the_pattern() {
        let k = raised_cosine();
        let sub = empirical_frame_bounds(&k, &sublattice(3, 2).unwrap(), 2, (0, 149), None).unwrap();
        let sup = empirical_frame_bounds(&k, &sublattice(3, 3).unwrap(), 2, (0, 149), None).unwrap();
        assert!(sup.c_min >= sub.c_min - 1e-12);
        assert!(sup.c_max >= sub.c_max - 1e-12);
    }

    #[test]
    fn finite_pattern_loses_its_lower_bound() {
        let k = raised_cosine();
        let pattern = SamplingPattern::explicit(vec![-2, 0, 3], -4000, 4000).unwrap();
        let mut last = f64::INFINITY;
        for half in [20, 40, 80] {
            let fb = empirical_frame_bounds(&k, &pattern, 3, (-half, half), Some(0)).unwrap();
            assert!(fb.c_min <= last);
            last = fb.c_min;
        }
        assert!(last < 1e-12);
    }

    #[test]
    fn certificate_examples() {
        let lc = LemmaConstants {
            c_a: 0.4,
            big_c_a: 1.0,
            n_steps: 1,
            b0: 0.0,
            bx: 0.0,
        };
        let fb = FrameBounds {
            c_min: 0.1,
            c_max: 0.65,
            method: FrameMethod::Empirical,
            no_frame: false,
            n_steps: 1,
            m: None,
            grid_size: None,
            window: None,
            columns: None,
        };
        let cert = density_certificate(&lc, &fb).unwrap();
        assert!((cert.lower - 0.1 / 3.0).abs() < 1e-15);
        assert_eq!(cert.upper, 1.5);
        let tiny = FrameBounds { c_min: 1e-12, ..fb.clone() };
        assert!(density_certificate(&lc, &tiny).unwrap().lower < 1e-11);
        let zero = FrameBounds { c_min: 0.0, ..fb };
        assert!(matches!(density_certificate(&lc, &zero), Err(Error::NoCertificate(_))));
    }

    #[test]
    fn certificate_brackets_periodic_densities() {
        let k = raised_cosine();
        let env = regularity(&k, &FrequencyGrid::new(4096).unwrap()).unwrap();
        for (m, l, n) in [(2u64, 2u64, 1u32), (3, 2, 2), (4, 3, 2)] {
            let pattern = sublattice(m, l).unwrap();
            let fb = empirical_frame_bounds(&k, &pattern, n, (0, 239), None).unwrap();
            let cert = density_certificate(&lemma_constants(&env, n).unwrap(), &fb).unwrap();
            let d = pattern.exact_density().unwrap();
            assert!(cert.lower <= d && d <= cert.upper, "({m},{l}): {cert:?}");
            assert!(cert.upper <= 1.5);
        }
    }

    #[test]
    fn decay_examples() {
        let k = Kernel::from_real(&[(0, 0.01), (1, 1.0)]).unwrap();
        let dims = [64, 128, 256];
        let curve = finite_set_decay(&k, &[0], &dims, NRule::Dim, WindowAnchor::Trailing).unwrap();
        assert!(curve.strictly_decreasing);
        assert!(curve.ratio < 0.1);

        let window: Vec<i64> = (0..32).collect();
        let full = finite_set_decay(&raised_cosine(), &window, &[32], NRule::Fixed(1), WindowAnchor::Leading).unwrap();
        assert!((full.points[0].sigma_min_sq - 1.0).abs() < 1e-12);

        let one = finite_set_decay(&k, &[0], &dims, NRule::Dim, WindowAnchor::Trailing).unwrap();
        let two = finite_set_decay(&k, &[0, -5], &dims, NRule::Dim, WindowAnchor::Trailing).unwrap();
        for (a, b) in one.points.iter().zip(&two.points) {
            assert!(b.sigma_min_sq >= a.sigma_min_sq * (1.0 - 1e-9));
        }
        assert!(two.non_increasing);

        assert!(finite_set_decay(&k, &[], &dims, NRule::Dim, WindowAnchor::Trailing).is_err());
        assert!(finite_set_decay(&k, &[0], &[64, 32], NRule::Dim, WindowAnchor::Trailing).is_err());
    }
}
