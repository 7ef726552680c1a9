//! Spatial sampling sets, space-time sample collection and density
//! statistics.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::signal::{trajectory, Kernel, Signal};

/// A spatial sampling set Λ ⊂ ℤ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SamplingPattern {
    /// `Λ = mℤ + offsets`, offsets sorted, distinct and in `0..m`.
    Periodic { m: u64, offsets: Vec<u64> },
    /// A finite, strictly increasing list of points known on `[lo, hi]`.
    Explicit { points: Vec<i64>, lo: i64, hi: i64 },
}

/// `Λ = mℤ + {0, …, L-1}`.
pub fn sublattice(m: u64, l: u64) -> Result<SamplingPattern> {
    if m == 0 || l == 0 || l > m {
        return Err(Error::InvalidPattern(format!(
            "sub-lattice needs 1 <= L <= m, got m = {m}, L = {l}"
        )));
    }
    Ok(SamplingPattern::Periodic {
        m,
        offsets: (0..l).collect(),
    })
}

impl SamplingPattern {
    /// `mℤ + offsets` for an arbitrary nonempty offset set.
    pub fn periodic(m: u64, mut offsets: Vec<u64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidPattern("period m must be >= 1".into()));
        }
        offsets.sort_unstable();
        if offsets.is_empty() {
            return Err(Error::InvalidPattern("periodic pattern needs an offset".into()));
        }
        if offsets.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPattern("offsets must be distinct".into()));
        }
        if offsets.iter().any(|&c| c >= m) {
            return Err(Error::InvalidPattern(format!("offsets must lie in 0..{m}")));
        }
        Ok(SamplingPattern::Periodic { m, offsets })
    }

    /// An explicit list; points must be strictly increasing inside `[lo, hi]`.
    pub fn explicit(points: Vec<i64>, lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidPattern(format!("empty window [{lo}, {hi}]")));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPattern("explicit points must be strictly increasing".into()));
        }
        if points.iter().any(|&p| p < lo || p > hi) {
            return Err(Error::InvalidPattern(format!("explicit points must lie in [{lo}, {hi}]")));
        }
        Ok(SamplingPattern::Explicit { points, lo, hi })
    }

    /// `(m, offsets)` when the pattern is periodic.
    pub fn as_periodic(&self) -> Option<(u64, &[u64])> {
        match self {
            SamplingPattern::Periodic { m, offsets } => Some((*m, offsets)),
            SamplingPattern::Explicit { .. } => None,
        }
    }

    /// True for `mℤ + {0, …, L-1}`.
    pub fn is_sublattice(&self) -> bool {
        match self {
            SamplingPattern::Periodic { offsets, .. } => offsets.iter().enumerate().all(|(i, &c)| c == i as u64),
            SamplingPattern::Explicit { .. } => false,
        }
    }

    pub fn contains(&self, n: i64) -> bool {
        match self {
            SamplingPattern::Periodic { m, offsets } => offsets.binary_search(&(n.rem_euclid(*m as i64) as u64)).is_ok(),
            SamplingPattern::Explicit { points, .. } => points.binary_search(&n).is_ok(),
        }
    }

    /// Points of Λ in `[lo, hi]`, ascending.
    pub fn points_in(&self, lo: i64, hi: i64) -> Vec<i64> {
        if lo > hi {
            return Vec::new();
        }
        match self {
            SamplingPattern::Periodic { m, offsets } => {
                let m = *m as i64;
                let mut out = Vec::new();
                let mut base = lo.div_euclid(m) * m;
                while base <= hi {
                    for &c in offsets {
                        let p = base + c as i64;
                        if p >= lo && p <= hi {
                            out.push(p);
                        }
                    }
                    base += m;
                }
                out
            }
            SamplingPattern::Explicit { points, .. } => {
                let a = points.partition_point(|&p| p < lo);
                let b = points.partition_point(|&p| p <= hi);
                points[a..b].to_vec()
            }
        }
    }

    /// `|Λ ∩ [lo, hi]|`.
    pub fn count_in(&self, lo: i64, hi: i64) -> u64 {
        if lo > hi {
            return 0;
        }
        match self {
            SamplingPattern::Periodic { m, offsets } => {
                let m = *m as i64;
                offsets
                    .iter()
                    .map(|&c| {
                        let c = c as i64;
                        ((hi - c).div_euclid(m) - (lo - 1 - c).div_euclid(m)) as u64
                    })
                    .sum()
            }
            SamplingPattern::Explicit { points, .. } => {
                let a = points.partition_point(|&p| p < lo);
                let b = points.partition_point(|&p| p <= hi);
                (b - a) as u64
            }
        }
    }

    /// `|offsets| / m` for periodic patterns.
    pub fn exact_density(&self) -> Option<f64> {
        self.as_periodic().map(|(m, offsets)| offsets.len() as f64 / m as f64)
    }

    pub fn is_empty(&self) -> bool {
        match self {
            SamplingPattern::Periodic { offsets, .. } => offsets.is_empty(),
            SamplingPattern::Explicit { points, .. } => points.is_empty(),
        }
    }
}

/// Space-time samples `(Aˢf)(λ_i)` for `s` in `0..N` and the pattern points
/// `λ_i` inside a window, in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceTimeSamples {
    pattern: SamplingPattern,
    window: (i64, i64),
    signal_window: (i64, i64),
    kernel_id: String,
    lambdas: Vec<i64>,
    values: Vec<Vec<Complex64>>,
}

impl SpaceTimeSamples {
    /// Assembles samples from parts (for instance a parsed samples file).
    /// `lambdas` must equal the pattern enumeration over `window` and every
    /// row must have one value per location.
    pub fn from_parts(
        pattern: SamplingPattern,
        window: (i64, i64),
        signal_window: (i64, i64),
        kernel_id: impl Into<String>,
        lambdas: Vec<i64>,
        values: Vec<Vec<Complex64>>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("samples need at least one time step".into()));
        }
        if signal_window.0 > signal_window.1 {
            return Err(Error::InvalidArgument("signal window is empty".into()));
        }
        if lambdas != pattern.points_in(window.0, window.1) {
            return Err(Error::Dimension(
                "sample locations do not match the pattern enumeration over the window".into(),
            ));
        }
        if let Some(s) = values.iter().position(|row| row.len() != lambdas.len()) {
            return Err(Error::Dimension(format!(
                "row s = {s} has {} values, expected {}",
                values[s].len(),
                lambdas.len()
            )));
        }
        Ok(SpaceTimeSamples {
            pattern,
            window,
            signal_window,
            kernel_id: kernel_id.into(),
            lambdas,
            values,
        })
    }

    pub fn pattern(&self) -> &SamplingPattern {
        &self.pattern
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    /// Inclusive index range of the signal the samples were taken from.
    pub fn signal_window(&self) -> (i64, i64) {
        self.signal_window
    }

    pub fn kernel_id(&self) -> &str {
        &self.kernel_id
    }

    pub fn n_steps(&self) -> usize {
        self.values.len()
    }

    pub fn lambdas(&self) -> &[i64] {
        &self.lambdas
    }

    /// `values()[s][i] = (Aˢf)(λ_i)`.
    pub fn values(&self) -> &[Vec<Complex64>] {
        &self.values
    }

    /// Same metadata, new values of identical shape.
    pub fn with_values(&self, values: Vec<Vec<Complex64>>) -> Result<Self> {
        if values.len() != self.values.len() || values.iter().any(|r| r.len() != self.lambdas.len()) {
            return Err(Error::Dimension("replacement values have a different shape".into()));
        }
        Ok(SpaceTimeSamples {
            values,
            ..self.clone()
        })
    }

    /// Frobenius norm of the sample matrix.
    pub fn norm(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|r| r.iter())
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Inclusive bounds of the pattern points that can carry nonzero samples of
/// `f, Af, …, A^{N-1}f`, or `None` when no pattern point can.
pub fn required_window(kernel: &Kernel, f: &Signal, pattern: &SamplingPattern, n_steps: u32) -> Option<(i64, i64)> {
    if f.is_empty() || n_steps == 0 {
        return None;
    }
    let spread = n_steps as i64 - 1;
    let lo = f.start() + (spread * kernel.lo()).min(0);
    let hi = f.range().end - 1 + (spread * kernel.hi()).max(0);
    let pts = pattern.points_in(lo, hi);
    Some((*pts.first()?, *pts.last()?))
}

/// Collects `(Aˢf)(λ)` for `s` in `0..n_steps` and every pattern point in
/// the inclusive `window`. The window must contain every pattern point that
/// the evolution can reach; anything less is an error, never a silent
/// truncation.
pub fn collect(
    kernel: &Kernel,
    f: &Signal,
    pattern: &SamplingPattern,
    n_steps: u32,
    window: (i64, i64),
) -> Result<SpaceTimeSamples> {
    if n_steps < 1 {
        return Err(Error::InvalidArgument("collect needs N >= 1".into()));
    }
    if f.is_empty() {
        return Err(Error::InvalidArgument("signal has an empty window".into()));
    }
    if window.0 > window.1 {
        return Err(Error::InvalidArgument(format!("empty window [{}, {}]", window.0, window.1)));
    }
    if let Some(required) = required_window(kernel, f, pattern, n_steps) {
        if required.0 < window.0 || required.1 > window.1 {
            return Err(Error::WindowCoverage { required, given: window });
        }
    }
    let lambdas = pattern.points_in(window.0, window.1);
    let values = trajectory(kernel, f, n_steps)
        .iter()
        .map(|state| lambdas.iter().map(|&l| state.value_at(l)).collect())
        .collect();
    let signal_window = (f.start(), f.range().end - 1);
    SpaceTimeSamples::from_parts(
        pattern.clone(),
        window,
        signal_window,
        kernel.fingerprint(),
        lambdas,
        values,
    )
}

/// Sup and inf of `|Λ ∩ [K-l, K+l]| / 2l` over centers `K`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityAtScale {
    pub l: u64,
    pub sup: f64,
    pub inf: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub scales: Vec<DensityAtScale>,
    /// Estimate of the upper Banach density (exact for periodic patterns).
    pub upper: f64,
    /// Estimate of the lower Banach density (exact for periodic patterns).
    pub lower: f64,
    pub exact: bool,
    /// Set for the empty pattern.
    pub degenerate: bool,
    /// `N(Λ) = max_x |Λ ∩ [x-1, x+1]|`.
    pub n_lambda: u64,
    /// Largest gap radius `R`, see [`gap_stats`].
    pub max_gap: u64,
}

/// Banach-density statistics at the half-lengths `l_values`.
///
/// Periodic patterns get exact densities. Explicit patterns get finite-`l`
/// sup/inf counts with centers restricted so that `[K-l, K+l]` stays inside
/// the pattern window, and the limit is estimated by a least-squares fit of
/// the ratio against `1/l` evaluated at `1/l = 0`.
pub fn banach_density(pattern: &SamplingPattern, l_values: &[u64]) -> Result<DensityReport> {
    if l_values.is_empty() || l_values.contains(&0) {
        return Err(Error::InvalidArgument("l_values must be nonempty and positive".into()));
    }
    let max_l = *l_values.iter().max().expect("nonempty");
    match pattern {
        SamplingPattern::Periodic { m, .. } => {
            let m_i = *m as i64;
            let scales = l_values
                .iter()
                .map(|&l| {
                    let li = l as i64;
                    let counts = (0..m_i).map(|k| pattern.count_in(k - li, k + li));
                    let (lo, hi) = counts.fold((u64::MAX, 0), |(a, b), c| (a.min(c), b.max(c)));
                    DensityAtScale {
                        l,
                        sup: hi as f64 / (2 * l) as f64,
                        inf: lo as f64 / (2 * l) as f64,
                    }
                })
                .collect();
            let d = pattern.exact_density().expect("periodic");
            let gaps = gap_stats(pattern, (-2 * m_i, 3 * m_i))?;
            Ok(DensityReport {
                scales,
                upper: d,
                lower: d,
                exact: true,
                degenerate: false,
                n_lambda: gaps.n_lambda,
                max_gap: gaps.max_gap,
            })
        }
        SamplingPattern::Explicit { points, lo, hi } => {
            let width = (hi - lo + 1) as u64;
            if width < 4 * max_l {
                return Err(Error::WindowTooSmall(format!(
                    "explicit window width {width} is below 4 * max(l) = {}",
                    4 * max_l
                )));
            }
            let scales: Vec<DensityAtScale> = l_values
                .iter()
                .map(|&l| {
                    let li = l as i64;
                    let (mut lo_c, mut hi_c) = (u64::MAX, 0u64);
                    for k in (lo + li)..=(hi - li) {
                        let c = pattern.count_in(k - li, k + li);
                        lo_c = lo_c.min(c);
                        hi_c = hi_c.max(c);
                    }
                    DensityAtScale {
                        l,
                        sup: hi_c as f64 / (2 * l) as f64,
                        inf: lo_c as f64 / (2 * l) as f64,
                    }
                })
                .collect();
            if points.is_empty() {
                return Ok(DensityReport {
                    scales,
                    upper: 0.0,
                    lower: 0.0,
                    exact: false,
                    degenerate: true,
                    n_lambda: 0,
                    max_gap: 0,
                });
            }
            let upper = extrapolate(&scales, |s| s.sup).max(0.0);
            let lower = extrapolate(&scales, |s| s.inf).max(0.0).min(upper);
            let gaps = gap_stats(pattern, (*lo, *hi))?;
            Ok(DensityReport {
                scales,
                upper,
                lower,
                exact: false,
                degenerate: false,
                n_lambda: gaps.n_lambda,
                max_gap: gaps.max_gap,
            })
        }
    }
}

/// Intercept at `1/l = 0` of the least-squares line through `(1/l, value)`.
fn extrapolate(scales: &[DensityAtScale], value: impl Fn(&DensityAtScale) -> f64) -> f64 {
    let pts: Vec<(f64, f64)> = scales.iter().map(|s| (1.0 / s.l as f64, value(s))).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return my;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    my - (sxy / sxx) * mx
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GapStats {
    /// `N(Λ) = max_x |Λ ∩ [x-1, x+1]|` over integer centers in the window.
    pub n_lambda: u64,
    /// The largest `R` such that some run of `2R` consecutive integers in the
    /// window misses Λ; every run of `2R + 2` consecutive integers in the
    /// window meets Λ.
    pub max_gap: u64,
}

/// Local-count and gap statistics of Λ over the inclusive `window`. For
/// explicit patterns the window is clipped to the pattern's own bounds.
pub fn gap_stats(pattern: &SamplingPattern, window: (i64, i64)) -> Result<GapStats> {
    let (mut lo, mut hi) = window;
    if let SamplingPattern::Explicit { lo: plo, hi: phi, .. } = pattern {
        lo = lo.max(*plo);
        hi = hi.min(*phi);
    }
    if lo > hi || pattern.count_in(lo, hi) == 0 {
        return Err(Error::InvalidPattern(format!(
            "pattern has no points in window [{}, {}]",
            window.0, window.1
        )));
    }
    let n_lambda = (lo..=hi).map(|x| pattern.count_in(x - 1, x + 1)).max().unwrap_or(0);
    let mut longest = 0u64;
    let mut run = 0u64;
    for n in lo..=hi {
        if pattern.contains(n) {
            run = 0;
        } else {
            run += 1;
            longest = longest.max(run);
        }
    }
    Ok(GapStats {
        n_lambda,
        max_gap: longest / 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn sublattice_examples() {
        let even = sublattice(2, 1).unwrap();
        assert_eq!(even.points_in(-4, 4), vec![-4, -2, 0, 2, 4]);
        let p = sublattice(3, 2).unwrap();
        assert_eq!(p.points_in(-3, 5), vec![-3, -2, 0, 1, 3, 4]);
        let z = sublattice(5, 5).unwrap();
        assert_eq!(z.points_in(-2, 2), vec![-2, -1, 0, 1, 2]);
        assert!(sublattice(2, 3).is_err());
        assert!(sublattice(2, 0).is_err());
        assert!(sublattice(0, 0).is_err());
    }

    #[test]
    fn explicit_validation() {
        assert!(SamplingPattern::explicit(vec![1, 1], 0, 5).is_err());
        assert!(SamplingPattern::explicit(vec![3, 1], 0, 5).is_err());
        assert!(SamplingPattern::explicit(vec![7], 0, 5).is_err());
        assert!(SamplingPattern::periodic(4, vec![1, 1]).is_err());
        assert!(SamplingPattern::periodic(4, vec![4]).is_err());
    }

    #[test]
    fn count_matches_enumeration() {
        let p = SamplingPattern::periodic(5, vec![0, 2, 3]).unwrap();
        for lo in -12..8 {
            for hi in lo - 1..lo + 14 {
                assert_eq!(p.count_in(lo, hi), p.points_in(lo, hi).len() as u64);
            }
        }
    }

    #[test]
    fn collect_examples() {
        let f = Signal::from_real(-2, &[1.0, 2.0, 3.0, 4.0]);
        let full = sublattice(1, 1).unwrap();
        let s = collect(&Kernel::delta(0), &f, &full, 1, (-2, 1)).unwrap();
        assert_eq!(s.values()[0], f.values());

        let avg = Kernel::from_real(&[(0, 0.5), (1, 0.5)]).unwrap();
        let even = sublattice(2, 1).unwrap();
        let s = collect(&avg, &Signal::delta(0), &even, 2, (-6, 6)).unwrap();
        for (i, &l) in s.lambdas().iter().enumerate() {
            let want0 = if l == 0 { 1.0 } else { 0.0 };
            let want1 = if l == 0 { 0.5 } else { 0.0 };
            assert_eq!(s.values()[0][i], c(want0));
            assert_eq!(s.values()[1][i], c(want1));
        }

        let s = collect(&Kernel::delta(1), &Signal::delta(0), &even, 2, (-4, 4)).unwrap();
        assert!(s.values()[1].iter().all(|v| *v == c(0.0)));
    }

    #[test]
    fn collect_errors() {
        let k = Kernel::from_real(&[(-1, 0.25), (0, 0.5), (1, 0.25)]).unwrap();
        let f = Signal::from_real(0, &[1.0; 5]);
        let p = sublattice(1, 1).unwrap();
        assert!(matches!(collect(&k, &f, &p, 0, (0, 4)), Err(Error::InvalidArgument(_))));
        match collect(&k, &f, &p, 3, (0, 4)) {
            Err(Error::WindowCoverage { required, .. }) => assert_eq!(required, (-2, 6)),
            other => panic!("expected coverage error, got {other:?}"),
        }
        assert!(collect(&k, &f, &p, 3, (-2, 6)).is_ok());
    }

    #[test]
    fn density_examples() {
        let l = [4, 16, 64];
        let r = banach_density(&sublattice(2, 1).unwrap(), &l).unwrap();
        assert_eq!((r.upper, r.lower), (0.5, 0.5));
        assert!(r.exact);
        let r = banach_density(&sublattice(7, 7).unwrap(), &l).unwrap();
        assert_eq!((r.upper, r.lower), (1.0, 1.0));

        let finite = SamplingPattern::explicit(vec![-3, 0, 2, 9], -400, 400).unwrap();
        let r = banach_density(&finite, &[8, 16, 32, 64, 100]).unwrap();
        assert!(r.upper.abs() < 1e-12, "finite set density {}", r.upper);
        let sups: Vec<f64> = r.scales.iter().map(|s| s.sup).collect();
        assert!(sups.windows(2).all(|w| w[1] < w[0]));

        let empty = SamplingPattern::explicit(vec![], 0, 100).unwrap();
        let r = banach_density(&empty, &[5]).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.upper, 0.0);
    }

    #[test]
    fn explicit_full_window_extrapolates_to_one() {
        let pts: Vec<i64> = (-300..=300).collect();
        let z = SamplingPattern::explicit(pts, -300, 300).unwrap();
        let r = banach_density(&z, &[10, 20, 40]).unwrap();
        assert!((r.upper - 1.0).abs() < 1e-12);
        assert!((r.lower - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_window_check() {
        let p = SamplingPattern::explicit(vec![0], -10, 10).unwrap();
        assert!(matches!(banach_density(&p, &[6]), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn gap_examples() {
        let w = (-30, 30);
        let g = gap_stats(&sublattice(2, 1).unwrap(), w).unwrap();
        assert_eq!((g.n_lambda, g.max_gap), (2, 0));
        let g = gap_stats(&sublattice(3, 1).unwrap(), w).unwrap();
        assert_eq!((g.n_lambda, g.max_gap), (1, 1));
        let g = gap_stats(&sublattice(1, 1).unwrap(), w).unwrap();
        assert_eq!((g.n_lambda, g.max_gap), (3, 0));
        let empty = SamplingPattern::explicit(vec![], 0, 10).unwrap();
        assert!(gap_stats(&empty, (0, 10)).is_err());
    }

    proptest! {
        #[test]
        fn periodic_density_independent_of_l(m in 1u64..12, seed in any::<u64>(), ls in prop::collection::vec(1u64..50, 1..4)) {
            let offsets: Vec<u64> = (0..m).filter(|c| (seed >> (c % 64)) & 1 == 1).collect();
            prop_assume!(!offsets.is_empty());
            let l_count = offsets.len() as f64;
            let p = SamplingPattern::periodic(m, offsets).unwrap();
            let r = banach_density(&p, &ls).unwrap();
            prop_assert_eq!(r.upper, l_count / m as f64);
            prop_assert_eq!(r.lower, l_count / m as f64);
        }

        #[test]
        fn gap_contract(m in 1u64..12, seed in any::<u64>()) {
            let offsets: Vec<u64> = (0..m).filter(|c| (seed >> (c % 64)) & 1 == 1).collect();
            prop_assume!(!offsets.is_empty());
            let p = SamplingPattern::periodic(m, offsets).unwrap();
            let mi = m as i64;
            let g = gap_stats(&p, (-4 * mi, 4 * mi)).unwrap();
            let r = g.max_gap as i64;
            // Every run of 2R + 2 consecutive integers meets Λ.
            for a in -mi..mi {
                prop_assert!(p.count_in(a, a + 2 * r + 1) > 0);
            }
            // Some run of 2R consecutive integers misses Λ.
            if r > 0 {
                prop_assert!((-mi..mi).any(|a| p.count_in(a, a + 2 * r - 1) == 0));
            }
        }

        #[test]
        fn collect_is_linear(
            a in prop::collection::vec(-1.0f64..1.0, 6),
            b in prop::collection::vec(-1.0f64..1.0, 6),
            alpha in -2.0f64..2.0,
            beta in -2.0f64..2.0,
        ) {
            let k = Kernel::from_real(&[(-1, 0.3), (0, 0.5), (2, -0.4)]).unwrap();
            let p = sublattice(3, 2).unwrap();
            let f = Signal::from_real(0, &a);
            let h = Signal::from_real(0, &b);
            let fh = f.combine(c(alpha), &h, c(beta));
            let w = (-20, 30);
            let sf = collect(&k, &f, &p, 4, w).unwrap();
            let sh = collect(&k, &h, &p, 4, w).unwrap();
            let sfh = collect(&k, &fh, &p, 4, w).unwrap();
            for s in 0..4 {
                for i in 0..sf.lambdas().len() {
                    let want = sf.values()[s][i] * alpha + sh.values()[s][i] * beta;
                    prop_assert!((sfh.values()[s][i] - want).norm() <= 1e-12);
                }
            }
        }
    }
}
