//! Signals on ℤ, convolution kernels and their symbols.
//!
//! Everything here has finite support. Infinite ℤ is represented by a
//! window `[start, start + len)`; operations grow the window explicitly
//! instead of truncating. The forward transform uses the `e^{-i2πkω}`
//! convention throughout.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::Range;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `e^{-i2πt}`.
#[inline]
pub(crate) fn cis_turns(t: f64) -> Complex64 {
    let theta = -2.0 * PI * t;
    Complex64::new(theta.cos(), theta.sin())
}

/// A point of the circle 𝕋 = [0, 1).
///
/// `Ratio` keeps rational frequencies exact so that phases `k·ω mod 1` are
/// reduced in integer arithmetic; `Real` is an arbitrary float.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Frequency {
    Ratio { num: i64, den: u64 },
    Real(f64),
}

impl Frequency {
    pub fn ratio(num: i64, den: u64) -> Self {
        assert!(den > 0, "frequency denominator must be positive");
        Frequency::Ratio { num, den }
    }

    pub fn value(self) -> f64 {
        match self {
            Frequency::Ratio { num, den } => num as f64 / den as f64,
            Frequency::Real(w) => w,
        }
    }

    /// The aliased frequency `(ω + j) / m`.
    pub fn alias(self, j: u64, m: u64) -> Frequency {
        match self {
            Frequency::Ratio { num, den } => Frequency::Ratio {
                num: num + (j * den) as i64,
                den: den * m,
            },
            Frequency::Real(w) => Frequency::Real((w + j as f64) / m as f64),
        }
    }

    /// Fractional part of `k·ω`, in `[0, 1)`.
    pub fn turns(self, k: i64) -> f64 {
        match self {
            Frequency::Ratio { num, den } => {
                let r = (k as i128 * num as i128).rem_euclid(den as i128);
                r as f64 / den as f64
            }
            Frequency::Real(w) => (k as f64 * w).rem_euclid(1.0),
        }
    }
}

impl From<f64> for Frequency {
    fn from(w: f64) -> Self {
        Frequency::Real(w)
    }
}

/// Uniform grid `ω_k = k / M`, `k = 0, …, M-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrequencyGrid {
    size: u64,
}

impl FrequencyGrid {
    pub fn new(size: u64) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("frequency grid needs M >= 1".into()));
        }
        Ok(FrequencyGrid { size })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.size as f64
    }

    pub fn point(&self, k: u64) -> Frequency {
        Frequency::ratio(k as i64, self.size)
    }

    pub fn points(&self) -> impl Iterator<Item = Frequency> + '_ {
        (0..self.size).map(move |k| self.point(k))
    }

    /// The grid with twice as many points; every current point is kept.
    pub fn refined(&self) -> FrequencyGrid {
        FrequencyGrid {
            size: self.size * 2,
        }
    }
}

/// A finitely supported convolution kernel `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    taps: BTreeMap<i64, Complex64>,
    lo: i64,
    dense: Vec<Complex64>,
}

impl Kernel {
    /// Builds a kernel from `(offset, amplitude)` pairs. Offsets must be
    /// unique and amplitudes finite; at least one tap is required.
    pub fn from_taps<I>(taps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (k, v) in taps {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::InvalidKernel(format!("tap at offset {k} is not finite")));
            }
            if map.insert(k, v).is_some() {
                return Err(Error::InvalidKernel(format!("duplicate offset {k}")));
            }
        }
        let (lo, hi) = match (map.keys().next(), map.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => return Err(Error::InvalidKernel("kernel has no taps".into())),
        };
        let width = hi
            .checked_sub(lo)
            .and_then(|w| usize::try_from(w).ok())
            .filter(|w| *w < (1 << 24))
            .ok_or_else(|| Error::InvalidKernel("kernel support is too wide".into()))?;
        let mut dense = vec![Complex64::new(0.0, 0.0); width + 1];
        for (&k, &v) in &map {
            dense[(k - lo) as usize] = v;
        }
        Ok(Kernel {
            taps: map,
            lo,
            dense,
        })
    }

    /// Real taps, convenient for tests and examples.
    pub fn from_real(taps: &[(i64, f64)]) -> Result<Self> {
        Kernel::from_taps(taps.iter().map(|&(k, v)| (k, Complex64::new(v, 0.0))))
    }

    /// The shift kernel `δ_k` (`δ_0` is the identity).
    pub fn delta(k: i64) -> Self {
        Kernel::from_taps([(k, Complex64::new(1.0, 0.0))]).expect("single tap")
    }

    /// Taps exactly as given, in ascending offset order.
    pub fn taps(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.taps.iter().map(|(&k, &v)| (k, v))
    }

    pub fn tap(&self, k: i64) -> Complex64 {
        self.taps.get(&k).copied().unwrap_or_default()
    }

    /// Smallest stored offset.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Largest stored offset.
    pub fn hi(&self) -> i64 {
        self.lo + self.dense.len() as i64 - 1
    }

    /// Dense taps on `lo()..=hi()`.
    pub fn dense(&self) -> &[Complex64] {
        &self.dense
    }

    /// `max |k|` over nonzero taps, 0 for the zero kernel.
    pub fn radius(&self) -> u64 {
        self.taps
            .iter()
            .filter(|(_, v)| **v != Complex64::default())
            .map(|(k, _)| k.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn is_real(&self) -> bool {
        self.taps.values().all(|v| v.im == 0.0)
    }

    /// `Σ |a(k)|`.
    pub fn l1_norm(&self) -> f64 {
        self.taps.values().map(|v| v.norm()).sum()
    }

    /// Lipschitz constant of the symbol, `2π Σ |k a(k)|`.
    pub fn symbol_lipschitz(&self) -> f64 {
        2.0 * PI * self.taps.iter().map(|(&k, v)| (k as f64).abs() * v.norm()).sum::<f64>()
    }

    /// Lipschitz constant of the symbol's derivative, `4π² Σ k² |a(k)|`.
    pub fn derivative_lipschitz(&self) -> f64 {
        4.0 * PI * PI
            * self
                .taps
                .iter()
                .map(|(&k, v)| (k as f64).powi(2) * v.norm())
                .sum::<f64>()
    }

    /// The kernel of the adjoint operator, `b(k) = conj(a(-k))`. Its symbol
    /// is the complex conjugate of this kernel's symbol.
    pub fn adjoint(&self) -> Kernel {
        Kernel::from_taps(self.taps.iter().map(|(&k, v)| (-k, v.conj()))).expect("valid taps")
    }

    /// `dâ/dω = Σ (-i2πk) a(k) e^{-i2πkω}`.
    pub fn symbol_derivative(&self, omega: impl Into<Frequency>) -> Complex64 {
        let omega = omega.into();
        self.taps
            .iter()
            .map(|(&k, &v)| Complex64::new(0.0, -2.0 * PI * k as f64) * v * cis_turns(omega.turns(k)))
            .sum()
    }

    /// The s-fold self convolution `a^{(s)}` as a signal (`s = 0` gives `δ_0`).
    pub fn power(&self, s: u32) -> Signal {
        evolve(self, &Signal::delta(0), s)
    }

    /// SHA-256 of the canonical kernel CSV, hex encoded.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(crate::io::write_kernel_csv(self).as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// A finitely supported complex sequence on ℤ.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    start: i64,
    values: Vec<Complex64>,
}

impl Signal {
    pub fn new(start: i64, values: Vec<Complex64>) -> Self {
        Signal { start, values }
    }

    pub fn from_real(start: i64, values: &[f64]) -> Self {
        Signal::new(start, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(start: i64, len: usize) -> Self {
        Signal::new(start, vec![Complex64::default(); len])
    }

    /// Unit impulse at `n`.
    pub fn delta(n: i64) -> Self {
        Signal::new(n, vec![Complex64::new(1.0, 0.0)])
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Absolute indices of the stored window.
    pub fn range(&self) -> Range<i64> {
        self.start..self.start + self.values.len() as i64
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `f(n)`, zero outside the stored window.
    pub fn value_at(&self, n: i64) -> Complex64 {
        let i = n - self.start;
        if i < 0 {
            return Complex64::default();
        }
        self.values.get(i as usize).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨f, g⟩ = Σ f(k) conj(g(k))`.
    pub fn inner(&self, other: &Signal) -> Complex64 {
        self.range()
            .map(|n| self.value_at(n) * other.value_at(n).conj())
            .sum()
    }

    pub fn scaled(&self, factor: Complex64) -> Signal {
        Signal::new(self.start, self.values.iter().map(|v| v * factor).collect())
    }

    /// `α·self + β·other` on the union of both windows.
    pub fn combine(&self, alpha: Complex64, other: &Signal, beta: Complex64) -> Signal {
        let lo = match (self.is_empty(), other.is_empty()) {
            (true, true) => return Signal::zeros(self.start, 0),
            (true, false) => other.start,
            (false, true) => self.start,
            (false, false) => self.start.min(other.start),
        };
        let hi = self.range().end.max(other.range().end);
        let values = (lo..hi)
            .map(|n| alpha * self.value_at(n) + beta * other.value_at(n))
            .collect();
        Signal::new(lo, values)
    }
}

/// `â(ω) = Σ_k a(k) e^{-i2πkω}`.
pub fn symbol(kernel: &Kernel, omega: impl Into<Frequency>) -> Complex64 {
    let omega = omega.into();
    kernel
        .taps
        .iter()
        .map(|(&k, &v)| v * cis_turns(omega.turns(k)))
        .sum()
}

/// `(a ∗ f)(j) = Σ_k a(k) f(j-k)`.
///
/// The output window is `[f.start + lo, f.end + hi]` where `lo..=hi` is the
/// kernel's stored offset range, so nothing is truncated.
pub fn convolve(kernel: &Kernel, f: &Signal) -> Signal {
    if f.is_empty() {
        return Signal::zeros(f.start + kernel.lo, 0);
    }
    let taps = kernel.dense();
    let mut out = vec![Complex64::default(); f.len() + taps.len() - 1];
    for (i, &fv) in f.values.iter().enumerate() {
        if fv == Complex64::default() {
            continue;
        }
        for (t, &a) in taps.iter().enumerate() {
            out[i + t] += a * fv;
        }
    }
    Signal::new(f.start + kernel.lo, out)
}

/// `Aˢf = a^{(s)} ∗ f`; `s = 0` returns `f`.
pub fn evolve(kernel: &Kernel, f: &Signal, s: u32) -> Signal {
    (0..s).fold(f.clone(), |g, _| convolve(kernel, &g))
}

/// All states `f, Af, …, A^{n-1}f`.
pub fn trajectory(kernel: &Kernel, f: &Signal, n: u32) -> Vec<Signal> {
    let mut states = Vec::with_capacity(n as usize);
    let mut cur = f.clone();
    for s in 0..n {
        if s > 0 {
            cur = convolve(kernel, &cur);
        }
        states.push(cur.clone());
    }
    states
}

/// The half-band probe `g(0) = 1`, `g(n) = 2 sin(nπ/2) / (nπ)`, hard
/// truncated to `|n| <= radius`. The ℓ² tail beyond the radius is
/// `O(1/radius)`; callers pick the radius.
pub fn discrete_sinc(radius: u64) -> Result<Signal> {
    if radius == 0 {
        return Err(Error::InvalidArgument("discrete_sinc needs radius >= 1".into()));
    }
    let r = radius as i64;
    let values = (-r..=r)
        .map(|n| {
            let v = if n == 0 {
                1.0
            } else {
                // sin(nπ/2) is exactly 0, ±1 by parity.
                let s = match n.rem_euclid(4) {
                    1 => 1.0,
                    3 => -1.0,
                    _ => 0.0,
                };
                2.0 * s / (n as f64 * PI)
            };
            Complex64::new(v, 0.0)
        })
        .collect();
    Ok(Signal::new(-r, values))
}

/// `f̂(ω) = Σ_n f(n) e^{-i2πnω}` at a single frequency.
pub fn dtft_at(f: &Signal, omega: impl Into<Frequency>) -> Complex64 {
    let omega = omega.into();
    f.range()
        .zip(f.values.iter())
        .map(|(n, &v)| v * cis_turns(omega.turns(n)))
        .sum()
}

/// `f̂` on every point of the grid. Phases are reduced exactly as
/// `n·k mod M` before evaluation.
pub fn dtft(f: &Signal, grid: &FrequencyGrid) -> Vec<Complex64> {
    let m = grid.size();
    let twiddle: Vec<Complex64> = (0..m).map(|t| cis_turns(t as f64 / m as f64)).collect();
    (0..m)
        .map(|k| {
            f.range()
                .zip(f.values.iter())
                .map(|(n, &v)| {
                    let idx = (n as i128 * k as i128).rem_euclid(m as i128) as usize;
                    v * twiddle[idx]
                })
                .sum()
        })
        .collect()
}
