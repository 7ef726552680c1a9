//! Text file formats.
//!
//! * Kernel CSV: header `offset,re,im`, one tap per row, offsets unique.
//! * Signal CSV: header `index,re,im`, consecutive indices.
//! * Samples CSV: header `s,lambda,re,im`, sorted by `(s, lambda)`.
//! * Pattern file: one header line, `periodic,m,L`, `periodic-offsets,m,c…`
//!   or `explicit[,lo,hi]`, followed (for explicit patterns) by one integer
//!   per line. Blank lines and lines starting with `#` are ignored.
//!
//! Floating-point values are written with 17 significant digits, which
//! round-trips every `f64` exactly.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::sampling::{DensityReport, SamplingPattern, SpaceTimeSamples};
use crate::signal::{Kernel, Signal};
use crate::spectral::DiagnosticRow;

/// A float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

fn check_header(rdr: &mut csv::Reader<&[u8]>, want: &[&str]) -> Result<()> {
    let headers = rdr.headers().map_err(|e| Error::parse(1, e.to_string()))?;
    if headers.iter().ne(want.iter().copied()) {
        return Err(Error::parse(
            1,
            format!("expected header `{}`, found `{}`", want.join(","), headers.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    Ok(())
}

fn line_of(err: &csv::Error, fallback: usize) -> usize {
    err.position().map(|p| p.line() as usize).unwrap_or(fallback)
}

fn finite(line: usize, field: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::parse(line, format!("{field} must be finite")))
    }
}

#[derive(Deserialize)]
struct TapRow {
    offset: i64,
    re: f64,
    im: f64,
}

pub fn read_kernel_csv(text: &str) -> Result<Kernel> {
    let mut rdr = reader(text);
    check_header(&mut rdr, &["offset", "re", "im"])?;
    let mut taps = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for rec in rdr.deserialize::<TapRow>() {
        let row = rec.map_err(|e| Error::parse(line_of(&e, 0), e.to_string()))?;
        let line = taps.len() + 2;
        if !seen.insert(row.offset) {
            return Err(Error::parse(line, format!("duplicate offset {}", row.offset)));
        }
        let v = Complex64::new(finite(line, "re", row.re)?, finite(line, "im", row.im)?);
        taps.push((row.offset, v));
    }
    if taps.is_empty() {
        return Err(Error::parse(2, "kernel file has no taps"));
    }
    Kernel::from_taps(taps).map_err(|e| Error::parse(0, e.to_string()))
}

pub fn write_kernel_csv(kernel: &Kernel) -> String {
    let mut out = String::from("offset,re,im\n");
    for (k, v) in kernel.taps() {
        let _ = writeln!(out, "{k},{},{}", fmt_f64(v.re), fmt_f64(v.im));
    }
    out
}

#[derive(Deserialize)]
struct IndexRow {
    index: i64,
    re: f64,
    im: f64,
}

pub fn read_signal_csv(text: &str) -> Result<Signal> {
    let mut rdr = reader(text);
    check_header(&mut rdr, &["index", "re", "im"])?;
    let mut start = None;
    let mut values = Vec::new();
    for rec in rdr.deserialize::<IndexRow>() {
        let row = rec.map_err(|e| Error::parse(line_of(&e, 0), e.to_string()))?;
        let line = values.len() + 2;
        let first = *start.get_or_insert(row.index);
        if row.index.checked_sub(first) != Some(values.len() as i64) {
            return Err(Error::parse(line, format!("index {} breaks the consecutive run", row.index)));
        }
        values.push(Complex64::new(finite(line, "re", row.re)?, finite(line, "im", row.im)?));
    }
    match start {
        Some(s) => Ok(Signal::new(s, values)),
        None => Err(Error::parse(2, "signal file has no rows")),
    }
}

pub fn write_signal_csv(signal: &Signal) -> String {
    let mut out = String::from("index,re,im\n");
    for (n, v) in signal.range().zip(signal.values()) {
        let _ = writeln!(out, "{n},{},{}", fmt_f64(v.re), fmt_f64(v.im));
    }
    out
}

/// Raw rows of a samples file, `(s, λ, value)` in file order.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleTable {
    pub rows: Vec<(u32, i64, Complex64)>,
}

impl SampleTable {
    /// Attaches the table to a pattern and window, checking that it holds
    /// exactly one value for every `(s, λ)` with `s < N`, `λ ∈ Λ ∩ window`.
    pub fn into_samples(
        self,
        pattern: SamplingPattern,
        window: (i64, i64),
        signal_window: (i64, i64),
        kernel_id: impl Into<String>,
    ) -> Result<SpaceTimeSamples> {
        let lambdas = pattern.points_in(window.0, window.1);
        if lambdas.is_empty() {
            return Err(Error::InvalidPattern("no pattern points inside the sample window".into()));
        }
        if !self.rows.len().is_multiple_of(lambdas.len()) {
            return Err(Error::Dimension(format!(
                "{} sample rows is not a multiple of the {} pattern points in the window",
                self.rows.len(),
                lambdas.len()
            )));
        }
        let n_steps = self.rows.len() / lambdas.len();
        let mut values = vec![Vec::with_capacity(lambdas.len()); n_steps];
        for (i, &(s, lambda, v)) in self.rows.iter().enumerate() {
            let (ws, wl) = (i / lambdas.len(), lambdas[i % lambdas.len()]);
            if s as usize != ws || lambda != wl {
                return Err(Error::parse(i + 2, format!("expected (s, lambda) = ({ws}, {wl}), found ({s}, {lambda})")));
            }
            values[ws].push(v);
        }
        SpaceTimeSamples::from_parts(pattern, window, signal_window, kernel_id, lambdas, values)
    }
}

#[derive(Deserialize)]
struct SampleRow {
    s: u32,
    lambda: i64,
    re: f64,
    im: f64,
}

pub fn read_samples_csv(text: &str) -> Result<SampleTable> {
    let mut rdr = reader(text);
    check_header(&mut rdr, &["s", "lambda", "re", "im"])?;
    let mut rows: Vec<(u32, i64, Complex64)> = Vec::new();
    for rec in rdr.deserialize::<SampleRow>() {
        let row = rec.map_err(|e| Error::parse(line_of(&e, 0), e.to_string()))?;
        let line = rows.len() + 2;
        if let Some(&(s, l, _)) = rows.last() {
            if (row.s, row.lambda) <= (s, l) {
                return Err(Error::parse(line, "rows must be strictly sorted by (s, lambda)"));
            }
        }
        rows.push((row.s, row.lambda, Complex64::new(finite(line, "re", row.re)?, finite(line, "im", row.im)?)));
    }
    Ok(SampleTable { rows })
}

pub fn write_samples_csv(samples: &SpaceTimeSamples) -> String {
    let mut out = String::from("s,lambda,re,im\n");
    for (s, row) in samples.values().iter().enumerate() {
        for (l, v) in samples.lambdas().iter().zip(row) {
            let _ = writeln!(out, "{s},{l},{},{}", fmt_f64(v.re), fmt_f64(v.im));
        }
    }
    out
}

fn parse_int<T: std::str::FromStr>(line: usize, field: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("{field}: `{}` is not an integer in range", s.trim())))
}

pub fn read_pattern(text: &str) -> Result<SamplingPattern> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty pattern file"))?;
    let fields: Vec<&str> = header.split(',').map(str::trim).collect();
    let invalid = |e: Error| match e {
        Error::InvalidPattern(msg) => Error::parse(hl, msg),
        other => other,
    };
    let no_body = |lines: &mut dyn Iterator<Item = (usize, &str)>| match lines.next() {
        Some((l, _)) => Err(Error::parse(l, "periodic patterns take no point list")),
        None => Ok(()),
    };
    match fields[0] {
        "periodic" => {
            if fields.len() != 3 {
                return Err(Error::parse(hl, "expected `periodic,m,L`"));
            }
            let m = parse_int(hl, "m", fields[1])?;
            let l = parse_int(hl, "L", fields[2])?;
            no_body(&mut lines)?;
            crate::sampling::sublattice(m, l).map_err(invalid)
        }
        "periodic-offsets" => {
            if fields.len() < 3 {
                return Err(Error::parse(hl, "expected `periodic-offsets,m,c1[,c2…]`"));
            }
            let m = parse_int(hl, "m", fields[1])?;
            let offsets = fields[2..]
                .iter()
                .map(|f| parse_int(hl, "offset", f))
                .collect::<Result<Vec<u64>>>()?;
            no_body(&mut lines)?;
            SamplingPattern::periodic(m, offsets).map_err(invalid)
        }
        "explicit" => {
            let bounds = match fields.len() {
                1 => None,
                3 => Some((parse_int::<i64>(hl, "lo", fields[1])?, parse_int::<i64>(hl, "hi", fields[2])?)),
                _ => return Err(Error::parse(hl, "expected `explicit` or `explicit,lo,hi`")),
            };
            let mut points = Vec::new();
            for (l, s) in lines {
                let p: i64 = parse_int(l, "point", s)?;
                if points.last().is_some_and(|&q| p <= q) {
                    return Err(Error::parse(l, "points must be strictly increasing"));
                }
                points.push(p);
            }
            let (lo, hi) = match bounds {
                Some(b) => b,
                None => match (points.first(), points.last()) {
                    (Some(&a), Some(&b)) => (a, b),
                    _ => return Err(Error::parse(hl, "explicit pattern without bounds needs at least one point")),
                },
            };
            SamplingPattern::explicit(points, lo, hi).map_err(invalid)
        }
        other => Err(Error::parse(hl, format!("unknown pattern kind `{other}`"))),
    }
}

pub fn write_pattern(pattern: &SamplingPattern) -> String {
    match pattern {
        SamplingPattern::Periodic { m, offsets } => {
            if offsets.iter().copied().eq(0..offsets.len() as u64) {
                format!("periodic,{m},{}\n", offsets.len())
            } else {
                let cs: Vec<String> = offsets.iter().map(u64::to_string).collect();
                format!("periodic-offsets,{m},{}\n", cs.join(","))
            }
        }
        SamplingPattern::Explicit { points, lo, hi } => {
            let mut out = format!("explicit,{lo},{hi}\n");
            for p in points {
                let _ = writeln!(out, "{p}");
            }
            out
        }
    }
}

pub fn write_diagnostics_csv(rows: &[DiagnosticRow]) -> String {
    let mut out = String::from("omega,sigma_min,sigma_max,gautschi_bound,max_cluster\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(r.omega),
            fmt_f64(r.sigma_min),
            fmt_f64(r.sigma_max),
            fmt_f64(r.gautschi_bound),
            r.max_cluster
        );
    }
    out
}

pub fn write_noise_sweep_csv(rows: &[crate::reconstruct::NoiseSweepRow]) -> String {
    let mut out = String::from("sigma,mean_rel_err,std_rel_err,trials,sup_inverse_norm\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(r.sigma),
            fmt_f64(r.mean_rel_err),
            fmt_f64(r.std_rel_err),
            r.trials,
            fmt_f64(r.sup_inverse_norm)
        );
    }
    out
}

pub fn write_decay_csv(points: &[crate::frames::DecayPoint]) -> String {
    let mut out = String::from("dim,sigma_min_sq\n");
    for p in points {
        let _ = writeln!(out, "{},{}", p.dim, fmt_f64(p.sigma_min_sq));
    }
    out
}

pub fn write_density_csv(report: &DensityReport) -> String {
    let mut out = String::from("l,sup,inf\n");
    for s in &report.scales {
        let _ = writeln!(out, "{},{},{}", s.l, fmt_f64(s.sup), fmt_f64(s.inf));
    }
    out
}
