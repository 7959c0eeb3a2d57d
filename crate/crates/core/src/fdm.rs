//! Fourier decomposition method: Fourier intrinsic band functions found by
//! greedy low-to-high (LTH) or high-to-low (HTL) scans over the Fourier
//! coefficients of the analytic signal.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::modes::{Method, ModeSet};
use crate::signal::Signal;
use crate::spectral::{fft, Complex64};

/// Default slack on the discrete instantaneous frequency, in rad/sample.
pub const DEFAULT_IF_TOLERANCE: f64 = 1e-10;

/// Samples with `|z| < DEGENERATE_AMPLITUDE * max |z|` have no defined phase.
/// A band containing any of them is not accepted.
pub const DEGENERATE_AMPLITUDE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `a_m = (2/U) sum_u f(u) exp(-j m phi0 u)` for `m = 1..U/2-1`, computed on
/// the mean-subtracted signal.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    coeffs: Vec<Complex64>,
    length: usize,
    mean: f64,
}

impl FourierCoefficients {
    /// `a_m`; `m` must lie in `1..=max_index()`.
    pub fn get(&self, m: usize) -> Complex64 {
        self.coeffs[m - 1]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn max_index(&self) -> usize {
        self.length / 2 - 1
    }

    pub fn signal_length(&self) -> usize {
        self.length
    }

    /// Sample mean removed before the transform.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Fundamental angular frequency `2 pi / U`.
    pub fn phi0(&self) -> f64 {
        2.0 * PI / self.length as f64
    }
}

pub fn fourier_coefficients(signal: &Signal) -> Result<FourierCoefficients> {
    let u = signal.len();
    if !u.is_multiple_of(2) {
        return Err(invalid(format!("signal length must be even, got {u}")));
    }
    if u < 4 {
        return Err(invalid("at least four samples are needed for one coefficient"));
    }
    let mean = signal.mean();
    let mut buf: Vec<Complex64> = signal
        .samples()
        .iter()
        .map(|&x| Complex64::new(x - mean, 0.0))
        .collect();
    fft(&mut buf);
    let scale = 2.0 / u as f64;
    let coeffs = buf[1..u / 2].iter().map(|c| c * scale).collect();
    Ok(FourierCoefficients {
        coeffs,
        length: u,
        mean,
    })
}

/// `z(u) = sum_{m=lo}^{hi} a_m exp(j m phi0 u)` with its polar form.
#[derive(Debug, Clone, PartialEq)]
pub struct BandAnalytic {
    lo: usize,
    hi: usize,
    values: Vec<Complex64>,
    amplitude: Vec<f64>,
    phase: Vec<f64>,
}

impl BandAnalytic {
    pub fn band(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn amplitude(&self) -> &[f64] {
        &self.amplitude
    }

    /// Unwrapped phase in radians.
    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    pub fn real(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.re).collect()
    }

    /// Discrete instantaneous frequency in rad/sample: central differences of
    /// the unwrapped phase, one-sided at the ends.
    pub fn instantaneous_frequency(&self) -> Vec<f64> {
        central_difference(&self.phase)
    }

    pub fn is_admissible(&self, tol_if: f64) -> bool {
        admissible(&self.values, tol_if)
    }
}

pub(crate) fn central_difference(p: &[f64]) -> Vec<f64> {
    let n = p.len();
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n)
            .map(|u| {
                if u == 0 {
                    p[1] - p[0]
                } else if u == n - 1 {
                    p[n - 1] - p[n - 2]
                } else {
                    0.5 * (p[u + 1] - p[u - 1])
                }
            })
            .collect(),
    }
}

pub(crate) fn unwrap_phase(values: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = match values.first() {
        Some(v) => v.arg(),
        None => return out,
    };
    out.push(acc);
    for w in values.windows(2) {
        acc += (w[1] * w[0].conj()).arg();
        out.push(acc);
    }
    out
}

pub fn band_analytic(coeffs: &FourierCoefficients, lo: usize, hi: usize) -> Result<BandAnalytic> {
    if lo == 0 || hi < lo || hi > coeffs.max_index() {
        return Err(invalid(format!(
            "band [{lo}, {hi}] is empty or outside [1, {}]",
            coeffs.max_index()
        )));
    }
    let mut acc = Accumulator::new(coeffs.signal_length());
    for m in lo..=hi {
        acc.add(m, coeffs.get(m));
    }
    let values = acc.z;
    let amplitude = values.iter().map(|c| c.norm()).collect();
    let phase = unwrap_phase(&values);
    Ok(BandAnalytic {
        lo,
        hi,
        values,
        amplitude,
        phase,
    })
}

/// Running band sum with a shared table of `exp(j 2 pi i / U)`.
struct Accumulator {
    twiddle: Vec<Complex64>,
    z: Vec<Complex64>,
    peak: f64,
}

impl Accumulator {
    fn new(len: usize) -> Self {
        let twiddle = (0..len)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / len as f64;
                Complex64::new(a.cos(), a.sin())
            })
            .collect();
        Accumulator {
            twiddle,
            z: vec![ZERO; len],
            peak: 0.0,
        }
    }

    fn reset(&mut self) {
        self.z.iter_mut().for_each(|v| *v = ZERO);
        self.peak = 0.0;
    }

    /// Adds `a exp(j m phi0 u)` and refreshes the peak squared magnitude.
    fn add(&mut self, m: usize, a: Complex64) {
        let n = self.twiddle.len();
        let mut idx = 0usize;
        let mut peak = 0.0f64;
        for v in self.z.iter_mut() {
            *v += a * self.twiddle[idx];
            peak = peak.max(v.norm_sqr());
            idx += m;
            if idx >= n {
                idx -= n;
            }
        }
        self.peak = peak;
    }

    fn admissible(&self, tol: f64) -> bool {
        admissible_with_peak(&self.z, self.peak, tol)
    }
}

/// Non-decreasing phase test used by both scans.
pub fn admissible(z: &[Complex64], tol_if: f64) -> bool {
    let peak = z.iter().map(|c| c.norm_sqr()).fold(0.0, f64::max);
    admissible_with_peak(z, peak, tol_if)
}

fn admissible_with_peak(z: &[Complex64], peak: f64, tol: f64) -> bool {
    let n = z.len();
    if n < 2 || peak == 0.0 {
        return true;
    }
    let floor = peak * DEGENERATE_AMPLITUDE * DEGENERATE_AMPLITUDE;
    if z[0].norm_sqr() < floor {
        return false;
    }
    // Phase increments d_u = arg(z[u+1] conj z[u]) lie in (-pi, pi]. When the
    // imaginary part of the product is non-negative the increment is too, and
    // atan2 can be skipped.
    let mut prev = z[1] * z[0].conj();
    if prev.im < 0.0 && prev.arg() < -tol {
        return false;
    }
    for u in 1..n - 1 {
        if z[u].norm_sqr() < floor {
            return false;
        }
        let cur = z[u + 1] * z[u].conj();
        if cur.im < 0.0 || prev.im < 0.0 {
            let c = 0.5 * (prev.arg() + cur.arg());
            if c < -tol {
                return false;
            }
        }
        prev = cur;
    }
    if z[n - 1].norm_sqr() < floor {
        return false;
    }
    !(prev.im < 0.0 && prev.arg() < -tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanDirection {
    Lth,
    Htl,
}

/// Band functions in scan order with their coefficient edges.
#[derive(Debug, Clone, PartialEq)]
pub struct FibfSet {
    fibfs: Vec<Signal>,
    bands: Vec<(usize, usize)>,
    analytic: Vec<Vec<Complex64>>,
    direction: ScanDirection,
    length: usize,
    mean: f64,
}

impl FibfSet {
    pub fn fibfs(&self) -> &[Signal] {
        &self.fibfs
    }

    /// Inclusive coefficient ranges `[lo, hi]` in scan order.
    pub fn bands(&self) -> &[(usize, usize)] {
        &self.bands
    }

    /// Band analytic signals `z_k`, aligned with [`FibfSet::fibfs`].
    pub fn analytic(&self) -> &[Vec<Complex64>] {
        &self.analytic
    }

    pub fn direction(&self) -> ScanDirection {
        self.direction
    }

    /// Removed sample mean (the trend that is not part of any band function).
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `M_0..M_K`: `0, hi_1, hi_2, ...` for LTH and `U/2, lo_1, lo_2, ...` for HTL.
    pub fn band_edges(&self) -> Vec<usize> {
        match self.direction {
            ScanDirection::Lth => std::iter::once(0).chain(self.bands.iter().map(|b| b.1)).collect(),
            ScanDirection::Htl => std::iter::once(self.length / 2)
                .chain(self.bands.iter().map(|b| b.0))
                .collect(),
        }
    }

    /// Converts to a [`ModeSet`] ordered by ascending band.
    pub fn to_mode_set(&self, signal: &Signal) -> Result<ModeSet> {
        let mut order: Vec<usize> = (0..self.bands.len()).collect();
        order.sort_by_key(|&i| self.bands[i].0);
        let modes: Vec<Signal> = order.iter().map(|&i| self.fibfs[i].clone()).collect();
        let bands = order.iter().map(|&i| self.bands[i]).collect();
        let residual = (0..signal.len())
            .map(|u| signal.samples()[u] - modes.iter().map(|m| m.samples()[u]).sum::<f64>())
            .collect();
        let method = match self.direction {
            ScanDirection::Lth => Method::FdmLth,
            ScanDirection::Htl => Method::FdmHtl,
        };
        ModeSet::new(method, modes, None, Some(bands), residual, self.mean)
    }
}

pub fn fdm_lth(signal: &Signal, tol_if: f64) -> Result<FibfSet> {
    fdm_scan(signal, ScanDirection::Lth, tol_if)
}

pub fn fdm_htl(signal: &Signal, tol_if: f64) -> Result<FibfSet> {
    fdm_scan(signal, ScanDirection::Htl, tol_if)
}

/// Greedy scan. Each band starts right after the previous one and is extended
/// to the farthest edge whose band analytic signal has a non-decreasing phase;
/// every candidate edge up to the end of the spectrum is tried.
pub fn fdm_scan(signal: &Signal, direction: ScanDirection, tol_if: f64) -> Result<FibfSet> {
    if !(tol_if >= 0.0 && tol_if.is_finite()) {
        return Err(invalid("IF tolerance must be finite and non-negative"));
    }
    let coeffs = fourier_coefficients(signal)?;
    let top = coeffs.max_index();
    let u = signal.len();
    let mut acc = Accumulator::new(u);
    let mut bands = Vec::new();
    let mut fibfs = Vec::new();
    let mut analytic = Vec::new();

    let mut start = match direction {
        ScanDirection::Lth => 1,
        ScanDirection::Htl => top,
    };
    loop {
        let candidates: Box<dyn Iterator<Item = usize>> = match direction {
            ScanDirection::Lth => Box::new(start..=top),
            ScanDirection::Htl => Box::new((1..=start).rev()),
        };
        acc.reset();
        let mut best = start;
        for m in candidates {
            acc.add(m, coeffs.get(m));
            if acc.admissible(tol_if) {
                best = m;
            }
        }
        let (lo, hi) = (start.min(best), start.max(best));
        acc.reset();
        match direction {
            ScanDirection::Lth => (lo..=hi).for_each(|m| acc.add(m, coeffs.get(m))),
            ScanDirection::Htl => (lo..=hi).rev().for_each(|m| acc.add(m, coeffs.get(m))),
        }
        let z = acc.z.clone();
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Numeric(format!("band [{lo}, {hi}] is not finite")));
        }
        fibfs.push(signal.with_samples(z.iter().map(|c| c.re).collect())?);
        analytic.push(z);
        bands.push((lo, hi));
        match direction {
            ScanDirection::Lth if hi < top => start = hi + 1,
            ScanDirection::Htl if lo > 1 => start = lo - 1,
            _ => break,
        }
    }
    Ok(FibfSet {
        fibfs,
        bands,
        analytic,
        direction,
        length: u,
        mean: coeffs.mean(),
    })
}
