//! One-sided DFT of real signals, its inverse, and the discrete analytic signal.
//!
//! The forward transform is unnormalized, `X[k] = sum_r x[r] exp(-j 2 pi k r / R)`,
//! and the inverse carries the `1/R`. Only the bins `k = 0..=R/2` are kept; bin
//! `k` sits at normalized angular frequency `2 pi k / R`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::{Fft, FftPlanner};

pub use rustfft::num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::signal::Signal;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
    static REAL_PLANNER: RefCell<RealFftPlanner<f64>> = RefCell::new(RealFftPlanner::new());
}

fn plan_r2c(len: usize) -> Arc<dyn RealToComplex<f64>> {
    REAL_PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len))
}

fn plan_c2r(len: usize) -> Arc<dyn ComplexToReal<f64>> {
    REAL_PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(len))
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

/// Unnormalized in-place forward FFT.
pub(crate) fn fft(buf: &mut [Complex64]) {
    if buf.len() > 1 {
        plan(buf.len(), false).process(buf);
    }
}

/// In-place inverse FFT including the `1/R` factor.
pub(crate) fn ifft(buf: &mut [Complex64]) {
    let n = buf.len();
    if n > 1 {
        plan(n, true).process(buf);
    }
    let scale = 1.0 / n as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Normalized angular frequency of bin `k` on a grid of `len` samples.
pub fn bin_omega(k: usize, len: usize) -> f64 {
    2.0 * PI * k as f64 / len as f64
}

/// Scaling convention carried by a [`Spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Forward unscaled, inverse scaled by `1/R`.
    InverseOverLength,
}

/// The non-negative-frequency half of the DFT of a real signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    bins: Vec<Complex64>,
    source_length: usize,
}

impl Spectrum {
    /// Wraps `R/2 + 1` bins computed elsewhere for a length-`R` real signal.
    pub fn from_parts(bins: Vec<Complex64>, source_length: usize) -> Result<Self> {
        if source_length == 0 {
            return Err(invalid("spectrum source length must be positive"));
        }
        if bins.len() != source_length / 2 + 1 {
            return Err(invalid(format!(
                "a length-{source_length} signal has {} half-spectrum bins, got {}",
                source_length / 2 + 1,
                bins.len()
            )));
        }
        Ok(Spectrum { bins, source_length })
    }

    pub fn bins(&self) -> &[Complex64] {
        &self.bins
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }

    pub fn normalization(&self) -> Normalization {
        Normalization::InverseOverLength
    }

    pub fn omega(&self, k: usize) -> f64 {
        bin_omega(k, self.source_length)
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.bins.iter().map(|c| c.norm()).collect()
    }

    /// True if the last bin is the Nyquist bin (even `R`).
    pub fn has_nyquist(&self) -> bool {
        self.source_length.is_multiple_of(2)
    }

    /// Number of times bin `k` appears in the full two-sided spectrum.
    pub fn multiplicity(&self, k: usize) -> f64 {
        if k == 0 || (self.has_nyquist() && k == self.bins.len() - 1) {
            1.0
        } else {
            2.0
        }
    }

    /// `sum |x|^2` recovered from the half spectrum.
    pub fn parseval_energy(&self) -> f64 {
        let s: f64 = self
            .bins
            .iter()
            .enumerate()
            .map(|(k, c)| self.multiplicity(k) * c.norm_sqr())
            .sum();
        s / self.source_length as f64
    }

    /// Rebuilds all `R` bins using Hermitian symmetry.
    pub fn full_spectrum(&self) -> Vec<Complex64> {
        hermitian_full(&self.bins, self.source_length)
    }
}

fn hermitian_full(half: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut full = vec![Complex64::new(0.0, 0.0); len];
    full[..half.len()].copy_from_slice(half);
    for k in 1..len - half.len() + 1 {
        if len - k >= half.len() {
            full[len - k] = half[k].conj();
        }
    }
    full
}

/// Half spectrum of a raw sample slice.
pub fn spectrum_of(samples: &[f64]) -> Result<Spectrum> {
    if samples.is_empty() {
        return Err(invalid("cannot transform an empty sequence"));
    }
    let r2c = plan_r2c(samples.len());
    let mut input = samples.to_vec();
    let mut out = r2c.make_output_vec();
    r2c.process(&mut input, &mut out)
        .expect("buffer lengths come from the plan");
    Spectrum::from_parts(out, samples.len())
}

pub fn forward_spectrum(signal: &Signal) -> Spectrum {
    spectrum_of(signal.samples()).expect("a Signal is never empty")
}

/// Inverse of [`forward_spectrum`]. Imaginary parts of DC and Nyquist are
/// ignored, as they cannot come from a real signal.
pub fn inverse_spectrum(spectrum: &Spectrum) -> Vec<f64> {
    inverse_half(&spectrum.bins, spectrum.source_length)
}

pub(crate) fn inverse_half(half: &[Complex64], len: usize) -> Vec<f64> {
    let c2r = plan_c2r(len);
    let mut input = half.to_vec();
    input[0].im = 0.0;
    if len.is_multiple_of(2) {
        input[len / 2].im = 0.0;
    }
    let mut out = c2r.make_output_vec();
    c2r.process(&mut input, &mut out)
        .expect("imaginary parts of DC and Nyquist were cleared");
    let scale = 1.0 / len as f64;
    for v in &mut out {
        *v *= scale;
    }
    out
}

/// Complex analytic signal `z = x + j H{x}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSignal {
    values: Vec<Complex64>,
}

impl AnalyticSignal {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn real(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.re).collect()
    }

    pub fn amplitude(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.norm()).collect()
    }
}

/// Discrete analytic signal: DC (and Nyquist for even `R`) kept once,
/// positive bins doubled, negative bins zeroed.
pub fn analytic_of(samples: &[f64]) -> Result<AnalyticSignal> {
    let n = samples.len();
    if n == 0 {
        return Err(invalid("cannot build the analytic signal of an empty sequence"));
    }
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft(&mut buf);
    let half = n / 2;
    for (k, v) in buf.iter_mut().enumerate() {
        if k == 0 || (n.is_multiple_of(2) && k == half) {
            continue;
        }
        if k <= (n - 1) / 2 {
            *v *= 2.0;
        } else {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    ifft(&mut buf);
    Ok(AnalyticSignal { values: buf })
}

pub fn analytic_signal(signal: &Signal) -> AnalyticSignal {
    analytic_of(signal.samples()).expect("a Signal is never empty")
}

/// How a finite record is extended before spectral filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Filter the record's own DFT, i.e. treat it as one period.
    Periodic,
    /// Append mirrored copies of the first and last `ceil(R/2)` samples,
    /// filter the doubled record and crop back to the original span.
    #[default]
    Mirror,
}

/// Extended record and the offset at which the original samples start.
pub(crate) fn extend(samples: &[f64], boundary: Boundary) -> (Vec<f64>, usize) {
    match boundary {
        Boundary::Periodic => (samples.to_vec(), 0),
        Boundary::Mirror => {
            let n = samples.len();
            let l = n.div_ceil(2);
            let mut out = Vec::with_capacity(n + 2 * l);
            out.extend(samples[..l].iter().rev());
            out.extend_from_slice(samples);
            out.extend(samples[n - l..].iter().rev());
            (out, l)
        }
    }
}

/// Half spectrum of a boundary-extended record, filtered and cropped back.
pub(crate) struct ExtendedSpectrum {
    bins: Vec<Complex64>,
    len: usize,
    offset: usize,
    original: usize,
}

impl ExtendedSpectrum {
    pub(crate) fn new(samples: &[f64], boundary: Boundary) -> Self {
        let (ext, offset) = extend(samples, boundary);
        let spec = spectrum_of(&ext).expect("extended record is non-empty");
        ExtendedSpectrum {
            len: ext.len(),
            bins: spec.bins,
            offset,
            original: samples.len(),
        }
    }

    /// Length of the extended record, which sets the filtering grid.
    pub(crate) fn grid_length(&self) -> usize {
        self.len
    }

    /// Inverse transform of the spectrum weighted by `gain` (one value per
    /// half-spectrum bin), cropped to the original span.
    pub(crate) fn apply(&self, gain: &[f64]) -> Vec<f64> {
        let half: Vec<Complex64> = self.bins.iter().zip(gain).map(|(b, g)| b * g).collect();
        let full = inverse_half(&half, self.len);
        full[self.offset..self.offset + self.original].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[f64]) -> Vec<Complex64> {
        let n = x.len();
        (0..=n / 2)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(r, &v)| {
                        let a = -2.0 * PI * (k * r) as f64 / n as f64;
                        Complex64::new(v * a.cos(), v * a.sin())
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_direct_summation() {
        for n in [1usize, 2, 3, 7, 8, 15, 64] {
            let x: Vec<f64> = (0..n).map(|r| ((r * r) as f64 * 0.37).sin() + 0.1).collect();
            let got = spectrum_of(&x).unwrap();
            let want = naive_dft(&x);
            assert_eq!(got.bins().len(), n / 2 + 1);
            for (a, b) in got.bins().iter().zip(&want) {
                assert!((a - b).norm() < 1e-10, "n={n}");
            }
        }
    }

    #[test]
    fn cosine_lands_in_its_bin() {
        let n = 8;
        let x: Vec<f64> = (0..n).map(|r| (2.0 * PI * 2.0 * r as f64 / n as f64).cos()).collect();
        let s = spectrum_of(&x).unwrap();
        let m = s.magnitudes();
        assert!((m[2] - 4.0).abs() < 1e-12);
        for (k, v) in m.iter().enumerate() {
            if k != 2 {
                assert!(*v < 1e-12);
            }
        }
        assert_eq!(s.omega(2), PI / 2.0);
    }

    #[test]
    fn round_trip_odd_and_even() {
        for n in [1usize, 2, 5, 6, 101] {
            let x: Vec<f64> = (0..n).map(|r| (r as f64 * 1.3).cos() * r as f64).collect();
            let back = inverse_spectrum(&spectrum_of(&x).unwrap());
            for (a, b) in x.iter().zip(&back) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn analytic_of_cosine_is_complex_exponential() {
        let n = 64;
        let x: Vec<f64> = (0..n).map(|r| (2.0 * PI * 5.0 * r as f64 / n as f64).cos()).collect();
        let z = analytic_of(&x).unwrap();
        for (r, v) in z.values().iter().enumerate() {
            let a = 2.0 * PI * 5.0 * r as f64 / n as f64;
            assert!((v - Complex64::new(a.cos(), a.sin())).norm() < 1e-12);
        }
    }

    #[test]
    fn mirror_extension_layout() {
        let (e, off) = extend(&[1.0, 2.0, 3.0, 4.0, 5.0], Boundary::Mirror);
        assert_eq!(off, 3);
        assert_eq!(e, vec![3.0, 2.0, 1.0, 1.0, 2.0, 3.0, 4.0, 5.0, 5.0, 4.0, 3.0]);
    }

    #[test]
    fn rejects_mismatched_bins() {
        assert!(Spectrum::from_parts(vec![Complex64::new(0.0, 0.0); 3], 8).is_err());
    }
}
