//! Empirical wavelet transform with Meyer-type transitions.

use std::f64::consts::FRAC_PI_2;

use crate::error::{invalid, Error, Result};
use crate::modes::{Method, ModeSet};
use crate::segmentation::{segment, MagnitudeProfile, Segmentation, Technique};
use crate::signal::Signal;
use crate::spectral::{bin_omega, extend, forward_spectrum, Boundary, ExtendedSpectrum};

/// Transition polynomial: 0 below 0, 1 above 1, `x^4 (35 - 84x + 70x^2 - 20x^3)` between.
pub fn beta(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        // rounding can push the polynomial a hair past 1 next to x = 1
        (x.powi(4) * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x.powi(3))).clamp(0.0, 1.0)
    }
}

/// `gamma = (R-1)/R * min_n (w_{n+1} - w_n) / (w_{n+1} + w_n)`, which keeps
/// neighbouring transition bands from overlapping.
pub fn compute_gamma(segmentation: &Segmentation, signal_length: usize) -> Result<f64> {
    if signal_length == 0 {
        return Err(invalid("signal length must be positive"));
    }
    let w = segmentation.boundaries();
    let mut ratio = f64::INFINITY;
    for p in w.windows(2) {
        if p[1] <= p[0] {
            return Err(Error::InvalidSegmentation("adjacent boundaries coincide".into()));
        }
        ratio = ratio.min((p[1] - p[0]) / (p[1] + p[0]));
    }
    let r = signal_length as f64;
    Ok((r - 1.0) / r * ratio)
}

/// Smooth 0 -> 1 ramp centred on `w` with half-width `tau`.
fn ramp(omega: f64, w: f64, tau: f64) -> f64 {
    if tau > 0.0 {
        beta((tau + omega - w) / (2.0 * tau))
    } else if omega < w {
        0.0
    } else if omega > w {
        1.0
    } else {
        0.5
    }
}

fn rising(omega: f64, w: f64, tau: f64) -> f64 {
    (FRAC_PI_2 * ramp(omega, w, tau)).sin()
}

fn falling(omega: f64, w: f64, tau: f64) -> f64 {
    (FRAC_PI_2 * ramp(omega, w, tau)).cos()
}

/// Scaling filter and `N-1` wavelet filters sampled on the half-spectrum bins.
#[derive(Debug, Clone, PartialEq)]
pub struct EwtFilterBank {
    boundaries: Vec<f64>,
    gamma: f64,
    taus: Vec<f64>,
    grid_length: usize,
    responses: Vec<Vec<f64>>,
}

impl EwtFilterBank {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `tau_n = gamma * w_n` for every boundary, including `tau_0`.
    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn filter_count(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn grid_length(&self) -> usize {
        self.grid_length
    }

    pub fn scaling_response(&self) -> &[f64] {
        &self.responses[0]
    }

    pub fn wavelet_responses(&self) -> &[Vec<f64>] {
        &self.responses[1..]
    }

    /// All responses, scaling filter first.
    pub fn responses(&self) -> &[Vec<f64>] {
        &self.responses
    }

    /// Response of filter `index` (0 is the scaling filter) at `omega`.
    pub fn evaluate(&self, index: usize, omega: f64) -> f64 {
        let w = &self.boundaries;
        let t = &self.taus;
        let last = self.filter_count() - 1;
        let omega = omega.abs();
        if index == 0 {
            if last == 0 {
                return 1.0;
            }
            return falling(omega, w[1], t[1]);
        }
        let mut v = rising(omega, w[index], t[index]);
        if index < last {
            v *= falling(omega, w[index + 1], t[index + 1]);
        }
        v
    }

    /// The same bank sampled on a grid of `len` points.
    pub fn resampled(&self, len: usize) -> EwtFilterBank {
        let mut out = self.clone();
        out.grid_length = len;
        out.responses = (0..self.filter_count())
            .map(|i| (0..=len / 2).map(|k| self.evaluate(i, bin_omega(k, len))).collect())
            .collect();
        out
    }
}

pub fn build_filter_bank(segmentation: &Segmentation, signal_length: usize) -> Result<EwtFilterBank> {
    let gamma = compute_gamma(segmentation, signal_length)?;
    let boundaries = segmentation.boundaries().to_vec();
    let taus = boundaries.iter().map(|w| gamma * w).collect();
    let bank = EwtFilterBank {
        boundaries,
        gamma,
        taus,
        grid_length: signal_length,
        responses: Vec::new(),
    };
    Ok(bank.resampled(signal_length))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EwtOptions {
    pub boundary: Boundary,
}

/// Modes together with the extended-domain details needed to invert them.
#[derive(Debug, Clone)]
pub struct EwtDecomposition {
    modes: ModeSet,
    bank: EwtFilterBank,
    extended_details: Vec<Vec<f64>>,
    offset: usize,
}

impl EwtDecomposition {
    pub fn modes(&self) -> &ModeSet {
        &self.modes
    }

    pub fn into_modes(self) -> ModeSet {
        self.modes
    }

    pub fn bank(&self) -> &EwtFilterBank {
        &self.bank
    }

    /// Tight-frame inverse: each detail function is filtered a second time by
    /// its own filter before summation. Exact because the squared responses
    /// sum to one.
    pub fn reconstruct(&self) -> Vec<f64> {
        let len = self.bank.grid_length();
        let n = self.modes.modes()[0].len();
        let mut out = vec![0.0; n];
        for (detail, resp) in self.extended_details.iter().zip(self.bank.responses()) {
            let spec = ExtendedSpectrum::new(detail, Boundary::Periodic);
            debug_assert_eq!(spec.grid_length(), len);
            let y = spec.apply(resp);
            for (o, v) in out.iter_mut().zip(&y[self.offset..self.offset + n]) {
                *o += v;
            }
        }
        out
    }
}

/// Decomposes with a given segmentation, one mode per filter, each filter
/// applied once.
pub fn ewt_decompose(signal: &Signal, segmentation: &Segmentation) -> Result<ModeSet> {
    Ok(ewt_transform(signal, segmentation, EwtOptions::default())?.into_modes())
}

pub fn ewt_transform(signal: &Signal, segmentation: &Segmentation, options: EwtOptions) -> Result<EwtDecomposition> {
    let r = signal.len();
    let base = build_filter_bank(segmentation, r)?;
    let (ext, offset) = extend(signal.samples(), options.boundary);
    let bank = base.resampled(ext.len());
    // details are kept on the whole extended record so that the frame inverse
    // sees the same data the filters did
    let full = ExtendedSpectrum::new(&ext, Boundary::Periodic);
    let mut details = Vec::with_capacity(bank.filter_count());
    let mut modes = Vec::with_capacity(bank.filter_count());
    for resp in bank.responses() {
        let d = full.apply(resp);
        modes.push(signal.with_samples(d[offset..offset + r].to_vec())?);
        details.push(d);
    }
    let residual: Vec<f64> = (0..r)
        .map(|i| signal.samples()[i] - modes.iter().map(|m| m.samples()[i]).sum::<f64>())
        .collect();
    let method = match segmentation.technique() {
        Technique::LocalMaxima => Method::EwtMaxima,
        _ => Method::EwtMinima,
    };
    let modes = ModeSet::new(method, modes, Some(segmentation.clone()), None, residual, 0.0)?;
    Ok(EwtDecomposition {
        modes,
        bank,
        extended_details: details,
        offset,
    })
}

/// Segments the spectrum of `signal` with `technique` and decomposes.
pub fn ewt(signal: &Signal, n_modes: usize, technique: Technique) -> Result<ModeSet> {
    let profile = MagnitudeProfile::from_spectrum(&forward_spectrum(signal));
    let seg = segment(&profile, technique, n_modes)?;
    ewt_decompose(signal, &seg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn beta_values() {
        assert_eq!(beta(0.0), 0.0);
        assert_eq!(beta(1.0), 1.0);
        assert_eq!(beta(-3.0), 0.0);
        assert_eq!(beta(7.0), 1.0);
        assert!((beta(0.5) - 0.5).abs() < 1e-15);
        // 0.25^4 (35 - 21 + 4.375 - 0.3125) and 0.75^4 (35 - 63 + 39.375 - 8.4375)
        let b25 = 0.00390625 * 18.0625;
        let b75 = 0.31640625 * 2.9375;
        assert!((beta(0.25) - b25).abs() < 1e-15);
        assert!((beta(0.75) - b75).abs() < 1e-15);
        assert!((b25 + b75 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gamma_examples() {
        let s = Segmentation::new(Technique::LowestMinima, vec![0.0, 0.3 * PI, 0.7 * PI, PI]).unwrap();
        let g = compute_gamma(&s, 1000).unwrap();
        assert!((g - 0.999 * 0.3 / 1.7).abs() < 1e-12);
        assert!((g - 0.1763).abs() < 1e-4);
        let s = Segmentation::new(Technique::LowestMinima, vec![0.0, PI / 2.0, PI]).unwrap();
        assert!((compute_gamma(&s, 8).unwrap() - 7.0 / 8.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn crossover_is_power_complementary() {
        let s = Segmentation::new(Technique::LowestMinima, vec![0.0, 0.3 * PI, 0.7 * PI, PI]).unwrap();
        let b = build_filter_bank(&s, 1000).unwrap();
        for (i, &w) in s.boundaries()[1..3].iter().enumerate() {
            let lo = b.evaluate(i, w);
            let hi = b.evaluate(i + 1, w);
            let half = (PI / 4.0).cos();
            assert!((lo - half).abs() < 1e-15 && (hi - half).abs() < 1e-15);
        }
        assert_eq!(b.evaluate(0, 0.0), 1.0);
        let centre = (0.3 * PI * (1.0 + b.gamma()) + 0.7 * PI * (1.0 - b.gamma())) / 2.0;
        assert_eq!(b.evaluate(1, centre), 1.0);
        assert_eq!(b.evaluate(2, PI), 1.0);
    }

    #[test]
    fn tone_in_flat_region_is_isolated() {
        let r = 256;
        let s = Segmentation::new(Technique::LowestMinima, vec![0.0, 0.25 * PI, 0.6 * PI, PI]).unwrap();
        // bin 54 sits at 0.42 pi, deep inside the flat part of the middle filter
        let x = Signal::from_fn(r, 1.0, |t| (2.0 * PI * 54.0 * t / r as f64).cos()).unwrap();
        let opts = EwtOptions {
            boundary: Boundary::Periodic,
        };
        let d = ewt_transform(&x, &s, opts).unwrap();
        let m = d.modes().modes();
        for (a, b) in m[1].samples().iter().zip(x.samples()) {
            assert!((a - b).abs() < 1e-8);
        }
        assert!(m[0].energy() < 1e-8 && m[2].energy() < 1e-8);
    }

    #[test]
    fn frame_inverse_is_exact() {
        let r = 300;
        let x = Signal::from_fn(r, 100.0, |t| (7.0 * t).sin() + (t * 40.0).cos() * t + t * t).unwrap();
        let s = Segmentation::new(Technique::LocalMaxima, vec![0.0, 0.1, 0.5, 1.7, PI]).unwrap();
        for boundary in [Boundary::Periodic, Boundary::Mirror] {
            let d = ewt_transform(&x, &s, EwtOptions { boundary }).unwrap();
            let y = d.reconstruct();
            for (a, b) in y.iter().zip(x.samples()) {
                assert!((a - b).abs() < 1e-10, "{boundary:?}");
            }
        }
    }

    #[test]
    fn single_segment_passes_everything() {
        let s = Segmentation::new(Technique::LowestMinima, vec![0.0, PI]).unwrap();
        let b = build_filter_bank(&s, 16).unwrap();
        assert!(b.scaling_response().iter().all(|&v| v == 1.0));
        assert!(b.wavelet_responses().is_empty());
    }
}
