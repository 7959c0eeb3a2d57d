//! Empirical Fourier decomposition: improved segmentation followed by ideal
//! (zero-transition) band-pass masks.

use std::ops::Range;

use crate::error::{invalid, Error, Result};
use crate::modes::{Method, ModeSet};
use crate::segmentation::{segment_improved, MagnitudeProfile, Segmentation};
use crate::signal::Signal;
use crate::spectral::{forward_spectrum, Boundary, ExtendedSpectrum};

// Slack when deciding which side of a boundary a bin falls on, in bins.
const BIN_EPS: f64 = 1e-9;

/// Disjoint ascending bin ranges, one per segment, on a grid of
/// `grid_length` samples. Segments are `[w_{n-1}, w_n)`, the last one closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealFilterBank {
    bands: Vec<Range<usize>>,
    grid_length: usize,
}

impl IdealFilterBank {
    pub fn bands(&self) -> &[Range<usize>] {
        &self.bands
    }

    pub fn grid_length(&self) -> usize {
        self.grid_length
    }

    pub fn bin_count(&self) -> usize {
        self.grid_length / 2 + 1
    }

    /// Exactly 1 inside band `n`, exactly 0 elsewhere.
    pub fn response(&self, n: usize) -> Vec<f64> {
        let mut r = vec![0.0; self.bin_count()];
        for k in self.bands[n].clone() {
            r[k] = 1.0;
        }
        r
    }

    /// 1 on bins that belong to no band.
    pub fn uncovered(&self) -> Vec<f64> {
        let mut r = vec![1.0; self.bin_count()];
        for b in &self.bands {
            for k in b.clone() {
                r[k] = 0.0;
            }
        }
        r
    }

    /// Band index holding bin `k`, if any.
    pub fn band_of(&self, k: usize) -> Option<usize> {
        self.bands.iter().position(|b| b.contains(&k))
    }
}

/// Builds the mask bank for a length-`signal_length` record, whose half
/// spectrum has `signal_length / 2 + 1` bins.
pub fn build_ideal_bank(segmentation: &Segmentation, signal_length: usize) -> Result<IdealFilterBank> {
    if signal_length == 0 {
        return Err(invalid("signal length must be positive"));
    }
    let bins = signal_length / 2 + 1;
    let pos = |w: f64| w * signal_length as f64 / (2.0 * std::f64::consts::PI);
    let w = segmentation.boundaries();
    let n = w.len() - 1;
    let mut bands = Vec::with_capacity(n);
    for i in 0..n {
        let lo = (pos(w[i]) - BIN_EPS).ceil().max(0.0) as usize;
        let hi = if i + 1 == n {
            (pos(w[i + 1]) + BIN_EPS).floor() as usize + 1
        } else {
            (pos(w[i + 1]) - BIN_EPS).ceil() as usize
        };
        let hi = hi.min(bins);
        if lo >= hi {
            return Err(Error::EmptyBand { segment: i });
        }
        bands.push(lo..hi);
    }
    Ok(IdealFilterBank {
        bands,
        grid_length: signal_length,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EfdOptions {
    pub boundary: Boundary,
}

/// Improved segmentation of the signal's own spectrum, then masking.
pub fn efd_decompose(signal: &Signal, n_modes: usize) -> Result<ModeSet> {
    efd_decompose_with(signal, n_modes, EfdOptions::default())
}

pub fn efd_decompose_with(signal: &Signal, n_modes: usize, options: EfdOptions) -> Result<ModeSet> {
    if n_modes == 0 {
        return Err(invalid("at least one mode is required"));
    }
    let profile = MagnitudeProfile::from_spectrum(&forward_spectrum(signal));
    let seg = segment_improved(&profile, n_modes)?;
    efd_with_segmentation(signal, &seg, options)
}

/// Masks `signal` with the ideal bank of a given segmentation. Content outside
/// the segmented range is returned as the residual.
pub fn efd_with_segmentation(signal: &Signal, segmentation: &Segmentation, options: EfdOptions) -> Result<ModeSet> {
    build_ideal_bank(segmentation, signal.len())?;
    let spec = ExtendedSpectrum::new(signal.samples(), options.boundary);
    let bank = build_ideal_bank(segmentation, spec.grid_length())?;
    let modes = (0..bank.bands().len())
        .map(|n| signal.with_samples(spec.apply(&bank.response(n))))
        .collect::<Result<Vec<_>>>()?;
    let uncovered = bank.uncovered();
    let residual = if uncovered.iter().any(|g| *g != 0.0) {
        spec.apply(&uncovered)
    } else {
        vec![0.0; signal.len()]
    };
    ModeSet::new(Method::Efd, modes, Some(segmentation.clone()), None, residual, 0.0)
}
