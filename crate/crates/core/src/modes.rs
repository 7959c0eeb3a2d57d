use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::efd::efd_decompose;
use crate::error::{invalid, Error, Result};
use crate::ewt::ewt;
use crate::fdm::{fdm_scan, ScanDirection, DEFAULT_IF_TOLERANCE};
use crate::segmentation::{Segmentation, Technique};
use crate::signal::Signal;

/// Decomposition methods exposed to the harness and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Efd,
    EwtMaxima,
    EwtMinima,
    FdmLth,
    FdmHtl,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Efd,
        Method::EwtMaxima,
        Method::EwtMinima,
        Method::FdmLth,
        Method::FdmHtl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Efd => "efd",
            Method::EwtMaxima => "ewt-maxima",
            Method::EwtMinima => "ewt-minima",
            Method::FdmLth => "fdm-lth",
            Method::FdmHtl => "fdm-htl",
        }
    }

    /// FDM finds its own band count; the others need one.
    pub fn needs_mode_count(self) -> bool {
        !matches!(self, Method::FdmLth | Method::FdmHtl)
    }

    /// Runs the method with library defaults. `n_modes` is ignored by FDM.
    pub fn decompose(self, signal: &Signal, n_modes: usize) -> Result<ModeSet> {
        match self {
            Method::Efd => efd_decompose(signal, n_modes),
            Method::EwtMaxima => ewt(signal, n_modes, Technique::LocalMaxima),
            Method::EwtMinima => ewt(signal, n_modes, Technique::LowestMinima),
            Method::FdmLth => fdm_scan(signal, ScanDirection::Lth, DEFAULT_IF_TOLERANCE)?.to_mode_set(signal),
            Method::FdmHtl => fdm_scan(signal, ScanDirection::Htl, DEFAULT_IF_TOLERANCE)?.to_mode_set(signal),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| invalid(format!("unknown method {s:?}")))
    }
}

/// Decomposed components in ascending frequency order.
///
/// `residual` is whatever the modes leave out, so that
/// `sum(modes) + residual` is the input: discarded out-of-band content for
/// EFD, transition-band surplus for EWT, the mean and Nyquist term for FDM.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    method: Method,
    modes: Vec<Signal>,
    segmentation: Option<Segmentation>,
    bands: Option<Vec<(usize, usize)>>,
    residual: Vec<f64>,
    offset: f64,
}

impl ModeSet {
    pub fn new(
        method: Method,
        modes: Vec<Signal>,
        segmentation: Option<Segmentation>,
        bands: Option<Vec<(usize, usize)>>,
        residual: Vec<f64>,
        offset: f64,
    ) -> Result<Self> {
        let first = modes.first().ok_or_else(|| invalid("a mode set needs modes"))?;
        let (len, rate) = (first.len(), first.sample_rate_hz());
        if modes.iter().any(|m| m.len() != len || m.sample_rate_hz() != rate) {
            return Err(invalid("modes differ in length or sample rate"));
        }
        if residual.len() != len {
            return Err(invalid("residual length differs from the modes"));
        }
        Ok(ModeSet {
            method,
            modes,
            segmentation,
            bands,
            residual,
            offset,
        })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn modes(&self) -> &[Signal] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn segmentation(&self) -> Option<&Segmentation> {
        self.segmentation.as_ref()
    }

    /// FDM coefficient ranges, aligned with the modes.
    pub fn bands(&self) -> Option<&[(usize, usize)]> {
        self.bands.as_deref()
    }

    pub fn residual(&self) -> &[f64] {
        &self.residual
    }

    /// Constant removed before decomposing (the FDM mean, otherwise 0).
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.modes[0].sample_rate_hz()
    }

    pub fn sum(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.modes[0].len()];
        for m in &self.modes {
            for (o, v) in out.iter_mut().zip(m.samples()) {
                *o += v;
            }
        }
        out
    }

    /// `||x - sum(modes)|| / ||x||`, or the absolute norm when `x` is zero.
    pub fn reconstruction_residual(&self, input: &Signal) -> f64 {
        let s = self.sum();
        let num: f64 = input
            .samples()
            .iter()
            .zip(&s)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let den = input.energy().sqrt();
        if den > 0.0 {
            num / den
        } else {
            num
        }
    }

    /// Modes as plain vectors, with the offset added back to the lowest one.
    pub fn modes_with_offset(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = self.modes.iter().map(|m| m.samples().to_vec()).collect();
        for v in out[0].iter_mut() {
            *v += self.offset;
        }
        out
    }
}
