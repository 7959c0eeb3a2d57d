use crate::error::{invalid, Result};

/// A uniformly sampled, finite, real-valued time series.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(invalid("signal has no samples"));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(invalid(format!(
                "sample rate must be positive and finite, got {sample_rate_hz}"
            )));
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(invalid(format!("sample {i} is not finite")));
        }
        Ok(Signal {
            samples,
            sample_rate_hz,
        })
    }

    /// Samples `f(t)` at `t = r / rate` for `r = 0..len`.
    pub fn from_fn(len: usize, sample_rate_hz: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let samples = (0..len).map(|r| f(r as f64 / sample_rate_hz)).collect();
        Signal::new(samples, sample_rate_hz)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|r| r as f64 / self.sample_rate_hz).collect()
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|x| x * x).sum()
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.len() as f64
    }

    /// A new signal with the same sample rate.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Signal> {
        if samples.len() != self.len() {
            return Err(invalid(format!(
                "expected {} samples, got {}",
                self.len(),
                samples.len()
            )));
        }
        Signal::new(samples, self.sample_rate_hz)
    }
}

impl AsRef<[f64]> for Signal {
    fn as_ref(&self) -> &[f64] {
        &self.samples
    }
}
