//! Partitioning of the normalized frequency axis `[0, pi]` into adjacent segments.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spectral::{bin_omega, Spectrum};

/// How segment boundaries are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Technique {
    /// Midpoints between the largest local maxima.
    LocalMaxima,
    /// Lowest spectrum value between consecutive largest maxima.
    LowestMinima,
    /// Lowest spectrum value between peak candidates that include DC and the
    /// last bin. The first boundary may be above zero and the last below pi.
    Improved,
}

impl Technique {
    pub fn name(self) -> &'static str {
        match self {
            Technique::LocalMaxima => "local_maxima",
            Technique::LowestMinima => "lowest_minima",
            Technique::Improved => "improved",
        }
    }
}

/// Strictly increasing boundaries `w_0 < ... < w_N` in `[0, pi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segmentation {
    technique: Technique,
    boundaries: Vec<f64>,
}

impl Segmentation {
    pub fn new(technique: Technique, boundaries: Vec<f64>) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::InvalidSegmentation(
                "at least two boundaries are required".into(),
            ));
        }
        if boundaries.iter().any(|w| !w.is_finite() || *w < 0.0 || *w > PI) {
            return Err(Error::InvalidSegmentation("boundaries must lie in [0, pi]".into()));
        }
        if boundaries.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidSegmentation(
                "boundaries must be strictly increasing".into(),
            ));
        }
        if technique != Technique::Improved && (boundaries[0] != 0.0 || *boundaries.last().unwrap() != PI) {
            return Err(Error::InvalidSegmentation(format!(
                "{} segmentations span exactly [0, pi]",
                technique.name()
            )));
        }
        Ok(Segmentation { technique, boundaries })
    }

    pub fn technique(&self) -> Technique {
        self.technique
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn segment_count(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn boundaries_hz(&self, sample_rate_hz: f64) -> Vec<f64> {
        self.boundaries
            .iter()
            .map(|w| w * sample_rate_hz / (2.0 * PI))
            .collect()
    }

    pub fn to_json(&self, sample_rate_hz: f64) -> serde_json::Value {
        serde_json::json!({
            "technique": self.technique.name(),
            "boundaries_normalized": self.boundaries,
            "boundaries_hz": self.boundaries_hz(sample_rate_hz),
        })
    }
}

/// Magnitudes of the half spectrum of a length-`R` signal.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeProfile {
    magnitudes: Vec<f64>,
    source_length: usize,
}

impl MagnitudeProfile {
    pub fn new(magnitudes: Vec<f64>, source_length: usize) -> Result<Self> {
        if source_length == 0 || magnitudes.len() != source_length / 2 + 1 {
            return Err(invalid(format!(
                "a length-{source_length} signal has {} half-spectrum bins, got {}",
                source_length / 2 + 1,
                magnitudes.len()
            )));
        }
        if magnitudes.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(invalid("magnitudes must be finite and non-negative"));
        }
        Ok(MagnitudeProfile {
            magnitudes,
            source_length,
        })
    }

    pub fn from_spectrum(spectrum: &Spectrum) -> Self {
        MagnitudeProfile {
            magnitudes: spectrum.magnitudes(),
            source_length: spectrum.source_length(),
        }
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }

    pub fn omega(&self, k: f64) -> f64 {
        2.0 * PI * k / self.source_length as f64
    }

    fn last_bin(&self) -> usize {
        self.magnitudes.len() - 1
    }

    /// Interior bins higher than both neighbours. A flat top counts once, at
    /// its lowest bin, and only if the values fall on both sides.
    pub fn local_maxima(&self) -> Vec<usize> {
        let m = &self.magnitudes;
        let n = m.len();
        let mut out = Vec::new();
        let mut k = 1;
        while k + 1 < n {
            if m[k] > m[k - 1] {
                let mut j = k;
                while j + 1 < n && m[j + 1] == m[k] {
                    j += 1;
                }
                if j + 1 < n && m[j + 1] < m[k] {
                    out.push(k);
                }
                k = j + 1;
            } else {
                k += 1;
            }
        }
        out
    }

    /// The `count` largest entries of `candidates`, ties to the lower bin,
    /// returned in ascending bin order.
    fn largest(&self, mut candidates: Vec<usize>, count: usize) -> Vec<usize> {
        let m = &self.magnitudes;
        candidates.sort_by(|&a, &b| m[b].total_cmp(&m[a]).then(a.cmp(&b)));
        candidates.truncate(count);
        candidates.sort_unstable();
        candidates
    }

    /// Lowest bin in `lo..=hi` holding the minimum value.
    fn argmin(&self, lo: usize, hi: usize) -> usize {
        let mut best = lo;
        for k in lo + 1..=hi {
            if self.magnitudes[k] < self.magnitudes[best] {
                best = k;
            }
        }
        best
    }

    fn top_maxima(&self, segments: usize) -> Result<Vec<usize>> {
        if segments == 0 {
            return Err(invalid("at least one segment is required"));
        }
        let maxima = self.local_maxima();
        if maxima.len() < segments - 1 {
            return Err(Error::SegmentationInfeasible {
                requested: segments,
                needed: segments - 1,
                found: maxima.len(),
            });
        }
        Ok(self.largest(maxima, segments - 1))
    }
}

/// Boundaries halfway between consecutive peaks among the `N-1` largest local
/// maxima, with the origin acting as the zeroth peak.
pub fn segment_local_maxima(profile: &MagnitudeProfile, segments: usize) -> Result<Segmentation> {
    let peaks = profile.top_maxima(segments)?;
    let mut w = vec![0.0];
    let mut prev = 0usize;
    for &p in &peaks {
        w.push(profile.omega((prev + p) as f64 / 2.0));
        prev = p;
    }
    w.push(PI);
    Segmentation::new(Technique::LocalMaxima, w)
}

/// Boundaries at the lowest magnitude between consecutive peaks among the
/// `N-1` largest local maxima. The first search excludes DC so that the first
/// segment is never empty.
pub fn segment_lowest_minima(profile: &MagnitudeProfile, segments: usize) -> Result<Segmentation> {
    let peaks = profile.top_maxima(segments)?;
    let mut w = vec![0.0];
    let mut prev = 0usize;
    for (i, &p) in peaks.iter().enumerate() {
        let lo = if i == 0 { 1 } else { prev + 1 };
        let b = if lo < p {
            profile.omega(profile.argmin(lo, p - 1) as f64)
        } else {
            profile.omega((prev + p) as f64 / 2.0)
        };
        w.push(b);
        prev = p;
    }
    w.push(PI);
    Segmentation::new(Technique::LowestMinima, w)
}

/// Improved technique: the `N` largest of {DC, last bin, local maxima} are the
/// peaks, bracketed by 0 and the last bin; every boundary is the lowest bin
/// between two consecutive peaks.
pub fn segment_improved(profile: &MagnitudeProfile, segments: usize) -> Result<Segmentation> {
    if segments == 0 {
        return Err(invalid("at least one segment is required"));
    }
    let last = profile.last_bin();
    let mut candidates = profile.local_maxima();
    candidates.push(0);
    if last != 0 {
        candidates.push(last);
    }
    if candidates.len() < segments {
        return Err(Error::SegmentationInfeasible {
            requested: segments,
            needed: segments,
            found: candidates.len(),
        });
    }
    let mut peaks = vec![0];
    peaks.extend(profile.largest(candidates, segments));
    peaks.push(last);

    let mut bins: Vec<usize> = Vec::with_capacity(segments + 1);
    for n in 0..=segments {
        let mut lo = peaks[n];
        let hi = peaks[n + 1];
        if let Some(&p) = bins.last() {
            lo = lo.max(p + 1);
        }
        bins.push(if lo >= hi { lo } else { profile.argmin(lo, hi) });
    }
    if bins.windows(2).any(|p| p[0] >= p[1]) || *bins.last().unwrap() > last {
        return Err(Error::SegmentationInfeasible {
            requested: segments,
            needed: segments + 1,
            found: bins.windows(2).filter(|p| p[0] < p[1]).count() + 1,
        });
    }
    let len = profile.source_length();
    Segmentation::new(
        Technique::Improved,
        bins.into_iter().map(|k| bin_omega(k, len)).collect(),
    )
}

/// Runs the named technique.
pub fn segment(profile: &MagnitudeProfile, technique: Technique, segments: usize) -> Result<Segmentation> {
    match technique {
        Technique::LocalMaxima => segment_local_maxima(profile, segments),
        Technique::LowestMinima => segment_lowest_minima(profile, segments),
        Technique::Improved => segment_improved(profile, segments),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(m: &[f64]) -> MagnitudeProfile {
        MagnitudeProfile::new(m.to_vec(), 2 * (m.len() - 1)).unwrap()
    }

    fn bins_of(s: &Segmentation, len: usize) -> Vec<f64> {
        s.boundaries().iter().map(|w| w * len as f64 / (2.0 * PI)).collect()
    }

    #[test]
    fn plateau_counts_once_at_lowest_bin() {
        let p = profile(&[0.0, 1.0, 3.0, 3.0, 3.0, 1.0, 0.5, 0.5, 2.0]);
        assert_eq!(p.local_maxima(), vec![2]);
        let p = profile(&[0.0, 3.0, 3.0, 4.0, 1.0]);
        assert_eq!(p.local_maxima(), vec![3]);
    }

    #[test]
    fn local_maxima_midpoints() {
        let p = profile(&[0.1, 0.2, 5.0, 0.3, 0.1, 4.0, 0.2, 0.1, 0.05]);
        let s = segment_local_maxima(&p, 3).unwrap();
        assert_eq!(bins_of(&s, 16), vec![0.0, 1.0, 3.5, 8.0]);
    }

    #[test]
    fn lowest_minima_example() {
        let p = profile(&[0.1, 0.2, 5.0, 0.3, 0.1, 4.0, 0.2, 0.1, 0.05]);
        let s = segment_lowest_minima(&p, 3).unwrap();
        assert_eq!(bins_of(&s, 16), vec![0.0, 1.0, 4.0, 8.0]);
        let two = segment_lowest_minima(&p, 2).unwrap();
        assert_eq!(bins_of(&two, 16), vec![0.0, 1.0, 8.0]);
    }

    #[test]
    fn improved_example() {
        let p = profile(&[0.1, 0.2, 5.0, 0.3, 0.1, 4.0, 0.2, 0.1, 0.05]);
        let s = segment_improved(&p, 2).unwrap();
        assert_eq!(bins_of(&s, 16), vec![0.0, 4.0, 8.0]);
        assert_eq!(s.segment_count(), 2);
    }

    #[test]
    fn improved_endpoint_candidates_compete() {
        let p = profile(&[5.0, 1.0, 0.2, 0.5, 0.1, 3.0, 0.4, 0.2, 2.0]);
        let s = segment_improved(&p, 2).unwrap();
        assert_eq!(bins_of(&s, 16), vec![0.0, 4.0, 7.0]);
    }

    #[test]
    fn improved_single_tone_is_bracketed() {
        let mut m = vec![0.0; 33];
        m[10] = 1.0;
        m[9] = 0.5;
        m[11] = 0.5;
        let p = MagnitudeProfile::new(m, 64).unwrap();
        let s = segment_improved(&p, 1).unwrap();
        let b = bins_of(&s, 64);
        assert!(b[0] < 10.0 && 10.0 < b[1], "{b:?}");
    }

    #[test]
    fn improved_can_start_above_dc() {
        let p = profile(&[0.3, 0.4, 0.05, 0.2, 5.0, 0.1, 0.2, 3.0, 0.01, 0.3, 0.2]);
        let s = segment_improved(&p, 2).unwrap();
        assert_eq!(bins_of(&s, 20), vec![2.0, 5.0, 8.0]);
        assert!(s.boundaries()[0] > 0.0);
        assert!(*s.boundaries().last().unwrap() < PI);
    }

    #[test]
    fn too_few_peaks_is_infeasible() {
        let p = profile(&[1.0, 0.5, 0.2, 0.1, 0.05]);
        match segment_local_maxima(&p, 3) {
            Err(Error::SegmentationInfeasible {
                requested: 3, found: 0, ..
            }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            segment_improved(&p, 3),
            Err(Error::SegmentationInfeasible { .. })
        ));
    }

    #[test]
    fn single_segment_is_whole_axis() {
        let p = profile(&[1.0, 0.5, 0.2]);
        assert_eq!(segment_lowest_minima(&p, 1).unwrap().boundaries(), &[0.0, PI]);
    }

    #[test]
    fn json_shape() {
        let s = Segmentation::new(Technique::LocalMaxima, vec![0.0, PI / 2.0, PI]).unwrap();
        let v = s.to_json(100.0);
        assert_eq!(v["technique"], "local_maxima");
        assert_eq!(v["boundaries_hz"][1], 25.0);
    }

    #[test]
    fn rejects_unsorted() {
        assert!(Segmentation::new(Technique::Improved, vec![0.0, 1.0, 1.0]).is_err());
        assert!(Segmentation::new(Technique::LowestMinima, vec![0.0, 1.0]).is_err());
    }
}
