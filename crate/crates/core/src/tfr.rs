//! Instantaneous amplitude and frequency tracks and their rasterized
//! time-frequency representation.

use std::f64::consts::PI;
use std::io::{self, Write};

use crate::error::{invalid, Result};
use crate::fdm::{central_difference, unwrap_phase};
use crate::signal::Signal;
use crate::spectral::{analytic_signal, Complex64};

/// Amplitudes below this have no usable phase; their frequency is set to 0.
pub const DEGENERATE_AMPLITUDE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TfrTrack {
    pub time: Vec<f64>,
    pub inst_amplitude: Vec<f64>,
    pub inst_frequency_hz: Vec<f64>,
    /// Samples whose amplitude was below [`DEGENERATE_AMPLITUDE`].
    pub degenerate: Vec<bool>,
}

impl TfrTrack {
    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    pub fn degenerate_count(&self) -> usize {
        self.degenerate.iter().filter(|d| **d).count()
    }
}

/// Track of an already complex (analytic) sequence sampled at `sample_rate_hz`.
pub fn track_from_analytic(values: &[Complex64], sample_rate_hz: f64) -> TfrTrack {
    let amp: Vec<f64> = values.iter().map(|c| c.norm()).collect();
    let phase = unwrap_phase(values);
    let mut freq: Vec<f64> = central_difference(&phase)
        .into_iter()
        .map(|d| d * sample_rate_hz / (2.0 * PI))
        .collect();
    let degenerate: Vec<bool> = amp.iter().map(|a| *a < DEGENERATE_AMPLITUDE).collect();
    for (f, d) in freq.iter_mut().zip(&degenerate) {
        if *d {
            *f = 0.0;
        }
    }
    TfrTrack {
        time: (0..values.len()).map(|r| r as f64 / sample_rate_hz).collect(),
        inst_amplitude: amp,
        inst_frequency_hz: freq,
        degenerate,
    }
}

/// Track of a real mode through its analytic signal.
pub fn mode_tfr(mode: &Signal) -> TfrTrack {
    track_from_analytic(analytic_signal(mode).values(), mode.sample_rate_hz())
}

/// Reference tracks of ground-truth components.
pub fn benchmark_tfr(components: &[Signal]) -> Vec<TfrTrack> {
    components.iter().map(mode_tfr).collect()
}

/// Amplitude deposited on a time x frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TfrRaster {
    pub time_axis: Vec<f64>,
    pub freq_axis: Vec<f64>,
    /// Row-major, one row of `freq_axis.len()` cells per time step.
    pub magnitude: Vec<f64>,
    /// Deposits whose frequency fell outside the axis and went to an edge cell.
    pub clipped: usize,
}

impl TfrRaster {
    pub fn at(&self, time_index: usize, freq_index: usize) -> f64 {
        self.magnitude[time_index * self.freq_axis.len() + freq_index]
    }

    pub fn total(&self) -> f64 {
        self.magnitude.iter().sum()
    }

    /// Long form `time,freq,magnitude`, one line per cell.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "time,freq,magnitude")?;
        let nf = self.freq_axis.len();
        for (i, t) in self.time_axis.iter().enumerate() {
            for (j, f) in self.freq_axis.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{}",
                    crate::export::fmt17(*t),
                    crate::export::fmt17(*f),
                    crate::export::fmt17(self.magnitude[i * nf + j])
                )?;
            }
        }
        Ok(())
    }

    /// 8-bit binary PGM with frequency increasing upwards and time to the
    /// right, scaled to the largest cell.
    pub fn write_pgm<W: Write>(&self, mut w: W) -> io::Result<()> {
        let nt = self.time_axis.len();
        let nf = self.freq_axis.len();
        let peak = self.magnitude.iter().cloned().fold(0.0, f64::max);
        write!(w, "P5\n{nt} {nf}\n255\n")?;
        let mut row = vec![0u8; nt];
        for j in (0..nf).rev() {
            for (i, px) in row.iter_mut().enumerate() {
                let v = self.magnitude[i * nf + j];
                *px = if peak > 0.0 {
                    (255.0 * v / peak).round() as u8
                } else {
                    0
                };
            }
            w.write_all(&row)?;
        }
        Ok(())
    }
}

/// Evenly spaced axis `start, start + step, ...` with `count` points.
pub fn uniform_axis(start: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| start + step * i as f64).collect()
}

/// Deposits every track sample at the nearest frequency cell; deposits from
/// different tracks add up.
pub fn raster_tfr(tracks: &[TfrTrack], freq_axis: &[f64]) -> Result<TfrRaster> {
    if freq_axis.is_empty() {
        return Err(invalid("frequency axis is empty"));
    }
    if freq_axis.windows(2).any(|p| p[0] >= p[1]) {
        return Err(invalid("frequency axis must be strictly increasing"));
    }
    let time_axis = tracks.first().map(|t| t.time.clone()).unwrap_or_default();
    if tracks.iter().any(|t| t.time != time_axis) {
        return Err(invalid("tracks do not share a time axis"));
    }
    let nf = freq_axis.len();
    let mut magnitude = vec![0.0; time_axis.len() * nf];
    let mut clipped = 0;
    let (lo, hi) = (freq_axis[0], freq_axis[nf - 1]);
    for t in tracks {
        for (i, (&a, &f)) in t.inst_amplitude.iter().zip(&t.inst_frequency_hz).enumerate() {
            let j = if f < lo {
                clipped += 1;
                0
            } else if f > hi {
                clipped += 1;
                nf - 1
            } else {
                nearest(freq_axis, f)
            };
            magnitude[i * nf + j] += a;
        }
    }
    Ok(TfrRaster {
        time_axis,
        freq_axis: freq_axis.to_vec(),
        magnitude,
        clipped,
    })
}

fn nearest(axis: &[f64], f: f64) -> usize {
    let p = axis.partition_point(|&x| x < f);
    if p == 0 {
        0
    } else if p == axis.len() {
        axis.len() - 1
    } else if f - axis[p - 1] <= axis[p] - f {
        p - 1
    } else {
        p
    }
}

/// Root-mean-square difference over all cells of two rasters on one grid.
pub fn raster_rmse(a: &TfrRaster, b: &TfrRaster) -> Result<f64> {
    if a.time_axis != b.time_axis || a.freq_axis != b.freq_axis {
        return Err(invalid("rasters are on different grids"));
    }
    crate::benchkit::rmse(&a.magnitude, &b.magnitude)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn median(mut v: Vec<f64>) -> f64 {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    }

    #[test]
    fn tone_track() {
        let s = Signal::from_fn(1000, 1000.0, |t| 2.5 * (2.0 * PI * 12.3 * t + 0.4).cos()).unwrap();
        let tr = mode_tfr(&s);
        let mid = 100..900;
        let f = median(tr.inst_frequency_hz[mid.clone()].to_vec());
        let a = median(tr.inst_amplitude[mid.clone()].to_vec());
        assert!((f - 12.3).abs() < 0.005 * 12.3);
        assert!((a - 2.5).abs() < 0.005 * 2.5);
    }

    #[test]
    fn whole_cycle_tone_track_is_flat() {
        let s = Signal::from_fn(1000, 1000.0, |t| 0.8 * (2.0 * PI * 12.0 * t).cos()).unwrap();
        let tr = mode_tfr(&s);
        for i in 100..900 {
            assert!((tr.inst_frequency_hz[i] - 12.0).abs() < 0.12);
            assert!((tr.inst_amplitude[i] - 0.8).abs() < 0.008);
        }
    }

    #[test]
    fn zero_signal_has_zero_frequency() {
        let s = Signal::new(vec![0.0; 16], 1.0).unwrap();
        let tr = mode_tfr(&s);
        assert!(tr.inst_amplitude.iter().all(|a| *a == 0.0));
        assert!(tr.inst_frequency_hz.iter().all(|f| *f == 0.0));
        assert_eq!(tr.degenerate_count(), 16);
    }

    #[test]
    fn constant_tracks_fill_rows() {
        let s1 = Signal::from_fn(200, 100.0, |t| (2.0 * PI * 10.0 * t).cos()).unwrap();
        let s2 = Signal::from_fn(200, 100.0, |t| 0.5 * (2.0 * PI * 30.0 * t).cos()).unwrap();
        let axis = uniform_axis(0.0, 0.25, 201);
        let tracks = benchmark_tfr(&[s1, s2]);
        let r = raster_tfr(&tracks, &axis).unwrap();
        let rows: Vec<usize> = (0..201).filter(|&j| (0..200).any(|i| r.at(i, j) > 0.0)).collect();
        assert_eq!(rows, vec![40, 120]);
        assert_eq!(r.clipped, 0);
        let mass: f64 = tracks.iter().flat_map(|t| t.inst_amplitude.iter()).sum();
        assert!((r.total() - mass).abs() < 1e-9 * mass);
    }

    #[test]
    fn out_of_range_is_clipped_and_counted() {
        let s = Signal::from_fn(64, 64.0, |t| (2.0 * PI * 20.0 * t).cos()).unwrap();
        let r = raster_tfr(&[mode_tfr(&s)], &uniform_axis(0.0, 1.0, 5)).unwrap();
        assert_eq!(r.clipped, 64);
        assert!((0..64).all(|i| r.at(i, 4) > 0.0));
    }

    #[test]
    fn pgm_header() {
        let r = TfrRaster {
            time_axis: vec![0.0, 1.0, 2.0],
            freq_axis: vec![0.0, 1.0],
            magnitude: vec![0.0, 1.0, 2.0, 0.0, 0.0, 0.0],
            clipped: 0,
        };
        let mut out = Vec::new();
        r.write_pgm(&mut out).unwrap();
        assert!(out.starts_with(b"P5\n3 2\n255\n"));
        assert_eq!(&out[out.len() - 6..], &[128, 0, 0, 0, 255, 0]);
    }
}
