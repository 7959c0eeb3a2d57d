//! CSV input and output of signals, modes and tracks.

use std::io::{self, Read, Write};

use crate::error::{invalid, Result};
use crate::modes::ModeSet;
use crate::signal::Signal;
use crate::tfr::TfrTrack;

/// Relative jitter allowed between consecutive time stamps.
pub const TIME_JITTER: f64 = 1e-9;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Reads either `value` rows (then `sample_rate_hz` is required) or
/// `time,value` rows with uniform time stamps. A non-numeric first row is
/// taken as a header.
pub fn read_signal_csv<R: Read>(input: R, sample_rate_hz: Option<f64>) -> Result<Signal> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| invalid(format!("CSV row {}: {e}", i + 1)))?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => rows.push(v),
            Err(_) if i == 0 => continue,
            Err(e) => return Err(invalid(format!("CSV row {}: {e}", i + 1))),
        }
    }
    if rows.is_empty() {
        return Err(invalid("input has no samples"));
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(invalid("rows have differing column counts"));
    }
    match width {
        1 => {
            let rate = sample_rate_hz.ok_or_else(|| invalid("single-column input needs a sample rate"))?;
            Signal::new(rows.into_iter().map(|r| r[0]).collect(), rate)
        }
        2 => {
            let t: Vec<f64> = rows.iter().map(|r| r[0]).collect();
            let x: Vec<f64> = rows.iter().map(|r| r[1]).collect();
            let rate = match (uniform_rate(&t)?, sample_rate_hz) {
                (Some(r), Some(given)) if (r - given).abs() > 1e-6 * given => {
                    return Err(invalid(format!("time column implies {r} Hz but {given} Hz was given")))
                }
                (Some(r), _) => r,
                (None, Some(given)) => given,
                (None, None) => return Err(invalid("a single timed sample needs a sample rate")),
            };
            Signal::new(x, rate)
        }
        n => Err(invalid(format!("expected 1 or 2 columns, got {n}"))),
    }
}

fn uniform_rate(t: &[f64]) -> Result<Option<f64>> {
    if t.len() < 2 {
        return Ok(None);
    }
    let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid("time stamps must increase"));
    }
    for (i, w) in t.windows(2).enumerate() {
        if ((w[1] - w[0]) - dt).abs() > TIME_JITTER * dt {
            return Err(invalid(format!("time stamps are not uniform at row {}", i + 2)));
        }
    }
    Ok(Some(1.0 / dt))
}

/// `time,mode_1,...,mode_N`.
pub fn write_modes_csv<W: Write>(modes: &ModeSet, mut w: W) -> io::Result<()> {
    let names: Vec<String> = (1..=modes.len()).map(|i| format!("mode_{i}")).collect();
    writeln!(w, "time,{}", names.join(","))?;
    let times = modes.modes()[0].times();
    for (r, t) in times.iter().enumerate() {
        let row: Vec<String> = modes.modes().iter().map(|m| fmt17(m.samples()[r])).collect();
        writeln!(w, "{},{}", fmt17(*t), row.join(","))?;
    }
    Ok(())
}

/// `time,<name>` for one series sampled at `sample_rate_hz`.
pub fn write_series_csv<W: Write>(name: &str, values: &[f64], sample_rate_hz: f64, mut w: W) -> io::Result<()> {
    writeln!(w, "time,{name}")?;
    for (r, v) in values.iter().enumerate() {
        writeln!(w, "{},{}", fmt17(r as f64 / sample_rate_hz), fmt17(*v))?;
    }
    Ok(())
}

/// `mode,time,amplitude,frequency_hz,degenerate` for every track sample.
pub fn write_tracks_csv<W: Write>(tracks: &[TfrTrack], mut w: W) -> io::Result<()> {
    writeln!(w, "mode,time,amplitude,frequency_hz,degenerate")?;
    for (i, tr) in tracks.iter().enumerate() {
        for r in 0..tr.len() {
            writeln!(
                w,
                "{},{},{},{},{}",
                i + 1,
                fmt17(tr.time[r]),
                fmt17(tr.inst_amplitude[r]),
                fmt17(tr.inst_frequency_hz[r]),
                u8::from(tr.degenerate[r])
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt17(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn two_columns_with_header() {
        let s = read_signal_csv("t,x\n0,1\n0.001,2\n0.002,3\n".as_bytes(), None).unwrap();
        assert_eq!(s.samples(), &[1.0, 2.0, 3.0]);
        assert!((s.sample_rate_hz() - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn one_column_needs_rate() {
        assert!(read_signal_csv("1\n2\n".as_bytes(), None).is_err());
        let s = read_signal_csv("1\n2\n".as_bytes(), Some(5.0)).unwrap();
        assert_eq!(s.sample_rate_hz(), 5.0);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(read_signal_csv("".as_bytes(), Some(1.0)).is_err());
        assert!(read_signal_csv("x\n".as_bytes(), Some(1.0)).is_err());
        assert!(read_signal_csv("0,1\n1,2\n2.5,3\n".as_bytes(), None).is_err());
        assert!(read_signal_csv("1\nabc\n".as_bytes(), Some(1.0)).is_err());
        assert!(read_signal_csv("0,1,2\n".as_bytes(), Some(1.0)).is_err());
    }
}
