//! Synthetic test signals, error metrics, the two-tone performance map and
//! timing comparisons.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::export::fmt17;
use crate::fdm::{fdm_scan, ScanDirection, DEFAULT_IF_TOLERANCE};
use crate::modes::Method;
use crate::signal::Signal;
use crate::spectral::spectrum_of;
use crate::tfr::{benchmark_tfr, mode_tfr, raster_rmse, raster_tfr, track_from_analytic, uniform_axis, TfrTrack};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SNR_DB: f64 = 10.0;
pub const DEFAULT_EPSILON: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalId {
    Sig1,
    Sig2,
    Sig3,
    Sig4,
    Sig5,
    Sig6,
}

impl SignalId {
    pub const ALL: [SignalId; 6] = [
        SignalId::Sig1,
        SignalId::Sig2,
        SignalId::Sig3,
        SignalId::Sig4,
        SignalId::Sig5,
        SignalId::Sig6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SignalId::Sig1 => "sig1",
            SignalId::Sig2 => "sig2",
            SignalId::Sig3 => "sig3",
            SignalId::Sig4 => "sig4",
            SignalId::Sig5 => "sig5",
            SignalId::Sig6 => "sig6",
        }
    }

    /// Mode counts used for EFD and EWT on each signal.
    pub fn mode_count(self, method: Method) -> usize {
        let ewt = matches!(method, Method::EwtMaxima | Method::EwtMinima);
        match (self, ewt) {
            (SignalId::Sig1, _) => 3,
            (SignalId::Sig2, false) => 3,
            (SignalId::Sig2, true) => 4,
            (SignalId::Sig3, _) => 2,
            (SignalId::Sig4, _) => 3,
            (SignalId::Sig5, false) => 3,
            (SignalId::Sig5, true) => 4,
            (SignalId::Sig6, false) => 2,
            (SignalId::Sig6, true) => 3,
        }
    }
}

impl fmt::Display for SignalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SignalId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SignalId::ALL
            .into_iter()
            .find(|id| id.name() == s.to_ascii_lowercase())
            .ok_or_else(|| invalid(format!("unknown test signal {s:?}")))
    }
}

/// Parameters of one synthetic signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestSignalSpec {
    pub id: SignalId,
    pub sample_rate_hz: f64,
    pub duration_s: f64,
    /// Noise seed (noisy signals only).
    pub seed: u64,
    pub snr_db: f64,
    /// Amplitude ratio of the second tone (two-tone signal only).
    pub a: f64,
    /// Frequency ratio of the second tone (two-tone signal only).
    pub lambda_r: f64,
}

impl TestSignalSpec {
    pub fn new(id: SignalId) -> Self {
        let (rate, dur) = match id {
            SignalId::Sig1 | SignalId::Sig2 | SignalId::Sig3 | SignalId::Sig4 => (1000.0, 1.0),
            SignalId::Sig5 => (50.0, 20.0),
            SignalId::Sig6 => (10.0, 300.0),
        };
        TestSignalSpec {
            id,
            sample_rate_hz: rate,
            duration_s: dur,
            seed: DEFAULT_SEED,
            snr_db: DEFAULT_SNR_DB,
            a: 1.0,
            lambda_r: 0.5,
        }
    }

    pub fn sig6(a: f64, lambda_r: f64) -> Self {
        TestSignalSpec {
            a,
            lambda_r,
            ..TestSignalSpec::new(SignalId::Sig6)
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        TestSignalSpec { seed, ..self }
    }

    pub fn sample_count(&self) -> usize {
        (self.sample_rate_hz * self.duration_s).round() as usize
    }
}

/// A generated signal with its noiseless components.
#[derive(Debug, Clone, PartialEq)]
pub struct TestSignal {
    pub spec: TestSignalSpec,
    pub signal: Signal,
    pub components: Vec<Signal>,
    pub noise: Option<Signal>,
}

pub fn generate(spec: &TestSignalSpec) -> Result<TestSignal> {
    if !(spec.sample_rate_hz > 0.0 && spec.duration_s > 0.0) {
        return Err(invalid("sample rate and duration must be positive"));
    }
    let n = spec.sample_count();
    let rate = spec.sample_rate_hz;
    let tone = |f: f64, amp: f64| Signal::from_fn(n, rate, move |t| amp * (2.0 * PI * f * t).cos());
    let components = match spec.id {
        SignalId::Sig1 => vec![
            Signal::from_fn(n, rate, |t| 6.0 * t)?,
            tone(12.0, 1.0)?,
            tone(25.0, 1.0)?,
        ],
        SignalId::Sig2 => vec![tone(10.0, 1.0)?, tone(12.0, 1.0)?, tone(25.0, 1.0)?],
        SignalId::Sig3 => vec![
            Signal::from_fn(n, rate, |t| 1.0 / (1.2 + (2.0 * PI * t).cos()))?,
            Signal::from_fn(n, rate, |t| {
                (32.0 * PI * t + 0.2 * (64.0 * PI * t).cos()).cos() / (1.5 + (2.0 * PI * t).sin())
            })?,
        ],
        SignalId::Sig4 => vec![
            Signal::from_fn(n, rate, |t| 6.0 * t)?,
            tone(4.0, 1.0)?,
            tone(20.0, 0.5)?,
        ],
        SignalId::Sig5 => vec![tone(1.1, 1.0)?, tone(1.3, 1.0)?, tone(3.1, 1.0)?],
        SignalId::Sig6 => {
            if !(spec.a > 0.0 && spec.lambda_r > 0.0) {
                return Err(invalid("amplitude and frequency ratios must be positive"));
            }
            vec![tone(1.0, 1.0)?, tone(spec.lambda_r, spec.a)?]
        }
    };
    let clean: Vec<f64> = (0..n)
        .map(|r| components.iter().map(|c| c.samples()[r]).sum())
        .collect();
    let noise = match spec.id {
        SignalId::Sig1 | SignalId::Sig2 => Some(Signal::new(white_noise(&clean, spec.snr_db, spec.seed)?, rate)?),
        _ => None,
    };
    let samples = match &noise {
        Some(d) => clean.iter().zip(d.samples()).map(|(a, b)| a + b).collect(),
        None => clean,
    };
    Ok(TestSignal {
        spec: *spec,
        signal: Signal::new(samples, rate)?,
        components,
        noise,
    })
}

/// Gaussian noise rescaled so that the realization has exactly the requested
/// SNR against `clean`.
fn white_noise(clean: &[f64], snr_db: f64, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..clean.len()).map(|_| StandardNormal.sample(&mut rng)).collect();
    let ps = mean_square(clean);
    let pn = mean_square(&raw);
    if pn == 0.0 {
        return Err(Error::Numeric("noise realization has zero power".into()));
    }
    let g = (ps / (pn * 10f64.powf(snr_db / 10.0))).sqrt();
    Ok(raw.into_iter().map(|v| v * g).collect())
}

fn mean_square(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64
}

/// Root-mean-square difference.
pub fn rmse(decomposed: &[f64], analytic: &[f64]) -> Result<f64> {
    if decomposed.len() != analytic.len() {
        return Err(invalid(format!(
            "length mismatch: {} vs {}",
            decomposed.len(),
            analytic.len()
        )));
    }
    if decomposed.is_empty() {
        return Err(invalid("cannot compare empty sequences"));
    }
    let s: f64 = decomposed.iter().zip(analytic).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok((s / decomposed.len() as f64).sqrt())
}

/// `||c1 - sig6c1|| / ||sig6c2||`.
pub fn q_ratio(c1: &[f64], sig6c1: &[f64], sig6c2: &[f64]) -> Result<f64> {
    if c1.len() != sig6c1.len() || c1.len() != sig6c2.len() {
        return Err(invalid("length mismatch"));
    }
    let den = sig6c2.iter().map(|v| v * v).sum::<f64>().sqrt();
    if den == 0.0 {
        return Err(invalid("second component has zero norm"));
    }
    let num = c1
        .iter()
        .zip(sig6c1)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(num / den)
}

/// 0 when the ratio is at most `epsilon`, otherwise 1.
pub fn q_value(c1: &[f64], sig6c1: &[f64], sig6c2: &[f64], epsilon: f64) -> Result<u8> {
    Ok(u8::from(q_ratio(c1, sig6c1, sig6c2)? > epsilon))
}

/// Power-weighted mean frequency in Hz, `None` for an all-zero sequence.
pub fn spectral_centroid_hz(x: &[f64], sample_rate_hz: f64) -> Option<f64> {
    let s = spectrum_of(x).ok()?;
    let (mut num, mut den) = (0.0, 0.0);
    for (k, c) in s.bins().iter().enumerate() {
        let p = c.norm_sqr() * s.multiplicity(k);
        num += p * k as f64 * sample_rate_hz / x.len() as f64;
        den += p;
    }
    (den > 0.0).then(|| num / den)
}

/// Assigns each component a mode. With at least as many modes as components
/// the assignment is injective and minimizes the summed RMSE; with fewer
/// modes every component takes its closest mode.
pub fn match_modes(modes: &[Vec<f64>], components: &[Vec<f64>]) -> Result<Vec<usize>> {
    if modes.is_empty() {
        return Err(invalid("no modes to match"));
    }
    let cost: Vec<Vec<f64>> = components
        .iter()
        .map(|c| modes.iter().map(|m| rmse(m, c)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    if modes.len() < components.len() {
        return Ok(cost
            .iter()
            .map(|row| (0..row.len()).min_by(|&a, &b| row[a].total_cmp(&row[b])).unwrap())
            .collect());
    }
    let mut best = (f64::INFINITY, Vec::new());
    let mut used = vec![false; modes.len()];
    let mut cur = Vec::with_capacity(components.len());
    search(&cost, &mut used, &mut cur, 0.0, &mut best);
    Ok(best.1)
}

fn search(cost: &[Vec<f64>], used: &mut [bool], cur: &mut Vec<usize>, acc: f64, best: &mut (f64, Vec<usize>)) {
    if acc >= best.0 {
        return;
    }
    let i = cur.len();
    if i == cost.len() {
        *best = (acc, cur.clone());
        return;
    }
    for j in 0..used.len() {
        if !used[j] {
            used[j] = true;
            cur.push(j);
            search(cost, used, cur, acc + cost[i][j], best);
            cur.pop();
            used[j] = false;
        }
    }
}

/// RMSE of every component against its matched mode, one column per method.
#[derive(Debug, Clone, PartialEq)]
pub struct RmseTable {
    pub signal: SignalId,
    pub methods: Vec<Method>,
    /// `values[component][method]`.
    pub values: Vec<Vec<f64>>,
    /// `assignments[method][component]` is the matched mode index.
    pub assignments: Vec<Vec<usize>>,
    pub mode_counts: Vec<usize>,
}

impl RmseTable {
    pub fn get(&self, component: usize, method: Method) -> Option<f64> {
        let j = self.methods.iter().position(|m| *m == method)?;
        self.values.get(component).map(|row| row[j])
    }

    /// Rows are components, columns methods.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let names: Vec<&str> = self.methods.iter().map(|m| m.name()).collect();
        writeln!(w, "component,{}", names.join(","))?;
        for (i, row) in self.values.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| fmt17(*v)).collect();
            writeln!(w, "{}c{},{}", self.signal.name(), i + 1, cells.join(","))?;
        }
        Ok(())
    }
}

/// Decomposes one test signal with every method and scores the matched modes.
pub fn rmse_table(spec: &TestSignalSpec, methods: &[Method]) -> Result<RmseTable> {
    let ts = generate(spec)?;
    let comps: Vec<Vec<f64>> = ts.components.iter().map(|c| c.samples().to_vec()).collect();
    let mut values = vec![Vec::with_capacity(methods.len()); comps.len()];
    let mut assignments = Vec::with_capacity(methods.len());
    let mut mode_counts = Vec::with_capacity(methods.len());
    for &m in methods {
        let set = m.decompose(&ts.signal, spec.id.mode_count(m))?;
        let modes = set.modes_with_offset();
        let assign = match_modes(&modes, &comps)?;
        for (i, &j) in assign.iter().enumerate() {
            values[i].push(rmse(&modes[j], &comps[i])?);
        }
        assignments.push(assign);
        mode_counts.push(set.len());
    }
    Ok(RmseTable {
        signal: spec.id,
        methods: methods.to_vec(),
        values,
        assignments,
        mode_counts,
    })
}

/// Axes of the two-tone performance map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QGrid {
    pub a_axis: Vec<f64>,
    pub lambda_axis: Vec<f64>,
}

impl QGrid {
    /// `na` log-spaced amplitude ratios in [0.01, 100] and `nl` evenly spaced
    /// frequency ratios in [0.01, 1].
    pub fn standard(na: usize, nl: usize) -> Result<Self> {
        if na < 2 || nl < 2 {
            return Err(invalid("each axis needs at least two points"));
        }
        let a_axis = (0..na)
            .map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / (na - 1) as f64))
            .collect();
        let lambda_axis = (0..nl).map(|j| 0.01 + 0.99 * j as f64 / (nl - 1) as f64).collect();
        Ok(QGrid { a_axis, lambda_axis })
    }

    pub fn new(a_axis: Vec<f64>, lambda_axis: Vec<f64>) -> Result<Self> {
        let ok_a = a_axis.iter().all(|a| (0.01 - 1e-12..=100.0 + 1e-9).contains(a));
        let ok_l = lambda_axis.iter().all(|l| (0.01 - 1e-12..=1.0 + 1e-12).contains(l));
        if a_axis.is_empty() || lambda_axis.is_empty() || !ok_a || !ok_l {
            return Err(invalid(
                "grid must be non-empty with a in [0.01, 100] and lambda in [0.01, 1]",
            ));
        }
        Ok(QGrid { a_axis, lambda_axis })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellError {
    pub a_index: usize,
    pub lambda_index: usize,
    pub message: String,
}

/// Binary acceptability per `(a, lambda_r)` cell, stored `a`-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QMap {
    pub method: Method,
    pub grid: QGrid,
    pub epsilon: f64,
    /// Error ratio per cell; infinite where decomposition failed.
    pub ratios: Vec<f64>,
    pub q: Vec<u8>,
    pub errors: Vec<CellError>,
}

impl QMap {
    pub fn q(&self, a_index: usize, lambda_index: usize) -> u8 {
        self.q[a_index * self.grid.lambda_axis.len() + lambda_index]
    }

    pub fn failed_fraction(&self) -> f64 {
        self.q.iter().filter(|&&v| v == 1).count() as f64 / self.q.len() as f64
    }

    /// Same map thresholded at another epsilon.
    pub fn with_epsilon(&self, epsilon: f64) -> QMap {
        QMap {
            epsilon,
            q: self
                .ratios
                .iter()
                .map(|r| u8::from(r.is_nan() || *r > epsilon))
                .collect(),
            ..self.clone()
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "a,lambda_r,q,ratio")?;
        let nl = self.grid.lambda_axis.len();
        for (i, a) in self.grid.a_axis.iter().enumerate() {
            for (j, l) in self.grid.lambda_axis.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{},{}",
                    fmt17(*a),
                    fmt17(*l),
                    self.q[i * nl + j],
                    fmt17(self.ratios[i * nl + j])
                )?;
            }
        }
        Ok(())
    }

    /// One pixel per cell, `a` increasing upwards, `lambda_r` to the right;
    /// white where q = 1.
    pub fn write_pgm<W: Write>(&self, mut w: W) -> io::Result<()> {
        let na = self.grid.a_axis.len();
        let nl = self.grid.lambda_axis.len();
        write!(w, "P5\n{nl} {na}\n255\n")?;
        for i in (0..na).rev() {
            let row: Vec<u8> = (0..nl).map(|j| 255 * self.q[i * nl + j]).collect();
            w.write_all(&row)?;
        }
        Ok(())
    }
}

/// Index of the mode whose spectral centroid is closest to `target_hz`.
pub fn select_mode_near(modes: &[Vec<f64>], sample_rate_hz: f64, target_hz: f64) -> Option<usize> {
    modes
        .iter()
        .enumerate()
        .filter_map(|(i, m)| spectral_centroid_hz(m, sample_rate_hz).map(|c| (i, (c - target_hz).abs())))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}

/// Ratio for one cell of the map.
pub fn q_cell(method: Method, a: f64, lambda_r: f64) -> Result<f64> {
    let ts = generate(&TestSignalSpec::sig6(a, lambda_r))?;
    let set = method.decompose(&ts.signal, SignalId::Sig6.mode_count(method))?;
    let modes = set.modes_with_offset();
    let c1 = select_mode_near(&modes, ts.signal.sample_rate_hz(), 1.0)
        .ok_or_else(|| Error::Numeric("every mode is zero".into()))?;
    q_ratio(&modes[c1], ts.components[0].samples(), ts.components[1].samples())
}

/// Threads for map evaluation: `EFDKIT_THREADS` if set, else rayon's default.
pub fn thread_count() -> usize {
    std::env::var("EFDKIT_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Evaluates every cell. Cells whose decomposition fails get q = 1 and an
/// error note; the map is always complete.
pub fn q_map(method: Method, grid: &QGrid, epsilon: f64) -> Result<QMap> {
    let nl = grid.lambda_axis.len();
    let cells: Vec<(usize, usize)> = (0..grid.a_axis.len())
        .flat_map(|i| (0..nl).map(move |j| (i, j)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| Error::Numeric(format!("thread pool: {e}")))?;
    let results: Vec<std::result::Result<f64, String>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(i, j)| q_cell(method, grid.a_axis[i], grid.lambda_axis[j]).map_err(|e| e.to_string()))
            .collect()
    });
    let mut ratios = Vec::with_capacity(cells.len());
    let mut errors = Vec::new();
    for (&(i, j), r) in cells.iter().zip(results) {
        match r {
            Ok(v) => ratios.push(v),
            Err(message) => {
                ratios.push(f64::INFINITY);
                errors.push(CellError {
                    a_index: i,
                    lambda_index: j,
                    message,
                });
            }
        }
    }
    let q = ratios.iter().map(|r| u8::from(r.is_nan() || *r > epsilon)).collect();
    Ok(QMap {
        method,
        grid: grid.clone(),
        epsilon,
        ratios,
        q,
        errors,
    })
}

/// Median wall-clock decomposition times, `seconds[signal][method]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingTable {
    pub signals: Vec<SignalId>,
    pub methods: Vec<Method>,
    pub repetitions: usize,
    pub median_seconds: Vec<Vec<f64>>,
    pub samples: Vec<Vec<Vec<f64>>>,
}

impl TimingTable {
    pub fn median(&self, signal: SignalId, method: Method) -> Option<f64> {
        let i = self.signals.iter().position(|s| *s == signal)?;
        let j = self.methods.iter().position(|m| *m == method)?;
        Some(self.median_seconds[i][j])
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let names: Vec<&str> = self.methods.iter().map(|m| m.name()).collect();
        writeln!(w, "signal,{}", names.join(","))?;
        for (s, row) in self.signals.iter().zip(&self.median_seconds) {
            let cells: Vec<String> = row.iter().map(|v| fmt17(*v)).collect();
            writeln!(w, "{},{}", s.name(), cells.join(","))?;
        }
        Ok(())
    }
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Times decomposition only; generation happens first and one warm-up run per
/// method is discarded. Runs are strictly sequential.
pub fn time_methods(specs: &[TestSignalSpec], methods: &[Method], repetitions: usize) -> Result<TimingTable> {
    if repetitions < 3 {
        return Err(invalid("at least three repetitions are required"));
    }
    let mut medians = Vec::new();
    let mut all = Vec::new();
    for spec in specs {
        let ts = generate(spec)?;
        let mut row = Vec::new();
        let mut row_samples = Vec::new();
        for &m in methods {
            let n = spec.id.mode_count(m);
            std::hint::black_box(m.decompose(&ts.signal, n)?);
            let mut times = Vec::with_capacity(repetitions);
            for _ in 0..repetitions {
                let t0 = Instant::now();
                std::hint::black_box(m.decompose(std::hint::black_box(&ts.signal), n)?);
                times.push(t0.elapsed().as_secs_f64());
            }
            row.push(median(&times));
            row_samples.push(times);
        }
        medians.push(row);
        all.push(row_samples);
    }
    Ok(TimingTable {
        signals: specs.iter().map(|s| s.id).collect(),
        methods: methods.to_vec(),
        repetitions,
        median_seconds: medians,
        samples: all,
    })
}

/// Frequency axis for the two-component non-stationary signal: 0 to 50 Hz in
/// 0.25 Hz steps.
pub fn sig3_freq_axis() -> Vec<f64> {
    uniform_axis(0.0, 0.25, 201)
}

/// Tracks of a method's output. FDM tracks come straight from its band
/// analytic signals; the others go through the analytic signal of each mode.
pub fn method_tracks(method: Method, signal: &Signal, n_modes: usize) -> Result<Vec<TfrTrack>> {
    let rate = signal.sample_rate_hz();
    match method {
        Method::FdmLth | Method::FdmHtl => {
            let dir = if method == Method::FdmLth {
                ScanDirection::Lth
            } else {
                ScanDirection::Htl
            };
            let set = fdm_scan(signal, dir, DEFAULT_IF_TOLERANCE)?;
            Ok(set.analytic().iter().map(|z| track_from_analytic(z, rate)).collect())
        }
        _ => Ok(method
            .decompose(signal, n_modes)?
            .modes()
            .iter()
            .map(mode_tfr)
            .collect()),
    }
}

/// RMSE between each method's raster and the benchmark raster.
pub fn tfr_rmse(spec: &TestSignalSpec, methods: &[Method], freq_axis: &[f64]) -> Result<Vec<(Method, f64)>> {
    let ts = generate(spec)?;
    let reference = raster_tfr(&benchmark_tfr(&ts.components), freq_axis)?;
    methods
        .iter()
        .map(|&m| {
            let tracks = method_tracks(m, &ts.signal, spec.id.mode_count(m))?;
            let r = raster_tfr(&tracks, freq_axis)?;
            Ok((m, raster_rmse(&r, &reference)?))
        })
        .collect()
}
