use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use efdkit::benchkit::{generate, SignalId, TestSignalSpec, DEFAULT_SEED};
use efdkit::export::{read_signal_csv, write_modes_csv, write_series_csv, write_tracks_csv};
use efdkit::segmentation::segment;
use efdkit::tfr::uniform_axis;
use efdkit::{forward_spectrum, raster_tfr, MagnitudeProfile, Method, Signal, Technique};
use serde_json::json;

mod failure;
mod reproduce;

use failure::{Failure, Outcome};

#[derive(Parser)]
#[command(
    name = "efdkit",
    version,
    about = "Empirical Fourier, empirical wavelet and Fourier decomposition of 1-D signals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a signal into modes.
    Decompose(DecomposeArgs),
    /// Print or save the spectrum segmentation of a signal.
    Segment(SegmentArgs),
    /// Instantaneous amplitude and frequency tracks of each mode.
    Tfr(TfrArgs),
    /// Regenerate one of the benchmark experiments.
    Reproduce(reproduce::ReproduceArgs),
    /// Median decomposition times on the benchmark signals.
    Timing(reproduce::TimingArgs),
    /// Write one of the synthetic test signals as `time,value` CSV.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct InputArgs {
    /// CSV with `value` or `time,value` rows.
    input: PathBuf,
    /// Sample rate in Hz; required for single-column input.
    #[arg(long)]
    rate: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Number of modes (EFD and EWT).
    #[arg(long)]
    modes: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum TechniqueArg {
    LocalMaxima,
    LowestMinima,
    Improved,
}

impl From<TechniqueArg> for Technique {
    fn from(t: TechniqueArg) -> Self {
        match t {
            TechniqueArg::LocalMaxima => Technique::LocalMaxima,
            TechniqueArg::LowestMinima => Technique::LowestMinima,
            TechniqueArg::Improved => Technique::Improved,
        }
    }
}

#[derive(Args)]
struct SegmentArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "improved")]
    technique: TechniqueArg,
    #[arg(long)]
    modes: usize,
    /// Directory for `segmentation.json`; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TfrArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_method)]
    method: Method,
    #[arg(long)]
    modes: Option<usize>,
    /// Top of the raster frequency axis in Hz (default: Nyquist).
    #[arg(long)]
    fmax: Option<f64>,
    /// Number of raster frequency cells.
    #[arg(long, default_value_t = 201)]
    fbins: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct GenerateArgs {
    /// sig1 .. sig6
    #[arg(value_parser = parse_signal)]
    signal: SignalId,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Amplitude ratio of the second tone of sig6.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Frequency ratio of the second tone of sig6.
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: efdkit::Error| e.to_string())
}

fn parse_signal(s: &str) -> Result<SignalId, String> {
    s.parse().map_err(|e: efdkit::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decompose(a) => decompose(a),
        Command::Segment(a) => segment_cmd(a),
        Command::Tfr(a) => tfr(a),
        Command::Reproduce(a) => reproduce::run(a),
        Command::Timing(a) => reproduce::timing(a),
        Command::Generate(a) => generate_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("efdkit: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_input(args: &InputArgs) -> Outcome<Signal> {
    let file =
        File::open(&args.input).map_err(|e| Failure::invalid(format!("cannot open {}: {e}", args.input.display())))?;
    Ok(read_signal_csv(io::BufReader::new(file), args.rate)?)
}

fn mode_count(method: Method, modes: Option<usize>) -> Outcome<usize> {
    match modes {
        Some(0) => Err(Failure::usage("--modes must be at least 1")),
        Some(n) => Ok(n),
        None if method.needs_mode_count() => Err(Failure::usage(format!("--modes is required for {method}"))),
        None => Ok(0),
    }
}

pub(crate) fn create(dir: &Path, name: &str) -> Outcome<BufWriter<File>> {
    fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| Failure::io(&path, e))
}

pub(crate) fn write_file(
    dir: &Path,
    name: &str,
    f: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>,
) -> Outcome<()> {
    let mut w = create(dir, name)?;
    f(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Failure::io(&dir.join(name), e))
}

pub(crate) fn write_json(dir: &Path, name: &str, value: &serde_json::Value) -> Outcome<()> {
    write_file(dir, name, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)
    })
}

fn decompose(args: DecomposeArgs) -> Outcome<()> {
    let signal = read_input(&args.input)?;
    let n = mode_count(args.method, args.modes)?;
    let set = args.method.decompose(&signal, n)?;
    let rate = signal.sample_rate_hz();
    match args.format {
        Format::Csv => {
            write_file(&args.out, "modes.csv", |w| write_modes_csv(&set, w))?;
            write_file(&args.out, "residual.csv", |w| {
                write_series_csv("residual", set.residual(), rate, w)
            })?;
        }
        Format::Json => {
            let modes: Vec<&[f64]> = set.modes().iter().map(|m| m.samples()).collect();
            write_json(
                &args.out,
                "modes.json",
                &json!({
                    "method": args.method.name(),
                    "sample_rate_hz": rate,
                    "modes": modes,
                    "residual": set.residual(),
                    "offset": set.offset(),
                    "bands": set.bands(),
                }),
            )?;
        }
    }
    if let Some(seg) = set.segmentation() {
        write_json(&args.out, "segmentation.json", &seg.to_json(rate))?;
    }
    // relative error of modes plus residual against the input
    let total: Vec<f64> = set.sum().iter().zip(set.residual()).map(|(a, b)| a + b).collect();
    println!("{:.16e}", relative_error(signal.samples(), &total));
    Ok(())
}

fn relative_error(x: &[f64], y: &[f64]) -> f64 {
    let num: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let den: f64 = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

fn segment_cmd(args: SegmentArgs) -> Outcome<()> {
    if args.modes == 0 {
        return Err(Failure::usage("--modes must be at least 1"));
    }
    let signal = read_input(&args.input)?;
    let profile = MagnitudeProfile::from_spectrum(&forward_spectrum(&signal));
    let seg = segment(&profile, args.technique.into(), args.modes)?;
    let value = seg.to_json(signal.sample_rate_hz());
    match args.out {
        Some(dir) => write_json(&dir, "segmentation.json", &value),
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("JSON values serialize")
            );
            Ok(())
        }
    }
}

fn tfr(args: TfrArgs) -> Outcome<()> {
    let signal = read_input(&args.input)?;
    let n = mode_count(args.method, args.modes)?;
    if args.fbins < 2 {
        return Err(Failure::usage("--fbins must be at least 2"));
    }
    let fmax = args.fmax.unwrap_or(signal.sample_rate_hz() / 2.0);
    if !(fmax > 0.0 && fmax.is_finite()) {
        return Err(Failure::usage("--fmax must be positive"));
    }
    let tracks = efdkit::benchkit::method_tracks(args.method, &signal, n)?;
    let axis = uniform_axis(0.0, fmax / (args.fbins - 1) as f64, args.fbins);
    let raster = raster_tfr(&tracks, &axis)?;
    match args.format {
        Format::Csv => write_file(&args.out, "tracks.csv", |w| write_tracks_csv(&tracks, w))?,
        Format::Json => {
            let value: Vec<serde_json::Value> = tracks
                .iter()
                .map(|t| {
                    json!({
                        "time": t.time,
                        "amplitude": t.inst_amplitude,
                        "frequency_hz": t.inst_frequency_hz,
                        "degenerate": t.degenerate,
                    })
                })
                .collect();
            write_json(&args.out, "tracks.json", &json!(value))?;
        }
    }
    write_file(&args.out, "tfr.pgm", |w| raster.write_pgm(w))?;
    println!("{} tracks, {} clipped raster deposits", tracks.len(), raster.clipped);
    Ok(())
}

fn generate_cmd(args: GenerateArgs) -> Outcome<()> {
    let spec = TestSignalSpec {
        a: args.a,
        lambda_r: args.lambda,
        ..TestSignalSpec::new(args.signal).with_seed(args.seed)
    };
    let ts = generate(&spec)?;
    let rate = ts.signal.sample_rate_hz();
    match args.out {
        Some(path) => {
            let file = File::create(&path).map_err(|e| Failure::io(&path, e))?;
            let mut w = BufWriter::new(file);
            write_series_csv("value", ts.signal.samples(), rate, &mut w)
                .and_then(|_| w.flush())
                .map_err(|e| Failure::io(&path, e))
        }
        None => {
            let stdout = io::stdout();
            write_series_csv("value", ts.signal.samples(), rate, stdout.lock())
                .map_err(|e| Failure::io(Path::new("<stdout>"), e))
        }
    }
}
