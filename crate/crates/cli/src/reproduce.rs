use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use efdkit::benchkit::{
    generate, q_map, rmse_table, sig3_freq_axis, tfr_rmse, time_methods, QGrid, RmseTable, SignalId, TestSignalSpec,
    TimingTable, DEFAULT_EPSILON, DEFAULT_SEED,
};
use efdkit::export::fmt17;
use efdkit::segmentation::{segment_improved, segment_lowest_minima};
use efdkit::{forward_spectrum, MagnitudeProfile, Method};
use serde_json::{json, Value};

use crate::failure::{Failure, Outcome};
use crate::{write_file, write_json, Format};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Table2,
    Table3,
    Table4,
    Table5,
    Table6,
    Fig6,
    Fig7,
    Fig14,
}

impl Experiment {
    fn name(self) -> &'static str {
        match self {
            Experiment::Table2 => "table2",
            Experiment::Table3 => "table3",
            Experiment::Table4 => "table4",
            Experiment::Table5 => "table5",
            Experiment::Table6 => "table6",
            Experiment::Fig6 => "fig6",
            Experiment::Fig7 => "fig7",
            Experiment::Fig14 => "fig14",
        }
    }
}

#[derive(Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    experiment: Experiment,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Noise seed for the noisy signals.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Performance map size as `<amplitude cells>x<frequency cells>`.
    #[arg(long, default_value = "32x32", value_parser = parse_grid)]
    grid: (usize, usize),
    /// Threshold on the performance-map error ratio.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Timed runs per method and signal.
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
pub struct TimingArgs {
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or("expected <rows>x<columns>")?;
    let a: usize = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a < 2 || b < 2 {
        return Err("each grid axis needs at least two cells".into());
    }
    Ok((a, b))
}

pub fn run(args: ReproduceArgs) -> Outcome<()> {
    if args.epsilon.is_nan() || args.epsilon < 0.0 {
        return Err(Failure::usage("--epsilon must be non-negative"));
    }
    let mut files = Vec::new();
    let mut extra = json!({});
    match args.experiment {
        Experiment::Table2 => files.push(table(&args, SignalId::Sig3, "table2")?),
        Experiment::Table3 => files.push(table(&args, SignalId::Sig4, "table3")?),
        Experiment::Table4 => files.push(table(&args, SignalId::Sig5, "table4")?),
        Experiment::Table5 => {
            let methods = Method::ALL;
            let rows = tfr_rmse(&TestSignalSpec::new(SignalId::Sig3), &methods, &sig3_freq_axis())?;
            let name = match args.format {
                Format::Csv => {
                    write_file(&args.out, "table5.csv", |w| {
                        writeln!(w, "method,tfr_rmse")?;
                        for (m, v) in &rows {
                            writeln!(w, "{},{}", m.name(), fmt17(*v))?;
                        }
                        Ok(())
                    })?;
                    "table5.csv"
                }
                Format::Json => {
                    let v: Vec<Value> = rows
                        .iter()
                        .map(|(m, v)| json!({"method": m.name(), "tfr_rmse": v}))
                        .collect();
                    write_json(&args.out, "table5.json", &json!(v))?;
                    "table5.json"
                }
            };
            for (m, v) in &rows {
                println!("{:<11} {}", m.name(), fmt17(*v));
            }
            files.push(name.to_string());
        }
        Experiment::Table6 => {
            files.push(timing_table(&args.out, args.reps, args.format, "table6")?);
            extra = json!({"repetitions": args.reps});
        }
        Experiment::Fig6 => files.extend(segmentations(&args, SignalId::Sig1, "fig6")?),
        Experiment::Fig7 => files.extend(segmentations(&args, SignalId::Sig2, "fig7")?),
        Experiment::Fig14 => {
            let (na, nl) = args.grid;
            let grid = QGrid::standard(na, nl)?;
            let mut fractions = serde_json::Map::new();
            for m in Method::ALL {
                let map = q_map(m, &grid, args.epsilon)?;
                let stem = format!("fig14_{}", m.name());
                write_file(&args.out, &format!("{stem}.csv"), |w| map.write_csv(w))?;
                write_file(&args.out, &format!("{stem}.pgm"), |w| map.write_pgm(w))?;
                files.push(format!("{stem}.csv"));
                files.push(format!("{stem}.pgm"));
                println!(
                    "{:<11} q = 1 in {:.4} of cells, {} failed decompositions",
                    m.name(),
                    map.failed_fraction(),
                    map.errors.len()
                );
                fractions.insert(m.name().into(), json!(map.failed_fraction()));
            }
            extra = json!({"grid": [na, nl], "epsilon": args.epsilon, "q1_fraction": fractions});
        }
    }
    let mut manifest = json!({
        "experiment": args.experiment.name(),
        "efdkit_version": env!("CARGO_PKG_VERSION"),
        "seed": args.seed,
        "files": files,
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut manifest, extra) {
        m.extend(e);
    }
    write_json(
        &args.out,
        &format!("{}_manifest.json", args.experiment.name()),
        &manifest,
    )
}

pub fn timing(args: TimingArgs) -> Outcome<()> {
    timing_table(&args.out, args.reps, args.format, "timing").map(|_| ())
}

fn timing_table(out: &Path, reps: usize, format: Format, stem: &str) -> Outcome<String> {
    let specs: Vec<TestSignalSpec> = [SignalId::Sig3, SignalId::Sig4, SignalId::Sig5]
        .into_iter()
        .map(TestSignalSpec::new)
        .collect();
    let t: TimingTable = time_methods(&specs, &Method::ALL, reps)?;
    for (s, row) in t.signals.iter().zip(&t.median_seconds) {
        let cells: Vec<String> = t
            .methods
            .iter()
            .zip(row)
            .map(|(m, v)| format!("{m} {v:.3e} s"))
            .collect();
        println!("{s}: {}", cells.join(", "));
    }
    match format {
        Format::Csv => {
            let name = format!("{stem}.csv");
            write_file(out, &name, |w| t.write_csv(w))?;
            Ok(name)
        }
        Format::Json => {
            let name = format!("{stem}.json");
            write_json(out, &name, &serde_json::to_value(&t).expect("timing table serializes"))?;
            Ok(name)
        }
    }
}

fn table(args: &ReproduceArgs, id: SignalId, stem: &str) -> Outcome<String> {
    let t: RmseTable = rmse_table(&TestSignalSpec::new(id).with_seed(args.seed), &Method::ALL)?;
    for (i, row) in t.values.iter().enumerate() {
        let cells: Vec<String> = t.methods.iter().zip(row).map(|(m, v)| format!("{m} {v:.3e}")).collect();
        println!("C{}: {}", i + 1, cells.join(", "));
    }
    match args.format {
        Format::Csv => {
            let name = format!("{stem}.csv");
            write_file(&args.out, &name, |w| t.write_csv(w))?;
            Ok(name)
        }
        Format::Json => {
            let name = format!("{stem}.json");
            let methods: Vec<&str> = t.methods.iter().map(|m| m.name()).collect();
            write_json(
                &args.out,
                &name,
                &json!({"signal": id.name(), "methods": methods, "rmse": t.values, "mode_counts": t.mode_counts}),
            )?;
            Ok(name)
        }
    }
}

/// Lowest-minima and improved segmentations of a noisy test signal, plus its
/// magnitude spectrum.
fn segmentations(args: &ReproduceArgs, id: SignalId, stem: &str) -> Outcome<Vec<String>> {
    let ts = generate(&TestSignalSpec::new(id).with_seed(args.seed))?;
    let rate = ts.signal.sample_rate_hz();
    let spectrum = forward_spectrum(&ts.signal);
    let profile = MagnitudeProfile::from_spectrum(&spectrum);
    let minima = segment_lowest_minima(&profile, id.mode_count(Method::EwtMinima))?;
    let improved = segment_improved(&profile, id.mode_count(Method::Efd))?;
    let mut files = Vec::new();
    for (tag, seg) in [("lowest_minima", &minima), ("improved", &improved)] {
        let name = format!("{stem}_{tag}.json");
        write_json(&args.out, &name, &seg.to_json(rate))?;
        println!("{tag}: boundaries {:?} Hz", seg.boundaries_hz(rate));
        files.push(name);
    }
    let name = format!("{stem}_spectrum.csv");
    write_file(&args.out, &name, |w| {
        writeln!(w, "freq_hz,magnitude")?;
        for (k, m) in profile.magnitudes().iter().enumerate() {
            writeln!(w, "{},{}", fmt17(k as f64 * rate / ts.signal.len() as f64), fmt17(*m))?;
        }
        Ok(())
    })?;
    files.push(name);
    Ok(files)
}
