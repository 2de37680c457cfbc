//! `st2d`: run FER sweeps and presets, query the latency model, and turn
//! result CSVs into plot-ready series.
//!
//! Exit status is 0 on success, 1 on invalid input and 2 on I/O failure.
//! Output files are written only after every input has been validated and
//! the simulation has finished.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use st2d::harness::csv::{format_csv, format_labeled_csv, read_csv, CsvRow};
use st2d::harness::config_file::parse_points;
use st2d::harness::{parse_config, preset, run_sweep, FerRecord, HarnessError, SimConfig};
use st2d::latency::LatencyModel;

#[derive(Debug, Parser)]
#[command(name = "st2d", version, about = "Spatiotemporal 2-D polar coding simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the Eb/N0 sweep described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Run every curve of a named preset into one labeled CSV.
    Preset {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Replace the preset's Eb/N0 grid (comma list or start:step:stop).
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Print the decoding latency D and the minimum latency D_min.
    Latency {
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        gamma: f64,
        /// Time-domain codeword lengths, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        time_lens: Vec<usize>,
        /// Space-domain codeword lengths, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        space_lens: Vec<usize>,
        /// Trellis width M_bit for D_min (default: shortest time length).
        #[arg(long)]
        width: Option<usize>,
        /// Layer count L for D_min (default: shortest space length).
        #[arg(long)]
        layers: Option<usize>,
    },
    /// Convert a result CSV into whitespace-separated (ebn0, fer) series.
    Plotdata {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct RunFlags {
    /// Override the stop rule's frame-error target.
    #[arg(long)]
    min_errors: Option<u64>,
    /// Override the stop rule's frame cap.
    #[arg(long)]
    max_frames: Option<u64>,
    /// Record wall-clock seconds (otherwise written as 0 so that reruns are
    /// byte-identical).
    #[arg(long)]
    timing: bool,
}

impl RunFlags {
    fn apply(&self, cfg: &mut SimConfig, seed: Option<u64>) -> Result<(), HarnessError> {
        if let Some(n) = self.min_errors {
            cfg.stop_rule.min_frame_errors = n;
        }
        if let Some(n) = self.max_frames {
            cfg.stop_rule.max_frames = n;
        }
        if let Some(s) = seed {
            cfg.master_seed = s;
        }
        cfg.validate()
    }

    fn finish(&self, mut records: Vec<FerRecord>) -> Vec<FerRecord> {
        if !self.timing {
            for r in &mut records {
                r.seconds = 0.0;
            }
        }
        records
    }
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Io(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Fails early if the output directory does not exist.
fn check_out_dir(path: &Path) -> Result<(), Failure> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            Err(Failure::Io(format!("{}: output directory does not exist", path.display())))
        }
        _ => Ok(()),
    }
}

fn plot_series(rows: &[CsvRow]) -> String {
    let mut labels: Vec<&str> = Vec::new();
    for r in rows {
        let l = r.label.as_deref().unwrap_or("sweep");
        if !labels.contains(&l) {
            labels.push(l);
        }
    }
    let mut out = String::new();
    for (i, label) in labels.iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        let _ = writeln!(out, "# {label}");
        let _ = writeln!(out, "# ebn0_db fer");
        for r in rows.iter().filter(|r| r.label.as_deref().unwrap_or("sweep") == *label) {
            let _ = writeln!(out, "{} {:.9e}", r.record.ebn0_db, r.record.fer);
        }
    }
    out
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep { config, out, seed, run } => {
            let text = read_text(&config)?;
            let mut cfg = parse_config(&text)?;
            run.apply(&mut cfg, seed)?;
            check_out_dir(&out)?;
            let records = run.finish(run_sweep(&cfg)?);
            write_text(&out, &format_csv(&records))
        }
        Command::Preset { name, out, seed, points, run } => {
            let mut curves = preset(&name)?;
            let grid = points.map(|p| parse_points(&p)).transpose().map_err(Failure::Invalid)?;
            for c in &mut curves {
                if let Some(g) = &grid {
                    c.config.ebn0_points_db = g.clone();
                }
                run.apply(&mut c.config, seed)?;
            }
            check_out_dir(&out)?;
            let mut rows = Vec::new();
            for c in &curves {
                for r in run.finish(run_sweep(&c.config)?) {
                    rows.push((c.label.clone(), r));
                }
            }
            write_text(&out, &format_labeled_csv(&rows)?)
        }
        Command::Latency {
            gamma,
            time_lens,
            space_lens,
            width,
            layers,
        } => {
            let invalid = |e: st2d::latency::LatencyError| Failure::Invalid(e.to_string());
            let model = LatencyModel::new(gamma).map_err(invalid)?;
            let d = model.decoding_latency(&time_lens, &space_lens).map_err(invalid)?;
            let width = width.or_else(|| time_lens.iter().copied().min()).unwrap_or(0);
            let layers = layers.or_else(|| space_lens.iter().copied().min()).unwrap_or(0);
            if width == 0 || layers == 0 {
                return Err(Failure::Invalid("width and layers must be positive".into()));
            }
            println!("D={d}");
            println!("D_min={}", model.min_latency(width, layers));
            Ok(())
        }
        Command::Plotdata { input, out } => {
            let rows = read_csv(&input)?;
            check_out_dir(&out)?;
            write_text(&out, &plot_series(&rows))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
