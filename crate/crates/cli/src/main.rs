mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit status for validation and usage errors.
const EXIT_INVALID: u8 = 1;
/// Exit status for I/O failures.
const EXIT_IO: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "tempmap", version, about = "Temporal-mapping photography with an event sensor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a capture of a greymap: Temporal Matrix and/or event stream.
    Simulate(SimulateArgs),
    /// Build a Temporal Matrix from the first positive event of each pixel.
    Extract(ExtractArgs),
    /// Convert a Temporal Matrix into a greymap.
    Reconstruct(ReconstructArgs),
    /// Generate a low-/high-quality training pair from a square greymap.
    Degrade(DegradeArgs),
    /// Image and capture statistics.
    #[command(subcommand)]
    Metrics(MetricsCommand),
    /// Locate hot pixels in a dark recording.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProfileName {
    Linear,
    Quadratic,
    Step,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    /// Transmittance profile.
    #[arg(long, value_enum, default_value = "linear")]
    profile: ProfileName,
    /// Ramp duration in µs (ignored for `step`).
    #[arg(long, default_value_t = 100_000.0)]
    t_end: f64,
}

#[derive(Debug, Args)]
struct SceneArgs {
    /// Contrast threshold C.
    #[arg(long, default_value_t = 0.2)]
    threshold: f64,
    /// Radiance of a full-scale pixel, per µs. A sample `v` of a greymap with
    /// maximum `M` has radiance `scale · (v + 1) / (M + 1)`.
    #[arg(long, default_value_t = 0.02)]
    scale: f64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Input greymap (PGM P5).
    image: PathBuf,
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    scene: SceneArgs,
    /// Sensor tick in µs.
    #[arg(long, default_value_t = 1)]
    tick: u32,
    /// Temporal Matrix output (TMAT).
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Event stream output (EVS0, or CSV if the name ends in `.csv`).
    #[arg(long)]
    events: Option<PathBuf>,
    /// Last event time in µs; defaults to the latest first-event time.
    #[arg(long)]
    t_max: Option<u64>,
}

#[derive(Debug, Args)]
struct DimsArgs {
    /// Sensor width, required for CSV input.
    #[arg(long)]
    width: Option<usize>,
    /// Sensor height, required for CSV input.
    #[arg(long)]
    height: Option<usize>,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    /// Event stream (EVS0 or CSV).
    events: PathBuf,
    /// Temporal Matrix output.
    #[arg(short, long)]
    output: PathBuf,
    #[command(flatten)]
    dims: DimsArgs,
}

#[derive(Debug, Args)]
struct ReconstructArgs {
    /// Temporal Matrix (TMAT).
    matrix: PathBuf,
    /// Output greymap.
    #[arg(short, long)]
    output: PathBuf,
    #[command(flatten)]
    profile: ProfileArgs,
    /// Display gamma; the image is raised to 1/gamma.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Hot-pixel table to suppress before conversion.
    #[arg(long)]
    hot_table: Option<PathBuf>,
    /// Output bit depth.
    #[arg(long, default_value_t = 8, value_parser = parse_bits)]
    bits: u8,
}

#[derive(Debug, Args)]
struct DegradeArgs {
    /// Square input greymap.
    image: PathBuf,
    /// Low-quality output greymap.
    #[arg(long)]
    lq: PathBuf,
    /// High-quality output greymap.
    #[arg(long)]
    hq: PathBuf,
    /// Degradation configuration (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed; overrides the configuration. Chosen at random if absent anywhere.
    #[arg(long)]
    seed: Option<u64>,
    /// Writes the injected hot pixels (input coordinates).
    #[arg(long)]
    hot_table: Option<PathBuf>,
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    scene: SceneArgs,
    /// Output bit depth.
    #[arg(long, default_value_t = 8, value_parser = parse_bits)]
    bits: u8,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    /// The headline number only.
    Value,
    /// One `key=value` record.
    Kv,
    Json,
}

#[derive(Debug, Args)]
struct FormatArgs {
    #[arg(long, value_enum, default_value = "value")]
    format: OutputFormat,
}

#[derive(Debug, Subcommand)]
enum MetricsCommand {
    /// Peak signal-to-noise ratio of two greymaps, dB.
    Psnr {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        peak: f64,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Structural similarity of two greymaps.
    Ssim {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Dynamic range of a scene from its brightest and darkest values, dB.
    Dr {
        max: f64,
        min: f64,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Grayscale resolution of a Temporal Matrix, levels.
    Grayres {
        matrix: PathBuf,
        /// Tick in µs; defaults to the matrix header.
        #[arg(long)]
        tick: Option<u32>,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Capture time of a Temporal Matrix, µs.
    Captime {
        matrix: PathBuf,
        /// Conventional exposure time in µs, to report the saving.
        #[arg(long)]
        baseline_us: Option<u64>,
        #[command(flatten)]
        format: FormatArgs,
    },
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    /// Dark recording (EVS0 or CSV).
    events: PathBuf,
    /// Hot-pixel table output.
    #[arg(short, long)]
    output: PathBuf,
    /// Events per second at or above which a pixel is hot.
    #[arg(long, default_value_t = tempmap::calib::DEFAULT_RATE_THRESHOLD)]
    rate_threshold: f64,
    /// Length of the dark recording in µs.
    #[arg(long, default_value_t = tempmap::calib::DEFAULT_DARK_DURATION_US)]
    duration_us: u64,
    #[command(flatten)]
    dims: DimsArgs,
}

fn parse_bits(s: &str) -> Result<u8, String> {
    match s {
        "8" => Ok(8),
        "16" => Ok(16),
        _ => Err(format!("expected 8 or 16, got {s}")),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<tempmap::Error>() {
            return if e.is_io() { EXIT_IO } else { EXIT_INVALID };
        }
        if cause.is::<std::io::Error>() {
            return EXIT_IO;
        }
    }
    EXIT_INVALID
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INVALID) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
