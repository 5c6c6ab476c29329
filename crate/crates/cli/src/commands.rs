use std::collections::hash_map::RandomState;
use std::fs::File;
use std::hash::{BuildHasher, Hasher};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use tempmap::degrade::DegradationConfig;
use tempmap::io::{self, Pgm};
use tempmap::metrics::{self, to_json, to_key_value};
use tempmap::{
    Error, EventStream, HotPixelTable, Image, Intensity64, Profile64, Radiance64, Sensor64, TemporalMatrix,
};

use crate::{
    CalibrateArgs, Command, DegradeArgs, DimsArgs, ExtractArgs, MetricsCommand, OutputFormat, ProfileArgs,
    ProfileName, ReconstructArgs, SceneArgs, SimulateArgs,
};

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Simulate(a) => simulate(a),
        Command::Extract(a) => extract(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Degrade(a) => degrade(a),
        Command::Metrics(m) => run_metrics(m),
        Command::Calibrate(a) => calibrate(a),
    }
}

fn profile(a: &ProfileArgs) -> Result<Profile64> {
    Ok(match a.profile {
        ProfileName::Step => Profile64::step(),
        ProfileName::Linear => Profile64::linear(a.t_end)?,
        ProfileName::Quadratic => Profile64::quadratic(a.t_end)?,
    })
}

/// Radiance `scale · (v + 1) / (maxval + 1)`; the offset keeps black pixels
/// measurable and leaves the normalized image unchanged.
fn radiance(pgm: &Pgm, scale: f64) -> Result<Radiance64> {
    let m = pgm.maxval as f64 + 1.0;
    let data = pgm.data.iter().map(|&v| scale * (v as f64 + 1.0) / m).collect();
    Ok(Radiance64::new(Image::new(pgm.width, pgm.height, data)?)?)
}

fn load_scene(path: &Path, scene: &SceneArgs) -> Result<Radiance64> {
    if !(scene.scale > 0.0 && scene.scale.is_finite()) {
        return Err(Error::Domain(format!("--scale must be positive, got {}", scene.scale)).into());
    }
    let pgm = io::load_pgm(path).with_context(|| format!("reading {}", path.display()))?;
    radiance(&pgm, scene.scale)
}

fn load_events(path: &Path, dims: &DimsArgs) -> Result<EventStream> {
    let csv_dims = dims.width.zip(dims.height);
    io::parse_events(path, csv_dims).with_context(|| format!("reading {}", path.display()))
}

fn load_matrix(path: &Path) -> Result<TemporalMatrix> {
    io::load_temporal_matrix(path).with_context(|| format!("reading {}", path.display()))
}

fn load_image(path: &Path) -> Result<Intensity64> {
    io::load_image(path).with_context(|| format!("reading {}", path.display()))
}

fn simulate(a: SimulateArgs) -> Result<()> {
    if a.matrix.is_none() && a.events.is_none() {
        return Err(Error::Config("nothing to do: pass --matrix and/or --events".into()).into());
    }
    let scene = load_scene(&a.image, &a.scene)?;
    let p = profile(&a.profile)?;
    let sensor = Sensor64::new(a.scene.threshold, scene.width(), scene.height(), a.tick)?;
    let matrix = tempmap::simulate_capture(&scene, &sensor, &p)?;
    if let Some(path) = &a.matrix {
        io::save_temporal_matrix(path, &matrix).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &a.events {
        let t_max = a.t_max.or(matrix.max_valid()).unwrap_or(0);
        let stream = tempmap::simulate_event_stream(&scene, &sensor, &p, t_max)?;
        let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        let written = if is_csv {
            File::create(path).map_err(Error::from).and_then(|f| io::write_events_csv(f, &stream))
        } else {
            io::save_events(path, &stream)
        };
        written.with_context(|| format!("writing {}", path.display()))?;
        log::info!("{} events up to {t_max} µs", stream.len());
    }
    Ok(())
}

fn extract(a: ExtractArgs) -> Result<()> {
    let stream = load_events(&a.events, &a.dims)?;
    let matrix = tempmap::extract_ipe(&stream);
    io::save_temporal_matrix(&a.output, &matrix).with_context(|| format!("writing {}", a.output.display()))
}

fn reconstruct(a: ReconstructArgs) -> Result<()> {
    let mut matrix = load_matrix(&a.matrix)?;
    if let Some(path) = &a.hot_table {
        let table = io::load_hot_table(path).with_context(|| format!("reading {}", path.display()))?;
        matrix = tempmap::remove_hot_pixels(&matrix, &table)?;
    }
    if matrix.cold_count() > 0 {
        log::info!("filling {} cold pixels", matrix.cold_count());
        matrix = tempmap::fill_cold_pixels(&matrix)?;
    }
    let img = tempmap::reconstruct(&matrix, &profile(&a.profile)?)?;
    let img = tempmap::apply_tone_curve(&img, a.gamma)?;
    io::save_image(&a.output, &img, a.bits).with_context(|| format!("writing {}", a.output.display()))
}

fn random_seed() -> u64 {
    let mut h = RandomState::new().build_hasher();
    h.write_u128(
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_nanos()),
    );
    h.finish() >> 1
}

fn degrade(a: DegradeArgs) -> Result<()> {
    let mut config = match &a.config {
        Some(path) => DegradationConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
        None => DegradationConfig::default(),
    };
    if a.seed.is_some() {
        config.seed = a.seed;
    }
    if config.seed.is_none() {
        let seed = random_seed();
        eprintln!("seed={seed}");
        config.seed = Some(seed);
    }
    let scene = load_scene(&a.image, &a.scene)?;
    let sensor = Sensor64::new(a.scene.threshold, scene.width(), scene.height(), 1)?;
    let pair = tempmap::make_training_pair(&scene, &sensor, &profile(&a.profile)?, &config)?;
    io::save_image(&a.lq, &pair.lq, a.bits).with_context(|| format!("writing {}", a.lq.display()))?;
    io::save_image(&a.hq, &pair.hq, a.bits).with_context(|| format!("writing {}", a.hq.display()))?;
    if let Some(path) = &a.hot_table {
        io::save_hot_table(path, &pair.hot_pixels).with_context(|| format!("writing {}", path.display()))?;
    }
    log::info!("temporal {:?}, spatial {:?}", pair.temporal, pair.spatial);
    Ok(())
}

fn emit<S: Serialize>(format: OutputFormat, report: &S, value: String) -> Result<()> {
    let line = match format {
        OutputFormat::Value => value,
        OutputFormat::Kv => to_key_value(report)?,
        OutputFormat::Json => to_json(report)?,
    };
    println!("{line}");
    Ok(())
}

#[derive(Serialize)]
struct Scalar<'a> {
    metric: &'a str,
    value: f64,
}

fn run_metrics(m: MetricsCommand) -> Result<()> {
    match m {
        MetricsCommand::Psnr { a, b, peak, format } => {
            let v = metrics::psnr(&load_image(&a)?, &load_image(&b)?, peak)?;
            emit(format.format, &Scalar { metric: "psnr_db", value: v }, format!("{v:.2}"))
        }
        MetricsCommand::Ssim { a, b, format } => {
            let v = metrics::ssim(&load_image(&a)?, &load_image(&b)?)?;
            emit(format.format, &Scalar { metric: "ssim", value: v }, format!("{v:.4}"))
        }
        MetricsCommand::Dr { max, min, format } => {
            let r = metrics::dynamic_range(max, min)?;
            emit(format.format, &r, format!("{:.1}", r.range_db))
        }
        MetricsCommand::Grayres { matrix, tick, format } => {
            let m = load_matrix(&matrix)?;
            let r = metrics::grayscale_resolution(&m, tick.unwrap_or(m.tick_us()))?;
            emit(format.format, &r, r.levels.to_string())
        }
        MetricsCommand::Captime { matrix, baseline_us, format } => {
            let r = metrics::capture_time_report(&load_matrix(&matrix)?, baseline_us)?;
            emit(format.format, &r, r.capture_time_us.to_string())
        }
    }
}

fn calibrate(a: CalibrateArgs) -> Result<()> {
    let stream = load_events(&a.events, &a.dims)?;
    let table: HotPixelTable = tempmap::calibrate_hot_pixels(&stream, a.duration_us, a.rate_threshold)?;
    eprintln!("{} hot pixels", table.len());
    io::save_hot_table(&a.output, &table).with_context(|| format!("writing {}", a.output.display()))
}
