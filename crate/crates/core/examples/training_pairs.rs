//! Writes LQ, HQ and baseline-restored greymaps for each chart, for eyeballing.
//!
//! ```text
//! cargo run -p tempmap --example training_pairs -- crates/core/tests/data/charts out/
//! ```

use std::path::{Path, PathBuf};

use tempmap::degrade::baseline_restore;
use tempmap::io;
use tempmap::{make_training_pair, DegradationConfig, Profile64, Radiance64, Sensor64};

const SIDE: usize = 288;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    if args.len() != 3 {
        eprintln!("usage: {} CHART_DIR OUT_DIR", args[0]);
        std::process::exit(1);
    }
    let out = Path::new(&args[2]);
    std::fs::create_dir_all(out)?;
    let mut charts: Vec<PathBuf> = std::fs::read_dir(&args[1])?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "pgm"))
        .collect();
    charts.sort();

    let profile = Profile64::linear(1e5)?;
    let sensor = Sensor64::new(0.2, SIDE, SIDE, 1)?;
    for (i, path) in charts.iter().enumerate() {
        let pgm = io::load_pgm(path)?;
        if pgm.width < SIDE || pgm.height < SIDE {
            eprintln!("skipping {}: smaller than {SIDE}x{SIDE}", path.display());
            continue;
        }
        let m = pgm.maxval as f64 + 1.0;
        let data = (0..SIDE * SIDE).map(|k| 0.02 * (pgm.data[(k / SIDE) * pgm.width + k % SIDE] as f64 + 1.0) / m);
        let scene = Radiance64::from_vec(SIDE, SIDE, data.collect())?;
        let cfg = DegradationConfig { seed: Some(100 + i as u64), ..Default::default() };
        let pair = make_training_pair(&scene, &sensor, &profile, &cfg)?;
        let restored = baseline_restore(&pair.lq, &pair.hot_pixels, 1.0)?;

        let stem = path.file_stem().unwrap().to_string_lossy();
        io::save_image(out.join(format!("{stem}-hq.pgm")), &pair.hq, 8)?;
        io::save_image(out.join(format!("{stem}-lq.pgm")), &pair.lq, 8)?;
        io::save_image(out.join(format!("{stem}-baseline.pgm")), &restored, 8)?;
        println!("{stem}: seed {} hot {} {:?}", 100 + i, pair.hot_pixels.len(), pair.temporal);
    }
    Ok(())
}
