//! Temporal-domain degradations, applied to timestamps before any
//! intensity conversion.

use crate::calib::{HotPixelTable, TableSource};
use crate::capture::capture_with_thresholds;
use crate::error::{Error, Result};
use crate::image::RadianceImage;
use crate::matrix::{TemporalMatrix, COLD};
use crate::profile::TransmittanceProfile;
use crate::rng::{PixelRng, Stage};
use crate::scalar::Real;
use crate::sensor::SensorModel;

/// Rejected draws before a pixel falls back to the unperturbed threshold.
const MAX_THRESHOLD_REDRAWS: usize = 64;

/// Capture under a spatially varying threshold.
#[derive(Debug, Clone)]
pub struct ThresholdCapture<T> {
    pub matrix: TemporalMatrix,
    /// Effective `C + ΔC` per pixel, row-major.
    pub thresholds: Vec<T>,
    /// Pixels whose first draw gave a non-positive threshold.
    pub resampled: usize,
}

/// Captures `scene` with per-pixel threshold `c + ΔC`, `ΔC ~ N(0, sigma²)`.
///
/// Draws with `c + ΔC <= 0` are redrawn. With `sigma = 0` the result equals
/// [`crate::capture::simulate_capture`] under threshold `c`.
pub fn perturb_threshold<T: Real>(
    scene: &RadianceImage<T>,
    sensor: &SensorModel<T>,
    profile: &TransmittanceProfile<T>,
    c: T,
    sigma: T,
    seed: u64,
) -> Result<ThresholdCapture<T>> {
    if !(c.is_finite() && c > T::zero()) {
        return Err(Error::Domain(format!("threshold must be positive, got {c}")));
    }
    if !(sigma.is_finite() && sigma >= T::zero()) {
        return Err(Error::Domain(format!("threshold std must be >= 0, got {sigma}")));
    }
    let sensor = sensor.with_resolution(scene.width(), scene.height())?;
    let w = scene.width();
    let mut resampled = 0;
    let thresholds: Vec<T> = (0..scene.len())
        .map(|i| {
            if sigma == T::zero() {
                return c;
            }
            let mut rng = PixelRng::new(seed, Stage::Threshold, i % w, i / w);
            for attempt in 0..MAX_THRESHOLD_REDRAWS {
                let v = c + sigma * T::of(rng.normal());
                if v > T::zero() {
                    if attempt > 0 {
                        resampled += 1;
                    }
                    return v;
                }
            }
            resampled += 1;
            c
        })
        .collect();
    let matrix = capture_with_thresholds(scene, &thresholds, profile, sensor.tick_us())?;
    Ok(ThresholdCapture { matrix, thresholds, resampled })
}

/// Delays every non-cold timestamp by an independent `Poisson(lambda)` µs.
pub fn perturb_timestamps(matrix: &TemporalMatrix, lambda_us: f64, seed: u64) -> TemporalMatrix {
    let mut out = matrix.clone();
    if !(lambda_us > 0.0) {
        return out;
    }
    let w = matrix.width();
    for (i, t) in out.timestamps_mut().iter_mut().enumerate() {
        if *t == COLD {
            continue;
        }
        let delay = PixelRng::new(seed, Stage::Timestamp, i % w, i / w).poisson(lambda_us);
        *t = t.saturating_add(delay).min(COLD - 1);
    }
    out
}

/// Marks disjoint random pixel sets cold and hot.
///
/// Each pixel independently turns cold with probability `cold_rate` and hot
/// with probability `hot_rate`. Hot pixels get an abnormally early timestamp,
/// uniform over whole µs in `[1, max(1, ⌊0.01 · t_min⌋)]` where `t_min` is the
/// earliest remaining legitimate timestamp. The returned table lists the hot
/// pixels.
pub fn inject_cold_hot(
    matrix: &TemporalMatrix,
    cold_rate: f64,
    hot_rate: f64,
    seed: u64,
) -> Result<(TemporalMatrix, HotPixelTable)> {
    for (name, r) in [("cold", cold_rate), ("hot", hot_rate)] {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Config(format!("{name} pixel rate must lie in [0, 1], got {r}")));
        }
    }
    if cold_rate + hot_rate > 1.0 {
        return Err(Error::Config(format!(
            "cold and hot rates sum to {} > 1",
            cold_rate + hot_rate
        )));
    }
    let (w, h) = matrix.dims();
    let mut table = HotPixelTable::new(w, h, TableSource::Injected)?;
    let mut out = matrix.clone();
    if cold_rate == 0.0 && hot_rate == 0.0 {
        return Ok((out, table));
    }
    let data = out.timestamps_mut();
    for (i, t) in data.iter_mut().enumerate() {
        let u = PixelRng::new(seed, Stage::Defects, i % w, i / w).uniform();
        if u < cold_rate {
            *t = COLD;
        } else if u < cold_rate + hot_rate {
            table.insert(i % w, i / w)?;
        }
    }
    let legit_min = data
        .iter()
        .enumerate()
        .filter(|&(i, &t)| t != COLD && !table.contains(i % w, i / w))
        .map(|(_, &t)| t)
        .min();
    let upper = legit_min.map_or(1, |m| (m / 100).max(1));
    for (x, y) in table.iter() {
        let mut rng = PixelRng::new(seed, Stage::HotTime, x, y);
        data[y * w + x] = 1 + rng.below(upper);
    }
    Ok((out, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capture::simulate_capture;

    fn gradient(w: usize, h: usize) -> RadianceImage<f64> {
        RadianceImage::from_vec(w, h, (0..w * h).map(|i| 0.01 + i as f64 * 1e-4).collect()).unwrap()
    }

    #[test]
    fn zero_sigma_matches_ideal_capture() {
        let scene = gradient(16, 8);
        let sensor = SensorModel::new(0.25, 16, 8, 1).unwrap();
        let p = TransmittanceProfile::linear(50_000.0).unwrap();
        let out = perturb_threshold(&scene, &sensor, &p, 0.25, 0.0, 11).unwrap();
        assert_eq!(out.matrix, simulate_capture(&scene, &sensor, &p).unwrap());
        assert!(out.thresholds.iter().all(|c| *c == 0.25));
        assert_eq!(out.resampled, 0);
    }

    #[test]
    fn threshold_ratio_scales_step_times() {
        let scene = RadianceImage::from_vec(3, 1, vec![1e-6, 3e-6, 7e-6]).unwrap();
        let sensor = SensorModel::new(0.1, 3, 1, 1).unwrap();
        let p = TransmittanceProfile::step();
        let lo = perturb_threshold(&scene, &sensor, &p, 0.1, 0.0, 0).unwrap().matrix;
        let hi = perturb_threshold(&scene, &sensor, &p, 0.4, 0.0, 0).unwrap().matrix;
        let ratio = 0.4f64.exp_m1() / 0.1f64.exp_m1();
        assert!((ratio - 4.6764).abs() < 1e-4);
        for (a, b) in lo.timestamps().iter().zip(hi.timestamps()) {
            assert!((*b as f64 / *a as f64 - ratio).abs() < 1e-3, "{a} {b}");
        }
    }

    #[test]
    fn nonpositive_thresholds_are_redrawn() {
        let scene = gradient(64, 64);
        let sensor = SensorModel::new(0.1, 64, 64, 1).unwrap();
        let p = TransmittanceProfile::linear(10_000.0).unwrap();
        let out = perturb_threshold(&scene, &sensor, &p, 0.05, 0.1, 3).unwrap();
        assert!(out.resampled > 0);
        assert!(out.thresholds.iter().all(|c| *c > 0.0));
    }

    #[test]
    fn zero_lambda_is_identity() {
        let m = TemporalMatrix::from_options(2, 2, 1, [Some(10), None, Some(0), Some(7)]).unwrap();
        assert_eq!(perturb_timestamps(&m, 0.0, 1), m);
        let d = perturb_timestamps(&m, 50.0, 1);
        assert!(d.is_cold(1, 0));
        assert!(d.get(0, 0).unwrap() >= 10);
    }

    #[test]
    fn zero_rates_are_identity() {
        let m = TemporalMatrix::new(3, 3, 1, (1..=9).collect()).unwrap();
        let (out, table) = inject_cold_hot(&m, 0.0, 0.0, 5).unwrap();
        assert_eq!(out, m);
        assert!(table.is_empty());
        assert!(inject_cold_hot(&m, 0.6, 0.5, 5).is_err());
        assert!(inject_cold_hot(&m, -0.1, 0.0, 5).is_err());
    }

    #[test]
    fn hot_pixels_precede_legit_pixels() {
        let m = TemporalMatrix::new(64, 64, 1, (0..4096).map(|i| 5000 + i).collect()).unwrap();
        let (out, table) = inject_cold_hot(&m, 0.02, 0.02, 9).unwrap();
        assert!(!table.is_empty());
        let legit_min = (0..4096)
            .filter(|i| !table.contains(i % 64, i / 64))
            .filter_map(|i| out.get(i % 64, i / 64))
            .min()
            .unwrap();
        for (x, y) in table.iter() {
            let t = out.get(x, y).unwrap();
            assert!((1..=legit_min / 100).contains(&t), "{t}");
        }
        assert!(out.cold_count() > 0);
    }
}
