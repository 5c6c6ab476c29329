//! Training-pair generation: ideal reconstruction as the high-quality target,
//! temporally then spatially degraded reconstruction as the low-quality input.

use crate::calib::{fill_cold_pixels, remove_hot_pixels, HotPixelTable};
use crate::capture::simulate_capture;
use crate::degrade::config::DegradationConfig;
use crate::degrade::spatial::{spatial_degrade_with, SpatialParams};
use crate::degrade::temporal::{inject_cold_hot, perturb_threshold, perturb_timestamps};
use crate::error::{Error, Result};
use crate::image::{IntensityImage, RadianceImage};
use crate::matrix::TemporalMatrix;
use crate::profile::TransmittanceProfile;
use crate::reconstruct::reconstruct;
use crate::rng::{PixelRng, Stage};
use crate::scalar::Real;
use crate::sensor::SensorModel;

/// Smallest low-quality patch side produced by [`make_training_pair`].
pub const MIN_LQ_PATCH: usize = 72;

/// Concrete temporal degradation of one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalParams {
    pub threshold: f64,
    pub threshold_sigma: f64,
    pub lambda_us: f64,
    pub cold_rate: f64,
    pub hot_rate: f64,
}

impl TemporalParams {
    pub fn sample(config: &DegradationConfig, seed: u64) -> Self {
        let mut rng = PixelRng::global(seed, Stage::Params);
        Self {
            threshold: config.c_range.sample(&mut rng),
            threshold_sigma: config.sigma_c_range.sample(&mut rng),
            lambda_us: config.lambda_range.sample(&mut rng),
            cold_rate: config.cold_pixel_rate.sample(&mut rng),
            hot_rate: config.hot_pixel_rate.sample(&mut rng),
        }
    }
}

/// Result of the temporal stage, before intensity conversion.
#[derive(Debug, Clone)]
pub struct DegradedCapture {
    /// Degraded matrix after hot-pixel removal and cold-pixel filling.
    pub matrix: TemporalMatrix,
    pub hot_pixels: HotPixelTable,
    pub resampled_thresholds: usize,
}

#[derive(Debug, Clone)]
pub struct TrainingPair<T> {
    pub lq: IntensityImage<T>,
    pub hq: IntensityImage<T>,
    /// Injected (and suppressed) hot pixels, in high-quality coordinates.
    pub hot_pixels: HotPixelTable,
    pub temporal: TemporalParams,
    pub spatial: SpatialParams,
    pub resampled_thresholds: usize,
}

/// Threshold perturbation, Poisson delay and cold/hot injection, followed by
/// the same temporal pre-processing a calibrated sensor gets: hot pixels are
/// suppressed through their table, then cold pixels are filled with the
/// latest timestamp.
pub fn degrade_temporal<T: Real>(
    scene: &RadianceImage<T>,
    sensor: &SensorModel<T>,
    profile: &TransmittanceProfile<T>,
    params: &TemporalParams,
    seed: u64,
) -> Result<DegradedCapture> {
    let perturbed = perturb_threshold(
        scene,
        sensor,
        profile,
        T::of(params.threshold),
        T::of(params.threshold_sigma),
        seed,
    )?;
    let delayed = perturb_timestamps(&perturbed.matrix, params.lambda_us, seed);
    let (defective, hot_pixels) = inject_cold_hot(&delayed, params.cold_rate, params.hot_rate, seed)?;
    let cleaned = remove_hot_pixels(&defective, &hot_pixels)?;
    Ok(DegradedCapture {
        matrix: fill_cold_pixels(&cleaned)?,
        hot_pixels,
        resampled_thresholds: perturbed.resampled,
    })
}

/// Builds one `(LQ, HQ)` pair from a square radiance patch.
///
/// HQ is the normalized ideal reconstruction under `sensor`'s threshold. LQ
/// passes the same scene through [`degrade_temporal`], converts to intensity,
/// then applies the spatial degradations. Every random draw derives from
/// `config.seed` (0 when unset).
pub fn make_training_pair<T: Real>(
    hq: &RadianceImage<T>,
    sensor: &SensorModel<T>,
    profile: &TransmittanceProfile<T>,
    config: &DegradationConfig,
) -> Result<TrainingPair<T>> {
    config.validate()?;
    let (w, h) = hq.dims();
    let min_side = MIN_LQ_PATCH * config.downsample_factor as usize;
    if w != h {
        return Err(Error::InvalidImage(format!("training patches must be square, got {w}x{h}")));
    }
    if w < min_side {
        return Err(Error::InvalidImage(format!(
            "patch side {w} is below {min_side} ({MIN_LQ_PATCH} x factor {})",
            config.downsample_factor
        )));
    }
    let seed = config.seed.unwrap_or_default();
    let sensor = sensor.with_resolution(w, h)?;

    let ideal = fill_cold_pixels(&simulate_capture(hq, &sensor, profile)?)?;
    let hq_img = reconstruct(&ideal, profile)?;

    let temporal = TemporalParams::sample(config, seed);
    let degraded = degrade_temporal(hq, &sensor, profile, &temporal, seed)?;
    let spatial = SpatialParams::sample(config, seed);
    let lq = spatial_degrade_with(&reconstruct(&degraded.matrix, profile)?, &spatial, seed)?;

    Ok(TrainingPair {
        lq,
        hq: hq_img,
        hot_pixels: degraded.hot_pixels,
        temporal,
        spatial,
        resampled_thresholds: degraded.resampled_thresholds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::Image;

    fn scene(side: usize) -> RadianceImage<f64> {
        RadianceImage::new(Image::from_fn(side, side, |x, y| {
            0.002 + 0.018 * (((x * 7 + y * 3) % 97) as f64 / 96.0)
        }))
        .unwrap()
    }

    #[test]
    fn identity_config_reproduces_hq() {
        let sensor = SensorModel::new(0.2, 1, 1, 1).unwrap();
        let p = TransmittanceProfile::linear(100_000.0).unwrap();
        let pair = make_training_pair(&scene(72), &sensor, &p, &DegradationConfig::identity(0.2)).unwrap();
        assert_eq!(pair.lq, pair.hq);
        assert!(pair.hot_pixels.is_empty());
    }

    #[test]
    fn lq_patch_size() {
        let sensor = SensorModel::default();
        let p = TransmittanceProfile::linear(100_000.0).unwrap();
        let cfg = DegradationConfig { seed: Some(5), ..Default::default() };
        let pair = make_training_pair(&scene(288), &sensor, &p, &cfg).unwrap();
        assert_eq!(pair.lq.dims(), (72, 72));
        assert_eq!(pair.hq.dims(), (288, 288));
        let again = make_training_pair(&scene(288), &sensor, &p, &cfg).unwrap();
        assert_eq!(pair.lq, again.lq);
    }

    #[test]
    fn rejects_small_or_non_square() {
        let sensor = SensorModel::default();
        let p = TransmittanceProfile::linear(100_000.0).unwrap();
        let cfg = DegradationConfig::default();
        assert!(make_training_pair(&scene(287), &sensor, &p, &cfg).is_err());
        let rect = RadianceImage::from_vec(300, 288, vec![0.01; 300 * 288]).unwrap();
        assert!(make_training_pair(&rect, &sensor, &p, &cfg).is_err());
    }
}
