use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::PixelRng;

/// Closed interval `[lo, hi]` sampled uniformly; serialized as `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval(pub f64, pub f64);

impl Interval {
    pub fn fixed(v: f64) -> Self {
        Self(v, v)
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.0
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.1
    }

    pub fn sample(&self, rng: &mut PixelRng) -> f64 {
        rng.uniform_in(self.0, self.1)
    }

    fn check(&self, name: &str, min: f64, max: f64) -> Result<()> {
        let Interval(lo, hi) = *self;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::Config(format!("{name}: need finite lo <= hi, got [{lo}, {hi}]")));
        }
        if lo < min || hi > max {
            return Err(Error::Config(format!("{name}: [{lo}, {hi}] outside [{min}, {max}]")));
        }
        Ok(())
    }
}

/// Parameters of the temporal and spatial degradation model.
///
/// Scalar magnitudes are drawn per sample from the given intervals. Stored
/// as a TOML document of `key = value` lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DegradationConfig {
    /// Seed of every random stream; `None` lets the caller choose.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Lumped contrast threshold `C`, log units.
    pub c_range: Interval,
    /// Standard deviation of the per-pixel threshold offset, log units.
    pub sigma_c_range: Interval,
    /// Mean Poisson timestamp delay, µs.
    pub lambda_range: Interval,
    /// Additive Gaussian noise std, normalized intensity.
    pub gaussian_sigma_range: Interval,
    /// Isotropic blur kernel std, pixels.
    pub blur_sigma_range: Interval,
    pub downsample_factor: u32,
    /// Fraction of pixels turned cold.
    pub cold_pixel_rate: Interval,
    /// Fraction of pixels turned hot.
    pub hot_pixel_rate: Interval,
    /// Randomize the order of blur, downsampling and noise per sample.
    pub shuffle_spatial: bool,
}

impl Default for DegradationConfig {
    fn default() -> Self {
        Self {
            seed: None,
            c_range: Interval(0.1, 0.4),
            sigma_c_range: Interval(0.02, 0.08),
            lambda_range: Interval(10.0, 1000.0),
            gaussian_sigma_range: Interval(1.0 / 255.0, 25.0 / 255.0),
            blur_sigma_range: Interval(0.1, 2.4),
            downsample_factor: 4,
            cold_pixel_rate: Interval(0.0, 0.01),
            hot_pixel_rate: Interval(0.0, 0.01),
            shuffle_spatial: true,
        }
    }
}

impl DegradationConfig {
    /// Every perturbation off: fixed threshold `c`, factor 1, no defects.
    pub fn identity(c: f64) -> Self {
        Self {
            seed: None,
            c_range: Interval::fixed(c),
            sigma_c_range: Interval::fixed(0.0),
            lambda_range: Interval::fixed(0.0),
            gaussian_sigma_range: Interval::fixed(0.0),
            blur_sigma_range: Interval::fixed(0.0),
            downsample_factor: 1,
            cold_pixel_rate: Interval::fixed(0.0),
            hot_pixel_rate: Interval::fixed(0.0),
            shuffle_spatial: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let inf = f64::INFINITY;
        self.c_range.check("c_range", f64::MIN_POSITIVE, inf)?;
        self.sigma_c_range.check("sigma_c_range", 0.0, inf)?;
        self.lambda_range.check("lambda_range", 0.0, inf)?;
        self.gaussian_sigma_range.check("gaussian_sigma_range", 0.0, inf)?;
        self.blur_sigma_range.check("blur_sigma_range", 0.0, inf)?;
        self.cold_pixel_rate.check("cold_pixel_rate", 0.0, 1.0)?;
        self.hot_pixel_rate.check("hot_pixel_rate", 0.0, 1.0)?;
        if self.downsample_factor == 0 {
            return Err(Error::Config("downsample_factor must be >= 1".into()));
        }
        if self.cold_pixel_rate.hi() + self.hot_pixel_rate.hi() > 1.0 {
            return Err(Error::Config("cold and hot pixel rates may not sum above 1".into()));
        }
        if self.seed.is_some_and(|s| s > i64::MAX as u64) {
            return Err(Error::Config("seed must fit in a signed 64-bit integer".into()));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_owned()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_toml_string()?)?;
        Ok(())
    }
}
