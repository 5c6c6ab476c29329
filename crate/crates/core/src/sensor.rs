use crate::error::{Error, Result};
use crate::scalar::Real;

/// Event sensor parameters relevant to first-event timing.
///
/// `contrast_threshold` is the lumped log-intensity step `C` a pixel must
/// accumulate before firing; the per-pixel trigger constant is `exp(C) - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorModel<T> {
    contrast_threshold: T,
    width: usize,
    height: usize,
    tick_us: u32,
}

impl<T: Real> SensorModel<T> {
    pub const DEFAULT_WIDTH: usize = 1280;
    pub const DEFAULT_HEIGHT: usize = 720;

    pub fn new(contrast_threshold: T, width: usize, height: usize, tick_us: u32) -> Result<Self> {
        if !(contrast_threshold.is_finite() && contrast_threshold > T::zero()) {
            return Err(Error::Domain(format!(
                "contrast threshold must be positive, got {contrast_threshold}"
            )));
        }
        if width == 0 || height == 0 {
            return Err(Error::Domain(format!("sensor resolution must be positive, got {width}x{height}")));
        }
        if tick_us == 0 {
            return Err(Error::Domain("time resolution must be positive".into()));
        }
        Ok(Self { contrast_threshold, width, height, tick_us })
    }

    /// Same sensor with another resolution.
    pub fn with_resolution(self, width: usize, height: usize) -> Result<Self> {
        Self::new(self.contrast_threshold, width, height, self.tick_us)
    }

    pub fn with_threshold(self, contrast_threshold: T) -> Result<Self> {
        Self::new(contrast_threshold, self.width, self.height, self.tick_us)
    }

    #[inline]
    pub fn contrast_threshold(&self) -> T {
        self.contrast_threshold
    }

    /// `exp(C) - 1`, the accumulated exposure that fires the first event.
    #[inline]
    pub fn trigger_constant(&self) -> T {
        self.contrast_threshold.exp_m1()
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn resolution(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn tick_us(&self) -> u32 {
        self.tick_us
    }
}

impl<T: Real> Default for SensorModel<T> {
    fn default() -> Self {
        Self {
            contrast_threshold: T::of(0.2),
            width: Self::DEFAULT_WIDTH,
            height: Self::DEFAULT_HEIGHT,
            tick_us: 1,
        }
    }
}
