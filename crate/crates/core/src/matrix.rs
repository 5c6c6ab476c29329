//! Temporal Matrix: per-pixel timestamp of the initial positive event.

use crate::error::{Error, Result};

/// Sentinel for a pixel that never emitted a positive event.
pub const COLD: u64 = u64::MAX;

/// Per-pixel first-positive-event timestamps in integer microseconds.
///
/// Stored row-major; [`COLD`] marks pixels without a timestamp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalMatrix {
    width: usize,
    height: usize,
    tick_us: u32,
    data: Vec<u64>,
}

impl TemporalMatrix {
    pub fn new(width: usize, height: usize, tick_us: u32, data: Vec<u64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Format(format!("matrix dimensions must be positive, got {width}x{height}")));
        }
        if tick_us == 0 {
            return Err(Error::Domain("timestamp tick must be positive".into()));
        }
        if width.checked_mul(height) != Some(data.len()) {
            return Err(Error::Format(format!(
                "{width}x{height} matrix needs {} timestamps, got {}",
                width.saturating_mul(height),
                data.len()
            )));
        }
        Ok(Self { width, height, tick_us, data })
    }

    /// Builds a matrix from optional timestamps, `None` meaning cold.
    pub fn from_options(
        width: usize,
        height: usize,
        tick_us: u32,
        values: impl IntoIterator<Item = Option<u64>>,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for v in values {
            match v {
                Some(COLD) => {
                    return Err(Error::Domain("timestamp collides with the cold sentinel".into()))
                }
                Some(t) => data.push(t),
                None => data.push(COLD),
            }
        }
        Self::new(width, height, tick_us, data)
    }

    /// An all-cold matrix.
    pub fn cold(width: usize, height: usize, tick_us: u32) -> Result<Self> {
        Self::new(width, height, tick_us, vec![COLD; width.saturating_mul(height)])
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
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn tick_us(&self) -> u32 {
        self.tick_us
    }

    /// Raw row-major storage, cold pixels included as [`COLD`].
    #[inline]
    pub fn timestamps(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub(crate) fn timestamps_mut(&mut self) -> &mut [u64] {
        &mut self.data
    }

    /// Timestamp at `(x, y)`; `None` when cold.
    ///
    /// # Panics
    /// If `(x, y)` is out of bounds.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<u64> {
        assert!(x < self.width && y < self.height, "pixel ({x}, {y}) out of bounds");
        let t = self.data[y * self.width + x];
        (t != COLD).then_some(t)
    }

    /// # Panics
    /// If `(x, y)` is out of bounds or `t` is the cold sentinel.
    pub fn set(&mut self, x: usize, y: usize, t: Option<u64>) {
        assert!(x < self.width && y < self.height, "pixel ({x}, {y}) out of bounds");
        assert_ne!(t, Some(COLD), "timestamp collides with the cold sentinel");
        self.data[y * self.width + x] = t.unwrap_or(COLD);
    }

    pub fn is_cold(&self, x: usize, y: usize) -> bool {
        self.get(x, y).is_none()
    }

    pub fn cold_count(&self) -> usize {
        self.data.iter().filter(|&&t| t == COLD).count()
    }

    /// Non-cold timestamps in raster order.
    pub fn valid(&self) -> impl Iterator<Item = u64> + '_ {
        self.data.iter().copied().filter(|&t| t != COLD)
    }

    pub fn min_valid(&self) -> Option<u64> {
        self.valid().min()
    }

    pub fn max_valid(&self) -> Option<u64> {
        self.valid().max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cold_roundtrips_through_options() {
        let m = TemporalMatrix::from_options(2, 1, 1, [None, Some(7)]).unwrap();
        assert!(m.is_cold(0, 0));
        assert_eq!(m.get(1, 0), Some(7));
        assert_eq!(m.cold_count(), 1);
        assert_eq!(m.min_valid(), Some(7));
    }

    #[test]
    fn rejects_zero_dims_and_tick() {
        assert!(TemporalMatrix::new(0, 1, 1, vec![]).is_err());
        assert!(TemporalMatrix::new(1, 1, 0, vec![3]).is_err());
        assert!(TemporalMatrix::from_options(1, 1, 1, [Some(COLD)]).is_err());
    }
}
