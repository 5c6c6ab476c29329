//! Hot-pixel calibration and temporal pre-processing of Temporal Matrices.
//!
//! Hot pixels fire spontaneously and sit at fixed sensor locations, so they
//! are located once from a dark recording (lens capped, zero transmittance)
//! and then suppressed in every capture. Cold pixels never fire and are
//! filled with the latest timestamp of the capture.

use std::collections::BTreeSet;

use crate::capture::{Event, EventStream, Polarity};
use crate::error::{Error, Result};
use crate::matrix::{TemporalMatrix, COLD};
use crate::rng::{PixelRng, Stage};

/// Recommended length of a dark recording.
pub const DEFAULT_DARK_DURATION_US: u64 = 10_000_000;

/// Recommended event-rate threshold, events per second.
pub const DEFAULT_RATE_THRESHOLD: f64 = 5.0;

/// Where a hot-pixel table came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSource {
    Calibrated,
    Injected,
    File,
}

/// Hot pixel locations for one sensor geometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HotPixelTable {
    width: usize,
    height: usize,
    entries: BTreeSet<(u16, u16)>,
    source: TableSource,
}

impl HotPixelTable {
    pub fn new(width: usize, height: usize, source: TableSource) -> Result<Self> {
        if width == 0 || height == 0 || width > 1 << 16 || height > 1 << 16 {
            return Err(Error::Domain(format!("unsupported table geometry {width}x{height}")));
        }
        Ok(Self { width, height, entries: BTreeSet::new(), source })
    }

    /// Adds `(x, y)`; returns `false` if it was already present.
    pub fn insert(&mut self, x: usize, y: usize) -> Result<bool> {
        if x >= self.width || y >= self.height {
            return Err(Error::Domain(format!(
                "hot pixel ({x}, {y}) outside {}x{} sensor",
                self.width, self.height
            )));
        }
        Ok(self.entries.insert((x as u16, y as u16)))
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x < self.width && y < self.height && self.entries.contains(&(x as u16, y as u16))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn source(&self) -> TableSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in `(x, y)` order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().map(|&(x, y)| (x as usize, y as usize))
    }

    fn ensure_matches(&self, matrix: &TemporalMatrix) -> Result<()> {
        if matrix.dims() != (self.width, self.height) {
            return Err(Error::DimensionMismatch {
                expected_width: self.width,
                expected_height: self.height,
                width: matrix.width(),
                height: matrix.height(),
            });
        }
        Ok(())
    }
}

/// Marks every pixel whose event rate in a dark recording reaches
/// `rate_threshold` events per second.
pub fn calibrate_hot_pixels(
    dark: &EventStream,
    duration_us: u64,
    rate_threshold: f64,
) -> Result<HotPixelTable> {
    if duration_us == 0 {
        return Err(Error::Domain("dark recording duration must be positive".into()));
    }
    if !(rate_threshold.is_finite() && rate_threshold >= 0.0) {
        return Err(Error::Domain(format!("rate threshold must be >= 0, got {rate_threshold}")));
    }
    let w = dark.width();
    let mut counts = vec![0u64; w * dark.height()];
    for e in dark.events() {
        counts[e.y as usize * w + e.x as usize] += 1;
    }
    let seconds = duration_us as f64 / 1e6;
    let mut table = HotPixelTable::new(w, dark.height(), TableSource::Calibrated)?;
    for (i, &n) in counts.iter().enumerate() {
        if n > 0 && n as f64 / seconds >= rate_threshold {
            table.insert(i % w, i / w)?;
        }
    }
    Ok(table)
}

/// Sets every hot pixel to the earliest timestamp among the remaining
/// (non-hot, non-cold) pixels.
pub fn remove_hot_pixels(matrix: &TemporalMatrix, table: &HotPixelTable) -> Result<TemporalMatrix> {
    table.ensure_matches(matrix)?;
    if table.is_empty() {
        return Ok(matrix.clone());
    }
    let w = matrix.width();
    let floor = matrix
        .timestamps()
        .iter()
        .enumerate()
        .filter(|&(i, &t)| t != COLD && !table.contains(i % w, i / w))
        .map(|(_, &t)| t)
        .min()
        .ok_or_else(|| Error::Degenerate("no pixel left outside the hot-pixel table".into()))?;
    let mut out = matrix.clone();
    let data = out.timestamps_mut();
    for (x, y) in table.iter() {
        data[y * w + x] = floor;
    }
    Ok(out)
}

/// Replaces every cold pixel with the latest timestamp in the matrix.
pub fn fill_cold_pixels(matrix: &TemporalMatrix) -> Result<TemporalMatrix> {
    let latest = matrix
        .max_valid()
        .ok_or_else(|| Error::Degenerate("every pixel is cold".into()))?;
    let mut out = matrix.clone();
    for t in out.timestamps_mut() {
        if *t == COLD {
            *t = latest;
        }
    }
    Ok(out)
}

/// Synthetic dark recording: pixels in `hot` fire as independent Poisson
/// processes at `rate_hz`, every other pixel stays silent.
pub fn simulate_dark_stream(
    hot: &HotPixelTable,
    rate_hz: f64,
    duration_us: u64,
    seed: u64,
) -> Result<EventStream> {
    if !(rate_hz.is_finite() && rate_hz >= 0.0) {
        return Err(Error::Domain(format!("hot-pixel rate must be >= 0, got {rate_hz}")));
    }
    let mut events = Vec::new();
    if rate_hz > 0.0 {
        let mean_gap_us = 1e6 / rate_hz;
        for (x, y) in hot.iter() {
            let mut rng = PixelRng::new(seed, Stage::DarkStream, x, y);
            let mut t = 0.0;
            loop {
                t += -mean_gap_us * rng.uniform_open().ln();
                if t >= duration_us as f64 {
                    break;
                }
                let polarity = if rng.uniform() < 0.5 { Polarity::Positive } else { Polarity::Negative };
                events.push(Event::new(t as u64, x as u16, y as u16, polarity));
            }
        }
    }
    let (stream, _) = EventStream::from_unsorted(hot.width(), hot.height(), events)?;
    Ok(stream)
}
