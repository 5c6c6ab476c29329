//! Forward simulation of an event sensor behind a transmittance ramp.
//!
//! A pixel with radiance `I` accumulates `I · h(t)`; its log brightness
//! `ln(1 + I·h(t))` fires the k-th positive event on crossing `k·C`. The first
//! crossing is the initial positive event recorded in the Temporal Matrix.
//! Crossing times are solved in continuous time and rounded half-up to the
//! sensor tick on emission.

use crate::error::{Error, Result};
use crate::image::RadianceImage;
use crate::matrix::{TemporalMatrix, COLD};
use crate::profile::TransmittanceProfile;
use crate::scalar::Real;
use crate::sensor::SensorModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn as_i8(self) -> i8 {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => -1,
        }
    }

    pub fn from_i8(p: i8) -> Option<Self> {
        match p {
            1 => Some(Polarity::Positive),
            -1 => Some(Polarity::Negative),
            _ => None,
        }
    }
}

/// A single sensor event at integer-microsecond time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Event {
    pub t: u64,
    pub x: u16,
    pub y: u16,
    pub polarity: Polarity,
}

impl Event {
    pub fn new(t: u64, x: u16, y: u16, polarity: Polarity) -> Self {
        Self { t, x, y, polarity }
    }

    /// Ordering key: time, then raster order.
    #[inline]
    fn key(&self) -> (u64, u16, u16) {
        (self.t, self.y, self.x)
    }
}

/// Events of one sensor, sorted by `(t, y, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventStream {
    width: usize,
    height: usize,
    events: Vec<Event>,
}

impl EventStream {
    /// Validates bounds and ordering.
    pub fn new(width: usize, height: usize, events: Vec<Event>) -> Result<Self> {
        check_dims(width, height)?;
        check_bounds(width, height, &events)?;
        if let Some(i) = events.windows(2).position(|w| w[1].key() < w[0].key()) {
            return Err(Error::Format(format!("event {} is out of time order", i + 1)));
        }
        Ok(Self { width, height, events })
    }

    /// Validates bounds and sorts; returns the stream and whether sorting was needed.
    pub fn from_unsorted(width: usize, height: usize, mut events: Vec<Event>) -> Result<(Self, bool)> {
        check_dims(width, height)?;
        check_bounds(width, height, &events)?;
        let sorted = events.windows(2).all(|w| w[0].key() <= w[1].key());
        if !sorted {
            events.sort_by_key(Event::key);
        }
        Ok((Self { width, height, events }, !sorted))
    }

    pub fn empty(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, Vec::new())
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
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.events.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn into_events(self) -> Vec<Event> {
        self.events
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 || width > u16::MAX as usize + 1 || height > u16::MAX as usize + 1 {
        return Err(Error::Format(format!("unsupported sensor size {width}x{height}")));
    }
    Ok(())
}

fn check_bounds(width: usize, height: usize, events: &[Event]) -> Result<()> {
    if let Some((i, e)) = events
        .iter()
        .enumerate()
        .find(|(_, e)| e.x as usize >= width || e.y as usize >= height)
    {
        return Err(Error::Format(format!(
            "event {i} at ({}, {}) outside {width}x{height} sensor",
            e.x, e.y
        )));
    }
    Ok(())
}

/// Piecewise-constant radiance over time: frame `k` covers
/// `[k·interval, (k+1)·interval)` and the last frame is held forever.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneSequence<T> {
    frames: Vec<RadianceImage<T>>,
    frame_interval_us: T,
}

impl<T: Real> SceneSequence<T> {
    pub fn new(frames: Vec<RadianceImage<T>>, frame_interval_us: T) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::Domain("scene sequence needs at least one frame".into()))?;
        for f in &frames[1..] {
            first.ensure_same_dims(f)?;
        }
        if !(frame_interval_us.is_finite() && frame_interval_us > T::zero()) {
            return Err(Error::Domain(format!("frame interval must be positive, got {frame_interval_us}")));
        }
        Ok(Self { frames, frame_interval_us })
    }

    pub fn frames(&self) -> &[RadianceImage<T>] {
        &self.frames
    }

    pub fn frame_interval_us(&self) -> T {
        self.frame_interval_us
    }

    pub fn dims(&self) -> (usize, usize) {
        self.frames[0].dims()
    }
}

/// Rounds a continuous time half-up to the nearest multiple of `tick_us`.
#[inline]
pub fn quantize<T: Real>(t: T, tick_us: u32) -> u64 {
    let tick = T::from_u32(tick_us).expect("u32 converts to Real");
    let n = (t / tick + T::of(0.5)).floor();
    n.to_u64().unwrap_or(u64::MAX - 1).saturating_mul(tick_us as u64).min(COLD - 1)
}

/// Continuous time at which accumulated exposure `I·h(t)` reaches `target`,
/// or `None` if it never does within the profile's capture horizon.
#[inline]
pub(crate) fn crossing_time<T: Real>(
    exposure_target: T,
    profile: &TransmittanceProfile<T>,
) -> Option<T> {
    if !exposure_target.is_finite() {
        return None;
    }
    let t = profile.h_inv(exposure_target);
    match profile.capture_horizon() {
        Some(limit) if t > limit => None,
        _ => Some(t),
    }
}

/// First-event tick of a pixel with radiance `intensity` and lumped
/// threshold `threshold`; `None` for pixels that never fire.
#[inline]
pub(crate) fn first_event_tick<T: Real>(
    intensity: T,
    threshold: T,
    profile: &TransmittanceProfile<T>,
    tick_us: u32,
) -> Option<u64> {
    if intensity <= T::zero() {
        return None;
    }
    crossing_time(threshold.exp_m1() / intensity, profile).map(|t| quantize(t, tick_us))
}

fn check_scene<T: Real>(scene_dims: (usize, usize), sensor: &SensorModel<T>) -> Result<()> {
    let (w, h) = scene_dims;
    if (w, h) != sensor.resolution() {
        return Err(Error::DimensionMismatch {
            expected_width: sensor.width(),
            expected_height: sensor.height(),
            width: w,
            height: h,
        });
    }
    Ok(())
}

/// Temporal Matrix of a static scene: `t* = h⁻¹((exp(C) - 1) / I)`.
///
/// Dark pixels, and pixels that would fire after `10 · t_end`, are cold.
pub fn simulate_capture<T: Real>(
    scene: &RadianceImage<T>,
    sensor: &SensorModel<T>,
    profile: &TransmittanceProfile<T>,
) -> Result<TemporalMatrix> {
    check_scene(scene.dims(), sensor)?;
    let c = sensor.contrast_threshold();
    let tick = sensor.tick_us();
    let data = scene
        .data()
        .iter()
        .map(|&i| first_event_tick(i, c, profile, tick).unwrap_or(COLD))
        .collect();
    TemporalMatrix::new(scene.width(), scene.height(), tick, data)
}

/// Like [`simulate_capture`] with a per-pixel lumped threshold.
pub(crate) fn capture_with_thresholds<T: Real>(
    scene: &RadianceImage<T>,
    thresholds: &[T],
    profile: &TransmittanceProfile<T>,
    tick_us: u32,
) -> Result<TemporalMatrix> {
    debug_assert_eq!(thresholds.len(), scene.len());
    let data = scene
        .data()
        .iter()
        .zip(thresholds)
        .map(|(&i, &c)| first_event_tick(i, c, profile, tick_us).unwrap_or(COLD))
        .collect();
    TemporalMatrix::new(scene.width(), scene.height(), tick_us, data)
}

/// Positive events up to `t_max`: the k-th event of a pixel is emitted when
/// `ln(1 + I·h(t))` crosses `k·C`.
///
/// The first event of each pixel coincides with [`simulate_capture`].
pub fn simulate_event_stream<T: Real>(
    scene: &RadianceImage<T>,
    sensor: &SensorModel<T>,
    profile: &TransmittanceProfile<T>,
    t_max: u64,
) -> Result<EventStream> {
    check_scene(scene.dims(), sensor)?;
    let c = sensor.contrast_threshold();
    let tick = sensor.tick_us();
    let w = scene.width();
    let mut events = Vec::new();
    for (idx, &intensity) in scene.data().iter().enumerate() {
        if intensity <= T::zero() {
            continue;
        }
        let (x, y) = ((idx % w) as u16, (idx / w) as u16);
        for k in 1u32.. {
            let level = c * T::from_u32(k).expect("u32 converts to Real");
            let Some(t) = crossing_time(level.exp_m1() / intensity, profile) else {
                break;
            };
            let tq = quantize(t, tick);
            if tq > t_max {
                break;
            }
            events.push(Event::new(tq, x, y, Polarity::Positive));
        }
    }
    events.sort_by_key(Event::key);
    EventStream::new(scene.width(), scene.height(), events)
}

/// Temporal Matrix of a time-varying scene.
///
/// Each pixel fires at the first `t*` with `∫₀^{t*} I(u)·TR(u) du ≥ exp(C) - 1`,
/// `I` piecewise constant per frame. Consecutive equal frames are merged, so a
/// constant sequence reproduces [`simulate_capture`] bit for bit.
pub fn simulate_capture_dynamic<T: Real>(
    scene: &SceneSequence<T>,
    sensor: &SensorModel<T>,
    profile: &TransmittanceProfile<T>,
) -> Result<TemporalMatrix> {
    check_scene(scene.dims(), sensor)?;
    let (w, h) = scene.dims();
    let k_trigger = sensor.trigger_constant();
    let dt = scene.frame_interval_us();
    let tick = sensor.tick_us();
    let frames = scene.frames();
    let n = frames.len();
    let frame_start = |f: usize| dt * T::from_usize(f).expect("usize converts to Real");

    let mut data = Vec::with_capacity(w * h);
    for idx in 0..w * h {
        let mut accumulated = T::zero();
        let mut fired = None;
        let mut f = 0;
        while f < n {
            let intensity = frames[f].data()[idx];
            let mut g = f + 1;
            while g < n && frames[g].data()[idx] == intensity {
                g += 1;
            }
            if intensity > T::zero() {
                let h_start = profile.h(frame_start(f));
                let target = h_start + (k_trigger - accumulated) / intensity;
                if g == n {
                    fired = Some(target);
                    break;
                }
                let h_end = profile.h(frame_start(g));
                if target <= h_end {
                    fired = Some(target);
                    break;
                }
                accumulated += intensity * (h_end - h_start);
            }
            f = g;
        }
        let t = fired.and_then(|target| crossing_time(target, profile));
        data.push(t.map_or(COLD, |t| quantize(t, tick)));
    }
    TemporalMatrix::new(w, h, tick, data)
}

/// Temporal Matrix from a recorded stream: first positive event per pixel.
///
/// Negative events are ignored; pixels without a positive event are cold.
pub fn extract_ipe(stream: &EventStream) -> TemporalMatrix {
    let w = stream.width();
    let mut data = vec![COLD; w * stream.height()];
    for e in stream.events() {
        if e.polarity != Polarity::Positive {
            continue;
        }
        let slot = &mut data[e.y as usize * w + e.x as usize];
        // the sentinel itself is not a representable event time
        if *slot == COLD && e.t != COLD {
            *slot = e.t;
        }
    }
    TemporalMatrix::new(w, stream.height(), 1, data).expect("stream dimensions are valid")
}
