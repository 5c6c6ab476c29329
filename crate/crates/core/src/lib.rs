//! Temporal-mapping photography with an event sensor.
//!
//! A scene is imaged through an optical path whose transmittance ramps from
//! 0 to 1. Each pixel's first positive event arrives at a time `t*` that
//! depends only on its radiance, so the per-pixel array of `t*` (the
//! Temporal Matrix) can be inverted into a grayscale image:
//!
//! ```
//! use tempmap::{reconstruct, simulate_capture, Profile64, Radiance64, Sensor64};
//!
//! let scene = Radiance64::from_vec(2, 1, vec![0.001, 0.004]).unwrap();
//! let profile = Profile64::linear(100_000.0).unwrap();
//! let sensor = Sensor64::new(0.2, 2, 1, 1).unwrap();
//! let matrix = simulate_capture(&scene, &sensor, &profile).unwrap();
//! let image = reconstruct(&matrix, &profile).unwrap();
//! assert_eq!(image[(1, 0)], 1.0);
//! assert!((image[(0, 0)] - 0.0).abs() < 1e-12);
//! ```
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`); the `*64` and
//! `*32` aliases below name the concrete instantiations.

pub mod calib;
pub mod capture;
pub mod degrade;
pub mod error;
pub mod image;
pub mod io;
pub mod matrix;
pub mod metrics;
pub mod profile;
pub mod reconstruct;
pub mod rng;
pub mod scalar;
pub mod sensor;

pub use calib::{calibrate_hot_pixels, fill_cold_pixels, remove_hot_pixels, simulate_dark_stream, HotPixelTable, TableSource};
pub use capture::{
    extract_ipe, quantize, simulate_capture, simulate_capture_dynamic, simulate_event_stream, Event, EventStream,
    Polarity, SceneSequence,
};
pub use degrade::{baseline_restore, make_training_pair, DegradationConfig, TrainingPair};
pub use error::{Error, Result};
pub use image::{Image, IntensityImage, RadianceImage};
pub use matrix::{TemporalMatrix, COLD};
pub use metrics::{capture_time, dynamic_range, grayscale_resolution, psnr, ssim};
pub use profile::{ProfileKind, TransmittanceProfile};
pub use reconstruct::{apply_tone_curve, normalize, reconstruct, time_to_intensity};
pub use scalar::Real;
pub use sensor::SensorModel;

pub type Profile64 = TransmittanceProfile<f64>;
pub type Profile32 = TransmittanceProfile<f32>;
pub type Sensor64 = SensorModel<f64>;
pub type Sensor32 = SensorModel<f32>;
pub type Radiance64 = RadianceImage<f64>;
pub type Radiance32 = RadianceImage<f32>;
pub type Intensity64 = IntensityImage<f64>;
pub type Intensity32 = IntensityImage<f32>;
pub type Image64 = Image<f64>;
pub type Image32 = Image<f32>;
pub type Scenes64 = SceneSequence<f64>;
pub type Scenes32 = SceneSequence<f32>;
