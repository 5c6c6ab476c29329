//! Degradation model for generating restoration training data.
//!
//! Temporal degradations act on the Temporal Matrix (threshold variation,
//! Poisson timestamp delay, cold and hot pixels) and always precede the
//! intensity conversion; spatial degradations (blur, downsampling, noise)
//! follow it. Shuffling only permutes the spatial block.

mod config;
mod pair;
mod restore;
mod spatial;
mod temporal;

pub use config::{DegradationConfig, Interval};
pub use pair::{degrade_temporal, make_training_pair, DegradedCapture, TemporalParams, TrainingPair, MIN_LQ_PATCH};
pub use restore::baseline_restore;
pub use spatial::{
    add_gaussian_noise, downsample, gaussian_blur, gaussian_kernel, spatial_degrade, spatial_degrade_with,
    DownsampleMethod, SpatialOp, SpatialParams, BLUR_KERNEL_SIZE,
};
pub use temporal::{inject_cold_hot, perturb_threshold, perturb_timestamps, ThresholdCapture};
