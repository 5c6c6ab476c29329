//! Time-to-intensity mapping.
//!
//! A pixel that fires at `t*` has radiance `(exp(C) - 1) / h(t*)`. The
//! numerator is the same for every pixel, so reconstruction keeps only
//! `1 / h(t*)` and lets min/max normalization absorb the constant.

use crate::error::{Error, Result};
use crate::image::{Image, IntensityImage};
use crate::matrix::{TemporalMatrix, COLD};
use crate::profile::TransmittanceProfile;
use crate::scalar::Real;

/// Unnormalized relative intensity `1 / h(t*)` per pixel.
///
/// Fails on cold pixels (fill them first, see [`crate::calib`]) and on zero
/// timestamps.
pub fn time_to_intensity<T: Real>(
    matrix: &TemporalMatrix,
    profile: &TransmittanceProfile<T>,
) -> Result<Image<T>> {
    let (w, _) = matrix.dims();
    let mut data = Vec::with_capacity(matrix.timestamps().len());
    for (i, &t) in matrix.timestamps().iter().enumerate() {
        let (x, y) = (i % w, i / w);
        if t == COLD {
            return Err(Error::ColdPixel { x, y });
        }
        let h = profile.h(T::from_u64(t).expect("u64 converts to Real"));
        if h <= T::zero() {
            return Err(Error::Singularity { x, y });
        }
        data.push(h.recip());
    }
    Image::new(matrix.width(), matrix.height(), data)
}

/// Affine min/max normalization onto `[0, 1]`.
///
/// A constant image maps to all zeros.
pub fn normalize<T: Real>(raw: &Image<T>) -> Result<IntensityImage<T>> {
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for &v in raw.data() {
        if !v.is_finite() {
            return Err(Error::Domain(format!("cannot normalize non-finite value {v}")));
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let span = hi - lo;
    let out = if span > T::zero() {
        raw.map(|v| ((v - lo) / span).min(T::one()))
    } else {
        raw.map(|_| T::zero())
    };
    IntensityImage::new(out)
}

/// Display tone curve `v^(1/gamma)`.
pub fn apply_tone_curve<T: Real>(img: &IntensityImage<T>, gamma: T) -> Result<IntensityImage<T>> {
    if !(gamma.is_finite() && gamma > T::zero()) {
        return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
    }
    if gamma == T::one() {
        return Ok(img.clone());
    }
    let exponent = gamma.recip();
    Ok(IntensityImage::clamped(img.map(|v| v.powf(exponent))))
}

/// `normalize(time_to_intensity(matrix))`.
pub fn reconstruct<T: Real>(
    matrix: &TemporalMatrix,
    profile: &TransmittanceProfile<T>,
) -> Result<IntensityImage<T>> {
    normalize(&time_to_intensity(matrix, profile)?)
}
