//! Single-channel image containers.
//!
//! [`Image`] is the plain row-major grid. [`RadianceImage`] and
//! [`IntensityImage`] wrap it with the value-range invariant of their role:
//! scene radiance is non-negative, display intensity lies in `[0, 1]`.

use std::ops::{Deref, Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major single-channel grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Image<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

impl<T: Copy> Image<T> {
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if width.checked_mul(height) != Some(data.len()) {
            return Err(Error::InvalidImage(format!(
                "{width}x{height} image needs {} values, got {}",
                width.saturating_mul(height),
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn filled(width: usize, height: usize, value: T) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        Self { width, height, data: vec![value; width * height] }
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
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
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<T> {
        (x < self.width && y < self.height).then(|| self.data[y * self.width + x])
    }

    pub fn map<U: Copy>(&self, f: impl FnMut(T) -> U) -> Image<U> {
        Image {
            width: self.width,
            height: self.height,
            data: self.data.iter().copied().map(f).collect(),
        }
    }

    pub(crate) fn ensure_same_dims<U>(&self, other: &Image<U>) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch {
                expected_width: self.width,
                expected_height: self.height,
                width: other.width,
                height: other.height,
            });
        }
        Ok(())
    }
}

impl<T> Index<(usize, usize)> for Image<T> {
    type Output = T;

    #[inline]
    fn index(&self, (x, y): (usize, usize)) -> &T {
        assert!(x < self.width && y < self.height, "pixel ({x}, {y}) out of bounds");
        &self.data[y * self.width + x]
    }
}

impl<T> IndexMut<(usize, usize)> for Image<T> {
    #[inline]
    fn index_mut(&mut self, (x, y): (usize, usize)) -> &mut T {
        assert!(x < self.width && y < self.height, "pixel ({x}, {y}) out of bounds");
        &mut self.data[y * self.width + x]
    }
}

/// Scene radiance at full transmittance, in linear relative units per µs.
///
/// Every value is finite and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct RadianceImage<T>(Image<T>);

impl<T: Real> RadianceImage<T> {
    pub fn new(image: Image<T>) -> Result<Self> {
        if let Some(bad) = image.data.iter().find(|v| !(v.is_finite() && **v >= T::zero())) {
            return Err(Error::InvalidImage(format!("radiance must be finite and >= 0, found {bad}")));
        }
        Ok(Self(image))
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        Self::new(Image::new(width, height, data)?)
    }

    /// Maps display values in `[0, 1]` to radiance `scale * v`.
    pub fn from_intensity(img: &IntensityImage<T>, scale: T) -> Result<Self> {
        if !(scale.is_finite() && scale > T::zero()) {
            return Err(Error::Domain(format!("radiance scale must be positive, got {scale}")));
        }
        Ok(Self(img.0.map(|v| v * scale)))
    }

    pub fn has_signal(&self) -> bool {
        self.0.data.iter().any(|v| *v > T::zero())
    }

    pub fn into_image(self) -> Image<T> {
        self.0
    }
}

impl<T> Deref for RadianceImage<T> {
    type Target = Image<T>;

    fn deref(&self) -> &Image<T> {
        &self.0
    }
}

/// Display intensity; every value lies in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityImage<T>(Image<T>);

impl<T: Real> IntensityImage<T> {
    pub fn new(image: Image<T>) -> Result<Self> {
        let unit = |v: &T| *v >= T::zero() && *v <= T::one();
        if let Some(bad) = image.data.iter().find(|v| !unit(v)) {
            return Err(Error::InvalidImage(format!("intensity must lie in [0, 1], found {bad}")));
        }
        Ok(Self(image))
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        Self::new(Image::new(width, height, data)?)
    }

    /// Clamps every value into `[0, 1]`; NaN becomes 0.
    pub fn clamped(mut image: Image<T>) -> Self {
        for v in &mut image.data {
            *v = if v.is_nan() { T::zero() } else { v.max(T::zero()).min(T::one()) };
        }
        Self(image)
    }

    pub fn into_image(self) -> Image<T> {
        self.0
    }
}

impl<T> Deref for IntensityImage<T> {
    type Target = Image<T>;

    fn deref(&self) -> &Image<T> {
        &self.0
    }
}
