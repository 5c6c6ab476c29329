//! Spatial-domain degradations applied after intensity conversion: isotropic
//! Gaussian blur, downsampling and additive Gaussian noise.

use crate::degrade::config::DegradationConfig;
use crate::error::{Error, Result};
use crate::image::{Image, IntensityImage};
use crate::rng::{PixelRng, Stage};
use crate::scalar::Real;

/// Side length of the blur kernel.
pub const BLUR_KERNEL_SIZE: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DownsampleMethod {
    Nearest,
    Bilinear,
    /// Mean over each `factor × factor` block.
    Box,
}

impl DownsampleMethod {
    pub const ALL: [DownsampleMethod; 3] = [Self::Nearest, Self::Bilinear, Self::Box];

    pub fn name(self) -> &'static str {
        match self {
            Self::Nearest => "nearest",
            Self::Bilinear => "bilinear",
            Self::Box => "box",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpatialOp {
    Blur,
    Downsample,
    Noise,
}

/// Concrete spatial degradation of one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialParams {
    pub blur_sigma: f64,
    pub noise_sigma: f64,
    pub factor: usize,
    pub method: DownsampleMethod,
    pub order: [SpatialOp; 3],
}

impl SpatialParams {
    pub const FIXED_ORDER: [SpatialOp; 3] = [SpatialOp::Blur, SpatialOp::Downsample, SpatialOp::Noise];

    /// Parameters that leave an image untouched.
    pub fn identity() -> Self {
        Self {
            blur_sigma: 0.0,
            noise_sigma: 0.0,
            factor: 1,
            method: DownsampleMethod::Nearest,
            order: Self::FIXED_ORDER,
        }
    }

    /// Draws one sample's parameters from `config`.
    pub fn sample(config: &DegradationConfig, seed: u64) -> Self {
        let mut rng = PixelRng::global(seed, Stage::Shuffle);
        let blur_sigma = config.blur_sigma_range.sample(&mut rng);
        let noise_sigma = config.gaussian_sigma_range.sample(&mut rng);
        let method = DownsampleMethod::ALL[rng.below(3) as usize];
        let mut order = Self::FIXED_ORDER;
        if config.shuffle_spatial {
            for i in (1..order.len()).rev() {
                let j = rng.below(i as u64 + 1) as usize;
                order.swap(i, j);
            }
        }
        Self { blur_sigma, noise_sigma, factor: config.downsample_factor as usize, method, order }
    }
}

/// Normalized 1-D Gaussian taps of length [`BLUR_KERNEL_SIZE`].
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let r = (BLUR_KERNEL_SIZE / 2) as isize;
    let mut k: Vec<f64> = (-r..=r)
        .map(|i| {
            if sigma > 0.0 {
                (-((i * i) as f64) / (2.0 * sigma * sigma)).exp()
            } else if i == 0 {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// Mirror index into `[0, n)` without repeating the edge sample.
fn reflect(mut i: isize, n: usize) -> usize {
    let n = n as isize;
    if n == 1 {
        return 0;
    }
    let period = 2 * (n - 1);
    i = i.rem_euclid(period);
    (if i >= n { period - i } else { i }) as usize
}

/// Separable isotropic Gaussian blur with mirrored borders; identity for
/// `sigma <= 0`.
pub fn gaussian_blur<T: Real>(img: &Image<T>, sigma: f64) -> Image<T> {
    if !(sigma > 0.0) {
        return img.clone();
    }
    let taps: Vec<T> = gaussian_kernel(sigma).into_iter().map(T::of).collect();
    let r = (taps.len() / 2) as isize;
    let (w, h) = img.dims();
    let src = img.data();
    let mut tmp = vec![T::zero(); w * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..w {
            tmp[y * w + x] = taps
                .iter()
                .enumerate()
                .map(|(k, &c)| c * row[reflect(x as isize + k as isize - r, w)])
                .sum();
        }
    }
    Image::from_fn(w, h, |x, y| {
        taps.iter()
            .enumerate()
            .map(|(k, &c)| c * tmp[reflect(y as isize + k as isize - r, h) * w + x])
            .sum()
    })
}

/// Downsamples by an integer `factor`; output is `⌊w/factor⌋ × ⌊h/factor⌋`.
pub fn downsample<T: Real>(img: &Image<T>, factor: usize, method: DownsampleMethod) -> Result<Image<T>> {
    let (w, h) = img.dims();
    if factor == 0 {
        return Err(Error::Domain("downsample factor must be >= 1".into()));
    }
    if w < factor || h < factor {
        return Err(Error::InvalidImage(format!("{w}x{h} image is smaller than factor {factor}")));
    }
    if factor == 1 {
        return Ok(img.clone());
    }
    let (ow, oh) = (w / factor, h / factor);
    let out = match method {
        DownsampleMethod::Nearest => {
            let c = factor / 2;
            Image::from_fn(ow, oh, |x, y| img[(x * factor + c, y * factor + c)])
        }
        DownsampleMethod::Box => {
            let norm = T::from_usize(factor * factor).expect("usize converts to Real").recip();
            Image::from_fn(ow, oh, |x, y| {
                let mut acc = T::zero();
                for yy in y * factor..(y + 1) * factor {
                    for xx in x * factor..(x + 1) * factor {
                        acc += img[(xx, yy)];
                    }
                }
                acc * norm
            })
        }
        DownsampleMethod::Bilinear => {
            let f = factor as f64;
            let sample_at = |p: usize, n: usize| -> (usize, usize, T) {
                let s = ((p as f64 + 0.5) * f - 0.5).clamp(0.0, (n - 1) as f64);
                let i0 = s.floor() as usize;
                let i1 = (i0 + 1).min(n - 1);
                (i0, i1, T::of(s - i0 as f64))
            };
            Image::from_fn(ow, oh, |x, y| {
                let (x0, x1, fx) = sample_at(x, w);
                let (y0, y1, fy) = sample_at(y, h);
                let top = img[(x0, y0)] * (T::one() - fx) + img[(x1, y0)] * fx;
                let bottom = img[(x0, y1)] * (T::one() - fx) + img[(x1, y1)] * fx;
                top * (T::one() - fy) + bottom * fy
            })
        }
    };
    Ok(out)
}

/// Adds zero-mean Gaussian noise of std `sigma`, drawn per pixel from the
/// `(seed, x, y)` stream; identity for `sigma <= 0`.
pub fn add_gaussian_noise<T: Real>(img: &Image<T>, sigma: f64, seed: u64) -> Image<T> {
    if !(sigma > 0.0) {
        return img.clone();
    }
    Image::from_fn(img.width(), img.height(), |x, y| {
        img[(x, y)] + T::of(sigma * PixelRng::new(seed, Stage::Noise, x, y).normal())
    })
}

/// Applies blur, downsampling and noise in `params.order`, then clamps the
/// result to `[0, 1]`.
pub fn spatial_degrade_with<T: Real>(
    img: &IntensityImage<T>,
    params: &SpatialParams,
    seed: u64,
) -> Result<IntensityImage<T>> {
    if img.width() < params.factor || img.height() < params.factor {
        return Err(Error::InvalidImage(format!(
            "{}x{} image is smaller than factor {}",
            img.width(),
            img.height(),
            params.factor
        )));
    }
    let mut cur: Image<T> = (**img).clone();
    for op in params.order {
        cur = match op {
            SpatialOp::Blur => gaussian_blur(&cur, params.blur_sigma),
            SpatialOp::Downsample => downsample(&cur, params.factor, params.method)?,
            SpatialOp::Noise => add_gaussian_noise(&cur, params.noise_sigma, seed),
        };
    }
    Ok(IntensityImage::clamped(cur))
}

/// Samples spatial parameters from `config` and applies them.
pub fn spatial_degrade<T: Real>(
    img: &IntensityImage<T>,
    config: &DegradationConfig,
    seed: u64,
) -> Result<IntensityImage<T>> {
    config.validate()?;
    spatial_degrade_with(img, &SpatialParams::sample(config, seed), seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(w: usize, h: usize) -> IntensityImage<f64> {
        IntensityImage::new(Image::from_fn(w, h, |x, y| ((x + y) as f64 / (w + h) as f64).min(1.0))).unwrap()
    }

    #[test]
    fn identity_params_are_identity() {
        let img = ramp(17, 9);
        assert_eq!(spatial_degrade_with(&img, &SpatialParams::identity(), 4).unwrap(), img);
        let cfg = DegradationConfig::identity(0.2);
        assert_eq!(spatial_degrade(&img, &cfg, 4).unwrap(), img);
    }

    #[test]
    fn blur_conserves_energy() {
        let mut img = Image::filled(64, 64, 0.0f64);
        img[(32, 32)] = 1.0;
        for sigma in [0.1, 0.7, 2.4] {
            let b = gaussian_blur(&img, sigma);
            let total: f64 = b.data().iter().sum();
            assert!((total - 1.0).abs() < 1e-6, "{sigma}: {total}");
        }
        assert!(gaussian_kernel(1.3).iter().sum::<f64>() - 1.0 < 1e-15);
    }

    #[test]
    fn blur_handles_tiny_images() {
        let img = Image::new(1, 2, vec![0.0f64, 1.0]).unwrap();
        let b = gaussian_blur(&img, 2.0);
        assert!(b.data().iter().all(|v| v.is_finite()));
        assert_eq!(reflect(-1, 5), 1);
        assert_eq!(reflect(5, 5), 3);
        assert_eq!(reflect(-20, 3), 0);
    }

    #[test]
    fn downsample_shapes_and_values() {
        let img = Image::from_fn(9, 8, |x, _| x as f64);
        for m in DownsampleMethod::ALL {
            let d = downsample(&img, 4, m).unwrap();
            assert_eq!(d.dims(), (2, 2));
        }
        let boxed = downsample(&img, 4, DownsampleMethod::Box).unwrap();
        assert_eq!(boxed[(0, 0)], 1.5);
        let bil = downsample(&img, 4, DownsampleMethod::Bilinear).unwrap();
        assert_eq!(bil[(1, 0)], 5.5);
        assert_eq!(downsample(&img, 4, DownsampleMethod::Nearest).unwrap()[(1, 1)], 6.0);
        assert!(downsample(&Image::filled(3, 3, 0.0f64), 4, DownsampleMethod::Box).is_err());
    }

    #[test]
    fn noise_is_seeded() {
        let img = Image::filled(8, 8, 0.5f64);
        assert_eq!(add_gaussian_noise(&img, 0.1, 3), add_gaussian_noise(&img, 0.1, 3));
        assert_ne!(add_gaussian_noise(&img, 0.1, 3), add_gaussian_noise(&img, 0.1, 4));
    }

    #[test]
    fn output_clamped_and_shuffled_orders_vary() {
        let img = ramp(32, 32);
        let cfg = DegradationConfig { gaussian_sigma_range: super::super::config::Interval(0.3, 0.3), ..Default::default() };
        let out = spatial_degrade(&img, &cfg, 1).unwrap();
        assert_eq!(out.dims(), (8, 8));
        assert!(out.data().iter().all(|v| (0.0..=1.0).contains(v)));
        let orders: std::collections::HashSet<_> =
            (0..64).map(|s| format!("{:?}", SpatialParams::sample(&cfg, s).order)).collect();
        assert_eq!(orders.len(), 6);
        let fixed = DegradationConfig { shuffle_spatial: false, ..cfg };
        assert!((0..16).all(|s| SpatialParams::sample(&fixed, s).order == SpatialParams::FIXED_ORDER));
    }
}
