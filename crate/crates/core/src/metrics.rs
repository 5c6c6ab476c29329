//! Image-quality and capture statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{Image, IntensityImage};
use crate::matrix::TemporalMatrix;
use crate::scalar::Real;

/// Value reported by [`psnr`] for identical images.
pub const PSNR_CAP_DB: f64 = 99.0;

/// Levels of a 12-bit raw frame, the reference for grayscale resolution.
pub const RAW_12BIT_LEVELS: f64 = 4096.0;

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicRangeReport {
    pub max: f64,
    pub min: f64,
    pub range_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrayscaleResolutionReport {
    pub t_span_us: u64,
    pub tick_us: u32,
    pub levels: u64,
    pub ratio_vs_12bit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaptureTimeReport {
    pub capture_time_us: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_us: Option<u64>,
    /// `1 - capture / baseline`, as a fraction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<f64>,
}

/// Renders a report as one `key=value` line, keys in declaration order.
pub fn to_key_value<S: Serialize>(report: &S) -> Result<String> {
    let value = serde_json::to_value(report).map_err(|e| Error::Format(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Format("report is not a record".into()))?;
    Ok(obj
        .iter()
        .map(|(k, v)| format!("{k}={}", v.as_str().map_or_else(|| v.to_string(), str::to_owned)))
        .collect::<Vec<_>>()
        .join(" "))
}

pub fn to_json<S: Serialize>(report: &S) -> Result<String> {
    serde_json::to_string(report).map_err(|e| Error::Format(e.to_string()))
}

fn same_dims<T: Copy>(a: &Image<T>, b: &Image<T>) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch {
            expected_width: a.width(),
            expected_height: a.height(),
            width: b.width(),
            height: b.height(),
        });
    }
    Ok(())
}

/// Peak signal-to-noise ratio in dB, capped at [`PSNR_CAP_DB`].
pub fn psnr<T: Real>(a: &IntensityImage<T>, b: &IntensityImage<T>, peak: f64) -> Result<f64> {
    same_dims(a, b)?;
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(Error::Domain(format!("peak must be positive, got {peak}")));
    }
    let mse = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| (x.as_f64() - y.as_f64()).powi(2))
        .sum::<f64>()
        / a.len() as f64;
    if mse == 0.0 {
        return Ok(PSNR_CAP_DB);
    }
    Ok((20.0 * (peak / mse.sqrt()).log10()).min(PSNR_CAP_DB))
}

/// Separable valid-mode filtering with a normalized Gaussian window.
fn filter_valid(src: &[f64], w: usize, h: usize, taps: &[f64]) -> Vec<f64> {
    let n = taps.len();
    let (ow, oh) = (w - n + 1, h - n + 1);
    let mut rows = vec![0.0; ow * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..ow {
            rows[y * ow + x] = taps.iter().zip(&row[x..x + n]).map(|(c, v)| c * v).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = taps.iter().enumerate().map(|(k, c)| c * rows[(y + k) * ow + x]).sum();
        }
    }
    out
}

/// Mean structural similarity with an 11×11 Gaussian window (σ = 1.5),
/// `K1 = 0.01`, `K2 = 0.03` and dynamic range 1, over valid windows only.
pub fn ssim<T: Real>(a: &IntensityImage<T>, b: &IntensityImage<T>) -> Result<f64> {
    same_dims(a, b)?;
    let (w, h) = a.dims();
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::InvalidImage(format!(
            "SSIM needs at least {SSIM_WINDOW}x{SSIM_WINDOW} pixels, got {w}x{h}"
        )));
    }
    let r = (SSIM_WINDOW / 2) as i32;
    let mut taps: Vec<f64> = (-r..=r)
        .map(|i| (-(i * i) as f64 / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp())
        .collect();
    let s: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= s);

    let x: Vec<f64> = a.data().iter().map(|v| v.as_f64()).collect();
    let y: Vec<f64> = b.data().iter().map(|v| v.as_f64()).collect();
    let prod = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(u, v)| u * v).collect::<Vec<_>>();
    let mu_x = filter_valid(&x, w, h, &taps);
    let mu_y = filter_valid(&y, w, h, &taps);
    let xx = filter_valid(&prod(&x, &x), w, h, &taps);
    let yy = filter_valid(&prod(&y, &y), w, h, &taps);
    let xy = filter_valid(&prod(&x, &y), w, h, &taps);

    let c1 = SSIM_K1 * SSIM_K1;
    let c2 = SSIM_K2 * SSIM_K2;
    let total: f64 = (0..mu_x.len())
        .map(|i| {
            let (mx, my) = (mu_x[i], mu_y[i]);
            let vx = xx[i] - mx * mx;
            let vy = yy[i] - my * my;
            let cov = xy[i] - mx * my;
            ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2))
        })
        .sum();
    Ok((total / mu_x.len() as f64).clamp(-1.0, 1.0))
}

/// `20 · log10(max / min)`.
pub fn dynamic_range(max: f64, min: f64) -> Result<DynamicRangeReport> {
    if !(min > 0.0 && max > min && max.is_finite()) {
        return Err(Error::Domain(format!("dynamic range needs max > min > 0, got max={max} min={min}")));
    }
    Ok(DynamicRangeReport { max, min, range_db: 20.0 * (max / min).log10() })
}

/// Distinguishable timestamp levels over the non-cold span of `matrix`.
pub fn grayscale_resolution(matrix: &TemporalMatrix, tick_us: u32) -> Result<GrayscaleResolutionReport> {
    if tick_us == 0 {
        return Err(Error::Domain("tick must be >= 1 µs".into()));
    }
    let (lo, hi) = match (matrix.min_valid(), matrix.max_valid()) {
        (Some(lo), Some(hi)) if hi > lo => (lo, hi),
        _ => return Err(Error::Degenerate("matrix needs at least two distinct non-cold timestamps".into())),
    };
    let t_span_us = hi - lo;
    let levels = t_span_us / tick_us as u64;
    Ok(GrayscaleResolutionReport {
        t_span_us,
        tick_us,
        levels,
        ratio_vs_12bit: levels as f64 / RAW_12BIT_LEVELS,
    })
}

/// Latest non-cold timestamp: the time needed to acquire the darkest pixel.
pub fn capture_time(matrix: &TemporalMatrix) -> Result<u64> {
    matrix
        .max_valid()
        .ok_or_else(|| Error::Degenerate("every pixel is cold".into()))
}

/// Fractional exposure saving `1 - capture / baseline`.
pub fn capture_time_reduction(capture_us: f64, baseline_us: f64) -> Result<f64> {
    if !(baseline_us > 0.0 && capture_us >= 0.0) {
        return Err(Error::Domain(format!(
            "reduction needs baseline > 0 and capture >= 0, got {capture_us} / {baseline_us}"
        )));
    }
    Ok(1.0 - capture_us / baseline_us)
}

pub fn capture_time_report(matrix: &TemporalMatrix, baseline_us: Option<u64>) -> Result<CaptureTimeReport> {
    let capture_time_us = capture_time(matrix)?;
    let reduction = baseline_us
        .map(|b| capture_time_reduction(capture_time_us as f64, b as f64))
        .transpose()?;
    Ok(CaptureTimeReport { capture_time_us, baseline_us, reduction })
}
