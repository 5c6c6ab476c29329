use crate::calib::HotPixelTable;
use crate::error::{Error, Result};
use crate::image::{Image, IntensityImage};
use crate::scalar::Real;

/// Range std of the edge-preserving smoother, normalized intensity.
const RANGE_SIGMA: f64 = 0.1;

/// Minimal non-learned restoration of a low-quality image.
///
/// Pixels listed in `hot` (mapped from table to image coordinates by integer
/// scaling) are replaced by the median of their non-hot 3×3 neighbours; then
/// a 3×3 bilateral smoother is blended in with weight `strength` (clamped to
/// `[0, 1]`).
pub fn baseline_restore<T: Real>(
    lq: &IntensityImage<T>,
    hot: &HotPixelTable,
    strength: f64,
) -> Result<IntensityImage<T>> {
    let (w, h) = lq.dims();
    let strength = if strength.is_nan() { 0.0 } else { strength.clamp(0.0, 1.0) };
    if hot.is_empty() && strength == 0.0 {
        return Ok(lq.clone());
    }
    if hot.width() < w || hot.height() < h || hot.width() / w != hot.height() / h {
        return Err(Error::DimensionMismatch {
            expected_width: hot.width(),
            expected_height: hot.height(),
            width: w,
            height: h,
        });
    }
    let scale = hot.width() / w;
    let mut mask = vec![false; w * h];
    for (x, y) in hot.iter() {
        let (lx, ly) = (x / scale, y / scale);
        if lx < w && ly < h {
            mask[ly * w + lx] = true;
        }
    }

    let mut img: Image<T> = (**lq).clone();
    let mut neigh = Vec::with_capacity(8);
    for y in 0..h {
        for x in 0..w {
            if !mask[y * w + x] {
                continue;
            }
            neigh.clear();
            for (nx, ny) in neighbours(x, y, w, h) {
                if !mask[ny * w + nx] {
                    neigh.push(lq[(nx, ny)]);
                }
            }
            if let Some(m) = median(&mut neigh) {
                img[(x, y)] = m;
            }
        }
    }

    if strength > 0.0 {
        let s = T::of(strength);
        let inv_two_var = T::of(1.0 / (2.0 * RANGE_SIGMA * RANGE_SIGMA));
        let src = img.clone();
        img = Image::from_fn(w, h, |x, y| {
            let c = src[(x, y)];
            let mut num = c;
            let mut den = T::one();
            for (nx, ny) in neighbours(x, y, w, h) {
                let v = src[(nx, ny)];
                let d2 = T::of(((nx as f64 - x as f64).powi(2) + (ny as f64 - y as f64).powi(2)) * 0.5);
                let wgt = (-(d2 + (v - c) * (v - c) * inv_two_var)).exp();
                num += wgt * v;
                den += wgt;
            }
            c + s * (num / den - c)
        });
    }
    Ok(IntensityImage::clamped(img))
}

fn neighbours(x: usize, y: usize, w: usize, h: usize) -> impl Iterator<Item = (usize, usize)> {
    (-1isize..=1)
        .flat_map(|dy| (-1isize..=1).map(move |dx| (dx, dy)))
        .filter(|&d| d != (0, 0))
        .filter_map(move |(dx, dy)| {
            let nx = x as isize + dx;
            let ny = y as isize + dy;
            (nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h).then_some((nx as usize, ny as usize))
        })
}

fn median<T: Real>(v: &mut [T]) -> Option<T> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(|a, b| a.partial_cmp(b).expect("intensities are finite"));
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) * T::of(0.5) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calib::TableSource;

    fn gradient() -> IntensityImage<f64> {
        IntensityImage::new(Image::from_fn(16, 16, |x, y| (x + y) as f64 / 40.0)).unwrap()
    }

    #[test]
    fn zero_strength_empty_table_is_identity() {
        let img = gradient();
        let table = HotPixelTable::new(16, 16, TableSource::File).unwrap();
        assert_eq!(baseline_restore(&img, &table, 0.0).unwrap(), img);
    }

    #[test]
    fn hot_pixel_replaced_by_neighbour_median() {
        let img = gradient();
        let mut data = (*img).clone();
        data[(7, 9)] = 1.0;
        let hot_img = IntensityImage::new(data).unwrap();
        let mut table = HotPixelTable::new(16, 16, TableSource::Injected).unwrap();
        table.insert(7, 9).unwrap();
        let out = baseline_restore(&hot_img, &table, 0.0).unwrap();
        // neighbours of (7, 9) on the (x + y) / 40 ramp: median of 8 values is 16 / 40
        assert!((out[(7, 9)] - 16.0 / 40.0).abs() < 2.0 / 255.0);
        assert_eq!(out[(0, 0)], img[(0, 0)]);
    }

    #[test]
    fn table_in_high_resolution_coordinates() {
        let img = gradient();
        let mut table = HotPixelTable::new(64, 64, TableSource::Injected).unwrap();
        table.insert(29, 38).unwrap();
        let out = baseline_restore(&img, &table, 0.0).unwrap();
        assert!((out[(7, 9)] - 16.0 / 40.0).abs() < 1e-12);
        let bad = HotPixelTable::new(8, 8, TableSource::File).unwrap();
        assert!(baseline_restore(&img, &bad, 0.5).is_err());
    }

    #[test]
    fn smoothing_stays_in_range() {
        let img = IntensityImage::new(Image::from_fn(9, 9, |x, y| ((x * y) % 2) as f64)).unwrap();
        let table = HotPixelTable::new(9, 9, TableSource::File).unwrap();
        for s in [0.3, 1.0, 7.0, f64::NAN] {
            let out = baseline_restore(&img, &table, s).unwrap();
            assert_eq!(out.dims(), (9, 9));
            assert!(out.data().iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
