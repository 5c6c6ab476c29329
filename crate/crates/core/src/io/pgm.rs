//! Binary greymaps (PGM `P5`), 8 or 16 bits per sample.

use std::io::{BufRead, BufReader, Read, Write};

use crate::error::{Error, Result};
use crate::image::{Image, IntensityImage};
use crate::scalar::Real;

/// Raw samples of a greymap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major samples in `0..=maxval`.
    pub data: Vec<u16>,
}

impl Pgm {
    /// Samples scaled to `[0, 1]` by `maxval`.
    pub fn to_intensity<T: Real>(&self) -> IntensityImage<T> {
        let scale = T::of(self.maxval as f64).recip();
        let img = Image::new(self.width, self.height, self.data.iter().map(|&v| T::of(v as f64) * scale).collect())
            .expect("sample count matches header");
        IntensityImage::clamped(img)
    }

    /// Quantizes to `bits` (8 or 16) with round-half-up.
    pub fn from_intensity<T: Real>(img: &IntensityImage<T>, bits: u8) -> Result<Self> {
        let maxval: u16 = match bits {
            8 => 255,
            16 => 65535,
            _ => return Err(Error::Unsupported(format!("{bits}-bit greymaps"))),
        };
        let m = maxval as f64;
        let data = img
            .data()
            .iter()
            .map(|v| (v.as_f64().clamp(0.0, 1.0) * m + 0.5).floor().min(m) as u16)
            .collect();
        Ok(Self { width: img.width(), height: img.height(), maxval, data })
    }

    pub fn read<R: Read>(reader: R) -> Result<Self> {
        let mut r = BufReader::new(reader);
        let mut magic = [0u8; 2];
        r.read_exact(&mut magic).map_err(|_| Error::Format("empty greymap".into()))?;
        match &magic {
            b"P5" => {}
            b"P1" | b"P2" | b"P3" | b"P4" | b"P6" | b"P7" => {
                return Err(Error::Unsupported(format!(
                    "{} (only binary greymaps, P5, are read)",
                    String::from_utf8_lossy(&magic)
                )))
            }
            _ => return Err(Error::Format("not a PGM file".into())),
        }
        let width = header_int(&mut r)?;
        let height = header_int(&mut r)?;
        let maxval = header_int(&mut r)?;
        if width == 0 || height == 0 {
            return Err(Error::Format("zero image dimension".into()));
        }
        if !(1..=65535).contains(&maxval) {
            return Err(Error::Format(format!("maxval {maxval} outside 1..=65535")));
        }
        let n = width * height;
        let wide = maxval > 255;
        let mut raw = vec![0u8; if wide { 2 * n } else { n }];
        r.read_exact(&mut raw).map_err(|_| Error::Format("truncated raster".into()))?;
        let data: Vec<u16> = if wide {
            raw.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect()
        } else {
            raw.into_iter().map(u16::from).collect()
        };
        if let Some(v) = data.iter().find(|&&v| v as usize > maxval) {
            return Err(Error::Format(format!("sample {v} exceeds maxval {maxval}")));
        }
        Ok(Self { width, height, maxval: maxval as u16, data })
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        let mut buf = format!("P5\n{} {}\n{}\n", self.width, self.height, self.maxval).into_bytes();
        if self.maxval > 255 {
            buf.extend(self.data.iter().flat_map(|v| v.to_be_bytes()));
        } else {
            buf.extend(self.data.iter().map(|&v| v as u8));
        }
        w.write_all(&buf)?;
        Ok(())
    }
}

/// Next decimal header field, skipping whitespace and `#` comments; consumes
/// exactly one whitespace byte after the digits.
fn header_int<R: BufRead>(r: &mut R) -> Result<usize> {
    let mut byte = [0u8; 1];
    let mut next = |r: &mut R| -> Result<u8> {
        r.read_exact(&mut byte).map_err(|_| Error::Format("truncated header".into()))?;
        Ok(byte[0])
    };
    let mut c = next(r)?;
    loop {
        if c == b'#' {
            while c != b'\n' {
                c = next(r)?;
            }
        } else if !c.is_ascii_whitespace() {
            break;
        }
        c = next(r)?;
    }
    let mut value: usize = 0;
    if !c.is_ascii_digit() {
        return Err(Error::Format(format!("unexpected byte {c:#04x} in header")));
    }
    while c.is_ascii_digit() {
        value = value
            .checked_mul(10)
            .and_then(|v| v.checked_add((c - b'0') as usize))
            .filter(|&v| v <= u32::MAX as usize)
            .ok_or_else(|| Error::Format("header field overflows".into()))?;
        c = next(r)?;
    }
    if !c.is_ascii_whitespace() {
        return Err(Error::Format(format!("unexpected byte {c:#04x} in header")));
    }
    Ok(value)
}

pub fn read_image<T: Real, R: Read>(r: R) -> Result<IntensityImage<T>> {
    Ok(Pgm::read(r)?.to_intensity())
}

pub fn write_image<T: Real, W: Write>(w: W, img: &IntensityImage<T>, bits: u8) -> Result<()> {
    Pgm::from_intensity(img, bits)?.write(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_8bit_with_comments() {
        let bytes = b"P5\n# made by hand\n2 1\n255\n\x80\xff";
        let img: IntensityImage<f64> = read_image(&bytes[..]).unwrap();
        assert_eq!(img[(0, 0)], 128.0 / 255.0);
        assert_eq!(img[(1, 0)], 1.0);
    }

    #[test]
    fn sixteen_bit_round_trip_bound() {
        let img = IntensityImage::new(Image::from_fn(37, 5, |x, y| ((x * 131 + y * 71) % 1000) as f64 / 999.0)).unwrap();
        let mut buf = Vec::new();
        write_image(&mut buf, &img, 16).unwrap();
        let back: IntensityImage<f64> = read_image(buf.as_slice()).unwrap();
        for (a, b) in img.data().iter().zip(back.data()) {
            assert!((a - b).abs() <= 1.0 / 131_070.0 + 1e-15);
        }
    }

    #[test]
    fn round_half_up() {
        let img = IntensityImage::from_vec(2, 1, vec![0.5 / 255.0, 1.0]).unwrap();
        assert_eq!(Pgm::from_intensity(&img, 8).unwrap().data, vec![1, 255]);
    }

    #[test]
    fn rejects_other_formats() {
        assert!(matches!(Pgm::read(&b"P2\n1 1\n255\n0\n"[..]), Err(Error::Unsupported(_))));
        assert!(matches!(Pgm::read(&b"P6\n1 1\n255\n\0\0\0"[..]), Err(Error::Unsupported(_))));
        assert!(matches!(Pgm::read(&b"P5\n2 2\n255\n\0"[..]), Err(Error::Format(_))));
        assert!(matches!(Pgm::read(&b"P5\n1 1\n0\n\0"[..]), Err(Error::Format(_))));
        assert!(matches!(Pgm::read(&b"BM"[..]), Err(Error::Format(_))));
    }
}
