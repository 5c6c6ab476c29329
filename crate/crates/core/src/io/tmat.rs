//! Binary Temporal Matrix files (`TMAT`).

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::error::{Error, Result};
use crate::io::events::dims_u16;
use crate::matrix::TemporalMatrix;

pub const TMAT_MAGIC: &[u8; 4] = b"TMAT";
pub const TMAT_VERSION: u16 = 1;
/// Magic, version, width, height, tick.
pub const TMAT_HEADER_LEN: usize = 4 + 2 + 2 + 2 + 4;

pub fn write_temporal_matrix<W: Write>(mut w: W, m: &TemporalMatrix) -> Result<()> {
    let (width, height) = dims_u16(m.width(), m.height())?;
    let mut buf = Vec::with_capacity(TMAT_HEADER_LEN + m.timestamps().len() * 8);
    buf.extend_from_slice(TMAT_MAGIC);
    buf.write_u16::<LittleEndian>(TMAT_VERSION)?;
    buf.write_u16::<LittleEndian>(width)?;
    buf.write_u16::<LittleEndian>(height)?;
    buf.write_u32::<LittleEndian>(m.tick_us())?;
    for &t in m.timestamps() {
        buf.write_u64::<LittleEndian>(t)?;
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_temporal_matrix<R: Read>(mut r: R) -> Result<TemporalMatrix> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < TMAT_HEADER_LEN {
        return Err(Error::Format(format!("{} bytes is shorter than the TMAT header", bytes.len())));
    }
    if &bytes[..4] != TMAT_MAGIC {
        return Err(Error::Unsupported(format!("unknown magic {:?}", String::from_utf8_lossy(&bytes[..4]))));
    }
    let mut h = &bytes[4..TMAT_HEADER_LEN];
    let version = h.read_u16::<LittleEndian>()?;
    if version != TMAT_VERSION {
        return Err(Error::Unsupported(format!("TMAT version {version}")));
    }
    let width = h.read_u16::<LittleEndian>()? as usize;
    let height = h.read_u16::<LittleEndian>()? as usize;
    let tick = h.read_u32::<LittleEndian>()?;
    if width == 0 || height == 0 {
        return Err(Error::Format("zero matrix dimension".into()));
    }
    let payload = &bytes[TMAT_HEADER_LEN..];
    let expected = width * height * 8;
    if payload.len() != expected {
        return Err(Error::Format(format!(
            "{width}x{height} matrix needs {expected} payload bytes, found {}",
            payload.len()
        )));
    }
    let data = payload
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    TemporalMatrix::new(width, height, tick, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::COLD;

    #[test]
    fn round_trip_keeps_cold() {
        let m = TemporalMatrix::new(3, 2, 4, vec![0, 1, COLD, u64::MAX - 1, 42, 7]).unwrap();
        let mut buf = Vec::new();
        write_temporal_matrix(&mut buf, &m).unwrap();
        assert_eq!(buf.len(), TMAT_HEADER_LEN + 6 * 8);
        let back = read_temporal_matrix(buf.as_slice()).unwrap();
        assert_eq!(back, m);
        assert!(back.is_cold(2, 0));
    }

    #[test]
    fn rejects_truncated_and_zero_dims() {
        let m = TemporalMatrix::new(2, 2, 1, vec![1, 2, 3, 4]).unwrap();
        let mut buf = Vec::new();
        write_temporal_matrix(&mut buf, &m).unwrap();
        assert!(read_temporal_matrix(&buf[..buf.len() - 3]).is_err());
        let mut zero = buf.clone();
        zero[6] = 0;
        assert!(read_temporal_matrix(zero.as_slice()).is_err());
        assert!(read_temporal_matrix(&b"EVS0"[..]).is_err());
    }
}
