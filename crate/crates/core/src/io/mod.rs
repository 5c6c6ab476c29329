//! On-disk formats. All multi-byte binary fields are little-endian except
//! 16-bit PGM samples, which are big-endian as that format prescribes.

mod events;
mod hottable;
mod pgm;
mod tmat;

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

pub use events::{read_events, write_events, write_events_csv, EVS_HEADER_LEN, EVS_MAGIC, EVS_RECORD_LEN, EVS_VERSION};
pub use hottable::{read_hot_table, write_hot_table};
pub use pgm::{read_image, write_image, Pgm};
pub use tmat::{read_temporal_matrix, write_temporal_matrix, TMAT_HEADER_LEN, TMAT_MAGIC, TMAT_VERSION};

use crate::calib::HotPixelTable;
use crate::capture::EventStream;
use crate::error::Result;
use crate::image::IntensityImage;
use crate::matrix::TemporalMatrix;
use crate::scalar::Real;

/// Reads events from `path`; see [`read_events`].
pub fn parse_events(path: impl AsRef<Path>, csv_dims: Option<(usize, usize)>) -> Result<EventStream> {
    read_events(File::open(path)?, csv_dims)
}

pub fn save_events(path: impl AsRef<Path>, stream: &EventStream) -> Result<()> {
    write_events(BufWriter::new(File::create(path)?), stream)
}

pub fn load_temporal_matrix(path: impl AsRef<Path>) -> Result<TemporalMatrix> {
    read_temporal_matrix(File::open(path)?)
}

pub fn save_temporal_matrix(path: impl AsRef<Path>, m: &TemporalMatrix) -> Result<()> {
    write_temporal_matrix(BufWriter::new(File::create(path)?), m)
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<Pgm> {
    Pgm::read(File::open(path)?)
}

pub fn load_image<T: Real>(path: impl AsRef<Path>) -> Result<IntensityImage<T>> {
    read_image(File::open(path)?)
}

pub fn save_image<T: Real>(path: impl AsRef<Path>, img: &IntensityImage<T>, bits: u8) -> Result<()> {
    write_image(BufWriter::new(File::create(path)?), img, bits)
}

pub fn load_hot_table(path: impl AsRef<Path>) -> Result<HotPixelTable> {
    read_hot_table(File::open(path)?)
}

pub fn save_hot_table(path: impl AsRef<Path>, table: &HotPixelTable) -> Result<()> {
    write_hot_table(File::create(path)?, table)
}
