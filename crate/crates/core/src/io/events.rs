//! Event streams: binary `EVS0` and `t,x,y,p` CSV.

use std::io::{BufRead, BufReader, Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::capture::{Event, EventStream, Polarity};
use crate::error::{Error, Result};

pub const EVS_MAGIC: &[u8; 4] = b"EVS0";
pub const EVS_VERSION: u16 = 1;
/// Magic, version, width, height, count.
pub const EVS_HEADER_LEN: usize = 4 + 2 + 2 + 2 + 8;
/// `t: u64, x: u16, y: u16, p: i8`.
pub const EVS_RECORD_LEN: usize = 13;

/// Writes `stream` as `EVS0`.
pub fn write_events<W: Write>(mut w: W, stream: &EventStream) -> Result<()> {
    let (width, height) = dims_u16(stream.width(), stream.height())?;
    w.write_all(EVS_MAGIC)?;
    w.write_u16::<LittleEndian>(EVS_VERSION)?;
    w.write_u16::<LittleEndian>(width)?;
    w.write_u16::<LittleEndian>(height)?;
    w.write_u64::<LittleEndian>(stream.len() as u64)?;
    let mut buf = Vec::with_capacity(stream.len() * EVS_RECORD_LEN);
    for e in stream.events() {
        buf.write_u64::<LittleEndian>(e.t)?;
        buf.write_u16::<LittleEndian>(e.x)?;
        buf.write_u16::<LittleEndian>(e.y)?;
        buf.write_i8(e.polarity.as_i8())?;
    }
    w.write_all(&buf)?;
    Ok(())
}

/// Writes `stream` as CSV with a `t,x,y,p` header line.
pub fn write_events_csv<W: Write>(w: W, stream: &EventStream) -> Result<()> {
    let mut out = std::io::BufWriter::new(w);
    writeln!(out, "t,x,y,p")?;
    for e in stream.events() {
        writeln!(out, "{},{},{},{}", e.t, e.x, e.y, e.polarity.as_i8())?;
    }
    out.flush()?;
    Ok(())
}

pub(crate) fn dims_u16(width: usize, height: usize) -> Result<(u16, u16)> {
    match (u16::try_from(width), u16::try_from(height)) {
        (Ok(w), Ok(h)) if w > 0 && h > 0 => Ok((w, h)),
        _ => Err(Error::Format(format!("dimensions {width}x{height} do not fit the header"))),
    }
}

/// Reads an event stream, detecting `EVS0` by its magic and CSV otherwise.
///
/// CSV carries no geometry, so `csv_dims` must be given for CSV input; it is
/// ignored for binary input. Out-of-order CSV is sorted with a warning;
/// out-of-order binary input is rejected.
pub fn read_events<R: Read>(reader: R, csv_dims: Option<(usize, usize)>) -> Result<EventStream> {
    let mut r = BufReader::new(reader);
    let head = r.fill_buf()?;
    if head.starts_with(EVS_MAGIC) {
        return read_binary(r);
    }
    if head.len() >= 4 && !looks_like_text(&head[..4]) {
        return Err(Error::Unsupported(format!(
            "unknown magic {:?}",
            String::from_utf8_lossy(&head[..4])
        )));
    }
    let (w, h) = csv_dims.ok_or_else(|| Error::Config("CSV events need explicit sensor dimensions".into()))?;
    read_csv(r, w, h)
}

fn looks_like_text(bytes: &[u8]) -> bool {
    bytes.iter().all(|b| b.is_ascii_graphic() || b.is_ascii_whitespace())
}

fn read_binary<R: Read>(mut r: R) -> Result<EventStream> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    let version = r.read_u16::<LittleEndian>().map_err(truncated)?;
    if version != EVS_VERSION {
        return Err(Error::Unsupported(format!("EVS0 version {version}")));
    }
    let width = r.read_u16::<LittleEndian>().map_err(truncated)? as usize;
    let height = r.read_u16::<LittleEndian>().map_err(truncated)? as usize;
    if width == 0 || height == 0 {
        return Err(Error::Format("zero sensor dimension".into()));
    }
    let count = r.read_u64::<LittleEndian>().map_err(truncated)?;
    let mut payload = Vec::new();
    r.read_to_end(&mut payload)?;
    let expected = (count as u128) * EVS_RECORD_LEN as u128;
    if payload.len() as u128 != expected {
        return Err(Error::Format(format!(
            "header announces {count} events ({expected} bytes), payload has {} bytes",
            payload.len()
        )));
    }
    let mut events = Vec::with_capacity(count as usize);
    for (i, rec) in payload.chunks_exact(EVS_RECORD_LEN).enumerate() {
        let mut c = rec;
        let t = c.read_u64::<LittleEndian>()?;
        let x = c.read_u16::<LittleEndian>()?;
        let y = c.read_u16::<LittleEndian>()?;
        let p = c.read_i8()?;
        let polarity = Polarity::from_i8(p)
            .ok_or_else(|| Error::Format(format!("event {i}: polarity byte {:#04x}", p as u8)))?;
        if x as usize >= width || y as usize >= height {
            return Err(Error::Format(format!("event {i}: ({x}, {y}) outside {width}x{height}")));
        }
        let e = Event::new(t, x, y, polarity);
        if let Some(prev) = events.last() {
            if order_key(prev) > order_key(&e) {
                return Err(Error::Format(format!("event {i} is out of time order")));
            }
        }
        events.push(e);
    }
    EventStream::new(width, height, events)
}

fn order_key(e: &Event) -> (u64, u16, u16) {
    (e.t, e.y, e.x)
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Format("truncated header".into())
    } else {
        Error::Io(e)
    }
}

fn read_csv<R: Read>(r: R, width: usize, height: usize) -> Result<EventStream> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(r);
    let mut events = Vec::new();
    let mut first = true;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::Io(io),
                other => Error::Parse { line, msg: format!("{other:?}") },
            }
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if std::mem::take(&mut first) && rec.get(0).is_some_and(|f| f.eq_ignore_ascii_case("t")) {
            continue;
        }
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != 4 {
            return Err(Error::Parse { line, msg: format!("expected 4 fields, got {}", rec.len()) });
        }
        let field = |i: usize, name: &str| -> Result<i64> {
            rec[i]
                .parse::<i64>()
                .map_err(|_| Error::Parse { line, msg: format!("{name}: not an integer: {:?}", &rec[i]) })
        };
        let t = rec[0]
            .parse::<u64>()
            .map_err(|_| Error::Parse { line, msg: format!("t: not a non-negative integer: {:?}", &rec[0]) })?;
        let x = field(1, "x")?;
        let y = field(2, "y")?;
        let polarity = i8::try_from(field(3, "p")?)
            .ok()
            .and_then(Polarity::from_i8)
            .ok_or_else(|| Error::Parse { line, msg: format!("polarity must be 1 or -1, got {}", &rec[3]) })?;
        if !(0..width as i64).contains(&x) || !(0..height as i64).contains(&y) {
            return Err(Error::Parse { line, msg: format!("({x}, {y}) outside {width}x{height}") });
        }
        events.push(Event::new(t, x as u16, y as u16, polarity));
    }
    let (stream, resorted) = EventStream::from_unsorted(width, height, events)?;
    if resorted {
        log::warn!("CSV events were not in time order; sorted {} events", stream.len());
    }
    Ok(stream)
}
