//! Hot-pixel tables as text: a `# hotpixels v1 <width> <height>` header and
//! one `x,y` pair per line.

use std::io::{BufRead, BufReader, Read, Write};

use crate::calib::{HotPixelTable, TableSource};
use crate::error::{Error, Result};

const HEADER_PREFIX: &str = "# hotpixels v1";

pub fn write_hot_table<W: Write>(w: W, table: &HotPixelTable) -> Result<()> {
    let mut out = std::io::BufWriter::new(w);
    writeln!(out, "{HEADER_PREFIX} {} {}", table.width(), table.height())?;
    for (x, y) in table.iter() {
        writeln!(out, "{x},{y}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_hot_table<R: Read>(r: R) -> Result<HotPixelTable> {
    let mut lines = BufReader::new(r).lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    let dims = header
        .trim()
        .strip_prefix(HEADER_PREFIX)
        .map(|rest| rest.split_whitespace().map(str::parse::<usize>).collect::<Vec<_>>());
    let mut table = match dims.as_deref() {
        Some([Ok(w), Ok(h)]) => HotPixelTable::new(*w, *h, TableSource::File)
            .map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?,
        _ => {
            return Err(Error::Parse { line: 1, msg: format!("expected \"{HEADER_PREFIX} <width> <height>\"") })
        }
    };
    for (i, line) in lines.enumerate() {
        let line_no = i as u64 + 2;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed = line
            .split_once(',')
            .and_then(|(x, y)| Some((x.trim().parse::<usize>().ok()?, y.trim().parse::<usize>().ok()?)));
        let (x, y) = parsed.ok_or_else(|| Error::Parse { line: line_no, msg: format!("expected \"x,y\", got {line:?}") })?;
        table
            .insert(x, y)
            .map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
    }
    Ok(table)
}
