//! CSV and JSON sidecar helpers shared by the exporters.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// Formats a float with 17 significant digits, '.' as decimal separator.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `header` followed by `rows` (already formatted fields) as CSV.
pub fn write_csv<P, I, R>(path: P, header: &[&str], rows: I) -> Result<()>
where
    P: AsRef<Path>,
    I: IntoIterator<Item = R>,
    R: AsRef<[String]>,
{
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.as_ref().join(","));
        out.push('\n');
    }
    write_atomic(path.as_ref(), out.as_bytes())
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<P: AsRef<Path>, T: Serialize>(path: P, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| crate::Error::Io(e.to_string()))?;
    s.push('\n');
    write_atomic(path.as_ref(), s.as_bytes())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("partial");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
