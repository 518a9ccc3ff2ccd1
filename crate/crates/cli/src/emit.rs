//! Deterministic output plumbing: fixed field order, shortest round-trip
//! float formatting (Rust's default), atomic file replacement.

use std::io::Write;
use std::path::Path;

use qdisc_core::Error;

/// Serialize an f64 with the shortest decimal that round-trips.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Write to stdout, or atomically to `path` (temp file in the target
/// directory, then rename) so no partial file survives an error.
pub fn emit(path: Option<&str>, content: &str) -> Result<(), Error> {
    match path {
        None => {
            print!("{content}");
            std::io::stdout()
                .flush()
                .map_err(|e| Error::ConfigError(format!("stdout write failed: {e}")))
        }
        Some(p) => {
            let target = Path::new(p);
            let dir = target.parent().filter(|d| !d.as_os_str().is_empty());
            let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))
                .map_err(|e| Error::ConfigError(format!("cannot create temp file near {p}: {e}")))?;
            tmp.write_all(content.as_bytes())
                .map_err(|e| Error::ConfigError(format!("write to temp file failed: {e}")))?;
            tmp.persist(target)
                .map_err(|e| Error::ConfigError(format!("cannot move output into place at {p}: {e}")))?;
            Ok(())
        }
    }
}

/// CSV table with a fixed header; floats use shortest round-trip formatting.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
