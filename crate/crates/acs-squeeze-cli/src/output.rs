//! Output plumbing shared by all subcommands: 12-significant-digit number
//! formatting, `undefined` markers (no NaN/Inf ever reaches an artifact),
//! comment-headed CSV assembly, and atomic file writes.

use crate::{CliError, CliResult};
use std::fmt::Write as _;
use std::path::Path;

/// Formats a finite value with 12 significant digits ('.' decimal point).
/// Negative zero is normalized so equal values always print identically.
pub fn fmt_f64(x: f64) -> String {
    if !x.is_finite() {
        return "undefined".into();
    }
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// `undefined` for `None` or non-finite values.
pub fn fmt_opt(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => fmt_f64(v),
        _ => "undefined".into(),
    }
}

/// CSV artifact under construction: `#` comment header (command, config echo,
/// seed) followed by a column-name row and data rows. Separator is ','.
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(command: &str) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "# acs-squeeze {command}");
        Csv { text, columns: 0 }
    }

    /// Adds one `# key = value` header line (the config/seed record).
    pub fn comment(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.text, "# {key} = {value}");
        self
    }

    pub fn header(&mut self, names: &[&str]) -> &mut Self {
        self.columns = names.len();
        let _ = writeln!(self.text, "{}", names.join(","));
        self
    }

    pub fn row(&mut self, fields: &[String]) -> &mut Self {
        debug_assert_eq!(fields.len(), self.columns, "row width != header width");
        let _ = writeln!(self.text, "{}", fields.join(","));
        self
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Writes `bytes` to `path` via a same-directory temp file and rename, so the
/// destination either keeps its old content or receives the complete new one.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| CliError(format!("output path '{}' has no file name", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    std::fs::write(&tmp, bytes)
        .map_err(|e| CliError(format!("cannot write '{}': {e}", path.display())))?;
    if let Err(e) = std::fs::rename(&tmp, path) {
        let _ = std::fs::remove_file(&tmp);
        return Err(CliError(format!("cannot write '{}': {e}", path.display())));
    }
    Ok(())
}

/// Sends text to `path` atomically, or to stdout when no path was given.
pub fn deliver(path: &Option<std::path::PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => atomic_write(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Pretty JSON with a trailing newline (stable byte-for-byte per input).
pub fn json_text(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON serialization cannot fail");
    s.push('\n');
    s
}

/// Inclusive linear grid; `steps == 1` yields just `lo`.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps).map(|i| lo + h * i as f64).collect()
}
