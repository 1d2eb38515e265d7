//! Output plumbing shared by the subcommands: fixed-width float formatting,
//! CSV cell hygiene, and the stdout-or-file sink. Everything routed through
//! here is byte-deterministic, so repeated runs with the same arguments can
//! be diffed directly.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// Scientific notation with 17 significant digits, enough to round-trip an
/// `f64` exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Empty string for missing values, so CSV cells stay aligned.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Flag and error text lands inside CSV cells; fold the characters that
/// would break the row structure.
pub fn sanitize_cell(s: &str) -> String {
    s.replace(',', ";").replace(['\n', '\r'], " ")
}

/// Joins per-row annotations into a single CSV-safe cell.
pub fn flags_cell(flags: &[String]) -> String {
    sanitize_cell(&flags.join("; "))
}

pub fn write_output(out: Option<&Path>, content: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, content),
        None => io::stdout().write_all(content.as_bytes()),
    }
}
