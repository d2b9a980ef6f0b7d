use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

/// Columns of equal length written as CSV with a one-line header and 17
/// significant digits.
pub fn csv_string(header: &[&str], columns: &[&[f64]]) -> String {
    let rows = columns.first().map_or(0, |c| c.len());
    let mut out = String::with_capacity(rows * columns.len() * 24 + 64);
    out.push_str(&header.join(","));
    out.push('\n');
    for i in 0..rows {
        for (j, col) in columns.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{:.16e}", col[i]);
        }
        out.push('\n');
    }
    out
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(dir, name, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let s = csv_string(&["x", "y"], &[&[0.0, 0.1], &[1.0, -2.5e-20]]);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "x,y");
        assert_eq!(lines[1], "0.0000000000000000e0,1.0000000000000000e0");
        assert_eq!(lines[2], "1.0000000000000001e-1,-2.4999999999999999e-20");
        // 17 significant digits round-trip exactly
        let back: f64 = lines[2].split(',').next().unwrap().parse().unwrap();
        assert_eq!(back, 0.1);
    }
}
