//! Minimal CSV output: comma separated, one header row, 17 significant digits.

use std::io::Write;

use crate::scalar::Real;

/// Formats a value with 17 significant digits in scientific notation.
pub fn sig17<T: Real>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

pub fn write_header<W: Write>(out: &mut W, columns: &[&str]) -> std::io::Result<()> {
    writeln!(out, "{}", columns.join(","))
}

pub fn write_row<W: Write, T: Real>(out: &mut W, values: &[T]) -> std::io::Result<()> {
    let cells: Vec<String> = values.iter().map(|&v| sig17(v)).collect();
    writeln!(out, "{}", cells.join(","))
}
