//! Plain-text serialization of [`ComplexField`].
//!
//! ```text
//! complex-field 1
//! lo <f64>
//! hi <f64>
//! n <usize>
//! representation position|momentum
//! <re> <im>        (n lines)
//! ```
//! Floats are written in shortest round-trip form, so reading a written
//! field reproduces it bit for bit.

use std::io::{BufRead, Write};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::field::{ComplexField, Representation};
use crate::grid::Grid1D;

const MAGIC: &str = "complex-field 1";

pub fn write_field<W: Write>(field: &ComplexField, mut w: W) -> std::io::Result<()> {
    let g = field.grid();
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "lo {:e}", g.lo())?;
    writeln!(w, "hi {:e}", g.hi())?;
    writeln!(w, "n {}", g.len())?;
    let repr = match field.representation() {
        Representation::Position => "position",
        Representation::Momentum => "momentum",
    };
    writeln!(w, "representation {repr}")?;
    for a in field.amps() {
        writeln!(w, "{:e} {:e}", a.re, a.im)?;
    }
    Ok(())
}

fn keyed<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str> {
    let line = line.ok_or_else(|| Error::Parse(format!("missing `{key}` line")))?;
    line.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| Error::Parse(format!("expected `{key} ...`, got `{line}`")))
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad number `{s}`")))
}

pub fn read_field<R: BufRead>(r: R) -> Result<ComplexField> {
    let lines: Vec<String> = r
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::Parse(e.to_string()))?;
    let mut it = lines.iter().map(String::as_str);
    if it.next() != Some(MAGIC) {
        return Err(Error::Parse("missing header".into()));
    }
    let lo: f64 = num(keyed(it.next(), "lo")?)?;
    let hi: f64 = num(keyed(it.next(), "hi")?)?;
    let n: usize = num(keyed(it.next(), "n")?)?;
    let repr = match keyed(it.next(), "representation")? {
        "position" => Representation::Position,
        "momentum" => Representation::Momentum,
        other => return Err(Error::Parse(format!("unknown representation `{other}`"))),
    };
    let grid = Grid1D::new(lo, hi, n)?;
    let amps = it
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut parts = l.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some(re), Some(im), None) => Ok(C64::new(num(re)?, num(im)?)),
                _ => Err(Error::Parse(format!("bad amplitude line `{l}`"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ComplexField::new(grid, amps, repr)
}
