//! Plain-text CSV serialization of Clifford fields.
//!
//! One row per stored coefficient: site indices, blade mask (decimal),
//! real part, imaginary part. Floats use 17 significant digits so a
//! write/read round trip is exact.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::lattice::{CliffordField, LatticeGrid};

pub fn header(dim: usize) -> String {
    let mut cols: Vec<String> = (1..=dim).map(|j| format!("x{j}")).collect();
    cols.extend(["blade".into(), "re".into(), "im".into()]);
    cols.join(",")
}

pub fn write_field_csv(field: &CliffordField, mut out: impl Write) -> Result<()> {
    let grid = field.grid();
    writeln!(out, "{}", header(grid.dim()))?;
    for (i, v) in field.values().iter().enumerate() {
        let coords = grid.coords(i);
        let site: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
        let site = site.join(",");
        for (mask, c) in v.terms() {
            writeln!(out, "{site},{mask},{:.16e},{:.16e}", c.re, c.im)?;
        }
    }
    Ok(())
}

pub fn field_to_string(field: &CliffordField) -> String {
    let mut buf = Vec::new();
    write_field_csv(field, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Reads a field written by [`write_field_csv`]; sites not listed are zero.
pub fn read_field_csv(grid: LatticeGrid, input: impl BufRead) -> Result<CliffordField> {
    let sig = grid.signature();
    let mut values = vec![Multivector::zero(sig); grid.site_count()];
    let mut lines = input.lines();
    let expected = header(grid.dim());
    let first = lines.next().transpose()?.unwrap_or_default();
    if first.trim() != expected {
        return Err(Error::Parse(format!("expected header '{expected}'")));
    }
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("line {}: {what}", lineno + 2));
        let cols: Vec<&str> = line.trim().split(',').collect();
        if cols.len() != grid.dim() + 3 {
            return Err(bad("wrong column count"));
        }
        let mut coords = Vec::with_capacity(grid.dim());
        for c in &cols[..grid.dim()] {
            let x: usize = c.parse().map_err(|_| bad("bad site index"))?;
            if x >= grid.points() {
                return Err(bad("site index out of range"));
            }
            coords.push(x);
        }
        let mask: u32 = cols[grid.dim()].parse().map_err(|_| bad("bad blade mask"))?;
        if !sig.is_valid_mask(mask) {
            return Err(bad("blade mask outside the algebra"));
        }
        let re: f64 = cols[grid.dim() + 1].parse().map_err(|_| bad("bad real part"))?;
        let im: f64 = cols[grid.dim() + 2].parse().map_err(|_| bad("bad imaginary part"))?;
        values[grid.index(&coords)].accumulate(mask, Complex64::new(re, im));
    }
    CliffordField::from_values(grid, values)
}
