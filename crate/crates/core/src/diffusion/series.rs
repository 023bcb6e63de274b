use std::io::{self, BufRead, Write};

use num_bigint::BigUint;

use super::walk::{CayleyWalk, HeatSimulator};
use crate::error::{Error, Result};
use crate::ntheory::Modulus;

pub const CSV_HEADER: &str = "n,p_e,inv_p_e,rounded";

/// One step of the identity readout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub n: u64,
    pub p_e: f64,
    pub inv_p_e: f64,
    pub rounded: u64,
}

impl SeriesRow {
    pub fn new(n: u64, p_e: f64) -> Self {
        let inv_p_e = 1.0 / p_e;
        Self {
            n,
            p_e,
            inv_p_e,
            rounded: inv_p_e.round() as u64,
        }
    }
}

/// p_n(e), 1/p_n(e) and its rounding for n = 0..=steps.
pub fn heat_series(modulus: &Modulus, b: &BigUint, steps: u64, guard: usize) -> Result<Vec<SeriesRow>> {
    let series = crate::with_ring!(modulus, |ring| {
        HeatSimulator::with_guard(CayleyWalk::new(ring, b)?, guard).identity_series(steps)?
    });
    Ok(series
        .into_iter()
        .enumerate()
        .map(|(n, p)| SeriesRow::new(n as u64, p))
        .collect())
}

/// First n from which every later row rounds to `r`.
pub fn stable_from(rows: &[SeriesRow], r: u64) -> Option<u64> {
    let tail = rows.iter().rev().take_while(|row| row.rounded == r).count();
    if tail == 0 {
        None
    } else {
        Some(rows[rows.len() - tail].n)
    }
}

/// Floats are written in shortest round-trip form.
pub fn write_csv<W: Write>(rows: &[SeriesRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{},{},{},{}", row.n, row.p_e, row.inv_p_e, row.rounded)?;
    }
    Ok(())
}

pub fn read_csv<R: BufRead>(input: R) -> Result<Vec<SeriesRow>> {
    let bad = |line: &str| Error::InvalidInput(format!("malformed series row: {line:?}"));
    let mut lines = input.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(Error::InvalidInput(format!("expected header {CSV_HEADER:?}"))),
    }
    let mut rows = Vec::new();
    for line in lines {
        let line = line.map_err(|e| Error::InvalidInput(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 4 {
            return Err(bad(&line));
        }
        rows.push(SeriesRow {
            n: fields[0].parse().map_err(|_| bad(&line))?,
            p_e: fields[1].parse().map_err(|_| bad(&line))?,
            inv_p_e: fields[2].parse().map_err(|_| bad(&line))?,
            rounded: fields[3].parse().map_err(|_| bad(&line))?,
        });
    }
    Ok(rows)
}
