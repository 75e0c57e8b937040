//! Snapshot CSV and JSON writers. Numbers carry 10 significant digits.

use crate::scheme::CellSample;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

pub const SNAPSHOT_HEADER: &str = "r,rho,v,A,B,M,sqrt_AB,mu";

/// Writes the fixed column order `r̄, ρ, v, A, B, M, √(AB), μ`.
pub fn write_snapshot(w: &mut impl Write, rows: &[CellSample]) -> std::io::Result<()> {
    writeln!(w, "{SNAPSHOT_HEADER}")?;
    for c in rows {
        writeln!(
            w,
            "{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}",
            c.x,
            c.rho,
            c.v,
            c.a,
            c.b,
            c.m,
            c.light_speed(),
            c.mu()
        )?;
    }
    Ok(())
}

pub fn emit_plotdata(path: &Path, rows: &[CellSample]) -> std::io::Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_snapshot(&mut f, rows)?;
    f.flush()
}

pub fn write_json(path: &Path, value: &impl Serialize) -> std::io::Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    f.flush()
}

/// Reads a snapshot written by [`write_snapshot`] back into rows.
pub fn read_snapshot(text: &str) -> Result<Vec<CellSample>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(SNAPSHOT_HEADER) => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    lines
        .map(|l| {
            let v: Vec<f64> = l
                .split(',')
                .map(|s| s.parse::<f64>().map_err(|e| format!("{e}: {l}")))
                .collect::<Result<_, _>>()?;
            if v.len() != 8 {
                return Err(format!("expected 8 columns: {l}"));
            }
            Ok(CellSample {
                x: v[0],
                rho: v[1],
                v: v[2],
                a: v[3],
                b: v[4],
                m: v[5],
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_snapshot_is_header_only() {
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{SNAPSHOT_HEADER}\n"));
    }

    #[test]
    fn rows_round_trip_with_ten_digits() {
        let row = CellSample {
            x: 3.0078125,
            rho: 1.234567890123e-4,
            v: 0.1010101,
            a: 0.98,
            b: 1.0 / 0.98,
            m: 0.03,
        };
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &[row]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("3.007812500e0,1.234567890e-4,"));
        let back = read_snapshot(&text).unwrap()[0];
        assert!((back.rho - row.rho).abs() / row.rho < 1e-9);
        let mu: f64 = text.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
        assert!((mu - (1.0 - row.a)).abs() < 1e-10);
    }
}
