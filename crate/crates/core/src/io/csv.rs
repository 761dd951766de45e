//! Plain CSV writers and readers for snapshots, weights and tabulated input.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::ConfigError;
use crate::grid::FieldState;
use crate::kernel::WeightTable;

fn io_error(path: &Path, source: std::io::Error) -> ConfigError {
    ConfigError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Shortest decimal text that parses back to the same `f64`, with `.` as separator.
///
/// Magnitudes outside `[1e-5, 1e16)` switch to exponent notation to keep rows short.
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn snapshot_csv<T: crate::scalar::Real>(state: &FieldState<T>) -> String {
    let mut out = String::from("x,C\n");
    for (x, c) in state.grid.nodes().zip(&state.values) {
        let _ = writeln!(
            out,
            "{},{}",
            format_float(x.to_f64_lossy()),
            format_float(c.to_f64_lossy())
        );
    }
    out
}

pub fn write_snapshot_csv<T: crate::scalar::Real>(
    state: &FieldState<T>,
    path: &Path,
) -> Result<(), ConfigError> {
    fs::write(path, snapshot_csv(state)).map_err(|e| io_error(path, e))
}

/// `snapshot_<t with six decimals>.csv`.
pub fn snapshot_file_name(t: f64) -> String {
    format!("snapshot_{t:.6}.csv")
}

/// Header `k,w`, one row per offset in the table.
pub fn weights_csv<T: crate::scalar::Real>(table: &WeightTable<T>) -> String {
    let mut out = String::from("k,w\n");
    for (k, w) in table.iter() {
        let _ = writeln!(out, "{k},{}", format_float(w.to_f64_lossy()));
    }
    out
}

/// Parses a two-column numeric CSV with a header line.
pub fn parse_xy_csv(text: &str) -> Result<Vec<(f64, f64)>, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    lines.next().ok_or("file is empty")?;
    lines
        .map(|(n, line)| {
            let mut cols = line.split(',').map(str::trim);
            let parse = |c: Option<&str>| -> Result<f64, String> {
                let c = c.ok_or(format!("line {}: expected two columns", n + 1))?;
                c.parse()
                    .map_err(|_| format!("line {}: `{c}` is not a number", n + 1))
            };
            let x = parse(cols.next())?;
            let y = parse(cols.next())?;
            if cols.next().is_some() {
                return Err(format!("line {}: expected two columns", n + 1));
            }
            Ok((x, y))
        })
        .collect()
}

pub fn read_xy_csv(path: &Path) -> Result<Vec<(f64, f64)>, ConfigError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_xy_csv(&text).map_err(|message| ConfigError::Validation {
        path: path.display().to_string(),
        message,
    })
}

/// Gnuplot script overlaying the given snapshot files.
pub fn gnuplot_script(files: &[(f64, String)]) -> String {
    let mut out = String::from(
        "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'x'\nset ylabel 'C'\n",
    );
    let plots: Vec<String> = files
        .iter()
        .map(|(t, f)| format!("'{f}' using 1:2 with lines title 't = {t}'"))
        .collect();
    if !plots.is_empty() {
        let _ = writeln!(out, "plot {}", plots.join(", \\\n     "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, sample_initial, InitialCondition};
    use crate::kernel::FractionalParams;

    #[test]
    fn three_node_zero_field() {
        let state = FieldState::zeros(build_grid(0.0, 1.0, 2).unwrap());
        assert_eq!(snapshot_csv(&state), "x,C\n0,0\n0.5,0\n1,0\n");
    }

    #[test]
    fn floats_round_trip_exactly() {
        for v in [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            6.02e23,
            1e-5,
            9.999e15,
            f64::MIN_POSITIVE,
            f64::MAX,
        ] {
            assert_eq!(
                format_float(v).parse::<f64>().unwrap().to_bits(),
                v.to_bits()
            );
        }
        assert_eq!(format_float(1e-7), "1e-7");
    }

    #[test]
    fn point_source_row() {
        let grid = build_grid(-10.0_f64, 10.0, 1000).unwrap();
        let state = sample_initial(&InitialCondition::Delta, &grid).unwrap();
        let text = snapshot_csv(&state);
        let row = text.lines().nth(501).unwrap();
        assert_eq!(row.split(',').nth(1).unwrap().parse::<f64>().unwrap(), 50.0);
        let rows = parse_xy_csv(&text).unwrap();
        assert_eq!(rows.len(), 1001);
        assert!(rows
            .iter()
            .zip(&state.values)
            .all(|(r, v)| r.1.to_bits() == v.to_bits()));
    }

    #[test]
    fn weights_header_and_rows() {
        let table = WeightTable::symmetric(FractionalParams::new(2.0, 0.0).unwrap(), 1);
        assert_eq!(weights_csv(&table), "k,w\n-1,1\n0,-2\n1,1\n");
    }

    #[test]
    fn names_and_bad_input() {
        assert_eq!(snapshot_file_name(0.5), "snapshot_0.500000.csv");
        assert!(parse_xy_csv("x,C\n1,2,3\n").is_err());
        assert!(parse_xy_csv("x,C\n1,abc\n").is_err());
        assert!(parse_xy_csv("").is_err());
    }
}
