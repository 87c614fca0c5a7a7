//! Trace CSV: one row per `(solver, k)`, numbers with 17 significant digits.

use std::io::{Read, Write};

use crate::error::CliError;

pub const HEADER: [&str; 12] = [
    "k",
    "solver",
    "f_gap",
    "grad_norm",
    "block",
    "beta",
    "a",
    "A",
    "tau",
    "bound_aam_main",
    "bound_am_linear",
    "wall_ms",
];

/// Smallest gap accepted as round-off.
pub const GAP_FLOOR: f64 = -1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub k: usize,
    pub solver: String,
    pub f_gap: f64,
    pub grad_norm: f64,
    pub block: Option<usize>,
    pub beta: Option<f64>,
    pub a: Option<f64>,
    pub big_a: Option<f64>,
    pub tau: Option<f64>,
    pub bound_aam_main: Option<f64>,
    pub bound_am_linear: Option<f64>,
    pub wall_ms: Option<f64>,
}

/// Scientific notation with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// Rows are sorted by `(solver, k)` before writing.
pub fn write_trace<W: Write>(out: W, rows: &[TraceRow]) -> Result<(), csv::Error> {
    let mut sorted: Vec<&TraceRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.solver.cmp(&b.solver).then(a.k.cmp(&b.k)));
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(HEADER)?;
    for r in sorted {
        w.write_record([
            r.k.to_string(),
            r.solver.clone(),
            fmt_num(r.f_gap),
            fmt_num(r.grad_norm),
            r.block.map(|b| b.to_string()).unwrap_or_default(),
            opt(r.beta),
            opt(r.a),
            opt(r.big_a),
            opt(r.tau),
            opt(r.bound_aam_main),
            opt(r.bound_am_linear),
            opt(r.wall_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn field(rec: &csv::StringRecord, i: usize, line: u64) -> Result<&str, CliError> {
    rec.get(i)
        .ok_or_else(|| CliError::TraceParse(format!("line {line}: missing column {}", HEADER[i])))
}

fn num(rec: &csv::StringRecord, i: usize, line: u64) -> Result<f64, CliError> {
    let s = field(rec, i, line)?;
    s.parse()
        .map_err(|_| CliError::TraceParse(format!("line {line}: column {}: bad number '{s}'", HEADER[i])))
}

fn opt_num(rec: &csv::StringRecord, i: usize, line: u64) -> Result<Option<f64>, CliError> {
    if field(rec, i, line)?.is_empty() {
        Ok(None)
    } else {
        num(rec, i, line).map(Some)
    }
}

fn index(rec: &csv::StringRecord, i: usize, line: u64) -> Result<usize, CliError> {
    let s = field(rec, i, line)?;
    s.parse()
        .map_err(|_| CliError::TraceParse(format!("line {line}: column {}: bad index '{s}'", HEADER[i])))
}

/// Parse a trace, checking the header and the `(solver, k)` ordering.
pub fn read_trace<R: Read>(input: R) -> Result<Vec<TraceRow>, CliError> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = rd.headers().map_err(|e| CliError::TraceParse(e.to_string()))?;
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(CliError::TraceParse(format!(
            "unexpected header '{}'",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows: Vec<TraceRow> = Vec::new();
    for (n, rec) in rd.records().enumerate() {
        let line = n as u64 + 2;
        let rec = rec.map_err(|e| CliError::TraceParse(e.to_string()))?;
        let block = field(&rec, 4, line)?;
        let row = TraceRow {
            k: index(&rec, 0, line)?,
            solver: field(&rec, 1, line)?.to_string(),
            f_gap: num(&rec, 2, line)?,
            grad_norm: num(&rec, 3, line)?,
            block: if block.is_empty() { None } else { Some(index(&rec, 4, line)?) },
            beta: opt_num(&rec, 5, line)?,
            a: opt_num(&rec, 6, line)?,
            big_a: opt_num(&rec, 7, line)?,
            tau: opt_num(&rec, 8, line)?,
            bound_aam_main: opt_num(&rec, 9, line)?,
            bound_am_linear: opt_num(&rec, 10, line)?,
            wall_ms: opt_num(&rec, 11, line)?,
        };
        if let Some(prev) = rows.last() {
            let ordered = (prev.solver.as_str(), prev.k) < (row.solver.as_str(), row.k);
            if !ordered {
                return Err(CliError::TraceParse(format!(
                    "line {line}: rows must be ordered by (solver, k)"
                )));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(solver: &str, k: usize, gap: f64) -> TraceRow {
        TraceRow {
            k,
            solver: solver.into(),
            f_gap: gap,
            grad_norm: 0.5,
            block: (k > 0).then_some(1),
            beta: None,
            a: Some(1.0 / 3.0),
            big_a: Some(0.1),
            tau: None,
            bound_aam_main: None,
            bound_am_linear: Some(2.0),
            wall_ms: None,
        }
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_num(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(fmt_num(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_num(-2.5e-300), "-2.5000000000000000e-300");
        for x in [1.0 / 3.0, std::f64::consts::PI, 1e-300, 123456789.123] {
            assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn round_trip_sorts_rows() {
        let rows = vec![row("b", 1, 0.25), row("a", 1, 1e-9), row("b", 0, 1.0), row("a", 0, 3.0)];
        let mut buf = Vec::new();
        write_trace(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("k,solver,f_gap,grad_norm,block,beta,a,A,tau,bound_aam_main,bound_am_linear,wall_ms\n"));
        let back = read_trace(buf.as_slice()).unwrap();
        let order: Vec<(&str, usize)> = back.iter().map(|r| (r.solver.as_str(), r.k)).collect();
        assert_eq!(order, vec![("a", 0), ("a", 1), ("b", 0), ("b", 1)]);
        assert_eq!(back[1], rows[1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_trace("k,solver\n0,am\n".as_bytes()).is_err());
        let mut buf = Vec::new();
        write_trace(&mut buf, &[row("a", 0, 1.0)]).unwrap();
        let text = String::from_utf8(buf).unwrap().replace("1.0000000000000000e0", "one");
        assert!(matches!(read_trace(text.as_bytes()), Err(CliError::TraceParse(_))));
    }
}
