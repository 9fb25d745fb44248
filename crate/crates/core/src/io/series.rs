//! `series.csv`: diagnostics time series, and the virial consistency report
//! built from it.

use std::fmt::Write as _;
use std::path::Path;

use super::IoError;
use crate::diagnostics::DiagnosticsRecord;

pub fn write_series(path: &Path, records: &[DiagnosticsRecord]) -> Result<(), IoError> {
    let mut text = DiagnosticsRecord::csv_header();
    text.push('\n');
    for r in records {
        text.push_str(&r.csv_row());
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Parsed CSV with optional cells (empty cell = absent).
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl SeriesTable {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let bad = |e: csv::Error| IoError::Format(e.to_string());
        let columns: Vec<String> = reader.headers().map_err(bad)?.iter().map(String::from).collect();
        if columns.iter().all(|c| c.is_empty()) {
            return Err(IoError::Format("empty CSV".into()));
        }
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(bad)?;
            let row = record
                .iter()
                .map(|c| {
                    if c.is_empty() {
                        Ok(None)
                    } else {
                        c.parse::<f64>()
                            .map(Some)
                            .map_err(|_| IoError::Format(format!("row {}: bad number `{c}`", i + 1)))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }

    pub fn column_index(&self, name: &str) -> Result<usize, IoError> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| IoError::MissingColumn(name.into()))
    }

    /// Every cell of a column, which must be present in every row.
    pub fn column(&self, name: &str) -> Result<Vec<f64>, IoError> {
        let j = self.column_index(name)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r[j].ok_or_else(|| IoError::Format(format!("row {}: `{name}` is empty", i + 1)))
            })
            .collect()
    }
}

pub fn read_series(path: &Path) -> Result<SeriesTable, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError::Format(format!("{}: {e}", path.display())))?;
    SeriesTable::parse(&text)
}

/// Second time derivative of the variance against the virial right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct VirialReport {
    pub t: Vec<f64>,
    /// Three-point second difference; absent at the end points.
    pub d2_variance_dt2: Vec<Option<f64>>,
    pub rel_residual: Vec<Option<f64>>,
    /// Max residual over interior rows with `t ≤ t_max`.
    pub max_residual: f64,
    pub window: (f64, f64),
    pub table: SeriesTable,
}

/// `d2_i = 2[(V_{i+1}−V_i)/h₊ − (V_i−V_{i−1})/h₋]/(h₊+h₋)`,
/// `rel = |d2 − rhs| / max(|rhs|, ε_mach)`.
pub fn virial_report(table: &SeriesTable, t_max: Option<f64>) -> Result<VirialReport, IoError> {
    let t = table.column("t")?;
    let v = table.column("variance")?;
    let rhs = table.column("virial_rhs")?;
    let m = t.len();
    if m < 3 {
        return Err(IoError::TooFewSamples(m));
    }
    let mut d2 = vec![None; m];
    let mut rel = vec![None; m];
    let mut max_residual = 0.0f64;
    let mut window = (f64::NAN, f64::NAN);
    for i in 1..m - 1 {
        let (hm, hp) = (t[i] - t[i - 1], t[i + 1] - t[i]);
        if !(hm > 0.0 && hp > 0.0) {
            continue;
        }
        let d = 2.0 * ((v[i + 1] - v[i]) / hp - (v[i] - v[i - 1]) / hm) / (hp + hm);
        let r = (d - rhs[i]).abs() / rhs[i].abs().max(f64::EPSILON);
        d2[i] = Some(d);
        rel[i] = Some(r);
        if t_max.is_none_or(|tm| t[i] <= tm) {
            max_residual = max_residual.max(r);
            if window.0.is_nan() {
                window.0 = t[i];
            }
            window.1 = t[i];
        }
    }
    Ok(VirialReport {
        t,
        d2_variance_dt2: d2,
        rel_residual: rel,
        max_residual,
        window,
        table: table.clone(),
    })
}

impl VirialReport {
    /// The input CSV with `d2_variance_dt2` and `rel_residual` appended.
    pub fn to_csv(&self) -> String {
        let cell = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
        let mut out = self.table.columns.join(",");
        out.push_str(",d2_variance_dt2,rel_residual\n");
        for (i, row) in self.table.rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|&c| cell(c)).collect();
            let _ = writeln!(
                out,
                "{},{},{}",
                cells.join(","),
                cell(self.d2_variance_dt2[i]),
                cell(self.rel_residual[i])
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv(rows: &[(f64, f64, f64)]) -> String {
        let mut s = String::from("t,variance,virial_rhs\n");
        for (t, v, r) in rows {
            s.push_str(&format!("{t},{v},{r}\n"));
        }
        s
    }

    #[test]
    fn quadratic_variance_is_differentiated_exactly() {
        // V = 1 + 4t²K with K = 2 on a nonuniform grid
        let ts = [0.0, 0.1, 0.15, 0.3, 0.32, 0.5];
        let rows: Vec<_> = ts.iter().map(|&t| (t, 1.0 + 8.0 * t * t, 16.0)).collect();
        let rep = virial_report(&SeriesTable::parse(&csv(&rows)).unwrap(), None).unwrap();
        assert!(rep.max_residual < 1e-10, "{}", rep.max_residual);
        assert_eq!(rep.d2_variance_dt2[0], None);
        assert_eq!(rep.window, (0.1, 0.32));
        assert!(rep.to_csv().lines().next().unwrap().ends_with("d2_variance_dt2,rel_residual"));
    }

    #[test]
    fn errors() {
        let two = csv(&[(0.0, 1.0, 1.0), (1.0, 2.0, 1.0)]);
        let e = virial_report(&SeriesTable::parse(&two).unwrap(), None).unwrap_err();
        assert!(e.to_string().contains("need >= 3 samples"), "{e}");
        let t = SeriesTable::parse("t,mass\n0,1\n1,1\n2,1\n").unwrap();
        let e = virial_report(&t, None).unwrap_err();
        assert!(matches!(e, IoError::MissingColumn(ref c) if c == "variance"));
        assert!(SeriesTable::parse("t,mass\n0\n").is_err());
    }
}
