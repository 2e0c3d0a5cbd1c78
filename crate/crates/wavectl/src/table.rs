//! Sampled fields and their CSV form.

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use wavectl_core::Field;

/// Rows `(t, x, value)` ordered by `t`, then `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldTable {
    pub header: [String; 3],
    pub rows: Vec<[f64; 3]>,
}

/// `n` points from `a` to `b` inclusive; a single point sits at `a`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

impl FieldTable {
    pub fn new(header: [&str; 3]) -> FieldTable {
        FieldTable { header: header.map(String::from), rows: Vec::new() }
    }

    /// Samples `field` on `nt` times in `[0, t_end]` and `nx` points in
    /// `[a, b]`, one time row per task.
    pub fn sample(header: [&str; 3], field: &dyn Field, t_end: f64, (a, b): (f64, f64), nt: usize, nx: usize) -> FieldTable {
        let xs = linspace(a, b, nx);
        let rows = linspace(0.0, t_end, nt)
            .into_par_iter()
            .flat_map_iter(|t| xs.iter().map(move |&x| [t, x, field.value(t, x)]).collect::<Vec<_>>())
            .collect();
        FieldTable { header: header.map(String::from), rows }
    }

    pub fn write_to<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format_value(*v)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_file(&self, path: &Path) -> csv::Result<()> {
        self.write_to(std::fs::File::create(path)?)
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    pub fn read_from<R: Read>(input: R) -> csv::Result<FieldTable> {
        let mut r = csv::Reader::from_reader(input);
        let h = r.headers()?.clone();
        if h.len() != 3 {
            return Err(csv::Error::from(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("expected 3 columns, found {}", h.len()),
            )));
        }
        let header = [h[0].to_string(), h[1].to_string(), h[2].to_string()];
        let mut rows = Vec::new();
        for rec in r.deserialize() {
            let row: (f64, f64, f64) = rec?;
            rows.push([row.0, row.1, row.2]);
        }
        Ok(FieldTable { header, rows })
    }

    pub fn read_file(path: &Path) -> csv::Result<FieldTable> {
        FieldTable::read_from(std::fs::File::open(path)?)
    }
}

/// 17 significant digits; enough to round-trip any `f64`.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_column() {
        let t = FieldTable::sample(["t", "x", "y"], &|_: f64, _: f64| 0.0, 1.0, (-1.0, 1.0), 3, 4);
        assert_eq!(t.rows.len(), 12);
        let text = t.to_csv_string();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,x,y"));
        for line in lines {
            assert!(line.ends_with(",0.0000000000000000e0"), "{line}");
        }
    }

    #[test]
    fn rows_ordered_by_time_then_space() {
        let t = FieldTable::sample(["t", "x", "y"], &|t: f64, x: f64| t + x, 2.0, (0.0, 1.0), 5, 7);
        for w in t.rows.windows(2) {
            assert!(w[0][0] < w[1][0] || (w[0][0] == w[1][0] && w[0][1] < w[1][1]));
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let t = FieldTable::sample(["t", "x", "y"], &|t: f64, x: f64| (t * x).sin() / 3.0, 0.7, (-2.0, 2.0), 9, 33);
        let back = FieldTable::read_from(t.to_csv_string().as_bytes()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_value(0.1), "1.0000000000000001e-1");
        assert_eq!(format_value(-2.5), "-2.5000000000000000e0");
    }
}
