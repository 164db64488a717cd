//! Accuracy-delta rows and their CSV / aligned-table renderings.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::CliError;

pub const AVERAGE: &str = "Average";

/// Test accuracy of one analyzer on one dataset before and after compression,
/// in percent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccuracyDelta {
    pub dataset: String,
    pub analyzer: String,
    pub original: f64,
    pub compressed: f64,
    pub delta: f64,
}

impl AccuracyDelta {
    pub fn new(
        dataset: impl Into<String>,
        analyzer: impl Into<String>,
        original: f64,
        compressed: f64,
    ) -> Self {
        AccuracyDelta {
            dataset: dataset.into(),
            analyzer: analyzer.into(),
            original,
            compressed,
            delta: compressed - original,
        }
    }
}

/// Appends one `Average` row per analyzer when more than one dataset is present.
pub fn with_averages(mut rows: Vec<AccuracyDelta>) -> Vec<AccuracyDelta> {
    let mut analyzers: Vec<String> = Vec::new();
    for r in &rows {
        if !analyzers.contains(&r.analyzer) {
            analyzers.push(r.analyzer.clone());
        }
    }
    let mut averages = Vec::new();
    for a in analyzers {
        let group: Vec<&AccuracyDelta> = rows.iter().filter(|r| r.analyzer == a).collect();
        if group.len() < 2 {
            continue;
        }
        let n = group.len() as f64;
        let original = group.iter().map(|r| r.original).sum::<f64>() / n;
        let compressed = group.iter().map(|r| r.compressed).sum::<f64>() / n;
        averages.push(AccuracyDelta::new(AVERAGE, a, original, compressed));
    }
    rows.extend(averages);
    rows
}

pub fn write_csv<W: Write>(rows: &[AccuracyDelta], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<AccuracyDelta>, CliError> {
    csv::Reader::from_reader(input).deserialize().collect::<Result<_, _>>().map_err(CliError::from)
}

/// One decimal place; a value that rounds to zero prints as `0.0`.
pub fn percent(v: f64) -> String {
    let s = format!("{v:.1}");
    if s == "-0.0" {
        "0.0".to_string()
    } else {
        s
    }
}

/// Header plus one line per row. Text columns are left-aligned, numbers
/// right-aligned.
pub fn render_table(rows: &[AccuracyDelta]) -> String {
    let header = ["Dataset", "Analyzer", "Original", "Compressed", "Delta"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.dataset.clone(),
                r.analyzer.clone(),
                percent(r.original),
                percent(r.compressed),
                percent(r.delta),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |row: [&str; 5]| {
        let mut s = String::new();
        for (i, (c, w)) in row.iter().zip(widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            if i < 2 {
                s.push_str(&format!("{c:<w$}"));
            } else {
                s.push_str(&format!("{c:>w$}"));
            }
        }
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(header);
    for row in &cells {
        out.push_str(&line([&row[0], &row[1], &row[2], &row[3], &row[4]]));
    }
    out
}

pub fn render(rows: &[AccuracyDelta], format: Format) -> Result<String, CliError> {
    match format {
        Format::Table => Ok(render_table(rows)),
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(rows, &mut buf)?;
            Ok(String::from_utf8(buf).expect("csv output is utf-8"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(d: &str, o: f64, c: f64) -> AccuracyDelta {
        AccuracyDelta::new(d, "baseline", o, c)
    }

    #[test]
    fn single_row_table() {
        let t = render_table(&[row("books", 71.26, 70.0)]);
        assert_eq!(
            t,
            "Dataset  Analyzer  Original  Compressed  Delta\n\
             books    baseline      71.3        70.0   -1.3\n"
        );
    }

    #[test]
    fn average_row_per_analyzer() {
        let rows: Vec<_> = (0..12).map(|i| row(&format!("d{i}"), 70.0 + i as f64, 69.0 + i as f64)).collect();
        let all = with_averages(rows);
        assert_eq!(all.len(), 13);
        let avg = all.last().unwrap();
        assert_eq!(avg.dataset, AVERAGE);
        assert_eq!((avg.original, avg.compressed, avg.delta), (75.5, 74.5, -1.0));
        assert_eq!(render_table(&all).lines().count(), 14);
        assert_eq!(with_averages(vec![row("only", 1.0, 2.0)]).len(), 1);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let rows = with_averages(vec![row("a", 100.0 / 3.0, 0.1 + 0.2), row("b, \"quoted\"", 50.0, 49.95)]);
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        assert!(buf.starts_with(b"dataset,analyzer,original,compressed,delta\n"));
        assert_eq!(read_csv(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn negative_zero_is_printed_plainly() {
        assert_eq!(percent(-0.04), "0.0");
        assert_eq!(percent(-0.05000001), "-0.1");
        assert_eq!(percent(12.0), "12.0");
    }
}
