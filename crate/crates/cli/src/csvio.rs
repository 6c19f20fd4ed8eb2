//! Minimal CSV writing and parsing: header row first, comma-separated,
//! newline-terminated records, quotes only where required, floating-point
//! fields carrying 17 significant digits so values round-trip exactly.

use crate::errors::CliError;
use std::path::Path;

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    U(u64),
    F(f64),
    S(String),
}

impl Field {
    /// The unquoted textual form of the cell.
    pub fn render(&self) -> String {
        match self {
            Field::U(v) => v.to_string(),
            Field::F(v) => format!("{v:.16e}"),
            Field::S(v) => v.clone(),
        }
    }
}

fn quote_if_needed(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') || raw.contains('\r') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

/// Renders header and rows as CSV text (always newline-terminated).
pub fn render_csv(header: &[String], rows: &[Vec<Field>]) -> String {
    let mut out = String::new();
    out.push_str(
        &header
            .iter()
            .map(|h| quote_if_needed(h))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len(), "ragged CSV row");
        out.push_str(
            &row.iter()
                .map(|f| quote_if_needed(&f.render()))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
    }
    out
}

/// Writes header and rows to `path`, creating parent directories.
pub fn emit_csv(header: &[String], rows: &[Vec<Field>], path: &Path) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Resource(format!("creating {}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, render_csv(header, rows))
        .map_err(|e| CliError::Resource(format!("writing {}: {e}", path.display())))
}

/// Parses CSV text into (header, records) of raw strings.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>), CliError> {
    let mut records: Vec<Vec<String>> = Vec::new();
    let mut field = String::new();
    let mut record: Vec<String> = Vec::new();
    let mut in_quotes = false;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if in_quotes {
            match c {
                '"' => {
                    if chars.peek() == Some(&'"') {
                        chars.next();
                        field.push('"');
                    } else {
                        in_quotes = false;
                    }
                }
                other => field.push(other),
            }
        } else {
            match c {
                '"' => in_quotes = true,
                ',' => record.push(std::mem::take(&mut field)),
                '\r' => {}
                '\n' => {
                    record.push(std::mem::take(&mut field));
                    records.push(std::mem::take(&mut record));
                }
                other => field.push(other),
            }
        }
    }
    if in_quotes {
        return Err(CliError::Config("unterminated quote in CSV".into()));
    }
    if !field.is_empty() || !record.is_empty() {
        record.push(field);
        records.push(record);
    }
    if records.is_empty() {
        return Err(CliError::Config("empty CSV".into()));
    }
    let header = records.remove(0);
    for (i, rec) in records.iter().enumerate() {
        if rec.len() != header.len() {
            return Err(CliError::Config(format!(
                "CSV record {} has {} fields, header has {}",
                i + 1,
                rec.len(),
                header.len()
            )));
        }
    }
    Ok((header, records))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn headers(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn round_trips_exactly() {
        let header = headers(&["id", "value", "label"]);
        let rows = vec![
            vec![
                Field::U(3),
                Field::F(-3.854_299_171_2e0),
                Field::S("plain".into()),
            ],
            vec![
                Field::U(4),
                Field::F(f64::MIN_POSITIVE),
                Field::S("with,comma".into()),
            ],
            vec![Field::U(5), Field::F(0.1 + 0.2), Field::S("q\"uote".into())],
        ];
        let text = render_csv(&header, &rows);
        assert!(text.ends_with('\n'));
        let (h2, recs) = parse_csv(&text).unwrap();
        assert_eq!(h2, header);
        for (rec, row) in recs.iter().zip(&rows) {
            for (got, cell) in rec.iter().zip(row) {
                assert_eq!(got, &cell.render());
                if let Field::F(v) = cell {
                    let back: f64 = got.parse().unwrap();
                    assert_eq!(back.to_bits(), v.to_bits(), "17 digits round-trip");
                }
            }
        }
    }

    #[test]
    fn header_only_for_no_rows() {
        let text = render_csv(&headers(&["a", "b"]), &[]);
        assert_eq!(text, "a,b\n");
        let (h, recs) = parse_csv(&text).unwrap();
        assert_eq!(h, vec!["a", "b"]);
        assert!(recs.is_empty());
    }

    #[test]
    fn rejects_ragged_and_unterminated() {
        assert!(parse_csv("a,b\n1\n").is_err());
        assert!(parse_csv("a,b\n\"oops,1\n").is_err());
        assert!(parse_csv("").is_err());
    }
}
