use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fit::Sample;

/// Reads one value per line, or one CSV column when `col` is given (a
/// header name, or a 1-based index). Blank lines and `#` comments are
/// skipped in the one-value-per-line form.
pub fn ingest(path: &Path, col: Option<&str>, header: bool) -> Result<Sample> {
    let text = fs::read_to_string(path).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    let values = match col {
        None => plain_lines(&text)?,
        Some(c) => csv_column(&text, c, header)?,
    };
    Sample::new(values)
}

fn parse_value(s: &str, line: usize) -> Result<f64> {
    let t = s.trim();
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse {
            line,
            message: format!("not a finite number: {t:?}"),
        }),
    }
}

fn plain_lines(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| parse_value(l, i + 1))
        .collect()
}

fn csv_column(text: &str, col: &str, header: bool) -> Result<Vec<f64>> {
    let by_index = col.parse::<usize>().ok();
    let has_header = header || by_index.is_none();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .from_reader(text.as_bytes());
    let index = match by_index {
        Some(0) => {
            return Err(Error::Parse {
                line: 0,
                message: "column indices start at 1".into(),
            })
        }
        Some(i) => i - 1,
        None => {
            let headers = rdr.headers().map_err(|e| Error::Parse {
                line: 1,
                message: e.to_string(),
            })?;
            headers.iter().position(|h| h.trim() == col).ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("no column named {col:?}"),
            })?
        }
    };
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let field = rec.get(index).ok_or_else(|| Error::Parse {
            line,
            message: format!("missing column {}", index + 1),
        })?;
        out.push(parse_value(field, line)?);
    }
    Ok(out)
}
