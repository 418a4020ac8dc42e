//! CSV ingestion and file output: column selection by name or 0-based index,
//! header auto-detection, the percentage log-return transform, and atomic
//! writes (no partial files on failure).

use std::io::Write as _;
use std::path::{Path, PathBuf};

use qcorr::{QcorrError, Result, Series};

/// How to pull one series out of a delimited file.
#[derive(Clone, Debug)]
pub struct ColumnSpec {
    pub path: PathBuf,
    /// Column name (requires a header row) or 0-based index.
    pub column: String,
    pub transform: Transform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Transform {
    /// Use the values as they appear in the file.
    None,
    /// pₜ → 100·(ln pₜ − ln p_{t−1}); output is one shorter than the input.
    LogReturnPct,
}

/// Parsed CSV contents: an optional header row plus numeric-capable records.
struct Table {
    header: Option<Vec<String>>,
    /// Raw field strings, one vector per data row.
    rows: Vec<Vec<String>>,
    /// 1-based file row number of the first data row (2 when a header is present).
    first_row: usize,
}

fn read_table(path: &Path) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => QcorrError::Io(io),
            other => QcorrError::InvalidInput(format!("{other:?}")),
        })?;
    let mut records: Vec<Vec<String>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| QcorrError::Parse {
            row: records.len() + 1,
            msg: e.to_string(),
        })?;
        records.push(rec.iter().map(|f| f.trim().to_string()).collect());
    }
    if records.is_empty() {
        return Err(QcorrError::EmptySeries);
    }
    // a header is any first row containing a field that does not parse as a
    // number; files whose header cells are all numeric are not supported
    let is_header = records[0]
        .iter()
        .any(|f| f.parse::<f64>().is_err());
    if is_header {
        let header = records.remove(0);
        if records.is_empty() {
            return Err(QcorrError::EmptySeries);
        }
        Ok(Table { header: Some(header), rows: records, first_row: 2 })
    } else {
        Ok(Table { header: None, rows: records, first_row: 1 })
    }
}

fn resolve_column(table: &Table, selector: &str) -> Result<usize> {
    if let Ok(idx) = selector.parse::<usize>() {
        return Ok(idx);
    }
    match &table.header {
        Some(h) => h.iter().position(|name| name == selector).ok_or_else(|| {
            QcorrError::InvalidInput(format!(
                "column {selector:?} not found; header has {h:?}"
            ))
        }),
        None => Err(QcorrError::InvalidInput(format!(
            "column selected by name ({selector:?}) but the file has no header row"
        ))),
    }
}

/// Read one numeric column, apply the transform, and validate it as a Series.
pub fn read_series(spec: &ColumnSpec) -> Result<Series> {
    let table = read_table(&spec.path)?;
    let col = resolve_column(&table, &spec.column)?;
    let mut values = Vec::with_capacity(table.rows.len());
    for (i, row) in table.rows.iter().enumerate() {
        let file_row = table.first_row + i;
        let field = row.get(col).ok_or_else(|| QcorrError::Parse {
            row: file_row,
            msg: format!("row has only {} fields, need column {col}", row.len()),
        })?;
        let v: f64 = field.parse().map_err(|_| QcorrError::Parse {
            row: file_row,
            msg: format!("{field:?} is not a number"),
        })?;
        values.push((file_row, v));
    }
    let out = match spec.transform {
        Transform::None => values.into_iter().map(|(_, v)| v).collect(),
        Transform::LogReturnPct => {
            if values.len() < 2 {
                return Err(QcorrError::SeriesTooShort { need: 2, got: values.len() });
            }
            for &(row, v) in &values {
                if v <= 0.0 {
                    return Err(QcorrError::NonPositivePrice { row, value: v });
                }
            }
            values
                .windows(2)
                .map(|w| 100.0 * (w[1].1.ln() - w[0].1.ln()))
                .collect()
        }
    };
    Series::new(out)
}

/// Write `contents` to `path` atomically: build the file next to its target
/// and rename into place, so a failure never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| QcorrError::Io(e.error))?;
    Ok(())
}
