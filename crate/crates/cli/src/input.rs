//! CSV ingestion: one point per line, comma-separated decimals, optional
//! header (a first line that does not parse as numbers).

use std::io::Read;
use std::path::Path;

use deepcore::PointCloud;

use crate::error::{CliError, CliResult};

fn parse_error(path: &str, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn numeric(record: &csv::StringRecord) -> Option<Vec<f64>> {
    record
        .iter()
        .map(|f| f.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
        .collect()
}

pub fn parse_points<R: Read>(reader: R, name: &str) -> CliResult<PointCloud> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| parse_error(name, e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        match numeric(&record) {
            Some(row) => {
                if let Some(first) = rows.first() {
                    if first.len() != row.len() {
                        return Err(parse_error(
                            name,
                            format!(
                                "line {}: {} fields, expected {}",
                                i + 1,
                                row.len(),
                                first.len()
                            ),
                        ));
                    }
                }
                rows.push(row);
            }
            None if i == 0 => log::debug!("{name}: treating the first line as a header"),
            None => {
                return Err(parse_error(
                    name,
                    format!("line {}: not a list of numbers", i + 1),
                ))
            }
        }
    }
    if rows.is_empty() {
        return Err(parse_error(name, "no data points"));
    }
    PointCloud::new(rows).map_err(|e| parse_error(name, e.to_string()))
}

pub fn read_points(path: &Path) -> CliResult<PointCloud> {
    let name = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| parse_error(&name, e.to_string()))?;
    parse_points(file, &name)
}

/// `"c1,c2,..."` into coordinates.
pub fn parse_point(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_error("--point", format!("'{}' is not a number", f.trim())))
        })
        .collect()
}

/// `"2,3"` or an inclusive range `"8..14"`.
pub fn parse_list(text: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Usage(format!("'{text}' is not a list or an a..b range"));
    if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',')
        .map(|f| f.trim().parse().map_err(|_| bad()))
        .collect()
}
