//! Plain CSV for similarity matrices and label files: no header, one row per reviewer.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::types::{validate_matrix, SimilarityMatrix};

pub fn read_matrix<R: Read>(reader: R) -> Result<SimilarityMatrix> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let mut values = Vec::with_capacity(record.len());
        for (col, field) in record.iter().enumerate() {
            let value: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                col: col + 1,
                message: format!("`{field}` is not a number"),
            })?;
            values.push(value);
        }
        rows.push(values);
    }
    validate_matrix(rows)
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<SimilarityMatrix> {
    read_matrix(std::fs::File::open(path)?)
}

pub fn write_matrix<W: Write>(matrix: &SimilarityMatrix, writer: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    for row in matrix.rows() {
        wtr.write_record(row.iter().map(f64::to_string))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn save_matrix(matrix: &SimilarityMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_matrix(matrix, std::fs::File::create(path)?)
}

/// Writes `(index, label)` pairs with 1-based indices.
pub fn write_labels<W: Write>(labels: &[usize], writer: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    for (idx, label) in labels.iter().enumerate() {
        wtr.write_record([(idx + 1).to_string(), label.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn save_labels(labels: &[usize], path: impl AsRef<Path>) -> Result<()> {
    write_labels(labels, std::fs::File::create(path)?)
}

/// Reads a single row of nonnegative integers, e.g. a bid-count vector.
pub fn read_counts<R: Read>(reader: R) -> Result<Vec<u32>> {
    let mut text = String::new();
    let mut reader = reader;
    reader.read_to_string(&mut text)?;
    let mut out = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        for (col, field) in line.split(',').enumerate() {
            let field = field.trim();
            out.push(field.parse().map_err(|_| Error::Parse {
                line: line_idx + 1,
                col: col + 1,
                message: format!("`{field}` is not a nonnegative integer"),
            })?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_simple_matrix() {
        let m = read_matrix("0.5,0.5\n0.1,0.9\n".as_bytes()).unwrap();
        assert_eq!(m.to_rows(), vec![vec![0.5, 0.5], vec![0.1, 0.9]]);
    }

    #[test]
    fn reports_ragged_rows() {
        let err = read_matrix("0.5,0.5\n0.1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::RaggedRows { row: 1, expected: 2, found: 1 }), "{err:?}");
    }

    #[test]
    fn reports_out_of_range() {
        let err = read_matrix("0.5,1.5\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { row: 0, col: 1, .. }), "{err:?}");
    }

    #[test]
    fn reports_parse_position() {
        let err = read_matrix("0.5,0.5\n0.1,abc\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, col: 2, .. }), "{err:?}");
    }

    #[test]
    fn write_then_read_is_lossless() {
        let m = validate_matrix(vec![vec![0.1, 1.0 / 3.0], vec![0.0, 1.0]]).unwrap();
        let mut buf = Vec::new();
        write_matrix(&m, &mut buf).unwrap();
        assert_eq!(read_matrix(buf.as_slice()).unwrap(), m);
    }

    #[test]
    fn labels_are_one_based() {
        let mut buf = Vec::new();
        write_labels(&[0, 1], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1,0\n2,1\n");
    }

    #[test]
    fn counts_parse() {
        assert_eq!(read_counts("1, 0,3\n".as_bytes()).unwrap(), vec![1, 0, 3]);
        assert!(read_counts("1,-1".as_bytes()).is_err());
    }
}
