//! Matrix Market ingestion and output.
//!
//! Supports coordinate and array formats, real/integer/complex fields and
//! general/symmetric/hermitian/skew-symmetric symmetry. Storage is dense.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{CertError, Result};
use crate::linalg::{CMat, CVec, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Hermitian,
    SkewSymmetric,
}

fn parse_err(line: usize, msg: impl Into<String>) -> CertError {
    CertError::MtxParse { line, msg: msg.into() }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| parse_err(line, format!("invalid number `{tok}`")))
}

/// Parse Matrix Market text into a dense complex matrix.
pub fn parse_matrix(text: &str) -> Result<CMat> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file"))?;
    let mut words = header.split_whitespace();
    if words.next().map(str::to_ascii_lowercase) != Some("%%matrixmarket".into()) {
        return Err(parse_err(1, "missing %%MatrixMarket banner"));
    }
    if words.next().map(str::to_ascii_lowercase) != Some("matrix".into()) {
        return Err(parse_err(1, "only `matrix` objects are supported"));
    }
    let format = match words.next().map(str::to_ascii_lowercase).as_deref() {
        Some("coordinate") => Format::Coordinate,
        Some("array") => Format::Array,
        other => return Err(parse_err(1, format!("unknown format {other:?}"))),
    };
    let field = match words.next().map(str::to_ascii_lowercase).as_deref() {
        Some("real") => Field::Real,
        Some("integer") => Field::Integer,
        Some("complex") => Field::Complex,
        Some("pattern") => return Err(parse_err(1, "pattern matrices carry no values")),
        other => return Err(parse_err(1, format!("unknown field {other:?}"))),
    };
    let symmetry = match words.next().map(str::to_ascii_lowercase).as_deref() {
        Some("general") => Symmetry::General,
        Some("symmetric") => Symmetry::Symmetric,
        Some("hermitian") => Symmetry::Hermitian,
        Some("skew-symmetric") => Symmetry::SkewSymmetric,
        other => return Err(parse_err(1, format!("unknown symmetry {other:?}"))),
    };

    // skip comments and blank lines
    let mut data = lines
        .filter(|(_, l)| !l.trim_start().starts_with('%') && !l.trim().is_empty());

    let (size_lineno, size_line) = data
        .next()
        .ok_or_else(|| parse_err(1, "missing size line"))?;
    let size_lineno = size_lineno + 1;
    let dims: Vec<&str> = size_line.split_whitespace().collect();

    let value_width = match field {
        Field::Complex => 2,
        _ => 1,
    };
    let read_value = |toks: &[&str], lineno: usize| -> Result<C64> {
        match field {
            Field::Complex => Ok(C64::new(parse_f64(toks[0], lineno)?, parse_f64(toks[1], lineno)?)),
            _ => Ok(C64::new(parse_f64(toks[0], lineno)?, 0.0)),
        }
    };

    match format {
        Format::Coordinate => {
            if dims.len() != 3 {
                return Err(parse_err(size_lineno, "coordinate size line must be `rows cols nnz`"));
            }
            let rows: usize = dims[0]
                .parse()
                .map_err(|_| parse_err(size_lineno, "invalid row count"))?;
            let cols: usize = dims[1]
                .parse()
                .map_err(|_| parse_err(size_lineno, "invalid column count"))?;
            let nnz: usize = dims[2]
                .parse()
                .map_err(|_| parse_err(size_lineno, "invalid entry count"))?;
            let mut m = CMat::zeros(rows, cols);
            let mut seen = 0usize;
            for (lineno0, line) in data {
                let lineno = lineno0 + 1;
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 2 + value_width {
                    return Err(parse_err(lineno, format!("expected {} tokens", 2 + value_width)));
                }
                let i: usize = toks[0]
                    .parse()
                    .map_err(|_| parse_err(lineno, "invalid row index"))?;
                let j: usize = toks[1]
                    .parse()
                    .map_err(|_| parse_err(lineno, "invalid column index"))?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(parse_err(lineno, format!("index ({i}, {j}) out of range")));
                }
                let v = read_value(&toks[2..], lineno)?;
                m[(i - 1, j - 1)] = v;
                if i != j {
                    match symmetry {
                        Symmetry::General => {}
                        Symmetry::Symmetric => m[(j - 1, i - 1)] = v,
                        Symmetry::Hermitian => m[(j - 1, i - 1)] = v.conj(),
                        Symmetry::SkewSymmetric => m[(j - 1, i - 1)] = -v,
                    }
                }
                seen += 1;
            }
            if seen != nnz {
                return Err(parse_err(size_lineno, format!("expected {nnz} entries, found {seen}")));
            }
            Ok(m)
        }
        Format::Array => {
            if dims.len() != 2 {
                return Err(parse_err(size_lineno, "array size line must be `rows cols`"));
            }
            let rows: usize = dims[0]
                .parse()
                .map_err(|_| parse_err(size_lineno, "invalid row count"))?;
            let cols: usize = dims[1]
                .parse()
                .map_err(|_| parse_err(size_lineno, "invalid column count"))?;
            if symmetry != Symmetry::General && rows != cols {
                return Err(parse_err(size_lineno, "symmetric array matrices must be square"));
            }
            let mut values = Vec::new();
            for (lineno0, line) in data {
                let lineno = lineno0 + 1;
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != value_width {
                    return Err(parse_err(lineno, format!("expected {value_width} tokens")));
                }
                values.push(read_value(&toks, lineno)?);
            }
            let mut m = CMat::zeros(rows, cols);
            let mut it = values.into_iter();
            let mut take = |lineno| {
                it.next()
                    .ok_or_else(|| parse_err(lineno, "fewer values than the size line promises"))
            };
            // column-major; symmetric variants store the lower triangle only
            for j in 0..cols {
                let start = match symmetry {
                    Symmetry::General => 0,
                    Symmetry::SkewSymmetric => j + 1,
                    _ => j,
                };
                for i in start..rows {
                    let v = take(size_lineno)?;
                    m[(i, j)] = v;
                    if i != j {
                        match symmetry {
                            Symmetry::General => {}
                            Symmetry::Symmetric => m[(j, i)] = v,
                            Symmetry::Hermitian => m[(j, i)] = v.conj(),
                            Symmetry::SkewSymmetric => m[(j, i)] = -v,
                        }
                    }
                }
            }
            if it.next().is_some() {
                return Err(parse_err(size_lineno, "more values than the size line promises"));
            }
            Ok(m)
        }
    }
}

pub fn read_matrix(path: &Path) -> Result<CMat> {
    let text = fs::read_to_string(path).map_err(|e| {
        std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))
    })?;
    parse_matrix(&text).map_err(|e| match e {
        CertError::MtxParse { line, msg } => CertError::MtxParse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    })
}

/// Read an n-vector stored as an n x 1 (or 1 x n) Matrix Market matrix.
pub fn read_vector(path: &Path) -> Result<CVec> {
    let m = read_matrix(path)?;
    if m.ncols() == 1 {
        Ok(CVec::from_column_slice(m.as_slice()))
    } else if m.nrows() == 1 {
        Ok(CVec::from_iterator(m.ncols(), m.row(0).iter().copied()))
    } else {
        Err(CertError::DimensionMismatch(format!(
            "expected a vector, found a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )))
    }
}

/// Render a dense matrix in array format; the field degrades to `real` when
/// every imaginary part is zero. Floats are written with shortest
/// round-trip-exact formatting.
pub fn format_matrix(m: &CMat) -> String {
    let complex = m.iter().any(|z| z.im != 0.0);
    let field = if complex { "complex" } else { "real" };
    let mut out = String::new();
    let _ = writeln!(out, "%%MatrixMarket matrix array {field} general");
    let _ = writeln!(out, "{} {}", m.nrows(), m.ncols());
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if complex {
                let _ = writeln!(out, "{:?} {:?}", z.re, z.im);
            } else {
                let _ = writeln!(out, "{:?}", z.re);
            }
        }
    }
    out
}

pub fn write_matrix(path: &Path, m: &CMat) -> Result<()> {
    fs::write(path, format_matrix(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_array_real_general() {
        let text = "%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n3\n2\n4\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m[(0, 0)].re, 1.0);
        assert_eq!(m[(1, 0)].re, 3.0);
        assert_eq!(m[(0, 1)].re, 2.0);
        assert_eq!(m[(1, 1)].re, 4.0);
    }

    #[test]
    fn parses_coordinate_complex_hermitian() {
        let text = "%%MatrixMarket matrix coordinate complex hermitian\n2 2 2\n1 1 2 0\n2 1 1 -1\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m[(1, 0)], C64::new(1.0, -1.0));
        assert_eq!(m[(0, 1)], C64::new(1.0, 1.0));
        assert_eq!(m[(0, 0)], C64::new(2.0, 0.0));
    }

    #[test]
    fn parses_array_symmetric_lower_triangle() {
        let text = "%%MatrixMarket matrix array real symmetric\n2 2\n1\n5\n9\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m[(0, 1)].re, 5.0);
        assert_eq!(m[(1, 0)].re, 5.0);
        assert_eq!(m[(1, 1)].re, 9.0);
    }

    #[test]
    fn parses_coordinate_skew_symmetric() {
        let text = "%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 3\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m[(1, 0)].re, 3.0);
        assert_eq!(m[(0, 1)].re, -3.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("%%MatrixMarket matrix array pattern general\n1 1\n").is_err());
        assert!(parse_matrix("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n").is_err());
        assert!(parse_matrix("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n").is_err());
        assert!(parse_matrix("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n").is_err());
    }

    #[test]
    fn roundtrip_is_exact() {
        let m = CMat::from_row_slice(
            2,
            3,
            &[
                C64::new(1.0 / 3.0, -0.125),
                C64::new(2.5e-17, 0.0),
                C64::new(0.1, 7.0),
                C64::new(-4.0, 1e300),
                C64::new(0.0, 0.0),
                C64::new(f64::MIN_POSITIVE, -1.0),
            ],
        );
        let back = parse_matrix(&format_matrix(&m)).unwrap();
        assert_eq!(m, back);
    }
}
