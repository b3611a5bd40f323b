//! Matrix Market (array and coordinate, general) and CSV with complex
//! entries written as `a+bi`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

/// `a+bi` with 17 significant digits in each part, enough to round-trip.
pub fn format_complex(z: C64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses `a`, `a+bi`, `a-bi`, `bi` (also with `j`).
pub fn parse_complex(s: &str) -> Result<C64> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a number: '{s}'"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|x| C64::new(x, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    // split at the last sign that is not an exponent sign and not leading
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    Ok(C64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?))
}

pub fn write_matrix_market(a: &ComplexMatrix) -> String {
    let real = a.is_real();
    let mut out = String::new();
    let field = if real { "real" } else { "complex" };
    let _ = writeln!(out, "%%MatrixMarket matrix array {field} general");
    let _ = writeln!(out, "{} {}", a.rows(), a.cols());
    for z in a.as_slice() {
        if real {
            let _ = writeln!(out, "{}", format_real(z.re));
        } else {
            let _ = writeln!(out, "{} {}", format_real(z.re), format_real(z.im));
        }
    }
    out
}

pub fn read_matrix_market(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty Matrix Market file".into()))?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(Error::Parse(format!("bad Matrix Market header '{header}'")));
    }
    let (format, field, symmetry) = (fields[2].as_str(), fields[3].as_str(), fields[4].as_str());
    let complex = match field {
        "real" | "integer" | "double" => false,
        "complex" => true,
        other => return Err(Error::Parse(format!("unsupported field '{other}'"))),
    };
    if symmetry != "general" {
        return Err(Error::Parse(format!("unsupported symmetry '{symmetry}'")));
    }
    let mut data = lines.map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('%'));
    let size = data.next().ok_or_else(|| Error::Parse("missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad size line '{size}'"))))
        .collect::<Result<_>>()?;
    let num = |t: &str| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{t}'")));
    let entry = |toks: &[&str]| -> Result<C64> {
        match (complex, toks) {
            (false, [re]) => Ok(C64::new(num(re)?, 0.0)),
            (true, [re, im]) => Ok(C64::new(num(re)?, num(im)?)),
            _ => Err(Error::Parse(format!("bad entry '{}'", toks.join(" ")))),
        }
    };
    match (format, dims.as_slice()) {
        ("array", &[rows, cols]) => {
            let mut vals = Vec::with_capacity(rows * cols);
            for line in data {
                let toks: Vec<&str> = line.split_whitespace().collect();
                vals.push(entry(&toks)?);
            }
            if vals.len() != rows * cols {
                return Err(Error::Parse(format!("expected {} entries, found {}", rows * cols, vals.len())));
            }
            ComplexMatrix::new(rows, cols, vals)
        }
        ("coordinate", &[rows, cols, nnz]) => {
            let mut a = ComplexMatrix::zeros(rows, cols);
            let mut count = 0;
            for line in data {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() < 3 {
                    return Err(Error::Parse(format!("bad entry '{line}'")));
                }
                let idx = |t: &str, bound: usize| match t.parse::<usize>() {
                    Ok(i) if (1..=bound).contains(&i) => Ok(i - 1),
                    _ => Err(Error::Parse(format!("bad index '{t}'"))),
                };
                let (i, j) = (idx(toks[0], rows)?, idx(toks[1], cols)?);
                a[(i, j)] += entry(&toks[2..])?;
                count += 1;
            }
            if count != nnz {
                return Err(Error::Parse(format!("expected {nnz} entries, found {count}")));
            }
            if !a.is_finite() {
                return Err(Error::Parse("non-finite entry".into()));
            }
            Ok(a)
        }
        _ => Err(Error::Parse(format!("bad size line '{size}' for {format} format"))),
    }
}

pub fn read_matrix_file(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        read_csv_matrix(&text)
    } else {
        read_matrix_market(&text)
    }
}

pub fn write_matrix_file(path: &Path, a: &ComplexMatrix) -> Result<()> {
    let text = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        write_csv_matrix(a)
    } else {
        write_matrix_market(a)
    };
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// A header row `c0,c1,...` then one matrix row per line.
pub fn write_csv_matrix(a: &ComplexMatrix) -> String {
    let header: Vec<String> = (0..a.cols()).map(|j| format!("c{j}")).collect();
    let mut out = header.join(",");
    out.push('\n');
    for i in 0..a.rows() {
        let row: Vec<String> = (0..a.cols()).map(|j| format_complex(a[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Reads comma separated rows; a leading header row (any line whose first
/// field is not a number) is skipped.
pub fn read_csv_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).peekable();
    if lines.peek().is_some_and(|l| parse_complex(l.split(',').next().unwrap_or("")).is_err()) {
        lines.next();
    }
    let rows: Vec<Vec<C64>> =
        lines.map(|l| l.split(',').map(parse_complex).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    ComplexMatrix::from_rows(&rows)
}

/// A vector stored as an n-by-1 (or 1-by-n) matrix file.
pub fn read_vector_file(path: &Path) -> Result<Vec<C64>> {
    let m = read_matrix_file(path)?;
    if m.cols() != 1 && m.rows() != 1 {
        return Err(Error::DimensionMismatch(format!("expected a vector, got {}x{}", m.rows(), m.cols())));
    }
    Ok(m.into_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_text_round_trip() {
        for z in [C64::new(1.0, -2.5e-300), C64::new(-0.1, 0.3), C64::new(1e300, 7.0), C64::new(0.0, -0.0)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
        assert_eq!(parse_complex("3").unwrap(), C64::new(3.0, 0.0));
        assert_eq!(parse_complex("-2i").unwrap(), C64::new(0.0, -2.0));
        assert_eq!(parse_complex("1e-3-4E+2i").unwrap(), C64::new(1e-3, -400.0));
        assert_eq!(parse_complex("1-i").unwrap(), C64::new(1.0, -1.0));
        assert!(parse_complex("x+yi").is_err());
    }

    #[test]
    fn matrix_market_round_trip() {
        let a = ComplexMatrix::from_fn(3, 2, |i, j| C64::new(i as f64 / 3.0, j as f64 * 0.1));
        assert_eq!(read_matrix_market(&write_matrix_market(&a)).unwrap(), a);
        let r = ComplexMatrix::from_fn(2, 2, |i, j| C64::new((i + 2 * j) as f64 / 7.0, 0.0));
        let text = write_matrix_market(&r);
        assert!(text.starts_with("%%MatrixMarket matrix array real general"));
        assert_eq!(read_matrix_market(&text).unwrap(), r);
    }

    #[test]
    fn coordinate_format() {
        let text = "%%MatrixMarket matrix coordinate real general\n% note\n2 2 2\n1 1 4.0\n2 1 -1\n";
        let a = read_matrix_market(text).unwrap();
        assert_eq!(a[(0, 0)], C64::new(4.0, 0.0));
        assert_eq!(a[(1, 0)], C64::new(-1.0, 0.0));
        assert!(read_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 4.0\n").is_err());
        assert!(read_matrix_market("%%MatrixMarket matrix array real symmetric\n1 1\n1\n").is_err());
    }

    #[test]
    fn csv_round_trip() {
        let a = ComplexMatrix::from_fn(2, 3, |i, j| C64::new(i as f64 - 0.5, 1.0 / (j as f64 + 3.0)));
        let text = write_csv_matrix(&a);
        assert!(text.starts_with("c0,c1,c2\n"));
        assert_eq!(read_csv_matrix(&text).unwrap(), a);
        assert_eq!(read_csv_matrix("1,2\n3,4-1i\n").unwrap()[(1, 1)], C64::new(4.0, -1.0));
    }
}
