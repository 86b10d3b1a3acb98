//! Plain-text matrix files: the dimension `d` on the first data line, then
//! `d` rows of `d` whitespace-separated numbers. Lines starting with `#`
//! are comments.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian::CorrelationMatrix;

pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line, head) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty file".into() })?;
    let d: usize = head.parse().map_err(|_| Error::Parse { line, msg: format!("bad dimension '{head}'") })?;
    if !d.is_multiple_of(2) {
        return Err(Error::OddDimension(d));
    }
    let mut m = DMatrix::zeros(d, d);
    for i in 0..d {
        let (line, row) = lines.next().ok_or(Error::Parse { line: 0, msg: format!("expected {d} rows, got {i}") })?;
        let vals: Vec<f64> = row
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| Error::Parse { line, msg: format!("bad number '{t}'") }))
            .collect::<Result<_>>()?;
        if vals.len() != d {
            return Err(Error::Parse { line, msg: format!("expected {d} entries, got {}", vals.len()) });
        }
        for (j, v) in vals.into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse { line, msg: "trailing data".into() });
    }
    Ok(m)
}

pub fn format_matrix(m: &DMatrix<f64>) -> String {
    let mut out = format!("{}\n", m.nrows());
    for i in 0..m.nrows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:e}")).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn read_correlation(path: &Path) -> Result<CorrelationMatrix> {
    CorrelationMatrix::new(&parse_matrix(&std::fs::read_to_string(path)?)?)
}

pub fn write_matrix(path: &Path, m: &DMatrix<f64>) -> Result<()> {
    std::fs::write(path, format_matrix(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::random_gaussian_correlation;

    #[test]
    fn round_trip_is_exact() {
        let g = random_gaussian_correlation(4, false, 9);
        let back = parse_matrix(&format_matrix(g.matrix())).unwrap();
        assert_eq!(&back, g.matrix());
    }

    #[test]
    fn comments_and_errors() {
        let m = parse_matrix("# vacuum\n2\n0 1\n# mid\n-1 0\n").unwrap();
        assert_eq!(m[(0, 1)], 1.0);
        assert_eq!(parse_matrix("3\n"), Err(Error::OddDimension(3)));
        assert!(matches!(parse_matrix("2\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_matrix("2\n0 x\n-1 0"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_matrix("2\n0 1 2\n-1 0"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_matrix(""), Err(Error::Parse { .. })));
    }
}
