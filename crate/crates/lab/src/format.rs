//! The shared text formats.
//!
//! A lattice file starts with `m n`, followed by `m` rows of `n` entries; column
//! `j` of the matrix is the basis vector `b_j`. A vector file holds one row of
//! entries. Entries are integers or `p/q`; lines starting with `#` are ignored.

use std::fmt;

use usvp_core::scalar::{parse_scalar, to_exact_string};
use usvp_core::{Basis, LatticeError, LatticeVector, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Lattice(#[from] LatticeError),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    out
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty())
}

fn entry(line: usize, t: &Token<'_>) -> Result<Scalar, FormatError> {
    parse_scalar(t.text)
        .ok_or_else(|| syntax(line, t.column, format!("malformed entry `{}`", t.text)))
}

fn dimension(line: usize, t: &Token<'_>) -> Result<usize, FormatError> {
    match t.text.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(syntax(
            line,
            t.column,
            format!("expected a positive dimension, found `{}`", t.text),
        )),
    }
}

pub fn parse_lattice(text: &str) -> Result<Basis, FormatError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| syntax(1, 1, "missing `m n` header"))?;
    let h = tokens(header);
    if h.len() != 2 {
        let column = h.get(2).map_or(header.len() + 1, |t| t.column);
        return Err(syntax(hline, column, "header must be `m n`"));
    }
    let m = dimension(hline, &h[0])?;
    let n = dimension(hline, &h[1])?;
    let mut rows = Vec::with_capacity(m);
    let mut last_line = hline;
    for (lineno, line) in lines {
        last_line = lineno;
        if rows.len() == m {
            return Err(syntax(lineno, 1, format!("expected {m} rows, found more")));
        }
        let toks = tokens(line);
        if toks.len() != n {
            let column = toks.get(n).map_or(line.len() + 1, |t| t.column);
            return Err(syntax(
                lineno,
                column,
                format!("expected {n} entries, found {}", toks.len()),
            ));
        }
        let row = toks
            .iter()
            .map(|t| entry(lineno, t))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.len() < m {
        return Err(syntax(
            last_line + 1,
            1,
            format!("expected {m} rows, found {}", rows.len()),
        ));
    }
    Ok(Basis::from_rows(&rows)?)
}

pub fn parse_vector(text: &str) -> Result<LatticeVector, FormatError> {
    let mut lines = content_lines(text);
    let (lineno, line) = lines.next().ok_or_else(|| syntax(1, 1, "missing vector"))?;
    if let Some((extra, _)) = lines.next() {
        return Err(syntax(extra, 1, "a vector file holds a single row"));
    }
    tokens(line).iter().map(|t| entry(lineno, t)).collect()
}

pub fn write_vector(v: &[Scalar]) -> String {
    let mut s = v.iter().map(to_exact_string).collect::<Vec<_>>().join(" ");
    s.push('\n');
    s
}

/// Lattice file text; identical to the `Display` form of [`Basis`].
pub fn write_lattice(b: &Basis) -> String {
    b.to_string()
}

/// Adapter printing a vector as `(a, b, ...)`.
pub struct Tuple<'a>(pub &'a [Scalar]);

impl fmt::Display for Tuple<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&to_exact_string(x))?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use usvp_core::scalar::{int, ratio};

    #[test]
    fn examples() {
        assert_eq!(parse_lattice("2 2\n1 0\n0 1").unwrap(), Basis::identity(2));
        let b = parse_lattice("2 2\n1 1/2\n0 1/3").unwrap();
        assert_eq!(b.column(1), &vec![ratio(1, 2), ratio(1, 3)]);
        assert!(matches!(
            parse_lattice("2 2\n1 2\n2 4"),
            Err(FormatError::Lattice(LatticeError::Singular))
        ));
    }

    #[test]
    fn comments_and_round_trip() {
        let b = parse_lattice("# basis\n3 2\n1 0\n# middle\n-2 5/4\n0 7\n").unwrap();
        assert_eq!(b.ambient_dim(), 3);
        assert_eq!(b.rank(), 2);
        assert_eq!(parse_lattice(&write_lattice(&b)).unwrap(), b);
        assert_eq!(b.column(1)[1], ratio(5, 4));
    }

    #[test]
    fn error_positions() {
        let err = parse_lattice("2 2\n1 x\n0 1").unwrap_err();
        assert_eq!(
            err,
            FormatError::Syntax {
                line: 2,
                column: 3,
                message: "malformed entry `x`".into()
            }
        );
        match parse_lattice("2 2\n1 0 5\n0 1").unwrap_err() {
            FormatError::Syntax { line, column, .. } => assert_eq!((line, column), (2, 5)),
            e => panic!("{e}"),
        }
        match parse_lattice("2 2\n1 0\n").unwrap_err() {
            FormatError::Syntax { line, .. } => assert_eq!(line, 3),
            e => panic!("{e}"),
        }
        assert!(parse_lattice("").is_err());
        assert!(parse_lattice("2\n1\n").is_err());
        assert!(parse_lattice("2 2\n1 1/0\n0 1").is_err());
    }

    #[test]
    fn vectors() {
        assert_eq!(
            parse_vector("# w\n3 -1/2\n").unwrap(),
            vec![int(3), ratio(-1, 2)]
        );
        assert_eq!(write_vector(&[int(3), ratio(-1, 2)]), "3 -1/2\n");
        assert!(parse_vector("1\n2\n").is_err());
    }
}
