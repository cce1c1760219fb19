//! Text formats for scalar sets and point sets.
//!
//! One element per line: an integer (`-42`) or a fraction (`7/3`, positive
//! denominator). Point files carry two such tokens per line (`x y`). Lines
//! starting with `#` and blank lines are ignored; duplicates are tolerated.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::planar::{PlanarPointSet, Point};
use crate::scalar::ExactScalar;
use crate::sets::FiniteScalarSet;

/// Data lines with their 1-based line numbers and `(column, token)` pairs.
fn tokenized(text: &str) -> impl Iterator<Item = (usize, Vec<(usize, &str)>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        let mut tokens = Vec::new();
        let mut start = None;
        for (col, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(col),
                (true, Some(s)) => {
                    tokens.push((s, &line[s..col]));
                    start = None;
                }
                _ => {}
            }
        }
        Some((i + 1, tokens))
    })
}

fn scalar(line: usize, (col, tok): (usize, &str)) -> Result<ExactScalar> {
    tok.parse().map_err(|e| Error::Parse {
        line,
        column: col + 1,
        message: format!("{e}: `{tok}`"),
    })
}

pub fn parse_scalar_set(text: &str) -> Result<FiniteScalarSet> {
    let mut out = Vec::new();
    for (line, tokens) in tokenized(text) {
        if tokens.len() != 1 {
            let (col, _) = tokens[1];
            return Err(Error::Parse {
                line,
                column: col + 1,
                message: format!("expected one number per line, found {}", tokens.len()),
            });
        }
        out.push(scalar(line, tokens[0])?);
    }
    if out.is_empty() {
        return Err(Error::Parse { line: 0, column: 0, message: "no elements".into() });
    }
    Ok(FiniteScalarSet::from_elements(out))
}

pub fn parse_point_set(text: &str) -> Result<PlanarPointSet> {
    let mut out = Vec::new();
    for (line, tokens) in tokenized(text) {
        if tokens.len() != 2 {
            let column = tokens.get(2).map_or(1, |(c, _)| c + 1);
            return Err(Error::Parse {
                line,
                column,
                message: format!("expected `x y`, found {} tokens", tokens.len()),
            });
        }
        out.push(Point::new(scalar(line, tokens[0])?, scalar(line, tokens[1])?));
    }
    if out.is_empty() {
        return Err(Error::Parse { line: 0, column: 0, message: "no points".into() });
    }
    Ok(PlanarPointSet::from_points(out))
}

pub fn format_scalar_set(s: &FiniteScalarSet) -> String {
    let mut out = String::new();
    for x in s {
        writeln!(out, "{x}").unwrap();
    }
    out
}

pub fn format_point_set(p: &PlanarPointSet) -> String {
    let mut out = String::new();
    for q in p {
        writeln!(out, "{q}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scalar_examples() {
        assert_eq!(parse_scalar_set("0\n1\n3\n").unwrap(), FiniteScalarSet::from_integers([0, 1, 3]));
        let s = parse_scalar_set("1/2\n1/2\n-3\n# c\n").unwrap();
        assert_eq!(s.to_string(), "{-3, 1/2}");
        assert_eq!(parse_scalar_set("  4/2 \n\n   # x\n").unwrap().to_string(), "{2}");
    }

    #[test]
    fn point_examples() {
        let p = parse_point_set("0 0\n1 0\n0 1\n").unwrap();
        assert_eq!(p.len(), 3);
        let p = parse_point_set("# header\n1/2\t-3\n1/2 -3\n").unwrap();
        assert_eq!(p.points(), &[Point::new("1/2".parse().unwrap(), (-3).into())]);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_scalar_set("1\n2\n 3.5\n") {
            Err(Error::Parse { line: 3, column: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_scalar_set("1/0\n"), Err(Error::Parse { line: 1, column: 1, .. })));
        assert!(matches!(parse_scalar_set("1 2\n"), Err(Error::Parse { line: 1, column: 3, .. })));
        assert!(matches!(parse_scalar_set("# only\n\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_point_set("0 0\n1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_point_set("0 0 0\n"), Err(Error::Parse { line: 1, column: 5, .. })));
        assert!(matches!(parse_point_set("0 x\n"), Err(Error::Parse { line: 1, column: 3, .. })));
    }

    proptest! {
        #[test]
        fn format_then_parse_is_identity(v in prop::collection::vec(((-99i64..99), (1i64..9)), 1..30)) {
            let s = FiniteScalarSet::from_elements(v.iter().map(|&(n, d)| ExactScalar::new(n.into(), d.into()).unwrap()));
            prop_assert_eq!(parse_scalar_set(&format_scalar_set(&s)).unwrap(), s.clone());
            let p = PlanarPointSet::from_points(s.iter().zip(s.iter().rev()).map(|(x, y)| Point::new(x.clone(), y.clone())));
            prop_assert_eq!(parse_point_set(&format_point_set(&p)).unwrap(), p);
        }
    }
}
