//! Line-oriented exact text format.
//!
//! ```text
//! lp-system rows=3 vars=8
//! 1 1 0 0 0 0 0 0 = 1/8
//! ...
//!
//! farkas-certificate rows=3 vars=8
//! multipliers 1 -1 1
//! derived 1 0 0 0 0 0 0 1 = -1/8
//! ```
//!
//! Tokens are integers or `num/den`. Blank lines and lines starting with `#`
//! are ignored.

use std::fmt::Write as _;

use num_rational::BigRational;

use super::{Certificate, RationalSystem};
use crate::error::{Error, Result};

fn join(values: &[BigRational]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_system(system: &RationalSystem) -> String {
    let mut out = format!(
        "lp-system rows={} vars={}\n",
        system.row_count(),
        system.var_count()
    );
    for (row, b) in system.rows().iter().zip(system.rhs()) {
        let _ = writeln!(out, "{} = {b}", join(row));
    }
    out
}

pub fn write_certificate(cert: &Certificate) -> String {
    format!(
        "farkas-certificate rows={} vars={}\nmultipliers {}\nderived {} = {}\n",
        cert.multipliers.len(),
        cert.derived_row.len(),
        join(&cert.multipliers),
        join(&cert.derived_row),
        cert.derived_rhs
    )
}

fn error<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Definition {
        line: Some(line),
        message: message.into(),
    })
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header(line: usize, text: &str, keyword: &str) -> Result<(usize, usize)> {
    let mut parts = text.split_whitespace();
    if parts.next() != Some(keyword) {
        return error(line, format!("expected header `{keyword} rows=M vars=K`"));
    }
    let mut field = |name: &str| -> Result<usize> {
        parts
            .next()
            .and_then(|p| p.strip_prefix(name))
            .and_then(|v| v.parse().ok())
            .map_or_else(|| error(line, format!("missing or bad `{name}`")), Ok)
    };
    let rows = field("rows=")?;
    let vars = field("vars=")?;
    Ok((rows, vars))
}

fn rationals(line: usize, text: &str) -> Result<Vec<BigRational>> {
    text.split_whitespace()
        .map(|t| match t.parse::<BigRational>() {
            Ok(v) => Ok(v),
            Err(_) => error(line, format!("bad rational {t:?}")),
        })
        .collect()
}

/// `coefficients = rhs`
fn equation(line: usize, text: &str, vars: usize) -> Result<(Vec<BigRational>, BigRational)> {
    let Some((lhs, rhs)) = text.split_once('=') else {
        return error(line, "expected `coefficients = rhs`");
    };
    let row = rationals(line, lhs)?;
    if row.len() != vars {
        return error(line, format!("{} coefficients, expected {vars}", row.len()));
    }
    let rhs = rationals(line, rhs)?;
    if rhs.len() != 1 {
        return error(line, "expected one right-hand side");
    }
    Ok((row, rhs.into_iter().next().expect("one value")))
}

pub fn parse_system(text: &str) -> Result<RationalSystem> {
    let mut lines = content_lines(text);
    let Some((n, first)) = lines.next() else {
        return error(1, "empty system");
    };
    let (row_count, vars) = header(n, first, "lp-system")?;
    let mut rows = Vec::with_capacity(row_count);
    let mut rhs = Vec::with_capacity(row_count);
    let mut last = n;
    for (n, l) in lines {
        if rows.len() == row_count {
            return error(n, format!("more than {row_count} rows"));
        }
        let (row, b) = equation(n, l, vars)?;
        rows.push(row);
        rhs.push(b);
        last = n;
    }
    if rows.len() != row_count {
        return error(last, format!("{} rows, header says {row_count}", rows.len()));
    }
    RationalSystem::new(rows, rhs)
}

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let mut lines = content_lines(text);
    let Some((n, first)) = lines.next() else {
        return error(1, "empty certificate");
    };
    let (row_count, vars) = header(n, first, "farkas-certificate")?;
    let Some((n, l)) = lines.next() else {
        return error(n, "missing `multipliers` line");
    };
    let Some(values) = l.strip_prefix("multipliers") else {
        return error(n, "expected `multipliers ...`");
    };
    let multipliers = rationals(n, values)?;
    if multipliers.len() != row_count {
        return error(n, format!("{} multipliers, header says {row_count}", multipliers.len()));
    }
    let Some((n, l)) = lines.next() else {
        return error(n, "missing `derived` line");
    };
    let Some(body) = l.strip_prefix("derived") else {
        return error(n, "expected `derived ... = rhs`");
    };
    let (derived_row, derived_rhs) = equation(n, body, vars)?;
    if let Some((n, _)) = lines.next() {
        return error(n, "unexpected trailing line");
    }
    Ok(Certificate {
        multipliers,
        derived_row,
        derived_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn system_text() {
        let text = "lp-system rows=2 vars=3\n1 -1/2 0 = 3/4\n0 0 2 = -1\n";
        let sys = parse_system(text).unwrap();
        assert_eq!(write_system(&sys), text);
        assert_eq!(sys.rhs()[0], BigRational::new(3.into(), 4.into()));
    }

    #[test]
    fn errors_have_lines() {
        let line = |r: Result<RationalSystem>| match r {
            Err(Error::Definition { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line(parse_system("lp-system rows=1 vars=2\n# c\n1 x = 0\n")), Some(3));
        assert_eq!(line(parse_system("lp-system rows=1 vars=2\n1 = 0\n")), Some(2));
        assert_eq!(line(parse_system("system rows=1 vars=2\n")), Some(1));
        assert_eq!(line(parse_system("lp-system rows=2 vars=1\n1 = 0\n")), Some(2));
    }

    #[test]
    fn certificate_text() {
        let text = "farkas-certificate rows=3 vars=2\nmultipliers 1 -1 1\nderived 1 0 = -1/8\n";
        let cert = parse_certificate(text).unwrap();
        assert_eq!(write_certificate(&cert), text);
        assert!(parse_certificate("farkas-certificate rows=2 vars=2\nmultipliers 1\n").is_err());
    }
}
