//! Argument value grammars: Gram specs, complex numbers, integer lists.

use crate::arakelov::ArakelovBundle;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, RationalMatrix};
use crate::specfun::C64;

/// `I<k>` for the k×k identity, or row-major rationals with `,` between
/// entries and `;` between rows, e.g. `2,1;1,1` or `1/2,0;0,3`.
pub fn parse_gram(spec: &str) -> Result<RationalMatrix> {
    let spec = spec.trim();
    if let Some(k) = spec.strip_prefix('I') {
        let n: usize = k
            .parse()
            .map_err(|_| Error::Parse(format!("bad identity size in {spec:?}")))?;
        if n == 0 {
            return Err(Error::Parse("identity size must be positive".into()));
        }
        return Ok(RationalMatrix::identity(n));
    }
    let rows: Vec<&str> = spec.split(';').collect();
    let n = rows.len();
    let mut entries = Vec::with_capacity(n * n);
    for row in &rows {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != n {
            return Err(Error::Parse(format!(
                "Gram spec {spec:?}: row {row:?} has {} entries, expected {n}",
                cells.len()
            )));
        }
        for c in cells {
            entries.push(parse_rational(c)?);
        }
    }
    RationalMatrix::new(n, entries)
}

pub fn parse_bundle(spec: &str) -> Result<ArakelovBundle> {
    ArakelovBundle::new(parse_gram(spec)?)
}

/// `3`, `-0.5`, `2i`, `0.7+0.3i`, `4-1i`, `1e-3+2i`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("not a complex number: {s:?}"));
    let num = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(C64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0));
    };
    // split at the last sign that is not a leading sign or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => Ok(C64::new(
            body[..i].parse::<f64>().map_err(|_| bad())?,
            num(&body[i..])?,
        )),
        None => Ok(C64::new(0.0, num(body)?)),
    }
}

/// Comma-separated integers, e.g. `0,-1,2`.
pub fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("not an integer list: {s:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn grams() {
        assert_eq!(parse_gram("I3").unwrap(), RationalMatrix::identity(3));
        let g = parse_gram("2,1;1,1").unwrap();
        assert_eq!(g.get(0, 1), &int(1));
        let h = parse_gram("1/2, 0; 0, 0.25").unwrap();
        assert_eq!(h.get(1, 1), &rat(1, 4));
        assert!(parse_gram("1,2;3").is_err());
        assert!(parse_gram("I0").is_err());
        assert!(parse_gram("x").is_err());
    }

    #[test]
    fn complexes() {
        assert_eq!(parse_complex("3").unwrap(), C64::new(3.0, 0.0));
        assert_eq!(parse_complex("0.7+0.3i").unwrap(), C64::new(0.7, 0.3));
        assert_eq!(parse_complex("4-1i").unwrap(), C64::new(4.0, -1.0));
        assert_eq!(parse_complex("-2i").unwrap(), C64::new(0.0, -2.0));
        assert_eq!(parse_complex("i").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(parse_complex("1e-3+2i").unwrap(), C64::new(1e-3, 2.0));
        assert_eq!(parse_complex("-1.5e+2-3i").unwrap(), C64::new(-150.0, -3.0));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn ints() {
        assert_eq!(parse_ints("0,-1, 2").unwrap(), vec![0, -1, 2]);
        assert!(parse_ints("1,,2").is_err());
    }
}
