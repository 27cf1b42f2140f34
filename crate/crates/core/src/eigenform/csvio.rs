//! Coefficient files: header `n,a,lambda`, one row per `n = 1..N`, the `a`
//! column optional (empty field or absent column), `lambda` at 17 significant digits.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::CoefficientSeries;
use crate::error::{Error, Result};

/// `<label>_N<value>.csv`
pub fn cache_file_name(label: &str, n: usize) -> String {
    format!("{label}_N{n}.csv")
}

pub fn write_coefficients(series: &CoefficientSeries, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "n,a,lambda")?;
    for n in 1..=series.len() {
        match series.raw(n) {
            Some(a) => writeln!(out, "{n},{a},{:.16e}", series.lambda(n))?,
            None => writeln!(out, "{n},,{:.16e}", series.lambda(n))?,
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads and validates a coefficient file. The label is the file stem.
pub fn load_coefficients(path: &Path, weight: u32) -> Result<CoefficientSeries> {
    if weight < 12 || !weight.is_multiple_of(2) {
        return Err(Error::FormatError(format!(
            "weight {weight} is not an even integer >= 12"
        )));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::FormatError(e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::FormatError(e.to_string()))?
        .clone();
    let names: Vec<&str> = headers.iter().map(str::trim).collect();
    let has_a_column = match names.as_slice() {
        ["n", "a", "lambda"] => true,
        ["n", "lambda"] => false,
        other => {
            return Err(Error::FormatError(format!(
                "expected header n,a,lambda, found {}",
                other.join(",")
            )))
        }
    };

    let mut raw: Vec<Option<i128>> = vec![None];
    let mut normalized = vec![0.0f64];
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::FormatError(e.to_string()))?;
        let expected_n = row + 1;
        let field = |k: usize| record.get(k).map(str::trim).unwrap_or("");
        let n: usize = field(0)
            .parse()
            .map_err(|_| Error::FormatError(format!("row {expected_n}: bad n {:?}", field(0))))?;
        if n != expected_n {
            return Err(Error::FormatError(format!(
                "rows must be contiguous from 1: expected n = {expected_n}, found {n}"
            )));
        }
        let (a_field, lambda_field) = if has_a_column {
            (field(1), field(2))
        } else {
            ("", field(1))
        };
        let a = if a_field.is_empty() {
            None
        } else {
            Some(a_field.parse::<i128>().map_err(|_| {
                Error::FormatError(format!("row {n}: bad integer a = {a_field:?}"))
            })?)
        };
        let lambda: f64 = lambda_field.parse().map_err(|_| {
            Error::FormatError(format!("row {n}: bad lambda {lambda_field:?}"))
        })?;
        raw.push(a);
        normalized.push(lambda);
    }
    if normalized.len() < 2 {
        return Err(Error::FormatError("no coefficient rows".into()));
    }

    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "form".into());

    let series = if raw[1..].iter().all(Option::is_some) {
        let exact: Vec<i128> = raw.iter().map(|a| a.unwrap_or(0)).collect();
        let series = CoefficientSeries::from_raw(weight, label, exact);
        for n in 1..=series.len() {
            let expected = series.lambda(n);
            if (normalized[n] - expected).abs() > 1e-12 * expected.abs().max(1.0) {
                return Err(Error::InvariantViolation {
                    check: "normalization",
                    detail: format!("lambda({n}) disagrees with a({n})/n^((k-1)/2)"),
                });
            }
        }
        series
    } else {
        CoefficientSeries::from_normalized(weight, label, normalized)
    };
    series.validate()?;
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenform::delta_coefficients;
    use std::fs;

    #[test]
    fn round_trip_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let series = delta_coefficients(500).unwrap();
        let path = dir.path().join(cache_file_name("delta", 500));
        write_coefficients(&series, &path).unwrap();
        assert!(path.ends_with("delta_N500.csv"));
        let back = load_coefficients(&path, 12).unwrap();
        assert_eq!(back.raw_values(), series.raw_values());
        assert_eq!(back.normalized(), series.normalized());
    }

    #[test]
    fn float_only_file_round_trips_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let series = delta_coefficients(200).unwrap();
        let path = dir.path().join("f.csv");
        let mut text = String::from("n,lambda\n");
        for n in 1..=200 {
            text.push_str(&format!("{n},{:.16e}\n", series.lambda(n)));
        }
        fs::write(&path, text).unwrap();
        let back = load_coefficients(&path, 12).unwrap();
        assert!(!back.has_raw());
        assert_eq!(back.normalized(), series.normalized());
    }

    fn write_lambdas(path: &Path, lam: &[f64]) {
        let mut text = String::from("n,a,lambda\n");
        for (n, x) in lam.iter().enumerate().skip(1) {
            text.push_str(&format!("{n},,{x:.16e}\n"));
        }
        fs::write(path, text).unwrap();
    }

    #[test]
    fn rejects_broken_multiplicativity() {
        let dir = tempfile::tempdir().unwrap();
        let mut lam = delta_coefficients(30).unwrap().normalized().to_vec();
        lam[6] = lam[2] * lam[3] + 0.01;
        let path = dir.path().join("bad.csv");
        write_lambdas(&path, &lam);
        match load_coefficients(&path, 12) {
            Err(Error::InvariantViolation { check, .. }) => assert_eq!(check, "multiplicativity"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_deligne_violation() {
        let dir = tempfile::tempdir().unwrap();
        // A completely multiplicative-at-primes toy series with λ(2) = 2.5.
        let n = 12usize;
        let sieve = crate::arith::Sieve::new(n);
        let mut lam = vec![0.0; n + 1];
        lam[1] = 1.0;
        for m in 2..=n {
            let (p, e, rest) = sieve.split_smallest(m);
            lam[m] = if rest > 1 {
                lam[m / rest] * lam[rest]
            } else if e == 1 {
                if p == 2 { 2.5 } else { 0.5 }
            } else {
                lam[p] * lam[m / p] - lam[m / (p * p)]
            };
        }
        let path = dir.path().join("deligne.csv");
        write_lambdas(&path, &lam);
        match load_coefficients(&path, 12) {
            Err(Error::InvariantViolation { check, detail }) => {
                assert_eq!(check, "deligne");
                assert!(detail.contains("λ(2)"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        fs::write(&path, "k,lambda\n1,1.0\n").unwrap();
        assert!(matches!(load_coefficients(&path, 12), Err(Error::FormatError(_))));
        fs::write(&path, "n,a,lambda\n1,1,1.0\n3,0,0.0\n").unwrap();
        assert!(matches!(load_coefficients(&path, 12), Err(Error::FormatError(_))));
        fs::write(&path, "n,a,lambda\n1,x,1.0\n").unwrap();
        assert!(matches!(load_coefficients(&path, 12), Err(Error::FormatError(_))));
        fs::write(&path, "n,a,lambda\n").unwrap();
        assert!(matches!(load_coefficients(&path, 12), Err(Error::FormatError(_))));
        assert!(matches!(load_coefficients(&path, 11), Err(Error::FormatError(_))));
    }
}
