//! Flat `key = value` config files and the complex-number literal syntax.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use super::CliError;

/// Entries of a config file in file order. Blank lines and `#` comments are skipped.
pub fn load_config(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        CliError::Usage(msg) => CliError::Usage(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("line {}: expected `key = value`", lineno + 1)));
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(CliError::Usage(format!("line {}: bad key {key:?}", lineno + 1)));
        }
        out.push((key.replace('_', "-"), value.to_string()));
    }
    Ok(out)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`, `a+i`). Whitespace is ignored.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let bad = || format!("cannot parse {s:?} as a complex number (expected a+bi)");
    let Some(body) = t.strip_suffix('i') else {
        return match t.parse::<f64>() {
            Ok(re) if re.is_finite() => Ok(Complex64::new(re, 0.0)),
            _ => Err(bad()),
        };
    };
    // split at the last sign that is not an exponent sign or the leading sign
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse().map_err(|_| bad())?,
    };
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("-1.5").unwrap(), c(-1.5, 0.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("1-2i").unwrap(), c(1.0, -2.0));
        assert_eq!(parse_complex("-0.5-0.25i").unwrap(), c(-0.5, -0.25));
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("3+i").unwrap(), c(3.0, 1.0));
        assert_eq!(parse_complex("1e-3+2E-3i").unwrap(), c(1e-3, 2e-3));
        assert_eq!(parse_complex("1e-3").unwrap(), c(1e-3, 0.0));
        assert_eq!(parse_complex(" 1 + 2i ").unwrap(), c(1.0, 2.0));
        for bad in ["", "abc", "1+2", "1+2j", "1++2i", "nan", "inf+1i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn config_lines() {
        let text = "# run\nfamily = london\nalpha=2.0  # real\n\ninput_waveguide = 3\n";
        let kv = parse_config(text).unwrap();
        assert_eq!(
            kv,
            vec![
                ("family".into(), "london".into()),
                ("alpha".into(), "2.0".into()),
                ("input-waveguide".into(), "3".into()),
            ]
        );
        assert!(parse_config("just words\n").is_err());
        assert!(parse_config("two words = 1\n").is_err());
    }
}
