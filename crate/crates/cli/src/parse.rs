//! Complex numbers on the command line: `2`, `-i`, `2+3i`, `1.5-0.5i`,
//! `1e-3i` or `re,im`.

use num_complex::Complex64;

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {text:?}");
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((re, im)) = t.split_once(',') {
        return Ok(Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the sign of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse().map_err(|_| bad())?,
    };
    let re = if re.is_empty() { 0.0 } else { re.parse().map_err(|_| bad())? };
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        let c = Complex64::new;
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("2+3i").unwrap(), c(2.0, 3.0));
        assert_eq!(parse_complex("1.5 - 0.5i").unwrap(), c(1.5, -0.5));
        assert_eq!(parse_complex("1e-3i").unwrap(), c(0.0, 1e-3));
        assert_eq!(parse_complex("1e+2-2e-1i").unwrap(), c(100.0, -0.2));
        assert_eq!(parse_complex("-1,2").unwrap(), c(-1.0, 2.0));
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("").is_err());
    }
}
