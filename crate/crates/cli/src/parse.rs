//! Text forms accepted on the command line and in config files.

use num_complex::Complex64;
use veronese_core::projlin::{normalize_projective, CVec, ProjPoint};
use veronese_core::Error;

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn real(text: &str) -> Option<f64> {
    match text {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        t => t.parse().ok().filter(|x: &f64| x.is_finite()),
    }
}

/// Parses `re`, `im i`, or `re+im i` (spaces allowed, `i` or `j` as the
/// imaginary unit).
pub fn complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    let bad = || format!("malformed complex number `{text}`");
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(|re| Complex64::new(re, 0.0))
            .ok_or_else(bad);
    };
    // the imaginary part starts at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().ok().filter(|x| x.is_finite()), real(&body[k..])),
        None => (Some(0.0), real(body)),
    };
    match (re, im) {
        (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
        _ => Err(bad()),
    }
}

/// Parses a homogeneous point `[x:y]`, reporting 1-based columns on error.
pub fn cp1_point(text: &str, line: usize) -> Result<ProjPoint, Error> {
    let start = text.len() - text.trim_start().len();
    let t = text.trim();
    let col = |offset: usize| start + offset + 1;
    if !t.starts_with('[') {
        return Err(parse_error(line, col(0), "expected `[`"));
    }
    let Some(close) = t.find(']') else {
        return Err(parse_error(line, col(t.len()), "missing `]`"));
    };
    if close + 1 != t.len() {
        return Err(parse_error(line, col(close + 1), "trailing characters after `]`"));
    }
    let inner = &t[1..close];
    let Some(colon) = inner.find(':') else {
        return Err(parse_error(line, col(1 + inner.len()), "expected `:` between coordinates"));
    };
    let x = complex(&inner[..colon]).map_err(|m| parse_error(line, col(1), m))?;
    let y = complex(&inner[colon + 1..]).map_err(|m| parse_error(line, col(2 + colon), m))?;
    normalize_projective(&CVec::from_vec(vec![x, y]))
        .map_err(|_| parse_error(line, col(0), "point [0:0] is not in CP^1"))
}

/// One point per non-empty line; `#` starts a comment.
pub fn cp1_points(text: &str) -> Result<Vec<ProjPoint>, Error> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            (!body.trim().is_empty()).then(|| cp1_point(body, i + 1))
        })
        .collect()
}
