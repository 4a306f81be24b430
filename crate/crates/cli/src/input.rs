//! Polygon and curve text formats.
//!
//! Polygon: one vertex per line, `x y`. Curve: `a0 = <value>` plus lines
//! `cos <m> <value>` / `sin <m> <value>`. In both, blank lines and lines
//! starting with `#` are ignored.

use std::fs;
use std::path::{Path, PathBuf};

use oval_core::curve::{Harmonic, SupportCurve};
use oval_core::geom::validate_polygon;
use oval_core::{ConvexPolygon, Point};

use crate::CliError;

/// File contents together with their SHA-256 digest.
pub struct Input {
    pub path: PathBuf,
    pub text: String,
    pub sha256: String,
}

pub fn read_input(path: &Path) -> Result<Input, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let sha256 = hex_digest(&bytes);
    let text = String::from_utf8(bytes).map_err(|_| CliError::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: "not valid UTF-8".into(),
    })?;
    Ok(Input { path: path.to_path_buf(), text, sha256 })
}

pub fn hex_digest(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn number(path: &Path, line: usize, tok: &str) -> Result<f64, CliError> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::Parse { path: path.to_path_buf(), line, message: format!("invalid number {tok:?}") }),
    }
}

pub fn parse_polygon_str(text: &str, path: &Path) -> Result<ConvexPolygon, CliError> {
    let mut pts = Vec::new();
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("expected two numbers, found {} fields", toks.len()),
            });
        }
        pts.push(Point::new(number(path, line, toks[0])?, number(path, line, toks[1])?));
    }
    Ok(validate_polygon(&pts)?)
}

pub fn parse_polygon_file(path: &Path) -> Result<ConvexPolygon, CliError> {
    parse_polygon_str(&read_input(path)?.text, path)
}

pub fn parse_curve_str(text: &str, path: &Path) -> Result<SupportCurve, CliError> {
    let err = |line: usize, message: String| CliError::Parse { path: path.to_path_buf(), line, message };
    let mut a0 = None;
    let mut harmonics: Vec<Harmonic> = Vec::new();
    for (line, l) in content_lines(text) {
        if let Some(rest) = l.strip_prefix("a0") {
            let value = rest.trim_start().strip_prefix('=').ok_or_else(|| err(line, "expected `a0 = <value>`".into()))?;
            if a0.replace(number(path, line, value.trim())?).is_some() {
                return Err(err(line, "a0 given twice".into()));
            }
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 || !(toks[0] == "cos" || toks[0] == "sin") {
            return Err(err(line, "expected `cos <m> <value>` or `sin <m> <value>`".into()));
        }
        let order: u32 = toks[1].parse().map_err(|_| err(line, format!("invalid order {:?}", toks[1])))?;
        let value = number(path, line, toks[2])?;
        let idx = match harmonics.iter().position(|h| h.order == order) {
            Some(i) => i,
            None => {
                harmonics.push(Harmonic { order, cos: 0.0, sin: 0.0 });
                harmonics.len() - 1
            }
        };
        let slot = if toks[0] == "cos" { &mut harmonics[idx].cos } else { &mut harmonics[idx].sin };
        *slot += value;
    }
    let a0 = a0.ok_or_else(|| err(0, "missing `a0 = <value>`".into()))?;
    harmonics.sort_by_key(|h| h.order);
    Ok(SupportCurve::new(a0, harmonics)?)
}

pub fn parse_curve_file(path: &Path) -> Result<SupportCurve, CliError> {
    parse_curve_str(&read_input(path)?.text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("mem")
    }

    #[test]
    fn square_with_comments() {
        let a = parse_polygon_str("0 0\n1 0\n1 1\n0 1", p()).unwrap();
        let b = parse_polygon_str("# unit square\n0 0\n1 0\n\n# top\n1 1\n0 1\n", p()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
    }

    #[test]
    fn polygon_errors() {
        let e = parse_polygon_str("0 0\n1 0\n", p()).unwrap_err();
        assert!(e.to_string().contains("n >= 3 required"), "{e}");
        match parse_polygon_str("0 0\n1 x\n0 1\n", p()) {
            Err(CliError::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_polygon_str("0 0 0\n", p()), Err(CliError::Parse { line: 1, .. })));
    }

    #[test]
    fn curve_format() {
        let c = parse_curve_str("# trefoil\na0 = 1\ncos 3 0.05\n", p()).unwrap();
        assert_eq!(c.a0(), 1.0);
        assert_eq!(c.harmonics(), &[Harmonic { order: 3, cos: 0.05, sin: 0.0 }]);
        assert!(parse_curve_str("cos 3 0.05\n", p()).is_err());
        assert!(parse_curve_str("a0 = 1\ncos 1 0.05\n", p()).is_err());
        assert!(matches!(parse_curve_str("a0 = 1\ntan 2 0.1\n", p()), Err(CliError::Parse { line: 2, .. })));
    }
}
