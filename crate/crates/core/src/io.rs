//! Line-oriented text formats: `.vpoly` (labelled points) and `.hpoly`
//! (inequalities `α·x >= c`). Lines starting with `#` are comments.

use thiserror::Error;

use crate::arith::{parse_scalar, Hyperplane, Vector};
use crate::hull::{HPolytope, HullError, VPolytope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("expected {expected} entries, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("missing header")]
    MissingHeader,
    #[error(transparent)]
    Hull(#[from] HullError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-comment, non-blank lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn parse_header(line: usize, words: &[&str], tag: &str) -> Result<(usize, usize), FormatError> {
    if words.len() != 3 || words[0] != tag {
        return Err(syntax(line, format!("expected header \"{tag} <d> <n>\"")));
    }
    let num = |w: &str| w.parse::<usize>().map_err(|_| syntax(line, format!("bad count {w:?}")));
    Ok((num(words[1])?, num(words[2])?))
}

fn parse_row(line: usize, words: &[&str]) -> Result<Vector, FormatError> {
    words
        .iter()
        .map(|w| parse_scalar(w).map_err(|e| syntax(line, e.to_string())))
        .collect::<Result<Vec<_>, _>>()
        .map(Vector)
}

pub fn parse_vpoly(text: &str) -> Result<VPolytope, FormatError> {
    let mut lines = content_lines(text);
    let (hline, hwords) = lines.next().ok_or(FormatError::MissingHeader)?;
    let (d, n) = parse_header(hline, &hwords, "vpoly")?;
    let mut points = Vec::with_capacity(n);
    let mut seen = std::collections::HashSet::new();
    for (line, words) in lines {
        if words.len() != d + 1 {
            return Err(syntax(line, format!("expected a label and {d} coordinates, found {} fields", words.len())));
        }
        if !seen.insert(words[0]) {
            return Err(syntax(line, format!("duplicate label {:?}", words[0])));
        }
        points.push((words[0].to_string(), parse_row(line, &words[1..])?));
    }
    if points.len() != n {
        return Err(FormatError::CountMismatch {
            expected: n,
            found: points.len(),
        });
    }
    Ok(VPolytope::new(d, points)?)
}

pub fn emit_vpoly(p: &VPolytope) -> String {
    let mut out = format!("vpoly {} {}\n", p.dim, p.len());
    for v in &p.vertices {
        out.push_str(&v.label);
        for c in &v.point.0 {
            out.push(' ');
            out.push_str(&c.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn parse_hpoly(text: &str) -> Result<HPolytope, FormatError> {
    let mut lines = content_lines(text);
    let (hline, hwords) = lines.next().ok_or(FormatError::MissingHeader)?;
    let (d, m) = parse_header(hline, &hwords, "hpoly")?;
    let mut facets = Vec::with_capacity(m);
    for (line, words) in lines {
        if words.len() != d + 1 {
            return Err(syntax(line, format!("expected {} rationals, found {}", d + 1, words.len())));
        }
        let row = parse_row(line, &words)?;
        let normal = Vector(row.0[..d].to_vec());
        let h = Hyperplane::new(normal, row.0[d].clone()).map_err(|e| syntax(line, e.to_string()))?;
        facets.push(h.canonical_oriented());
    }
    if facets.len() != m {
        return Err(FormatError::CountMismatch {
            expected: m,
            found: facets.len(),
        });
    }
    Ok(HPolytope { dim: d, facets })
}

pub fn emit_hpoly(h: &HPolytope) -> String {
    let mut out = format!("hpoly {} {}\n", h.dim, h.facets.len());
    for f in &h.facets {
        let f = f.canonical_oriented();
        let row: Vec<String> = f.normal.0.iter().chain(std::iter::once(&f.offset)).map(|c| c.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Serde helper storing a polytope as inline `.vpoly` text.
pub mod vpoly_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::hull::VPolytope;

    pub fn serialize<S: Serializer>(p: &VPolytope, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::emit_vpoly(p))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<VPolytope, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_vpoly(&text).map_err(serde::de::Error::custom)
    }
}
