//! Reading complexes, faces, monomials and classes from text.
//!
//! A complex is either a JSON document `{"facets": [[1,2,3], ...]}` or one
//! facet per line as space separated labels; `#` starts a comment.
//! Faces are written `1,2,3`, monomials `1,3:2` (vertex 3 squared) and
//! classes as `+` separated terms `0xC@MONO` or `MONO`.

use std::path::Path;

use serde::Deserialize;

use crate::artinian::{ChowClass, Monomial};
use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::corpus;
use crate::error::{Error, Result};
use crate::scalar::{Gf2k, Gf2kField};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FacetList {
    facets: Vec<Vec<VertexId>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSource {
    File(std::path::PathBuf),
    Builtin(String),
}

impl std::fmt::Display for InputSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InputSource::File(p) => write!(f, "file:{}", p.display()),
            InputSource::Builtin(n) => write!(f, "builtin:{n}"),
        }
    }
}

pub fn load(source: &InputSource) -> Result<SimplicialComplex> {
    match source {
        InputSource::File(path) => read_complex(path),
        InputSource::Builtin(name) => corpus::builtin(name),
    }
}

pub fn read_complex(path: &Path) -> Result<SimplicialComplex> {
    parse_complex(&std::fs::read_to_string(path)?)
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    if text.trim_start().starts_with('{') {
        let list: FacetList = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        return SimplicialComplex::from_facets(list.facets);
    }
    let mut facets = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut facet = Vec::new();
        let mut col = 0;
        for token in line.split(|c: char| c.is_whitespace()) {
            if !token.is_empty() {
                let v = token.parse::<VertexId>().map_err(|e| Error::Parse {
                    line: i + 1,
                    column: col + 1,
                    message: format!("`{token}`: {e}"),
                })?;
                facet.push(v);
            }
            col += token.chars().count() + 1;
        }
        if !facet.is_empty() {
            facets.push(facet);
        }
    }
    SimplicialComplex::from_facets(facets)
}

/// One facet per line.
pub fn to_text(k: &SimplicialComplex) -> String {
    let mut out = String::new();
    for f in k.facets() {
        let labels: Vec<String> = f.vertices().iter().map(u32::to_string).collect();
        out.push_str(&labels.join(" "));
        out.push('\n');
    }
    out
}

pub fn to_json(k: &SimplicialComplex) -> String {
    let facets: Vec<&[VertexId]> = k.facets().iter().map(Face::vertices).collect();
    serde_json::json!({ "facets": facets }).to_string()
}

fn field_error(what: &str, text: &str, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column,
        message: format!("{what} `{text}`: {}", message.into()),
    }
}

fn parse_label(what: &str, text: &str, token: &str, column: usize) -> Result<VertexId> {
    token
        .trim()
        .parse()
        .map_err(|e: std::num::ParseIntError| field_error(what, text, column, e.to_string()))
}

/// `1,2,3`; empty text is the empty face.
pub fn parse_face(text: &str) -> Result<Face> {
    let mut out = Vec::new();
    let mut col = 1;
    for token in text.split(',') {
        if !token.trim().is_empty() {
            out.push(parse_label("face", text, token, col)?);
        }
        col += token.len() + 1;
    }
    Face::new(out)
}

/// `1,3:2` is `x1 * x3^2`; the empty string is the monomial `1`.
pub fn parse_monomial(text: &str) -> Result<Monomial> {
    let mut pairs = Vec::new();
    let mut col = 1;
    for token in text.split(',') {
        if !token.trim().is_empty() {
            let (v, e) = match token.split_once(':') {
                Some((v, e)) => {
                    let e: u32 = e
                        .trim()
                        .parse()
                        .map_err(|err: std::num::ParseIntError| field_error("monomial", text, col, err.to_string()))?;
                    (v, e)
                }
                None => (token, 1),
            };
            pairs.push((parse_label("monomial", text, v, col)?, e));
        }
        col += token.len() + 1;
    }
    Ok(Monomial::from_pairs(pairs))
}

/// `0x1f@1,2 + 3,4`: terms separated by `+`, each an optional hex
/// coefficient and a monomial. All terms must share one degree.
pub fn parse_class(text: &str, field: Gf2kField) -> Result<ChowClass<Gf2k>> {
    let mut terms = Vec::new();
    let mut col = 1;
    for token in text.split('+') {
        let (coeff, mono) = match token.split_once('@') {
            Some((c, m)) => {
                let c = c.trim();
                let digits = c.strip_prefix("0x").unwrap_or(c);
                let bits = u128::from_str_radix(digits, 16)
                    .map_err(|e| field_error("coefficient", text, col, e.to_string()))?;
                if field.k() < 128 && bits >> field.k() != 0 {
                    return Err(field_error("coefficient", text, col, "does not fit the field"));
                }
                (field.element(bits), m)
            }
            None => (field.one(), token),
        };
        let m = parse_monomial(mono)?;
        terms.push((m, coeff));
        col += token.len() + 1;
    }
    let degree = terms.first().map(|(m, _)| m.degree()).unwrap_or(0);
    ChowClass::from_terms(degree, terms)
}
