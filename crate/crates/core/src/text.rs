//! Line-oriented text format for complexes, labelings and forms.
//!
//! ```text
//! complex v=2 e=3 f=2
//! edge 1 1 2
//! edge 2 1 2
//! edge 3 1 2
//! face 1 : 2 -1
//! face 2 : 1 -3
//! label 1 1
//! label 2 -1
//! lambda 1 1/2
//! ```
//!
//! Vertices, edges, faces and abstract relators are numbered from 1 and a
//! negative edge id in a face line is the reversed edge. `label` and
//! `lambda` lines are optional, but when present there must be one per face
//! (resp. edge). Blank lines and `#` comments are ignored. The printer is
//! canonical, so printing a parsed canonical document reproduces it exactly.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use thiserror::Error;

use crate::complex::{AbstractLabeling, Complex2, ComplexError, Edge, Face, FaceLabel, OrientedEdge};
use crate::forms::{parse_rational, FormError, GeometricForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing {0} lines")]
    Missing(&'static str),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// A parsed complex with its optional face labels and edge lengths.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplexDocument {
    pub complex: Complex2,
    pub labels: Option<Vec<FaceLabel>>,
    pub lambda: Option<Vec<Rational64>>,
}

impl ComplexDocument {
    pub fn new(complex: Complex2) -> ComplexDocument {
        ComplexDocument { complex, labels: None, lambda: None }
    }

    pub fn from_form(form: &GeometricForm) -> ComplexDocument {
        ComplexDocument {
            complex: form.complex().clone(),
            labels: None,
            lambda: Some(form.lambda().to_vec()),
        }
    }

    pub fn labeling(&self) -> Result<Option<AbstractLabeling>, TextError> {
        match &self.labels {
            Some(l) => Ok(Some(AbstractLabeling::new(&self.complex, l.clone())?)),
            None => Ok(None),
        }
    }

    pub fn form(&self) -> Result<GeometricForm, TextError> {
        let lambda = self.lambda.clone().ok_or(TextError::Missing("lambda"))?;
        Ok(GeometricForm::new(self.complex.clone(), lambda)?)
    }
}

impl fmt::Display for ComplexDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.complex;
        writeln!(f, "complex v={} e={} f={}", c.vertex_count(), c.edge_count(), c.face_count())?;
        for (i, e) in c.edges().iter().enumerate() {
            writeln!(f, "edge {} {} {}", i + 1, e.from + 1, e.to + 1)?;
        }
        for (i, face) in c.faces().iter().enumerate() {
            write!(f, "face {} :", i + 1)?;
            for o in &face.boundary {
                write!(f, " {}", o.to_signed())?;
            }
            writeln!(f)?;
        }
        if let Some(labels) = &self.labels {
            for (i, l) in labels.iter().enumerate() {
                writeln!(f, "label {} {}", i + 1, l.to_signed())?;
            }
        }
        if let Some(lambda) = &self.lambda {
            for (i, l) in lambda.iter().enumerate() {
                writeln!(f, "lambda {} {}/{}", i + 1, l.numer(), l.denom())?;
            }
        }
        Ok(())
    }
}

fn syntax(line: usize, message: impl Into<String>) -> TextError {
    TextError::Syntax { line, message: message.into() }
}

fn parse_num<T: FromStr>(line: usize, token: Option<&str>, what: &str) -> Result<T, TextError> {
    let token = token.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    token.parse().map_err(|_| syntax(line, format!("bad {what} {token:?}")))
}

/// Checks a 1-based id against `count` and that it has not been seen yet.
fn slot<T>(line: usize, id: usize, slots: &mut [Option<T>], what: &str) -> Result<usize, TextError> {
    if id == 0 || id > slots.len() {
        return Err(syntax(line, format!("{what} id {id} out of range 1..={}", slots.len())));
    }
    if slots[id - 1].is_some() {
        return Err(syntax(line, format!("duplicate {what} {id}")));
    }
    Ok(id - 1)
}

fn header_field(line: usize, token: Option<&str>, key: &str) -> Result<usize, TextError> {
    let token = token.ok_or_else(|| syntax(line, format!("missing {key}=")))?;
    let value = token
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| syntax(line, format!("expected {key}=<n>, got {token:?}")))?;
    value.parse().map_err(|_| syntax(line, format!("bad count {value:?}")))
}

fn collect<T>(slots: Vec<Option<T>>, what: &'static str) -> Result<Vec<T>, TextError> {
    slots.into_iter().collect::<Option<Vec<T>>>().ok_or(TextError::Missing(what))
}

impl FromStr for ComplexDocument {
    type Err = TextError;

    fn from_str(s: &str) -> Result<ComplexDocument, TextError> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(TextError::Missing("complex header"))?;
        let mut tokens = header.split_whitespace();
        if tokens.next() != Some("complex") {
            return Err(syntax(hline, "expected `complex v=<n> e=<n> f=<n>`"));
        }
        let v = header_field(hline, tokens.next(), "v")?;
        let e = header_field(hline, tokens.next(), "e")?;
        let f = header_field(hline, tokens.next(), "f")?;
        if tokens.next().is_some() {
            return Err(syntax(hline, "trailing tokens in header"));
        }

        let mut edges: Vec<Option<Edge>> = vec![None; e];
        let mut faces: Vec<Option<Face>> = vec![None; f];
        let mut labels: Vec<Option<FaceLabel>> = vec![None; f];
        let mut lambda: Vec<Option<Rational64>> = vec![None; e];
        let (mut any_label, mut any_lambda) = (false, false);

        for (line, text) in lines {
            let mut tokens = text.split_whitespace();
            match tokens.next() {
                Some("edge") => {
                    let id = slot(line, parse_num(line, tokens.next(), "edge id")?, &mut edges, "edge")?;
                    let from: usize = parse_num(line, tokens.next(), "vertex")?;
                    let to: usize = parse_num(line, tokens.next(), "vertex")?;
                    for x in [from, to] {
                        if x == 0 || x > v {
                            return Err(syntax(line, format!("vertex {x} out of range 1..={v}")));
                        }
                    }
                    edges[id] = Some(Edge { from: from - 1, to: to - 1 });
                }
                Some("face") => {
                    let id = slot(line, parse_num(line, tokens.next(), "face id")?, &mut faces, "face")?;
                    if tokens.next() != Some(":") {
                        return Err(syntax(line, "expected `:` after face id"));
                    }
                    let mut boundary = Vec::new();
                    for t in tokens.by_ref() {
                        let s: i64 = parse_num(line, Some(t), "edge id")?;
                        if s == 0 || s.unsigned_abs() as usize > e {
                            return Err(syntax(line, format!("edge id {s} out of range")));
                        }
                        boundary.push(OrientedEdge::signed(s));
                    }
                    faces[id] = Some(Face::new(boundary));
                }
                Some("label") => {
                    any_label = true;
                    let id = slot(line, parse_num(line, tokens.next(), "face id")?, &mut labels, "label for face")?;
                    let l: i64 = parse_num(line, tokens.next(), "label")?;
                    if l == 0 {
                        return Err(syntax(line, "labels are ±i with i >= 1"));
                    }
                    labels[id] = Some(FaceLabel::signed(l));
                }
                Some("lambda") => {
                    any_lambda = true;
                    let id = slot(line, parse_num(line, tokens.next(), "edge id")?, &mut lambda, "lambda for edge")?;
                    let t = tokens.next().ok_or_else(|| syntax(line, "missing length"))?;
                    lambda[id] = Some(parse_rational(t).map_err(|e| syntax(line, e.to_string()))?);
                }
                Some(other) => return Err(syntax(line, format!("unknown directive {other:?}"))),
                None => unreachable!("blank lines are filtered"),
            }
            if tokens.next().is_some() {
                return Err(syntax(line, "trailing tokens"));
            }
        }

        let complex = Complex2::build(v, collect(edges, "edge")?, collect(faces, "face")?)?;
        let labels = if any_label { Some(collect(labels, "label")?) } else { None };
        let lambda = if any_lambda { Some(collect(lambda, "lambda")?) } else { None };
        Ok(ComplexDocument { complex, labels, lambda })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{counterexample_form, wheel_form};

    const TWO_DISKS: &str = "complex v=2 e=3 f=2
edge 1 1 2
edge 2 1 2
edge 3 1 2
face 1 : 2 -1
face 2 : 1 -3
label 1 1
label 2 -2
lambda 1 1/2
lambda 2 1/2
lambda 3 1/2
";

    #[test]
    fn canonical_round_trip() {
        let doc: ComplexDocument = TWO_DISKS.parse().unwrap();
        assert_eq!(doc.to_string(), TWO_DISKS);
        let lab = doc.labeling().unwrap().unwrap();
        assert_eq!(lab.k(), 2);
        assert_eq!(doc.form().unwrap().density(), Rational64::new(3, 4));
    }

    #[test]
    fn forms_round_trip() {
        for form in [counterexample_form(), wheel_form(3).unwrap()] {
            let text = ComplexDocument::from_form(&form).to_string();
            let back: ComplexDocument = text.parse().unwrap();
            assert_eq!(back.form().unwrap(), form);
            assert_eq!(back.to_string(), text);
        }
    }

    #[test]
    fn comments_and_order_are_tolerated() {
        let text = "# two disks\ncomplex v=2 e=3 f=2\nface 2 : 1 -3\n\nedge 3 1 2\nedge 1 1 2 # shared\nedge 2 1 2\nface 1 : 2 -1\n";
        let doc: ComplexDocument = text.parse().unwrap();
        assert_eq!(doc.complex.face_count(), 2);
        assert!(doc.labels.is_none() && doc.lambda.is_none());
    }

    #[test]
    fn errors_name_the_line() {
        let dup = "complex v=1 e=1 f=1\nedge 1 1 1\nedge 1 1 1\nface 1 : 1\n";
        assert!(matches!(dup.parse::<ComplexDocument>(), Err(TextError::Syntax { line: 3, .. })));
        let missing = "complex v=1 e=2 f=1\nedge 1 1 1\nface 1 : 1\n";
        assert_eq!(missing.parse::<ComplexDocument>(), Err(TextError::Missing("edge")));
        let bad_vertex = "complex v=1 e=1 f=1\nedge 1 1 2\nface 1 : 1\n";
        assert!(matches!(bad_vertex.parse::<ComplexDocument>(), Err(TextError::Syntax { line: 2, .. })));
        let backtrack = "complex v=2 e=1 f=1\nedge 1 1 2\nface 1 : 1 -1\n";
        let err = backtrack.parse::<ComplexDocument>().unwrap_err();
        assert!(err.to_string().contains("boundary not cyclically reduced"), "{err}");
        let partial_labels = "complex v=1 e=2 f=2\nedge 1 1 1\nedge 2 1 1\nface 1 : 1\nface 2 : 2\nlabel 1 1\n";
        assert_eq!(partial_labels.parse::<ComplexDocument>(), Err(TextError::Missing("label")));
    }
}
