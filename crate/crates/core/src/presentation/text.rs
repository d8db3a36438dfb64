//! Canonical line-oriented text format.
//!
//! ```text
//! vertex 0
//! vertex 1
//! arrow x1@0 x1: 0 -> 1 @1
//! relation x1@0.x2@1 - x2@0.x1@2
//! ```
//!
//! Vertices come first in vertex order, then arrows in stored order (source
//! vertex, then id), then relations. Coefficients of 1 are omitted; other
//! coefficients are written as reduced fractions before the path. Trivial
//! paths are written `e[v]`. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use num_traits::{One, Signed};
use thiserror::Error;

use super::{Arrow, GradedPresentation, Path, Quiver, Relation};
use crate::linalg::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(super) fn format_relation(q: &Quiver, r: &Relation) -> String {
    let mut out = String::new();
    for (i, (c, p)) in r.terms().iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push_str("- "),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        if !mag.is_one() {
            let _ = write!(out, "{} ", fmt_q(&mag));
        }
        out.push_str(&p.display(q));
    }
    out
}

pub fn serialize(pres: &GradedPresentation) -> String {
    let q = pres.quiver();
    let mut out = String::new();
    for v in q.vertices() {
        let _ = writeln!(out, "vertex {v}");
    }
    for (i, a) in q.arrows().iter().enumerate() {
        let _ = writeln!(
            out,
            "arrow {} {}: {} -> {} @{}",
            a.id,
            a.label,
            q.vertices()[a.source],
            q.vertices()[a.target],
            pres.degree_of(i)
        );
    }
    for r in pres.relations() {
        let _ = writeln!(out, "relation {}", format_relation(q, r));
    }
    out
}

struct Cursor<'a> {
    line_no: usize,
    line: &'a str,
}

impl Cursor<'_> {
    fn err_at(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line_no,
            column: self.line[..offset.min(self.line.len())].chars().count() + 1,
            message: message.into(),
        }
    }

    /// Whitespace-separated tokens with their byte offsets.
    fn tokens(&self, from: usize) -> Vec<(usize, &str)> {
        let rest = &self.line[from..];
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in rest.char_indices() {
            match (c.is_whitespace(), start) {
                (true, Some(s)) => {
                    out.push((from + s, &rest[s..i]));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((from + s, &rest[s..]));
        }
        out
    }
}

fn parse_q(tok: &str) -> Option<Q> {
    match tok.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.parse().ok()?;
            let d: num_bigint::BigInt = d.parse().ok()?;
            if d == num_bigint::BigInt::from(0) {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => tok.parse().ok().map(Q::from_integer),
    }
}

struct PendingArrow {
    line: usize,
    column: usize,
    id: String,
    label: String,
    source: String,
    target: String,
    degree: u32,
}

pub fn parse(input: &str) -> Result<GradedPresentation, ParseError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<PendingArrow> = Vec::new();
    let mut relation_lines: Vec<(usize, &str)> = Vec::new();

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let cur = Cursor { line_no, line };
        let toks = cur.tokens(0);
        let Some(&(kw_at, kw)) = toks.first() else {
            continue;
        };
        match kw {
            "vertex" => {
                if toks.len() != 2 {
                    return Err(cur.err_at(kw_at, "expected `vertex <name>`"));
                }
                if !relation_lines.is_empty() || !arrows.is_empty() {
                    return Err(cur.err_at(kw_at, "vertices must precede arrows and relations"));
                }
                vertices.push(toks[1].1.to_string());
            }
            "arrow" => {
                // arrow <id> <label>: <src> -> <tgt> @<deg>
                let shape_err = || cur.err_at(kw_at, "expected `arrow <id> <label>: <source> -> <target> @<degree>`");
                if toks.len() != 7 || toks[4].1 != "->" {
                    return Err(shape_err());
                }
                let label = toks[2].1.strip_suffix(':').ok_or_else(shape_err)?;
                let deg_tok = toks[6];
                let degree = deg_tok
                    .1
                    .strip_prefix('@')
                    .and_then(|d| d.parse::<u32>().ok())
                    .ok_or_else(|| cur.err_at(deg_tok.0, "degree must be `@<nonnegative integer>`"))?;
                if !relation_lines.is_empty() {
                    return Err(cur.err_at(kw_at, "arrows must precede relations"));
                }
                arrows.push(PendingArrow {
                    line: line_no,
                    column: toks[1].0 + 1,
                    id: toks[1].1.to_string(),
                    label: label.to_string(),
                    source: toks[3].1.to_string(),
                    target: toks[5].1.to_string(),
                    degree,
                });
            }
            "relation" => relation_lines.push((line_no, line)),
            other => {
                return Err(cur.err_at(kw_at, format!("unknown keyword `{other}`")));
            }
        }
    }

    let vertex_of = |name: &str| vertices.iter().position(|v| v == name);
    let mut built = Vec::new();
    for a in &arrows {
        let err = |m: String| ParseError {
            line: a.line,
            column: a.column,
            message: m,
        };
        let source = vertex_of(&a.source).ok_or_else(|| err(format!("unknown vertex `{}`", a.source)))?;
        let target = vertex_of(&a.target).ok_or_else(|| err(format!("unknown vertex `{}`", a.target)))?;
        built.push(Arrow {
            id: a.id.clone(),
            label: a.label.clone(),
            source,
            target,
        });
    }
    let quiver = Quiver::new(vertices.clone(), built).map_err(|e| ParseError {
        line: arrows.first().map_or(1, |a| a.line),
        column: 1,
        message: e.to_string(),
    })?;
    let mut degrees = vec![0; quiver.num_arrows()];
    for a in &arrows {
        degrees[quiver.arrow(&a.id).expect("arrow was just inserted")] = a.degree;
    }

    let mut relations = Vec::new();
    for (line_no, line) in relation_lines {
        relations.push(parse_relation(&quiver, line_no, line)?);
    }
    GradedPresentation::new(quiver, degrees, relations).map_err(|e| ParseError {
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

fn parse_relation(q: &Quiver, line_no: usize, line: &str) -> Result<Relation, ParseError> {
    let cur = Cursor { line_no, line };
    let toks = cur.tokens(0);
    let mut terms = Vec::new();
    let mut i = 1;
    let mut first = true;
    while i < toks.len() {
        let mut sign = Q::one();
        let (at, tok) = toks[i];
        match tok {
            "+" | "-" => {
                if tok == "-" {
                    sign = -sign;
                }
                i += 1;
            }
            _ if !first => return Err(cur.err_at(at, "expected `+` or `-` between terms")),
            _ => {}
        }
        first = false;
        let Some(&(at, tok)) = toks.get(i) else {
            return Err(cur.err_at(line.len(), "dangling sign"));
        };
        let coef = if tok.starts_with(|c: char| c.is_ascii_digit()) {
            let c = parse_q(tok).ok_or_else(|| cur.err_at(at, format!("bad coefficient `{tok}`")))?;
            i += 1;
            c
        } else {
            Q::one()
        };
        let Some(&(at, tok)) = toks.get(i) else {
            return Err(cur.err_at(line.len(), "missing path after coefficient"));
        };
        let path = parse_path(q, tok).map_err(|m| cur.err_at(at, m))?;
        terms.push((sign * coef, path));
        i += 1;
    }
    if terms.is_empty() {
        return Err(cur.err_at(0, "empty relation"));
    }
    Relation::new(terms).map_err(|e| cur.err_at(0, e.to_string()))
}

fn parse_path(q: &Quiver, tok: &str) -> Result<Path, String> {
    if let Some(v) = tok.strip_prefix("e[").and_then(|t| t.strip_suffix(']')) {
        return q
            .vertex(v)
            .map(Path::trivial)
            .ok_or_else(|| format!("unknown vertex `{v}`"));
    }
    let ids: Vec<&str> = tok.split('.').collect();
    Path::from_ids(q, &ids).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, q_frac};

    fn sample() -> GradedPresentation {
        let quiver = Quiver::from_names(
            &["0", "1", "2"],
            &[
                ("a", "x1", "0", "1"),
                ("b", "x2", "0", "1"),
                ("c", "x1", "1", "2"),
                ("d", "x2", "1", "2"),
            ],
        )
        .unwrap();
        let p = |ids: &[&str]| Path::from_ids(&quiver, ids).unwrap();
        let r1 = Relation::new([(q(1), p(&["a", "c"])), (q(-1), p(&["b", "d"]))]).unwrap();
        let r2 = Relation::new([(q_frac(-3, 2), p(&["a", "d"])), (q(2), p(&["b", "c"]))]).unwrap();
        GradedPresentation::new(quiver, vec![0, 1, 1, 0], vec![r1, r2]).unwrap()
    }

    #[test]
    fn serialize_is_stable_and_readable() {
        let text = serialize(&sample());
        assert_eq!(
            text,
            "vertex 0\nvertex 1\nvertex 2\n\
             arrow a x1: 0 -> 1 @0\narrow b x2: 0 -> 1 @1\n\
             arrow c x1: 1 -> 2 @1\narrow d x2: 1 -> 2 @0\n\
             relation a.c - b.d\nrelation - 3/2 a.d + 2 b.c\n"
        );
    }

    #[test]
    fn roundtrip() {
        let p = sample();
        assert_eq!(parse(&serialize(&p)).unwrap(), p);
    }

    #[test]
    fn empty_document() {
        let empty = GradedPresentation::empty();
        assert_eq!(serialize(&empty), "");
        assert_eq!(parse("").unwrap(), empty);
    }

    #[test]
    fn errors_carry_position() {
        let err = parse("vertex 0\nvertex 1\narrow a x: 0 -> 2 @1\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 7));
        let err = parse("vertex 0\narrow a x: 0 -> 0 @1\nrelation a.a + 2 a.b\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(err.column, 18);
        let err = parse("vertex 0\n  bogus\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
    }

    #[test]
    fn comments_and_trivial_paths() {
        let p = parse("# loop\nvertex v\narrow l x: v -> v @2 # loop arrow\nrelation l.l - 1/3 e[v]\n").unwrap();
        assert_eq!(p.relations()[0].terms().len(), 2);
        assert!(p.relations()[0].terms().iter().any(|(_, path)| path.is_trivial()));
        assert_eq!(parse(&serialize(&p)).unwrap(), p);
    }
}
