//! Quivers, paths, homogeneous relations and graded presentations.
//!
//! Paths compose left to right: the path `a.b` runs along `a` first and then
//! along `b`, so the target of `a` must equal the source of `b`.

mod dot;
mod text;

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::Q;

pub use dot::export_dot;
pub use text::{parse, serialize, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow id `{0}`")]
    DuplicateArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("cannot compose: path ends at vertex {left_target} but next path starts at vertex {right_source}")]
    NotComposable {
        left_target: String,
        right_source: String,
    },
    #[error("relation has no nonzero term")]
    EmptyRelation,
    #[error("expected {expected} arrow degrees, got {found}")]
    DegreeCount { expected: usize, found: usize },
}

/// Identifiers may not contain whitespace or the separators used by the
/// text format.
pub(crate) fn is_valid_ident(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '.' | ':' | '#' | '"' | '[' | ']'))
}

/// Arrow ids additionally may not look like a coefficient.
pub(crate) fn is_valid_arrow_id(s: &str) -> bool {
    is_valid_ident(s) && !s.starts_with(|c: char| c.is_ascii_digit() || matches!(c, '+' | '-' | '/'))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub id: String,
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver. Arrows are stored sorted by source vertex and then by id,
/// which fixes arrow indices for a given set of arrows.
#[derive(Debug, Clone)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

impl Quiver {
    pub fn new(vertices: Vec<String>, mut arrows: Vec<Arrow>) -> Result<Self, PresentationError> {
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if !is_valid_ident(v) {
                return Err(PresentationError::InvalidIdentifier(v.clone()));
            }
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(PresentationError::DuplicateVertex(v.clone()));
            }
        }
        for a in &arrows {
            if !is_valid_arrow_id(&a.id) || !is_valid_ident(&a.label) {
                return Err(PresentationError::InvalidIdentifier(a.id.clone()));
            }
            for v in [a.source, a.target] {
                if v >= vertices.len() {
                    return Err(PresentationError::UnknownVertex(v.to_string()));
                }
            }
        }
        arrows.sort_by(|a, b| (a.source, &a.id).cmp(&(b.source, &b.id)));
        let mut arrow_index = HashMap::new();
        for (i, a) in arrows.iter().enumerate() {
            if arrow_index.insert(a.id.clone(), i).is_some() {
                return Err(PresentationError::DuplicateArrow(a.id.clone()));
            }
        }
        Ok(Self {
            vertices,
            arrows,
            vertex_index,
            arrow_index,
        })
    }

    /// Builds a quiver from vertex names and `(id, label, source, target)`
    /// tuples naming their endpoints.
    pub fn from_names(
        vertices: &[&str],
        arrows: &[(&str, &str, &str, &str)],
    ) -> Result<Self, PresentationError> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let lookup = |v: &str| {
            index
                .get(v)
                .copied()
                .ok_or_else(|| PresentationError::UnknownVertex(v.to_string()))
        };
        let mut out = Vec::new();
        for (id, label, s, t) in arrows {
            out.push(Arrow {
                id: id.to_string(),
                label: label.to_string(),
                source: lookup(s)?,
                target: lookup(t)?,
            });
        }
        Self::new(vs, out)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }

    pub fn arrow(&self, id: &str) -> Option<usize> {
        self.arrow_index.get(id).copied()
    }

    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.source == v).map(|(i, _)| i)
    }

    pub fn arrows_into(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.target == v).map(|(i, _)| i)
    }
}

/// A path in a quiver, stored by arrow indices. Trivial paths keep their
/// vertex in `source == target` and have no arrows.
///
/// The derived ordering compares arrow sequences lexicographically first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub arrows: Vec<usize>,
    pub source: usize,
    pub target: usize,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Self {
            arrows: Vec::new(),
            source: v,
            target: v,
        }
    }

    pub fn arrow(q: &Quiver, a: usize) -> Self {
        let arr = &q.arrows[a];
        Self {
            arrows: vec![a],
            source: arr.source,
            target: arr.target,
        }
    }

    /// Builds a path from a sequence of arrow indices, checking composability.
    pub fn from_arrows(q: &Quiver, arrows: &[usize]) -> Result<Self, PresentationError> {
        let Some((&first, rest)) = arrows.split_first() else {
            return Err(PresentationError::EmptyRelation);
        };
        let mut p = Self::arrow(q, first);
        for &a in rest {
            p = compose_paths(q, &p, &Self::arrow(q, a))?;
        }
        Ok(p)
    }

    pub fn from_ids(q: &Quiver, ids: &[&str]) -> Result<Self, PresentationError> {
        let idx = ids
            .iter()
            .map(|id| q.arrow(id).ok_or_else(|| PresentationError::UnknownArrow(id.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_arrows(q, &idx)
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_trivial()
    }

    pub fn is_parallel(&self, other: &Path) -> bool {
        self.source == other.source && self.target == other.target
    }

    pub fn labels(&self, q: &Quiver) -> Vec<String> {
        self.arrows.iter().map(|&a| q.arrows[a].label.clone()).collect()
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e[{}]", q.vertices[self.source])
        } else {
            self.arrows
                .iter()
                .map(|&a| q.arrows[a].id.as_str())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

/// Concatenates `p` then `q`.
pub fn compose_paths(quiver: &Quiver, p: &Path, q: &Path) -> Result<Path, PresentationError> {
    if p.target != q.source {
        return Err(PresentationError::NotComposable {
            left_target: quiver.vertices[p.target].clone(),
            right_source: quiver.vertices[q.source].clone(),
        });
    }
    let mut arrows = p.arrows.clone();
    arrows.extend_from_slice(&q.arrows);
    Ok(Path {
        arrows,
        source: p.source,
        target: q.target,
    })
}

/// A finite linear combination of paths with nonzero rational coefficients,
/// kept sorted by path with like terms merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    terms: Vec<(Q, Path)>,
}

impl Relation {
    pub fn new(terms: impl IntoIterator<Item = (Q, Path)>) -> Result<Self, PresentationError> {
        let mut merged: std::collections::BTreeMap<Path, Q> = Default::default();
        for (c, p) in terms {
            *merged.entry(p).or_insert_with(Q::zero) += c;
        }
        let terms: Vec<(Q, Path)> = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (c, p))
            .collect();
        if terms.is_empty() {
            return Err(PresentationError::EmptyRelation);
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(Q, Path)] {
        &self.terms
    }

    pub fn source(&self) -> usize {
        self.terms[0].1.source
    }

    pub fn target(&self) -> usize {
        self.terms[0].1.target
    }

    pub fn display(&self, q: &Quiver) -> String {
        text::format_relation(q, self)
    }
}

/// A quiver with a nonnegative integer degree on every arrow and a list of
/// relations generating the ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPresentation {
    quiver: Quiver,
    degrees: Vec<u32>,
    relations: Vec<Relation>,
}

impl GradedPresentation {
    /// `degrees` is indexed like `quiver.arrows()`.
    pub fn new(
        quiver: Quiver,
        degrees: Vec<u32>,
        relations: Vec<Relation>,
    ) -> Result<Self, PresentationError> {
        if degrees.len() != quiver.num_arrows() {
            return Err(PresentationError::DegreeCount {
                expected: quiver.num_arrows(),
                found: degrees.len(),
            });
        }
        for r in &relations {
            for (_, p) in r.terms() {
                for &a in &p.arrows {
                    if a >= quiver.num_arrows() {
                        return Err(PresentationError::UnknownArrow(a.to_string()));
                    }
                }
                if p.source >= quiver.num_vertices() || p.target >= quiver.num_vertices() {
                    return Err(PresentationError::UnknownVertex(p.source.to_string()));
                }
                let recomputed = if p.arrows.is_empty() {
                    Path::trivial(p.source)
                } else {
                    Path::from_arrows(&quiver, &p.arrows)?
                };
                if &recomputed != p {
                    return Err(PresentationError::NotComposable {
                        left_target: quiver.vertices[p.source].clone(),
                        right_source: quiver.vertices[p.target].clone(),
                    });
                }
            }
        }
        Ok(Self {
            quiver,
            degrees,
            relations,
        })
    }

    /// Presentation with every arrow in degree 1 and no relations.
    pub fn free(quiver: Quiver) -> Self {
        let degrees = vec![1; quiver.num_arrows()];
        Self {
            quiver,
            degrees,
            relations: Vec::new(),
        }
    }

    pub fn empty() -> Self {
        Self::free(Quiver::new(Vec::new(), Vec::new()).expect("empty quiver is valid"))
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree_of(&self, arrow: usize) -> u32 {
        self.degrees[arrow]
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn with_relations(&self, relations: Vec<Relation>) -> Self {
        Self {
            quiver: self.quiver.clone(),
            degrees: self.degrees.clone(),
            relations,
        }
    }

    pub fn with_degrees(&self, degrees: Vec<u32>) -> Result<Self, PresentationError> {
        Self::new(self.quiver.clone(), degrees, self.relations.clone())
    }

    pub fn path_degree(&self, p: &Path) -> u32 {
        p.arrows.iter().map(|&a| self.degrees[a]).sum()
    }

    /// Largest relation length; 0 when there are no relations.
    pub fn max_relation_length(&self) -> usize {
        self.relations
            .iter()
            .flat_map(|r| r.terms().iter().map(|(_, p)| p.len()))
            .max()
            .unwrap_or(0)
    }

    pub fn is_quadratic(&self) -> bool {
        self.relations.iter().all(|r| r.terms().iter().all(|(_, p)| p.len() == 2))
    }
}

/// Grading degree of a path given by arrow ids.
pub fn path_degree(pres: &GradedPresentation, arrow_ids: &[&str]) -> Result<u32, PresentationError> {
    arrow_ids
        .iter()
        .map(|id| {
            pres.quiver
                .arrow(id)
                .map(|a| pres.degrees[a])
                .ok_or_else(|| PresentationError::UnknownArrow(id.to_string()))
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NotParallel,
    InhomogeneousLength,
    InhomogeneousDegree,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::NotParallel => "relation mixes non-parallel paths",
            Self::InhomogeneousLength => "inhomogeneous relation (path length)",
            Self::InhomogeneousDegree => "inhomogeneous relation (grading degree)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub relation: usize,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Checks that every relation is a combination of parallel paths that is
/// homogeneous in both path length and grading degree.
pub fn validate_presentation(pres: &GradedPresentation) -> ValidationReport {
    let mut violations = Vec::new();
    for (i, r) in pres.relations.iter().enumerate() {
        let (_, first) = &r.terms[0];
        let kind = if r.terms.iter().any(|(_, p)| !p.is_parallel(first)) {
            Some(ViolationKind::NotParallel)
        } else if r.terms.iter().any(|(_, p)| p.len() != first.len()) {
            Some(ViolationKind::InhomogeneousLength)
        } else if r
            .terms
            .iter()
            .any(|(_, p)| pres.path_degree(p) != pres.path_degree(first))
        {
            Some(ViolationKind::InhomogeneousDegree)
        } else {
            None
        };
        if let Some(kind) = kind {
            violations.push(Violation { relation: i, kind });
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn triangle() -> GradedPresentation {
        let q = Quiver::from_names(
            &["0", "1", "2"],
            &[("a", "a", "0", "1"), ("b", "b", "1", "2"), ("c", "c", "0", "2")],
        )
        .unwrap();
        GradedPresentation::new(q, vec![0, 1, 1], vec![]).unwrap()
    }

    #[test]
    fn trivial_path_is_left_identity() {
        let p = triangle();
        let q = p.quiver();
        let ab = Path::from_ids(q, &["a", "b"]).unwrap();
        assert_eq!(compose_paths(q, &Path::trivial(0), &ab).unwrap(), ab);
        assert_eq!(compose_paths(q, &ab, &Path::trivial(2)).unwrap(), ab);
    }

    #[test]
    fn non_composable_is_an_error() {
        let p = triangle();
        let q = p.quiver();
        let a = Path::from_ids(q, &["a"]).unwrap();
        let c = Path::from_ids(q, &["c"]).unwrap();
        assert!(matches!(
            compose_paths(q, &a, &c),
            Err(PresentationError::NotComposable { .. })
        ));
    }

    #[test]
    fn degree_is_additive() {
        let p = triangle();
        let q = p.quiver();
        let a = Path::from_ids(q, &["a"]).unwrap();
        let b = Path::from_ids(q, &["b"]).unwrap();
        let ab = compose_paths(q, &a, &b).unwrap();
        assert_eq!(p.path_degree(&ab), p.path_degree(&a) + p.path_degree(&b));
        assert_eq!(p.path_degree(&Path::trivial(1)), 0);
        assert_eq!(path_degree(&p, &["a", "b"]).unwrap(), 1);
        assert!(path_degree(&p, &["z"]).is_err());
    }

    #[test]
    fn validation_flags_inhomogeneous_and_non_parallel() {
        let p = triangle();
        let qv = p.quiver().clone();
        let ab = Path::from_ids(&qv, &["a", "b"]).unwrap();
        let c = Path::from_ids(&qv, &["c"]).unwrap();
        let a = Path::from_ids(&qv, &["a"]).unwrap();
        let mixed = Relation::new([(q(1), ab.clone()), (q(-1), c)]).unwrap();
        let report = validate_presentation(&p.with_relations(vec![mixed]));
        assert_eq!(report.first().unwrap().kind, ViolationKind::InhomogeneousLength);
        let skew = Relation::new([(q(1), ab), (q(1), a)]).unwrap();
        let report = validate_presentation(&p.with_relations(vec![skew]));
        assert_eq!(report.first().unwrap().kind, ViolationKind::NotParallel);
    }

    #[test]
    fn degree_inhomogeneous_relation_is_reported() {
        let qv = Quiver::from_names(
            &["0", "1"],
            &[("a", "a", "0", "1"), ("b", "b", "0", "1"), ("c", "c", "1", "1")],
        )
        .unwrap();
        let p = GradedPresentation::new(qv.clone(), vec![0, 1, 0], vec![]).unwrap();
        let ac = Path::from_ids(&qv, &["a", "c"]).unwrap();
        let bc = Path::from_ids(&qv, &["b", "c"]).unwrap();
        let r = Relation::new([(q(1), ac), (q(-1), bc)]).unwrap();
        let report = validate_presentation(&p.with_relations(vec![r]));
        assert_eq!(report.first().unwrap().kind, ViolationKind::InhomogeneousDegree);
        assert_eq!(
            report.first().unwrap().kind.to_string(),
            "inhomogeneous relation (grading degree)"
        );
    }

    #[test]
    fn relation_merges_like_terms() {
        let p = triangle();
        let ab = Path::from_ids(p.quiver(), &["a", "b"]).unwrap();
        assert_eq!(
            Relation::new([(q(1), ab.clone()), (q(-1), ab)]),
            Err(PresentationError::EmptyRelation)
        );
    }
}
