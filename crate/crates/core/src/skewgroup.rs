//! McKay quivers of cyclic groups acting diagonally, their gradings, and the
//! folded (Beilinson) quiver.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::q;
use crate::presentation::{
    validate_presentation, Arrow, GradedPresentation, Path, PresentationError, Quiver, Relation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkewGroupError {
    #[error("group order must be positive")]
    ZeroOrder,
    #[error("at least one weight is required")]
    NoWeights,
    #[error("grading line {line}: {message}")]
    GradingSyntax { line: usize, message: String },
    #[error("grading names unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("inhomogeneous grading: x{i}x{j} and x{j}x{i} at vertex {vertex} have degrees {left} and {right}")]
    Inhomogeneous {
        i: usize,
        j: usize,
        vertex: usize,
        left: u32,
        right: u32,
    },
    #[error("grading makes the x{j}-cycle through vertex {vertex} have degree 0 (infinite-dimensional A_0)")]
    DegreeZeroCycle { j: usize, vertex: usize },
    #[error("grading not Gorenstein-consistent: cycle x1..xd has degree {at_zero} from vertex 0 but {found} from vertex {vertex}")]
    NotGorensteinConsistent { at_zero: u32, vertex: usize, found: u32 },
    #[error("Gorenstein parameter must be positive")]
    ZeroParameter,
    #[error("inhomogeneous relation {0} cannot be folded")]
    InhomogeneousRelation(usize),
    #[error("vertex {vertex} out of range for a group of order {r}")]
    VertexOutOfRange { vertex: usize, r: usize },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// The cyclic group 1/r(a_1, ..., a_d) acting diagonally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicGroup {
    r: usize,
    weights: Vec<usize>,
}

impl CyclicGroup {
    /// Weights are reduced mod r.
    pub fn new(r: usize, weights: &[i64]) -> Result<Self, SkewGroupError> {
        if r == 0 {
            return Err(SkewGroupError::ZeroOrder);
        }
        if weights.is_empty() {
            return Err(SkewGroupError::NoWeights);
        }
        let weights = weights
            .iter()
            .map(|&a| a.rem_euclid(r as i64) as usize)
            .collect();
        Ok(Self { r, weights })
    }

    pub fn order(&self) -> usize {
        self.r
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Target of x_j (1-based) leaving vertex v.
    pub fn step(&self, v: usize, j: usize) -> usize {
        (v + self.weights[j - 1]) % self.r
    }
}

impl fmt::Display for CyclicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(ToString::to_string).collect();
        write!(f, "1/{}({})", self.r, ws.join(","))
    }
}

/// Arrow id of x_j (1-based) leaving vertex v.
pub fn arrow_id(j: usize, v: usize) -> String {
    format!("x{j}@{v}")
}

/// Quiver of k[x_1..x_d]#G with commutativity relations. Every arrow has
/// degree 1.
pub fn mckay_quiver(g: &CyclicGroup) -> GradedPresentation {
    let d = g.dim();
    let vertices: Vec<String> = (0..g.r).map(|v| v.to_string()).collect();
    let mut arrows = Vec::new();
    for v in 0..g.r {
        for j in 1..=d {
            arrows.push(Arrow {
                id: arrow_id(j, v),
                label: format!("x{j}"),
                source: v,
                target: g.step(v, j),
            });
        }
    }
    let quiver = Quiver::new(vertices, arrows).expect("generated identifiers are valid");
    let mut relations = Vec::new();
    for v in 0..g.r {
        for i in 1..=d {
            for j in i + 1..=d {
                let ij = commutator_branch(&quiver, g, v, i, j);
                let ji = commutator_branch(&quiver, g, v, j, i);
                relations.push(Relation::new([(q(1), ij), (q(-1), ji)]).expect("distinct branches"));
            }
        }
    }
    GradedPresentation::new(quiver, vec![1; g.r * d], relations).expect("generated presentation is valid")
}

fn commutator_branch(q: &Quiver, g: &CyclicGroup, v: usize, i: usize, j: usize) -> Path {
    let first = arrow_id(i, v);
    let second = arrow_id(j, g.step(v, i));
    Path::from_ids(q, &[&first, &second]).expect("McKay arrows compose")
}

/// Per-arrow degrees, as a default plus explicit overrides keyed by arrow id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grading {
    pub default: u32,
    pub degrees: BTreeMap<String, u32>,
}

impl Default for Grading {
    fn default() -> Self {
        Self {
            default: 1,
            degrees: BTreeMap::new(),
        }
    }
}

impl Grading {
    /// Reads `id = degree` lines, `default = degree`, blank lines and `#`
    /// comments.
    pub fn parse(text: &str) -> Result<Self, SkewGroupError> {
        let mut g = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, deg) = parse_assignment(line).map_err(|message| SkewGroupError::GradingSyntax {
                line: idx + 1,
                message,
            })?;
            if key == "default" {
                g.default = deg;
            } else {
                g.degrees.insert(key, deg);
            }
        }
        Ok(g)
    }

    /// Adds an inline `id=degree` override.
    pub fn set_inline(&mut self, spec: &str) -> Result<(), SkewGroupError> {
        let (key, deg) =
            parse_assignment(spec).map_err(|message| SkewGroupError::GradingSyntax { line: 0, message })?;
        if key == "default" {
            self.default = deg;
        } else {
            self.degrees.insert(key, deg);
        }
        Ok(())
    }

    /// The same presentation with these degrees.
    pub fn apply(&self, pres: &GradedPresentation) -> Result<GradedPresentation, SkewGroupError> {
        for id in self.degrees.keys() {
            if pres.quiver().arrow(id).is_none() {
                return Err(SkewGroupError::UnknownArrow(id.clone()));
            }
        }
        let degrees = pres
            .quiver()
            .arrows()
            .iter()
            .map(|a| self.degrees.get(&a.id).copied().unwrap_or(self.default))
            .collect();
        Ok(pres.with_degrees(degrees)?)
    }
}

fn parse_assignment(s: &str) -> Result<(String, u32), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected `id = degree`, got `{s}`"))?;
    let k = k.trim();
    let v = v.trim();
    if k.is_empty() {
        return Err("missing arrow id".into());
    }
    let deg = v.parse().map_err(|_| format!("bad degree `{v}`"))?;
    Ok((k.to_string(), deg))
}

fn degree_of(pres: &GradedPresentation, id: &str) -> u32 {
    pres.degree_of(pres.quiver().arrow(id).expect("McKay arrow exists"))
}

/// Checks commutator homogeneity and that no x_j-orbit cycle has degree 0.
pub fn check_grading(g: &CyclicGroup, pres: &GradedPresentation) -> Result<(), SkewGroupError> {
    let d = g.dim();
    for v in 0..g.r {
        for i in 1..=d {
            for j in i + 1..=d {
                let left = degree_of(pres, &arrow_id(i, v)) + degree_of(pres, &arrow_id(j, g.step(v, i)));
                let right = degree_of(pres, &arrow_id(j, v)) + degree_of(pres, &arrow_id(i, g.step(v, j)));
                if left != right {
                    return Err(SkewGroupError::Inhomogeneous {
                        i,
                        j,
                        vertex: v,
                        left,
                        right,
                    });
                }
            }
        }
    }
    for j in 1..=d {
        for v in 0..g.r {
            let mut total = 0;
            let mut w = v;
            loop {
                total += degree_of(pres, &arrow_id(j, w));
                w = g.step(w, j);
                if w == v {
                    break;
                }
            }
            if total == 0 {
                return Err(SkewGroupError::DegreeZeroCycle { j, vertex: v });
            }
        }
    }
    Ok(())
}

/// Degree of x_1 x_2 ... x_d from vertex 0, required to be the same from
/// every vertex.
pub fn gorenstein_parameter(g: &CyclicGroup, pres: &GradedPresentation) -> Result<u32, SkewGroupError> {
    check_grading(g, pres)?;
    let cycle_degree = |start: usize| {
        let mut v = start;
        let mut total = 0;
        for j in 1..=g.dim() {
            total += degree_of(pres, &arrow_id(j, v));
            v = g.step(v, j);
        }
        total
    };
    let at_zero = cycle_degree(0);
    for v in 1..g.r {
        let found = cycle_degree(v);
        if found != at_zero {
            return Err(SkewGroupError::NotGorensteinConsistent { at_zero, vertex: v, found });
        }
    }
    if at_zero == 0 {
        return Err(SkewGroupError::ZeroParameter);
    }
    Ok(at_zero)
}

/// Sum of the weights vanishes mod r.
pub fn sl_check(g: &CyclicGroup) -> bool {
    g.weights.iter().sum::<usize>() % g.r == 0
}

/// Every weight is a unit mod r, so no nontrivial element fixes a nonzero
/// vector.
pub fn isolated_check(g: &CyclicGroup) -> bool {
    g.weights.iter().all(|&a| a.gcd(&g.r) == 1)
}

/// A vertex (i, p) of the folded quiver, written i^p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FoldedVertex {
    pub vertex: usize,
    pub level: u32,
}

impl fmt::Display for FoldedVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.vertex, self.level)
    }
}

pub fn folded_name(name: &str, level: u32) -> String {
    format!("{name}^{level}")
}

/// All levels of the given vertices, level-major.
pub fn induced_idempotent(
    e_vertices: &[usize],
    num_vertices: usize,
    ell: u32,
) -> Result<Vec<FoldedVertex>, SkewGroupError> {
    if let Some(&v) = e_vertices.iter().find(|&&v| v >= num_vertices) {
        return Err(SkewGroupError::VertexOutOfRange { vertex: v, r: num_vertices });
    }
    let mut vs: Vec<usize> = e_vertices.to_vec();
    vs.sort_unstable();
    vs.dedup();
    Ok((0..ell)
        .flat_map(|level| vs.iter().map(move |&vertex| FoldedVertex { vertex, level }))
        .collect())
}

/// The ell-folded quiver of a graded presentation.
///
/// Vertex (v, p) has index p * |Q_0| + v. An arrow of degree δ from v to w
/// gives arrows (v, p) -> (w, p + δ) while p + δ < ell. A relation of degree
/// D is kept at each starting level p with p + D < ell. Every folded arrow
/// has degree 1.
pub fn fold_presentation(pres: &GradedPresentation, ell: u32) -> Result<GradedPresentation, SkewGroupError> {
    if ell == 0 {
        return Err(SkewGroupError::ZeroParameter);
    }
    if let Some(v) = validate_presentation(pres).first() {
        return Err(SkewGroupError::InhomogeneousRelation(v.relation));
    }
    let quiver = pres.quiver();
    let n = quiver.num_vertices();
    let vertices: Vec<String> = (0..ell)
        .flat_map(|p| quiver.vertices().iter().map(move |v| folded_name(v, p)))
        .collect();
    let mut arrows = Vec::new();
    for (i, a) in quiver.arrows().iter().enumerate() {
        let delta = pres.degree_of(i);
        for p in 0..ell {
            if p + delta >= ell {
                break;
            }
            arrows.push(Arrow {
                id: folded_name(&a.id, p),
                label: a.label.clone(),
                source: p as usize * n + a.source,
                target: (p + delta) as usize * n + a.target,
            });
        }
    }
    let folded = Quiver::new(vertices, arrows)?;

    let lift = |path: &Path, p: u32| -> Result<Path, SkewGroupError> {
        if path.is_trivial() {
            return Ok(Path::trivial(p as usize * n + path.source));
        }
        let mut level = p;
        let mut ids = Vec::new();
        for &a in &path.arrows {
            ids.push(folded_name(&quiver.arrows()[a].id, level));
            level += pres.degree_of(a);
        }
        let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
        Ok(Path::from_ids(&folded, &ids)?)
    };
    let mut relations = Vec::new();
    for r in pres.relations() {
        let deg = pres.path_degree(&r.terms()[0].1);
        for p in 0..ell {
            if p + deg >= ell {
                break;
            }
            let terms = r
                .terms()
                .iter()
                .map(|(c, path)| Ok((c.clone(), lift(path, p)?)))
                .collect::<Result<Vec<_>, SkewGroupError>>()?;
            relations.push(Relation::new(terms)?);
        }
    }
    let degrees = vec![1; folded.num_arrows()];
    Ok(GradedPresentation::new(folded, degrees, relations)?)
}

/// Beilinson quiver of a graded McKay presentation, with its ell.
pub fn folded_quiver(g: &CyclicGroup, pres: &GradedPresentation) -> Result<(GradedPresentation, u32), SkewGroupError> {
    let ell = gorenstein_parameter(g, pres)?;
    Ok((fold_presentation(pres, ell)?, ell))
}
