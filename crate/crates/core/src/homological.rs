//! Level functions, minimal projective resolutions of simples, Ext tables,
//! the levelled Koszul test, and quadratic duals.
//!
//! Modules are left modules. P_v is spanned by the basis paths ending at v,
//! so its top is S_v and its radical is spanned by the longer paths; an
//! arrow u -> v contributes a summand S_u to the top of rad P_v.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::findim::{nilpotency_index, AlgebraTable};
use crate::linalg::{nullspace, rref, to_sparse, SparseVec, Subspace, Q};
use crate::presentation::{Arrow, GradedPresentation, Path, PresentationError, Quiver, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologicalError {
    #[error("presentation is not quadratic (relation {0} has a path of length other than 2)")]
    NotQuadratic(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// A vertex order and a level function with every arrow raising the level
/// by one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelledStructure {
    pub order: Vec<usize>,
    pub levels: Vec<u32>,
    pub top: u32,
}

impl LevelledStructure {
    pub fn level(&self, v: usize) -> u32 {
        self.levels[v]
    }

    /// Vertices of each level in vertex order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.top as usize + 1];
        for &v in &self.order {
            out[self.levels[v] as usize].push(v);
        }
        out
    }
}

/// Why a quiver has no level function: an arrow whose endpoints already
/// received incompatible levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelWitness {
    pub arrow: String,
    pub source: String,
    pub target: String,
    pub source_level: i64,
    pub target_level: i64,
}

/// Solves s(target) = s(source) + 1 on each weakly connected component and
/// shifts every component to start at level 0.
pub fn detect_levels(pres: &GradedPresentation) -> Result<LevelledStructure, LevelWitness> {
    let q = pres.quiver();
    let n = q.num_vertices();
    let mut pot: Vec<Option<i64>> = vec![None; n];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, a) in q.arrows().iter().enumerate() {
        incident[a.source].push(i);
        incident[a.target].push(i);
    }
    for root in 0..n {
        if pot[root].is_some() {
            continue;
        }
        pot[root] = Some(0);
        let mut component = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &i in &incident[v] {
                let a = &q.arrows()[i];
                let (sv, tv) = (pot[a.source], pot[a.target]);
                match (sv, tv) {
                    (Some(s), Some(t)) if t != s + 1 => {
                        return Err(LevelWitness {
                            arrow: a.id.clone(),
                            source: q.vertices()[a.source].clone(),
                            target: q.vertices()[a.target].clone(),
                            source_level: s,
                            target_level: t,
                        });
                    }
                    (Some(s), None) => {
                        pot[a.target] = Some(s + 1);
                        component.push(a.target);
                        queue.push_back(a.target);
                    }
                    (None, Some(t)) => {
                        pot[a.source] = Some(t - 1);
                        component.push(a.source);
                        queue.push_back(a.source);
                    }
                    _ => {}
                }
            }
        }
        let min = component.iter().map(|&v| pot[v].expect("visited")).min().expect("nonempty");
        for &v in &component {
            pot[v] = pot[v].map(|p| p - min);
        }
    }
    let levels: Vec<u32> = pot.into_iter().map(|p| p.expect("all visited") as u32).collect();
    let top = levels.iter().copied().max().unwrap_or(0);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (levels[v], v));
    Ok(LevelledStructure { order, levels, top })
}

/// A generator of a free module: a copy of P_vertex in internal degree
/// `degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub vertex: usize,
    pub degree: u32,
}

/// Minimal projective resolution of a simple module.
///
/// Elements of a term are sparse vectors over pairs (generator g, basis
/// element b ending at the vertex of g), encoded as g * dim + b.
/// `differentials[k]` gives, for each generator of term k + 1, its image in
/// term k.
#[derive(Debug, Clone)]
pub struct ProjectiveResolution {
    pub simple: usize,
    pub terms: Vec<Vec<Generator>>,
    pub differentials: Vec<Vec<SparseVec>>,
    pub truncated: bool,
    dim: usize,
}

impl ProjectiveResolution {
    /// Copies of P_i in term k.
    pub fn multiplicity(&self, k: usize, i: usize) -> usize {
        self.terms.get(k).map_or(0, |t| t.iter().filter(|g| g.vertex == i).count())
    }

    /// Index of the last nonzero term.
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    /// Every generator of term k sits in internal degree k.
    pub fn is_linear(&self) -> bool {
        self.terms
            .iter()
            .enumerate()
            .all(|(k, t)| t.iter().all(|g| g.degree as usize == k))
    }

    pub fn decode(&self, coord: usize) -> (usize, usize) {
        (coord / self.dim, coord % self.dim)
    }

    /// Consecutive differentials compose to zero.
    pub fn is_complex(&self, tab: &AlgebraTable) -> bool {
        (1..self.differentials.len()).all(|k| {
            self.differentials[k]
                .iter()
                .all(|img| apply(tab, &self.differentials[k - 1], img, self.dim).is_empty())
        })
    }
}

fn left_mul(tab: &AlgebraTable, x: usize, m: &SparseVec, dim: usize) -> SparseVec {
    let mut out = SparseVec::new();
    for (coord, c) in m {
        let (g, b) = (coord / dim, coord % dim);
        for (y, d) in tab.multiply(x, b) {
            crate::linalg::add_term(&mut out, g * dim + y, c * d);
        }
    }
    out
}

/// Applies a map of free modules given by generator images.
fn apply(tab: &AlgebraTable, images: &[SparseVec], m: &SparseVec, dim: usize) -> SparseVec {
    let mut out = SparseVec::new();
    for (coord, c) in m {
        let (g, b) = (coord / dim, coord % dim);
        crate::linalg::axpy(&mut out, c, &left_mul(tab, b, &images[g], dim));
    }
    out
}

/// Splits a homogeneous submodule into its (left vertex, internal degree)
/// pieces.
fn pieces(
    tab: &AlgebraTable,
    gens: &[Generator],
    vectors: &[SparseVec],
    dim: usize,
) -> BTreeMap<(usize, u32), Subspace> {
    let mut out: BTreeMap<(usize, u32), Subspace> = BTreeMap::new();
    for v in vectors {
        let mut split: BTreeMap<(usize, u32), SparseVec> = BTreeMap::new();
        for (coord, c) in v {
            let (g, b) = (coord / dim, coord % dim);
            let be = &tab.basis()[b];
            let key = (be.source(), gens[g].degree + be.weight);
            split.entry(key).or_default().insert(*coord, c.clone());
        }
        for (key, part) in split {
            out.entry(key).or_default().insert(&part);
        }
    }
    out
}

fn kernel_of(
    tab: &AlgebraTable,
    new_gens: &[Generator],
    images: &[SparseVec],
    dim: usize,
) -> Vec<SparseVec> {
    let mut blocks: BTreeMap<(usize, u32), Vec<usize>> = BTreeMap::new();
    for (g, gen) in new_gens.iter().enumerate() {
        for (b, be) in tab.basis().iter().enumerate() {
            if be.target() == gen.vertex {
                blocks
                    .entry((be.source(), gen.degree + be.weight))
                    .or_default()
                    .push(g * dim + b);
            }
        }
    }
    let mut out = Vec::new();
    for cols in blocks.values() {
        let imgs: Vec<SparseVec> = cols
            .iter()
            .map(|&c| left_mul(tab, c % dim, &images[c / dim], dim))
            .collect();
        let mut coords: Vec<usize> = imgs.iter().flat_map(|v| v.keys().copied()).collect();
        coords.sort_unstable();
        coords.dedup();
        let rows: Vec<Vec<Q>> = coords
            .iter()
            .map(|k| imgs.iter().map(|v| v.get(k).cloned().unwrap_or_else(Q::zero)).collect())
            .collect();
        for v in nullspace(rows, cols.len()) {
            out.push(
                v.into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| (cols[i], x))
                    .collect(),
            );
        }
    }
    out
}

/// Resolves S_simple up to term `max_deg`; sets `truncated` when the syzygy
/// after term `max_deg` is still nonzero.
pub fn min_proj_resolution(tab: &AlgebraTable, simple: usize, max_deg: usize) -> ProjectiveResolution {
    let dim = tab.dimension();
    let mut terms = vec![vec![Generator { vertex: simple, degree: 0 }]];
    let mut differentials = Vec::new();
    // kernel of P_simple -> S_simple
    let mut syzygy: Vec<SparseVec> = tab
        .basis()
        .iter()
        .enumerate()
        .filter(|(_, b)| b.target() == simple && b.length > 0)
        .map(|(i, _)| tab.basis_vector(i))
        .collect();
    let mut truncated = false;

    while !syzygy.is_empty() {
        if terms.len() > max_deg {
            truncated = true;
            break;
        }
        let gens = terms.last().expect("nonempty");
        let k_pieces = pieces(tab, gens, &syzygy, dim);
        let mut rad: Vec<SparseVec> = Vec::new();
        for v in &syzygy {
            for a in 0..tab.quiver().num_arrows() {
                let arrow_elem = tab
                    .index_of(&Path::arrow(tab.quiver(), a))
                    .map(|i| left_mul(tab, i, v, dim));
                if let Some(w) = arrow_elem.filter(|w| !w.is_empty()) {
                    rad.push(w);
                }
            }
        }
        let rad_pieces = pieces(tab, gens, &rad, dim);

        let mut new_gens = Vec::new();
        let mut images = Vec::new();
        for ((vertex, degree), piece) in &k_pieces {
            let mut span = rad_pieces.get(&(*vertex, *degree)).cloned().unwrap_or_default();
            for v in piece.basis() {
                if span.insert(v).is_some() {
                    debug_assert!(
                        v.keys().all(|c| tab.basis()[c % dim].length > 0),
                        "differential entries lie in the radical"
                    );
                    new_gens.push(Generator {
                        vertex: *vertex,
                        degree: *degree,
                    });
                    images.push(v.clone());
                }
            }
        }
        syzygy = kernel_of(tab, &new_gens, &images, dim);
        terms.push(new_gens);
        differentials.push(images);
    }
    ProjectiveResolution {
        simple,
        terms,
        differentials,
        truncated,
        dim,
    }
}

/// `dims[k][a][b]` = dim Ext^k(S_a, S_b), the multiplicity of P_b in term k
/// of the minimal resolution of S_a.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub max_deg: usize,
    pub dims: Vec<Vec<Vec<usize>>>,
    /// Simples whose resolution did not terminate within the bound.
    pub truncated: Vec<usize>,
}

impl ExtTable {
    pub fn get(&self, k: usize, a: usize, b: usize) -> usize {
        self.dims.get(k).map_or(0, |m| m[a][b])
    }

    pub fn is_complete(&self) -> bool {
        self.truncated.is_empty()
    }
}

pub fn ext_table(tab: &AlgebraTable, max_deg: usize) -> ExtTable {
    let n = tab.num_vertices();
    let mut dims = vec![vec![vec![0; n]; n]; max_deg + 1];
    let mut truncated = Vec::new();
    for a in 0..n {
        let res = min_proj_resolution(tab, a, max_deg);
        if res.truncated {
            truncated.push(a);
        }
        for (k, term) in res.terms.iter().enumerate() {
            for g in term {
                dims[k][a][g.vertex] += 1;
            }
        }
    }
    ExtTable {
        max_deg,
        dims,
        truncated,
    }
}

/// Default Ext bound: the largest of top level + 1, the nilpotency index and
/// the number of vertices.
pub fn ext_bound(tab: &AlgebraTable, lv: &LevelledStructure) -> usize {
    (lv.top as usize + 1)
        .max(nilpotency_index(tab))
        .max(tab.num_vertices())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum KoszulVerdict {
    Koszul,
    /// Ext^k(S_from, S_to) is nonzero although k differs from
    /// s(from) - s(to).
    NotKoszul { k: usize, from: usize, to: usize, dim: usize },
    Inconclusive { bound: usize },
}

impl KoszulVerdict {
    pub fn is_koszul(&self) -> bool {
        matches!(self, Self::Koszul)
    }
}

/// Ext^k(S_j, S_i) may be nonzero only for k = s(j) - s(i).
pub fn koszul_check_levelled(tab: &AlgebraTable, lv: &LevelledStructure, bound: Option<usize>) -> (KoszulVerdict, ExtTable) {
    let bound = bound.unwrap_or_else(|| ext_bound(tab, lv));
    let ext = ext_table(tab, bound);
    let n = tab.num_vertices();
    for (k, m) in ext.dims.iter().enumerate() {
        for &j in &lv.order {
            for i in 0..n {
                let expected = lv.level(j) as i64 - lv.level(i) as i64;
                if m[j][i] != 0 && k as i64 != expected {
                    let verdict = KoszulVerdict::NotKoszul {
                        k,
                        from: j,
                        to: i,
                        dim: m[j][i],
                    };
                    return (verdict, ext);
                }
            }
        }
    }
    if !ext.is_complete() {
        return (KoszulVerdict::Inconclusive { bound }, ext);
    }
    (KoszulVerdict::Koszul, ext)
}

/// Quadratic dual on the opposite quiver.
///
/// Arrow a: u -> v becomes a: v -> u with the same id and label, and the
/// dual of the path ab is the path b.a. For each pair of endpoints the dual
/// relations are a reduced echelon basis of the annihilator of R under the
/// pairing that makes paths and dual paths orthonormal. All dual arrows have
/// degree 1.
pub fn quadratic_dual(pres: &GradedPresentation) -> Result<GradedPresentation, HomologicalError> {
    for (i, r) in pres.relations().iter().enumerate() {
        if r.terms().iter().any(|(_, p)| p.len() != 2) {
            return Err(HomologicalError::NotQuadratic(i));
        }
    }
    let q = pres.quiver();
    let arrows: Vec<Arrow> = q
        .arrows()
        .iter()
        .map(|a| Arrow {
            id: a.id.clone(),
            label: a.label.clone(),
            source: a.target,
            target: a.source,
        })
        .collect();
    let op = Quiver::new(q.vertices().to_vec(), arrows)?;
    let to_op: Vec<usize> = q.arrows().iter().map(|a| op.arrow(&a.id).expect("same ids")).collect();
    let dual_path = |p: &Path| -> Path {
        Path {
            arrows: p.arrows.iter().rev().map(|&a| to_op[a]).collect(),
            source: p.target,
            target: p.source,
        }
    };

    // length-2 paths of Q grouped by endpoints, columns sorted by dual path
    let mut groups: BTreeMap<(usize, usize), Vec<(Path, Path)>> = BTreeMap::new();
    for a in 0..q.num_arrows() {
        for b in q.arrows_from(q.arrows()[a].target) {
            let p = Path::from_arrows(q, &[a, b])?;
            let d = dual_path(&p);
            groups.entry((p.source, p.target)).or_default().push((d, p));
        }
    }
    let mut rels_by_pair: HashMap<(usize, usize), Vec<&Relation>> = HashMap::new();
    for r in pres.relations() {
        rels_by_pair.entry((r.source(), r.target())).or_default().push(r);
    }

    let mut relations = Vec::new();
    for (key, mut cols) in groups {
        cols.sort();
        let pos: HashMap<&Path, usize> = cols.iter().enumerate().map(|(i, (_, p))| (p, i)).collect();
        let rows: Vec<Vec<Q>> = rels_by_pair
            .get(&key)
            .map(|rs| {
                rs.iter()
                    .map(|r| {
                        let mut row = vec![Q::zero(); cols.len()];
                        for (c, p) in r.terms() {
                            row[pos[p]] += c;
                        }
                        row
                    })
                    .collect()
            })
            .unwrap_or_default();
        let annihilator = nullspace(rows, cols.len());
        let ech = rref(annihilator, cols.len());
        for row in ech.rows {
            let terms = to_sparse(&row).into_iter().map(|(i, c)| (c, cols[i].0.clone()));
            relations.push(Relation::new(terms)?);
        }
    }
    let degrees = vec![1; op.num_arrows()];
    Ok(GradedPresentation::new(op, degrees, relations)?)
}

/// Echelon rows of relation coefficients, keyed by endpoint pair.
pub type RelationSpan = BTreeMap<(usize, usize), Vec<Vec<(Path, Q)>>>;

/// Span of the relations, per endpoint pair, as reduced echelon rows over
/// the sorted list of paths occurring in them. Used to compare relation
/// spaces of two presentations on the same quiver.
pub fn relation_span(pres: &GradedPresentation) -> RelationSpan {
    let mut by_pair: BTreeMap<(usize, usize), Vec<&Relation>> = BTreeMap::new();
    for r in pres.relations() {
        by_pair.entry((r.source(), r.target())).or_default().push(r);
    }
    let q = pres.quiver();
    let mut out = BTreeMap::new();
    for (key, rs) in by_pair {
        // every path of the right length between the endpoints, sorted
        let len = rs[0].terms()[0].1.len();
        let mut paths: Vec<Path> = paths_of_length(q, key.0, len)
            .into_iter()
            .filter(|p| p.target == key.1)
            .collect();
        paths.sort();
        let pos: HashMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let rows: Vec<Vec<Q>> = rs
            .iter()
            .map(|r| {
                let mut row = vec![Q::zero(); paths.len()];
                for (c, p) in r.terms() {
                    row[pos[p]] += c;
                }
                row
            })
            .collect();
        let ech = rref(rows, paths.len());
        let span = ech
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| (paths[i].clone(), x.clone()))
                    .collect()
            })
            .collect();
        out.insert(key, span);
    }
    out
}

fn paths_of_length(q: &Quiver, from: usize, len: usize) -> Vec<Path> {
    let mut layer = vec![Path::trivial(from)];
    for _ in 0..len {
        let mut next = Vec::new();
        for p in &layer {
            for a in q.arrows_from(p.target) {
                let mut np = p.clone();
                np.arrows.push(a);
                np.target = q.arrows()[a].target;
                next.push(np);
            }
        }
        layer = next;
    }
    layer
}
