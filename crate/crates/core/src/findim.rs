//! Finite-dimensional quotients of path algebras as explicit multiplication
//! tables, their radical series, and presentations of corner algebras eBe.
//!
//! Slices are indexed by a weight: the arrow degree when every arrow has
//! positive degree, otherwise the path length. Within a slice the basis is
//! the set of non-pivot columns of an echelon form whose columns are ordered
//! from the largest path to the smallest, so representatives are small paths.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{add_term, axpy, nullspace, q, rref, SparseVec, Subspace, Q};
use crate::presentation::{Arrow, GradedPresentation, Path, PresentationError, Quiver, Relation};

#[derive(Debug, Clone, Error)]
pub enum FindimError {
    #[error("dimension bound {bound} exceeded; algebra may be infinite-dimensional")]
    BoundExceeded { bound: usize, partial: Box<AlgebraTable> },
    #[error("length bound must be positive")]
    ZeroBound,
    #[error("relation {0} contains a trivial path")]
    TrivialPath(usize),
    #[error("relation {0} is not homogeneous")]
    Inhomogeneous(usize),
    #[error("cannot truncate to an empty set of vertices")]
    EmptyTruncation,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    #[serde(skip)]
    pub path: Path,
    pub length: usize,
    pub degree: u32,
    pub weight: u32,
}

impl BasisElement {
    pub fn source(&self) -> usize {
        self.path.source
    }

    pub fn target(&self) -> usize {
        self.path.target
    }
}

/// Basis and multiplication of a finite-dimensional algebra kQ/I.
///
/// Basis element `v` for `v < |Q_0|` is the trivial path at vertex v.
/// Multiplication is stored as right multiplication by single arrows; a
/// missing entry means the product is zero.
#[derive(Debug, Clone)]
pub struct AlgebraTable {
    pres: GradedPresentation,
    weights: Vec<u32>,
    basis: Vec<BasisElement>,
    index: HashMap<Path, usize>,
    right_arrow: HashMap<(usize, usize), SparseVec>,
}

/// Slice weights for a presentation: degrees if all are positive, else 1.
pub fn slice_weights(pres: &GradedPresentation) -> Vec<u32> {
    if pres.degrees().iter().all(|&d| d >= 1) {
        pres.degrees().to_vec()
    } else {
        vec![1; pres.degrees().len()]
    }
}

fn path_weight(weights: &[u32], p: &Path) -> u32 {
    p.arrows.iter().map(|&a| weights[a]).sum()
}

impl AlgebraTable {
    fn push(&mut self, path: Path) -> usize {
        let idx = self.basis.len();
        self.basis.push(BasisElement {
            length: path.len(),
            degree: self.pres.path_degree(&path),
            weight: path_weight(&self.weights, &path),
            path: path.clone(),
        });
        self.index.insert(path, idx);
        idx
    }

    pub fn presentation(&self) -> &GradedPresentation {
        &self.pres
    }

    pub fn quiver(&self) -> &Quiver {
        self.pres.quiver()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.quiver().num_vertices()
    }

    pub fn index_of(&self, path: &Path) -> Option<usize> {
        self.index.get(path).copied()
    }

    pub fn unit(&self, v: usize) -> SparseVec {
        [(v, q(1))].into_iter().collect()
    }

    pub fn basis_vector(&self, i: usize) -> SparseVec {
        [(i, q(1))].into_iter().collect()
    }

    /// Basis elements from vertex s to vertex t.
    pub fn basis_between(&self, s: usize, t: usize) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&i| self.basis[i].source() == s && self.basis[i].target() == t)
            .collect()
    }

    pub fn max_weight(&self) -> u32 {
        self.basis.iter().map(|b| b.weight).max().unwrap_or(0)
    }

    /// `v * a` for a single arrow a.
    pub fn mul_arrow(&self, v: &SparseVec, a: usize) -> SparseVec {
        let mut out = SparseVec::new();
        for (x, c) in v {
            if let Some(img) = self.right_arrow.get(&(*x, a)) {
                axpy(&mut out, c, img);
            }
        }
        out
    }

    pub fn mul_path(&self, v: &SparseVec, p: &Path) -> SparseVec {
        let mut out: SparseVec = v
            .iter()
            .filter(|(x, _)| self.basis[**x].target() == p.source)
            .map(|(x, c)| (*x, c.clone()))
            .collect();
        for &a in &p.arrows {
            out = self.mul_arrow(&out, a);
        }
        out
    }

    /// Image of a path of the quiver in the basis.
    pub fn normal_form(&self, p: &Path) -> SparseVec {
        self.mul_path(&self.unit(p.source), p)
    }

    /// Product of two basis elements; zero when they do not compose.
    pub fn multiply(&self, i: usize, j: usize) -> SparseVec {
        self.mul_path(&self.basis_vector(i), &self.basis[j].path)
    }

    pub fn mul(&self, v: &SparseVec, w: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in w {
            axpy(&mut out, c, &self.mul_path(v, &self.basis[*j].path));
        }
        out
    }

    /// Entry (i, j) counts basis paths from i to j, i.e. dim Hom(P_i, P_j).
    pub fn cartan_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        let mut c = vec![vec![0; n]; n];
        for b in &self.basis {
            c[b.source()][b.target()] += 1;
        }
        c
    }

    /// Number of basis elements of e B e.
    pub fn corner_dimension(&self, kept: &[usize]) -> usize {
        self.basis
            .iter()
            .filter(|b| kept.contains(&b.source()) && kept.contains(&b.target()))
            .count()
    }
}

pub fn dimension(tab: &AlgebraTable) -> usize {
    tab.dimension()
}

pub fn cartan_matrix(tab: &AlgebraTable) -> Vec<Vec<usize>> {
    tab.cartan_matrix()
}

/// Default bound on slices: twice the number of vertices.
pub fn default_length_bound(pres: &GradedPresentation) -> usize {
    (2 * pres.quiver().num_vertices()).max(1)
}

/// Computes slices 1, 2, ... of kQ/(R). Succeeds once as many consecutive
/// slices as the largest arrow weight vanish, before passing `length_bound`.
pub fn build_algebra(pres: &GradedPresentation, length_bound: usize) -> Result<AlgebraTable, FindimError> {
    if length_bound == 0 {
        return Err(FindimError::ZeroBound);
    }
    let quiver = pres.quiver().clone();
    let weights = slice_weights(pres);
    let max_w = weights.iter().copied().max().unwrap_or(1) as usize;

    let mut rel_weights = Vec::new();
    for (i, r) in pres.relations().iter().enumerate() {
        if r.terms().iter().any(|(_, p)| p.is_trivial()) {
            return Err(FindimError::TrivialPath(i));
        }
        let w = path_weight(&weights, &r.terms()[0].1);
        if r.terms().iter().any(|(_, p)| path_weight(&weights, p) != w) {
            return Err(FindimError::Inhomogeneous(i));
        }
        rel_weights.push(w as usize);
    }

    let mut tab = AlgebraTable {
        pres: pres.clone(),
        weights: weights.clone(),
        basis: Vec::new(),
        index: HashMap::new(),
        right_arrow: HashMap::new(),
    };
    for v in 0..quiver.num_vertices() {
        tab.push(Path::trivial(v));
    }
    let mut by_weight: Vec<Vec<usize>> = vec![(0..quiver.num_vertices()).collect()];
    let mut zero_run = 0;

    for n in 1..=length_bound {
        // candidates (b, a): basis element of weight n - w(a) followed by a
        let mut cand: Vec<(usize, usize, Path)> = Vec::new();
        let mut cand_index: HashMap<(usize, usize), usize> = HashMap::new();
        for (a, arrow) in quiver.arrows().iter().enumerate() {
            let w = weights[a] as usize;
            if w > n {
                continue;
            }
            for &b in &by_weight[n - w] {
                if tab.basis[b].target() != arrow.source {
                    continue;
                }
                let mut path = tab.basis[b].path.clone();
                path.arrows.push(a);
                path.target = arrow.target;
                cand_index.insert((b, a), cand.len());
                cand.push((b, a, path));
            }
        }

        let mut rows: HashMap<(usize, usize), Vec<SparseVec>> = HashMap::new();
        for (r, rel) in pres.relations().iter().enumerate() {
            let wr = rel_weights[r];
            if wr > n {
                continue;
            }
            for &b in &by_weight[n - wr] {
                if tab.basis[b].target() != rel.source() {
                    continue;
                }
                let mut row = SparseVec::new();
                for (c, p) in rel.terms() {
                    let (&last, init) = p.arrows.split_last().expect("relations have no trivial paths");
                    let prefix = Path {
                        arrows: init.to_vec(),
                        source: p.source,
                        target: quiver.arrows()[last].source,
                    };
                    for (x, d) in tab.mul_path(&tab.basis_vector(b), &prefix) {
                        let col = cand_index[&(x, last)];
                        add_term(&mut row, col, c * d);
                    }
                }
                if !row.is_empty() {
                    let key = (tab.basis[b].source(), rel.target());
                    rows.entry(key).or_default().push(row);
                }
            }
        }

        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, (b, a, _)) in cand.iter().enumerate() {
            groups
                .entry((tab.basis[*b].source(), quiver.arrows()[*a].target))
                .or_default()
                .push(i);
        }

        let mut free_cands = Vec::new();
        let mut pivot_forms: Vec<(usize, Vec<(usize, Q)>)> = Vec::new();
        for (key, mut cols) in groups {
            cols.sort_by(|x, y| cand[*y].2.cmp(&cand[*x].2));
            let Some(group_rows) = rows.get(&key) else {
                free_cands.extend(cols);
                continue;
            };
            let pos: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, c)| (*c, i)).collect();
            let dense: Vec<Vec<Q>> = group_rows
                .iter()
                .map(|row| {
                    let mut d = vec![Q::zero(); cols.len()];
                    for (c, x) in row {
                        d[pos[c]] = x.clone();
                    }
                    d
                })
                .collect();
            let ech = rref(dense, cols.len());
            for f in ech.free_columns() {
                free_cands.push(cols[f]);
            }
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                let form = ech
                    .free_columns()
                    .into_iter()
                    .filter(|f| !row[*f].is_zero())
                    .map(|f| (cols[f], -row[f].clone()))
                    .collect();
                pivot_forms.push((cols[p], form));
            }
        }

        free_cands.sort_by(|x, y| cand[*x].2.cmp(&cand[*y].2));
        let mut new_index: HashMap<usize, usize> = HashMap::new();
        let mut slice = Vec::new();
        for c in free_cands {
            let (b, a, path) = cand[c].clone();
            let idx = tab.push(path);
            new_index.insert(c, idx);
            tab.right_arrow.insert((b, a), tab.basis_vector(idx));
            slice.push(idx);
        }
        for (c, form) in pivot_forms {
            let (b, a, _) = &cand[c];
            let img: SparseVec = form.into_iter().map(|(f, x)| (new_index[&f], x)).collect();
            if !img.is_empty() {
                tab.right_arrow.insert((*b, *a), img);
            }
        }

        zero_run = if slice.is_empty() { zero_run + 1 } else { 0 };
        by_weight.push(slice);
        if zero_run >= max_w {
            return Ok(tab);
        }
    }
    Err(FindimError::BoundExceeded {
        bound: length_bound,
        partial: Box::new(tab),
    })
}

/// Basis of J^k per (source, target) pair, with J spanned by the basis
/// elements of positive length.
pub fn radical_power_slices(tab: &AlgebraTable, k: usize) -> BTreeMap<(usize, usize), Vec<SparseVec>> {
    let power = radical_power(tab, k);
    let mut out: BTreeMap<(usize, usize), Vec<SparseVec>> = BTreeMap::new();
    for v in power.basis() {
        let (&lead, _) = v.iter().next().expect("echelon rows are nonzero");
        let b = &tab.basis()[lead];
        out.entry((b.source(), b.target())).or_default().push(v.clone());
    }
    out
}

/// J^k as a subspace of the algebra. J^0 is the whole algebra.
pub fn radical_power(tab: &AlgebraTable, k: usize) -> Subspace {
    let mut current = Subspace::new();
    if k == 0 {
        for i in 0..tab.dimension() {
            current.insert(&tab.basis_vector(i));
        }
        return current;
    }
    for (i, b) in tab.basis().iter().enumerate() {
        if b.length > 0 {
            current.insert(&tab.basis_vector(i));
        }
    }
    for _ in 1..k {
        if current.dim() == 0 {
            break;
        }
        current = times_radical(tab, &current);
    }
    current
}

fn times_radical(tab: &AlgebraTable, s: &Subspace) -> Subspace {
    let mut next = Subspace::new();
    for v in s.basis() {
        for a in 0..tab.quiver().num_arrows() {
            let w = tab.mul_arrow(v, a);
            if !w.is_empty() {
                next.insert(&w);
            }
        }
    }
    next
}

/// Least N with J^N = 0.
pub fn nilpotency_index(tab: &AlgebraTable) -> usize {
    let mut k = 1;
    let mut current = radical_power(tab, 1);
    while current.dim() > 0 {
        current = times_radical(tab, &current);
        k += 1;
    }
    k
}

/// New arrow of a truncated presentation together with its image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncatedArrow {
    pub id: String,
    pub label: String,
    pub representative: Vec<String>,
    pub weight: u32,
}

/// Presentation of e B e for the idempotent e on `kept`.
///
/// Arrows form a complement of (eJe)^2 in eJe chosen among basis elements in
/// order of weight; an arrow whose representative passes through several
/// arrows gets the joined id `a*b` and the concatenated label. Its degree is
/// the weight of the representative in B. Relations are, weight by weight, a
/// complement of the relations generated by lower ones inside the kernel of
/// the map to B.
pub fn truncate(tab: &AlgebraTable, kept: &[usize]) -> Result<GradedPresentation, FindimError> {
    Ok(truncate_with_arrows(tab, kept)?.0)
}

pub fn truncate_with_arrows(
    tab: &AlgebraTable,
    kept: &[usize],
) -> Result<(GradedPresentation, Vec<TruncatedArrow>), FindimError> {
    if kept.is_empty() {
        return Err(FindimError::EmptyTruncation);
    }
    let n = tab.num_vertices();
    if let Some(&v) = kept.iter().find(|&&v| v >= n) {
        return Err(FindimError::VertexOutOfRange(v));
    }
    let mut kept: Vec<usize> = kept.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let new_of: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let ambient = tab.quiver();

    let mut ej: Vec<usize> = (0..tab.dimension())
        .filter(|&i| {
            let b = &tab.basis()[i];
            b.length > 0 && new_of.contains_key(&b.source()) && new_of.contains_key(&b.target())
        })
        .collect();
    ej.sort_by(|x, y| {
        let (bx, by) = (&tab.basis()[*x], &tab.basis()[*y]);
        (bx.weight, &bx.path).cmp(&(by.weight, &by.path))
    });
    let mut square = Subspace::new();
    for &x in &ej {
        for &y in &ej {
            let p = tab.multiply(x, y);
            if !p.is_empty() {
                square.insert(&p);
            }
        }
    }
    let mut chosen = Vec::new();
    for &x in &ej {
        if square.insert(&tab.basis_vector(x)).is_some() {
            chosen.push(x);
        }
    }

    let mut arrows = Vec::new();
    let mut info = Vec::new();
    for &x in &chosen {
        let b = &tab.basis()[x];
        let ids: Vec<&str> = b.path.arrows.iter().map(|&a| ambient.arrows()[a].id.as_str()).collect();
        let label: String = b.path.labels(ambient).concat();
        let id = ids.join("*");
        arrows.push(Arrow {
            id: id.clone(),
            label: label.clone(),
            source: new_of[&b.source()],
            target: new_of[&b.target()],
        });
        info.push(TruncatedArrow {
            id,
            label,
            representative: ids.iter().map(ToString::to_string).collect(),
            weight: b.weight,
        });
    }
    let vertices = kept.iter().map(|&v| ambient.vertices()[v].clone()).collect();
    let quiver = Quiver::new(vertices, arrows)?;
    // arrow index in the new quiver -> ambient basis element and weight
    let image: Vec<(usize, u32)> = quiver
        .arrows()
        .iter()
        .map(|a| {
            let k = info.iter().position(|t| t.id == a.id).expect("arrow was just added");
            (chosen[k], info[k].weight)
        })
        .collect();
    info.sort_by(|x, y| {
        let ix = quiver.arrow(&x.id).expect("known arrow");
        let iy = quiver.arrow(&y.id).expect("known arrow");
        ix.cmp(&iy)
    });

    let top = tab.max_weight() as usize;
    let max_w = image.iter().map(|(_, w)| *w as usize).max().unwrap_or(1);
    let degrees: Vec<u32> = image.iter().map(|(_, w)| *w).collect();

    // new paths of each weight, with their images in B
    let mut paths: Vec<Vec<(Path, SparseVec)>> = vec![(0..kept.len())
        .map(|v| (Path::trivial(v), tab.unit(kept[v])))
        .collect()];
    let mut kernels: Vec<Vec<SparseVec>> = vec![Vec::new()];
    let mut relations = Vec::new();

    for w in 1..=top + max_w {
        let mut layer = Vec::new();
        for (a, arrow) in quiver.arrows().iter().enumerate() {
            let (elem, aw) = image[a];
            let aw = aw as usize;
            if aw > w {
                continue;
            }
            for (p, img) in &paths[w - aw] {
                if p.target != arrow.source {
                    continue;
                }
                let mut np = p.clone();
                np.arrows.push(a);
                np.target = arrow.target;
                let nimg = tab.mul(img, &tab.basis_vector(elem));
                layer.push((np, nimg));
            }
        }
        layer.sort_by(|x, y| x.0.cmp(&y.0));
        let pos: HashMap<Path, usize> = layer.iter().enumerate().map(|(i, (p, _))| (p.clone(), i)).collect();

        // kernel of the map to B, per endpoint pair
        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, (p, _)) in layer.iter().enumerate() {
            groups.entry((p.source, p.target)).or_default().push(i);
        }
        let mut kernel = Vec::new();
        for cols in groups.values() {
            let mut coords: Vec<usize> = cols.iter().flat_map(|&c| layer[c].1.keys().copied()).collect();
            coords.sort_unstable();
            coords.dedup();
            let rows: Vec<Vec<Q>> = coords
                .iter()
                .map(|k| {
                    cols.iter()
                        .map(|&c| layer[c].1.get(k).cloned().unwrap_or_else(Q::zero))
                        .collect()
                })
                .collect();
            for v in nullspace(rows, cols.len()) {
                let sv: SparseVec = v
                    .into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| (cols[i], x))
                    .collect();
                kernel.push(sv);
            }
        }

        // consequences of lower-weight relations
        let mut generated = Subspace::new();
        for (a, arrow) in quiver.arrows().iter().enumerate() {
            let aw = image[a].1 as usize;
            if aw > w {
                continue;
            }
            let lower = w - aw;
            for k in &kernels[lower] {
                let mut left = SparseVec::new();
                let mut right = SparseVec::new();
                for (i, c) in k {
                    let p = &paths[lower][*i].0;
                    if p.source == arrow.target {
                        let mut lp = p.clone();
                        lp.arrows.insert(0, a);
                        lp.source = arrow.source;
                        add_term(&mut left, pos[&lp], c.clone());
                    }
                    if p.target == arrow.source {
                        let mut rp = p.clone();
                        rp.arrows.push(a);
                        rp.target = arrow.target;
                        add_term(&mut right, pos[&rp], c.clone());
                    }
                }
                for v in [left, right] {
                    if !v.is_empty() {
                        generated.insert(&v);
                    }
                }
            }
        }
        for k in &kernel {
            if let Some(row) = generated.insert(k) {
                let terms = row.iter().map(|(i, c)| (c.clone(), layer[*i].0.clone()));
                relations.push(Relation::new(terms)?);
            }
        }

        kernels.push(kernel);
        paths.push(layer);
    }

    let pres = GradedPresentation::new(quiver, degrees, relations)?;
    Ok((pres, info))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::skewgroup::{fold_presentation, folded_quiver, mckay_quiver, CyclicGroup};

    fn kronecker() -> GradedPresentation {
        let q = Quiver::from_names(&["s", "t"], &[("a", "a", "s", "t"), ("b", "b", "s", "t")]).unwrap();
        GradedPresentation::free(q)
    }

    pub(crate) fn assert_associative(tab: &AlgebraTable) {
        let d = tab.dimension();
        for i in 0..d {
            for j in 0..d {
                let ij = tab.multiply(i, j);
                if ij.is_empty() {
                    continue;
                }
                for k in 0..d {
                    let left = tab.mul(&ij, &tab.basis_vector(k));
                    let right = tab.mul(&tab.basis_vector(i), &tab.multiply(j, k));
                    assert_eq!(left, right, "({i} {j}) {k}");
                }
            }
        }
    }

    #[test]
    fn kronecker_table() {
        let tab = build_algebra(&kronecker(), 4).unwrap();
        assert_eq!(tab.dimension(), 4);
        assert_eq!(tab.cartan_matrix(), vec![vec![1, 2], vec![0, 1]]);
        assert_eq!(radical_power(&tab, 1).dim(), 2);
        assert_eq!(radical_power(&tab, 2).dim(), 0);
        assert_eq!(nilpotency_index(&tab), 2);
        assert_associative(&tab);
    }

    #[test]
    fn semisimple() {
        let q = Quiver::from_names(&["0", "1", "2"], &[]).unwrap();
        let tab = build_algebra(&GradedPresentation::free(q), 1).unwrap();
        assert_eq!(tab.dimension(), 3);
        assert_eq!(tab.cartan_matrix(), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(nilpotency_index(&tab), 1);
    }

    #[test]
    fn identities_act_trivially() {
        let (_, pres) = fixtures::final_example();
        let nabla = fold_presentation(&pres, 2).unwrap();
        let tab = build_algebra(&nabla, 16).unwrap();
        for i in 0..tab.dimension() {
            let b = &tab.basis()[i];
            assert_eq!(tab.multiply(b.source(), i), tab.basis_vector(i));
            assert_eq!(tab.multiply(i, b.target()), tab.basis_vector(i));
        }
    }

    #[test]
    fn polynomial_ring_exceeds_bound() {
        let g = CyclicGroup::new(5, &[1, 2, 2]).unwrap();
        match build_algebra(&mckay_quiver(&g), 3) {
            Err(FindimError::BoundExceeded { bound: 3, partial }) => assert!(partial.dimension() > 5),
            other => panic!("expected bound error, got {other:?}"),
        }
    }

    #[test]
    fn commutative_square_has_one_long_path() {
        let quiver = Quiver::from_names(
            &["0", "1", "2", "3"],
            &[("a", "a", "0", "1"), ("b", "b", "1", "3"), ("c", "c", "0", "2"), ("d", "d", "2", "3")],
        )
        .unwrap();
        let ab = Path::from_ids(&quiver, &["a", "b"]).unwrap();
        let cd = Path::from_ids(&quiver, &["c", "d"]).unwrap();
        let r = Relation::new([(q(1), ab.clone()), (q(-1), cd.clone())]).unwrap();
        let pres = GradedPresentation::free(quiver).with_relations(vec![r]);
        let tab = build_algebra(&pres, 8).unwrap();
        assert_eq!(tab.dimension(), 9);
        assert_eq!(tab.normal_form(&ab), tab.normal_form(&cd));
        // the smaller of the two paths represents the class
        assert!(tab.index_of(&ab).is_some());
        assert!(tab.index_of(&cd).is_none());
    }

    #[test]
    fn silting_nabla_is_finite_and_truncates() {
        let (g, pres) = fixtures::silting_example();
        let (nabla, _) = folded_quiver(&g, &pres).unwrap();
        let tab = build_algebra(&nabla, 10).unwrap();
        assert_associative(&tab);
        let removed = ["0^0", "0^1"].map(|v| nabla.quiver().vertex(v).unwrap());
        let kept: Vec<usize> = (0..10).filter(|v| !removed.contains(v)).collect();
        let (trunc, arrows) = truncate_with_arrows(&tab, &kept).unwrap();
        assert_eq!(trunc.quiver().num_vertices(), 8);
        assert_eq!(trunc.quiver().num_arrows(), 14);
        assert!(arrows.iter().all(|a| a.representative.len() == 1));
        let rebuilt = build_algebra(&trunc, 16).unwrap();
        assert_eq!(rebuilt.dimension(), tab.corner_dimension(&kept));
    }

    #[test]
    fn final_nabla_radical() {
        let (g, pres) = fixtures::final_example();
        let (nabla, _) = folded_quiver(&g, &pres).unwrap();
        let tab = build_algebra(&nabla, 16).unwrap();
        assert_eq!(nilpotency_index(&tab), 4);
        let longest = tab.basis().iter().map(|b| b.length).max().unwrap();
        assert_eq!(longest, 3);
        assert_eq!(radical_power(&tab, 3).dim(), tab.basis().iter().filter(|b| b.length == 3).count());
        let c = tab.cartan_matrix();
        assert_eq!(c.len(), 8);
        // vertex order is level-major; sort by the level 0,1,2,3 of (v, p)
        let order = [0, 2, 1, 3, 4, 6, 5, 7];
        for (x, &i) in order.iter().enumerate() {
            assert_eq!(c[i][i], 1);
            for &j in &order[..x] {
                assert_eq!(c[i][j], 0);
            }
        }
    }

    #[test]
    fn truncation_to_everything_keeps_the_quiver() {
        let (g, pres) = fixtures::final_example();
        let (nabla, _) = folded_quiver(&g, &pres).unwrap();
        let tab = build_algebra(&nabla, 16).unwrap();
        let all: Vec<usize> = (0..8).collect();
        let t = truncate(&tab, &all).unwrap();
        assert_eq!(t.quiver().num_arrows(), nabla.quiver().num_arrows());
        let rebuilt = build_algebra(&t, 16).unwrap();
        assert_eq!(rebuilt.cartan_matrix(), tab.cartan_matrix());
        assert!(matches!(truncate(&tab, &[]), Err(FindimError::EmptyTruncation)));
    }

    #[test]
    fn radical_of_corner_is_corner_of_radical() {
        let (g, pres) = fixtures::silting_example();
        let (nabla, _) = folded_quiver(&g, &pres).unwrap();
        let tab = build_algebra(&nabla, 10).unwrap();
        let kept: Vec<usize> = (2..10).filter(|v| *v != 5).collect();
        let trunc = truncate(&tab, &kept).unwrap();
        let rebuilt = build_algebra(&trunc, 20).unwrap();
        let corner_rad = tab
            .basis()
            .iter()
            .filter(|b| b.length > 0 && kept.contains(&b.source()) && kept.contains(&b.target()))
            .count();
        assert_eq!(radical_power(&rebuilt, 1).dim(), corner_rad);
    }
}
