//! Exact linear algebra over the rationals.
//!
//! Everything downstream (quotient slices, kernels, annihilators, syzygies)
//! reduces to row echelon forms of small dense matrices, so this module keeps
//! to plain `Vec<Vec<Q>>` and a sparse vector type keyed by basis index.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational coefficient.
pub type Q = BigRational;

/// Sparse vector keyed by a basis index. Zero entries are never stored.
pub type SparseVec = BTreeMap<usize, Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Adds `scale * src` into `dst`, dropping entries that cancel.
pub fn axpy(dst: &mut SparseVec, scale: &Q, src: &SparseVec) {
    if scale.is_zero() {
        return;
    }
    for (k, v) in src {
        let entry = dst.entry(*k).or_insert_with(Q::zero);
        *entry += scale * v;
        if entry.is_zero() {
            dst.remove(k);
        }
    }
}

pub fn add_term(dst: &mut SparseVec, key: usize, value: Q) {
    if value.is_zero() {
        return;
    }
    let entry = dst.entry(key).or_insert_with(Q::zero);
    *entry += value;
    if entry.is_zero() {
        dst.remove(&key);
    }
}

pub fn scale(v: &SparseVec, s: &Q) -> SparseVec {
    if s.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (*k, x * s)).collect()
}

pub fn to_dense(v: &SparseVec, n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n];
    for (k, x) in v {
        out[*k] = x.clone();
    }
    out
}

pub fn to_sparse(v: &[Q]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Reduced row echelon form of a matrix.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Nonzero rows, each with a leading 1 in its pivot column and zeros in
    /// every other pivot column.
    pub rows: Vec<Vec<Q>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains(&col)
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.is_pivot(*c)).collect()
    }
}

/// Gauss-Jordan elimination. Pivots are taken left to right.
pub fn rref(mut rows: Vec<Vec<Q>>, ncols: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Echelon { rows, pivots, ncols }
}

pub fn rank(rows: Vec<Vec<Q>>, ncols: usize) -> usize {
    rref(rows, ncols).rank()
}

/// Basis of `{x : A x = 0}` for `A` given by its rows.
pub fn nullspace(rows: Vec<Vec<Q>>, ncols: usize) -> Vec<Vec<Q>> {
    let ech = rref(rows, ncols);
    let mut basis = Vec::new();
    for free in ech.free_columns() {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            if !row[free].is_zero() {
                v[p] = -row[free].clone();
            }
        }
        basis.push(v);
    }
    basis
}

pub fn transpose(m: &[Vec<Q>], nrows: usize, ncols: usize) -> Vec<Vec<Q>> {
    let _ = nrows;
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let rows: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let ech = rref(rows, 2 * n);
    if ech.rank() < n || ech.pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
        return None;
    }
    Some(ech.rows.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner)
                        .filter(|&k| !row[k].is_zero())
                        .map(|k| &row[k] * &b[k][j])
                        .fold(Q::zero(), |acc, x| acc + x)
                })
                .collect()
        })
        .collect()
}

/// An incrementally grown subspace kept in reduced row echelon form.
#[derive(Clone, Debug, Default)]
pub struct Subspace {
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<'a>(vs: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut s = Self::new();
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Remainder of `v` after clearing every pivot coordinate.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        for (row, p) in self.rows.iter().zip(&self.pivots) {
            if let Some(c) = out.get(p).cloned() {
                axpy(&mut out, &-c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span. Returns the normalized new row when `v` was
    /// independent of the current span.
    pub fn insert(&mut self, v: &SparseVec) -> Option<SparseVec> {
        let rem = self.reduce(v);
        let (&p, lead) = rem.iter().next()?;
        let new_row = scale(&rem, &lead.recip());
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get(&p).cloned() {
                axpy(row, &-c, &new_row);
            }
        }
        self.rows.push(new_row.clone());
        self.pivots.push(p);
        Some(new_row)
    }
}

/// Scales a sparse vector so its first nonzero entry is 1.
pub fn normalize_leading(v: &SparseVec) -> SparseVec {
    match v.values().next() {
        Some(lead) if !lead.is_one() => scale(v, &lead.recip()),
        _ => v.clone(),
    }
}

/// Integer value of an exact rational, if it is one.
pub fn to_integer(x: &Q) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn rref_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ech = rref(a.clone(), 3);
        assert_eq!(ech.rank(), 2);
        let ns = nullspace(a.clone(), 3);
        assert_eq!(ns.len(), 1);
        let prod = mat_mul(&a, &transpose(&ns, 1, 3));
        assert!(prod.iter().all(|r| r.iter().all(Zero::is_zero)));
    }

    #[test]
    fn inverse_of_unitriangular() {
        let a = m(&[&[1, 2], &[0, 1]]);
        assert_eq!(inverse(&a).unwrap(), m(&[&[1, -2], &[0, 1]]));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn subspace_insert_reports_independence() {
        let mut s = Subspace::new();
        let v1: SparseVec = [(0, q(1)), (1, q(1))].into_iter().collect();
        let v2: SparseVec = [(0, q(2)), (1, q(2))].into_iter().collect();
        let v3: SparseVec = [(1, q(3))].into_iter().collect();
        assert!(s.insert(&v1).is_some());
        assert!(s.insert(&v2).is_none());
        assert!(s.insert(&v3).is_some());
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[(0, q_frac(1, 2))].into_iter().collect()));
    }
}
