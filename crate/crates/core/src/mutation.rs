//! Exceptional collections on the Euler lattice: single and levelled
//! mutations, dual collections and the Coxeter relation.
//!
//! Classes are integer row vectors in the basis of the collection a
//! computation started from, and `form` is that collection's Gram matrix, so
//! chi(x, y) = x^T form y.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::findim::AlgebraTable;
use crate::homological::{ExtTable, LevelledStructure};
use crate::linalg::{inverse, to_integer, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("form must be a square matrix matching {0} labels")]
    Shape(usize),
    #[error("not exceptional: chi({i}, {j}) = {value}")]
    NotExceptional { i: usize, j: usize, value: BigInt },
    #[error("not levelled: chi({i}, {j}) = {value} within level {level}")]
    NotLevelled { i: usize, j: usize, level: u32, value: BigInt },
    #[error("levels must be monotonic and cover 0..=n")]
    BadLevels,
    #[error("collection has no level map")]
    MissingLevels,
    #[error("index {index} out of range for a collection of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("level {level} out of range (top level {top})")]
    LevelOutOfRange { level: u32, top: u32 },
    #[error("collection not full")]
    NotFull,
    #[error("Ext table is incomplete; shifted simples undetermined")]
    IncompleteExt,
}

/// Integers serialize as JSON numbers when they fit in i64, else as strings.
pub fn serialize_big<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

struct Big<'a>(&'a BigInt);

impl Serialize for Big<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_big(self.0, s)
    }
}

struct BigRow<'a>(&'a [BigInt]);

impl Serialize for BigRow<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in self.0 {
            seq.serialize_element(&Big(x))?;
        }
        seq.end()
    }
}

pub fn serialize_big_matrix<S: Serializer>(m: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        seq.serialize_element(&BigRow(row))?;
    }
    seq.end()
}

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerCollection {
    labels: Vec<String>,
    classes: IntMatrix,
    form: IntMatrix,
    levels: Option<Vec<u32>>,
}

impl Serialize for EulerCollection {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        struct M<'a>(&'a IntMatrix);
        impl Serialize for M<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                serialize_big_matrix(self.0, s)
            }
        }
        let chi = self.chi();
        let mut st = s.serialize_struct("EulerCollection", 4)?;
        st.serialize_field("labels", &self.labels)?;
        st.serialize_field("levels", &self.levels)?;
        st.serialize_field("classes", &M(&self.classes))?;
        st.serialize_field("chi", &M(&chi))?;
        st.end()
    }
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn scaled_sub(a: &BigInt, e: &[BigInt], x: &[BigInt]) -> Vec<BigInt> {
    e.iter().zip(x).map(|(ei, xi)| a * ei - xi).collect()
}

impl EulerCollection {
    /// The collection whose Gram matrix is `form`, with unit classes.
    pub fn new(labels: Vec<String>, form: IntMatrix, levels: Option<Vec<u32>>) -> Result<Self, MutationError> {
        let n = labels.len();
        if form.len() != n || form.iter().any(|r| r.len() != n) {
            return Err(MutationError::Shape(n));
        }
        let c = Self {
            labels,
            classes: identity(n),
            form,
            levels,
        };
        c.check()?;
        Ok(c)
    }

    pub fn from_gram(labels: &[&str], gram: &[Vec<i64>], levels: Option<Vec<u32>>) -> Result<Self, MutationError> {
        Self::new(labels.iter().map(|s| s.to_string()).collect(), int_matrix(gram), levels)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn classes(&self) -> &IntMatrix {
        &self.classes
    }

    pub fn form(&self) -> &IntMatrix {
        &self.form
    }

    pub fn levels(&self) -> Option<&[u32]> {
        self.levels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn pairing(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let mut total = BigInt::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    total += xi * &self.form[i][j] * yj;
                }
            }
        }
        total
    }

    /// chi[i][j] = chi(E_i, E_j).
    pub fn chi(&self) -> IntMatrix {
        self.classes
            .iter()
            .map(|x| self.classes.iter().map(|y| self.pairing(x, y)).collect())
            .collect()
    }

    /// Unit diagonal and no backwards pairings.
    pub fn check_exceptional(&self) -> Result<(), MutationError> {
        let chi = self.chi();
        for i in 0..self.len() {
            for j in 0..=i {
                let expected = if i == j { BigInt::one() } else { BigInt::zero() };
                if chi[i][j] != expected {
                    return Err(MutationError::NotExceptional {
                        i,
                        j,
                        value: chi[i][j].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Levels are monotonic, cover 0..=n, and objects within a level are
    /// orthogonal both ways.
    pub fn check_levelled(&self) -> Result<(), MutationError> {
        let levels = self.levels.as_ref().ok_or(MutationError::MissingLevels)?;
        if levels.len() != self.len() {
            return Err(MutationError::BadLevels);
        }
        let mut expected = 0;
        for (i, &l) in levels.iter().enumerate() {
            if (i == 0 && l != 0) || l < expected || l > expected + 1 {
                return Err(MutationError::BadLevels);
            }
            expected = l;
        }
        let chi = self.chi();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i != j && levels[i] == levels[j] && !chi[i][j].is_zero() {
                    return Err(MutationError::NotLevelled {
                        i,
                        j,
                        level: levels[i],
                        value: chi[i][j].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    fn check(&self) -> Result<(), MutationError> {
        self.check_exceptional()?;
        if self.levels.is_some() {
            self.check_levelled()?;
        }
        Ok(())
    }

    pub fn top_level(&self) -> Option<u32> {
        self.levels.as_ref().map(|l| l.last().copied().unwrap_or(0))
    }

    /// Positions of each level.
    pub fn blocks(&self) -> Result<Vec<Vec<usize>>, MutationError> {
        let levels = self.levels.as_ref().ok_or(MutationError::MissingLevels)?;
        let top = levels.last().copied().unwrap_or(0) as usize;
        let mut out = vec![Vec::new(); if levels.is_empty() { 0 } else { top + 1 }];
        for (i, &l) in levels.iter().enumerate() {
            out[l as usize].push(i);
        }
        Ok(out)
    }

    /// [L_E X] = chi(E, X) [E] - [X].
    fn left_class(&self, e: &[BigInt], x: &[BigInt]) -> Vec<BigInt> {
        scaled_sub(&self.pairing(e, x), e, x)
    }

    /// [R_E X] = chi(X, E) [E] - [X].
    fn right_class(&self, e: &[BigInt], x: &[BigInt]) -> Vec<BigInt> {
        scaled_sub(&self.pairing(x, e), e, x)
    }

    /// Mutation through a block of mutually orthogonal objects, from the
    /// triangle L X -> Hom(E, X) (x) E -> X: [L X] = sum chi(E_j, X)[E_j] - [X].
    /// Composing single lattice mutations instead would flip the sign once
    /// per extra member.
    fn left_through(&self, block: &[usize], x: &[BigInt]) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = x.iter().map(|v| -v).collect();
        for &e in block {
            let e = &self.classes[e];
            let a = self.pairing(e, x);
            for (o, ei) in out.iter_mut().zip(e) {
                *o += &a * ei;
            }
        }
        out
    }

    /// [R X] = sum chi(X, E_j)[E_j] - [X].
    fn right_through(&self, block: &[usize], x: &[BigInt]) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = x.iter().map(|v| -v).collect();
        for &e in block {
            let e = &self.classes[e];
            let a = self.pairing(x, e);
            for (o, ei) in out.iter_mut().zip(e) {
                *o += &a * ei;
            }
        }
        out
    }

    fn rebuilt(&self, order: Vec<(String, Vec<BigInt>)>, levels: Option<Vec<u32>>) -> Self {
        let (labels, classes) = order.into_iter().unzip();
        Self {
            labels,
            classes,
            form: self.form.clone(),
            levels,
        }
    }

    fn entry(&self, i: usize) -> (String, Vec<BigInt>) {
        (self.labels[i].clone(), self.classes[i].clone())
    }
}

/// Replaces (E_{i-1}, E_i) by (L_{E_{i-1}} E_i, E_{i-1}). Levels are dropped.
pub fn left_mutate(c: &EulerCollection, i: usize) -> Result<EulerCollection, MutationError> {
    if i == 0 || i >= c.len() {
        return Err(MutationError::IndexOutOfRange { index: i, len: c.len() });
    }
    let mut order: Vec<_> = (0..c.len()).map(|k| c.entry(k)).collect();
    let e = &c.classes[i - 1];
    let mutated = c.left_class(e, &c.classes[i]);
    order[i - 1] = (format!("L_{{{}}}({})", c.labels[i - 1], c.labels[i]), mutated);
    order[i] = c.entry(i - 1);
    Ok(c.rebuilt(order, None))
}

/// Replaces (E_i, E_{i+1}) by (E_{i+1}, R_{E_{i+1}} E_i). Levels are dropped.
pub fn right_mutate(c: &EulerCollection, i: usize) -> Result<EulerCollection, MutationError> {
    if i + 1 >= c.len() {
        return Err(MutationError::IndexOutOfRange { index: i, len: c.len() });
    }
    let mut order: Vec<_> = (0..c.len()).map(|k| c.entry(k)).collect();
    let e = &c.classes[i + 1];
    let mutated = c.right_class(e, &c.classes[i]);
    order[i] = c.entry(i + 1);
    order[i + 1] = (format!("R_{{{}}}({})", c.labels[i + 1], c.labels[i]), mutated);
    Ok(c.rebuilt(order, None))
}

fn level_positions(c: &EulerCollection) -> Result<(Vec<Vec<usize>>, u32), MutationError> {
    let blocks = c.blocks()?;
    let top = blocks.len().saturating_sub(1) as u32;
    Ok((blocks, top))
}

fn with_block_levels(blocks: &[Vec<(String, Vec<BigInt>)>]) -> (Vec<(String, Vec<BigInt>)>, Vec<u32>) {
    let mut order = Vec::new();
    let mut levels = Vec::new();
    for (l, b) in blocks.iter().enumerate() {
        for item in b {
            order.push(item.clone());
            levels.push(l as u32);
        }
    }
    (order, levels)
}

/// R_i: level i moves past level i + 1, each member mutated through it.
pub fn levelled_mutate_right(c: &EulerCollection, level: u32) -> Result<EulerCollection, MutationError> {
    let (blocks, top) = level_positions(c)?;
    if level >= top {
        return Err(MutationError::LevelOutOfRange { level, top });
    }
    let i = level as usize;
    let mut out: Vec<Vec<(String, Vec<BigInt>)>> =
        blocks.iter().map(|b| b.iter().map(|&k| c.entry(k)).collect()).collect();
    let moved = blocks[i]
        .iter()
        .map(|&k| {
            (
                format!("R_[{}]({})", level + 1, c.labels[k]),
                c.right_through(&blocks[i + 1], &c.classes[k]),
            )
        })
        .collect();
    out[i] = blocks[i + 1].iter().map(|&k| c.entry(k)).collect();
    out[i + 1] = moved;
    let (order, levels) = with_block_levels(&out);
    Ok(c.rebuilt(order, Some(levels)))
}

/// L_i: level i moves before level i - 1, each member mutated through it.
pub fn levelled_mutate_left(c: &EulerCollection, level: u32) -> Result<EulerCollection, MutationError> {
    let (blocks, top) = level_positions(c)?;
    if level == 0 || level > top {
        return Err(MutationError::LevelOutOfRange { level, top });
    }
    let i = level as usize;
    let mut out: Vec<Vec<(String, Vec<BigInt>)>> =
        blocks.iter().map(|b| b.iter().map(|&k| c.entry(k)).collect()).collect();
    let moved = blocks[i]
        .iter()
        .map(|&k| {
            (
                format!("L_[{}]({})", level - 1, c.labels[k]),
                c.left_through(&blocks[i - 1], &c.classes[k]),
            )
        })
        .collect();
    out[i] = blocks[i - 1].iter().map(|&k| c.entry(k)).collect();
    out[i - 1] = moved;
    let (order, levels) = with_block_levels(&out);
    Ok(c.rebuilt(order, Some(levels)))
}

/// R^r of the object at position k of level i, through levels i+1..=i+r.
fn iterated_right(c: &EulerCollection, blocks: &[Vec<usize>], k: usize, i: usize, r: usize) -> Vec<BigInt> {
    (i + 1..=i + r).fold(c.classes[k].clone(), |acc, l| c.right_through(&blocks[l], &acc))
}

/// L^r of the object at position k of level i, through levels i-1 down to i-r.
fn iterated_left(c: &EulerCollection, blocks: &[Vec<usize>], k: usize, i: usize, r: usize) -> Vec<BigInt> {
    (i - r..i).rev().fold(c.classes[k].clone(), |acc, l| c.left_through(&blocks[l], &acc))
}

/// (L^n E_n, L^{n-1} E_{n-1}, ..., E_0).
pub fn left_dual(c: &EulerCollection) -> Result<EulerCollection, MutationError> {
    let (blocks, top) = level_positions(c)?;
    let n = top as usize;
    let mut out = Vec::new();
    for i in (0..=n).rev() {
        out.push(
            blocks[i]
                .iter()
                .map(|&k| {
                    let label = if i == 0 { c.labels[k].clone() } else { format!("L^{}({})", i, c.labels[k]) };
                    (label, iterated_left(c, &blocks, k, i, i))
                })
                .collect::<Vec<_>>(),
        );
    }
    let (order, levels) = with_block_levels(&out);
    Ok(c.rebuilt(order, Some(levels)))
}

/// (E_n, R^1 E_{n-1}, ..., R^n E_0).
pub fn right_dual(c: &EulerCollection) -> Result<EulerCollection, MutationError> {
    let (blocks, top) = level_positions(c)?;
    let n = top as usize;
    let mut out = Vec::new();
    for i in (0..=n).rev() {
        let r = n - i;
        out.push(
            blocks[i]
                .iter()
                .map(|&k| {
                    let label = if r == 0 { c.labels[k].clone() } else { format!("R^{}({})", r, c.labels[k]) };
                    (label, iterated_right(c, &blocks, k, i, r))
                })
                .collect::<Vec<_>>(),
        );
    }
    let (order, levels) = with_block_levels(&out);
    Ok(c.rebuilt(order, Some(levels)))
}

/// Moves the object at position `k` to the front by right mutations:
/// (E_k, E_{s+1}, ..., E_n, R^{n-s}(E_s'), R^{n-s+1}(E_{s-1}), ..., R^n(E_0))
/// where s is the level of E_k and E_s' is its level without it. The result
/// carries no level map.
pub fn right_mutate_to_front(c: &EulerCollection, k: usize) -> Result<EulerCollection, MutationError> {
    let (blocks, top) = level_positions(c)?;
    if k >= c.len() {
        return Err(MutationError::IndexOutOfRange { index: k, len: c.len() });
    }
    let n = top as usize;
    let s = c.levels.as_ref().map_or(0, |l| l[k] as usize);
    let mut order = vec![c.entry(k)];
    for block in &blocks[s + 1..] {
        order.extend(block.iter().map(|&j| c.entry(j)));
    }
    for l in (0..=s).rev() {
        let r = n - l;
        for &j in blocks[l].iter().filter(|&&j| j != k) {
            let label = if r == 0 { c.labels[j].clone() } else { format!("R^{}({})", r, c.labels[j]) };
            order.push((label, iterated_right(c, &blocks, j, l, r)));
        }
    }
    Ok(c.rebuilt(order, None))
}

fn integer_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    let q: Vec<Vec<Q>> = m
        .iter()
        .map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect())
        .collect();
    let inv = inverse(&q)?;
    inv.iter().map(|r| r.iter().map(to_integer).collect()).collect()
}

fn int_mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

fn transpose(m: &IntMatrix) -> IntMatrix {
    let n = m.first().map_or(0, Vec::len);
    (0..n).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Action of the inverse Serre functor on classes: form^{-T} form.
pub fn inverse_coxeter(form: &IntMatrix) -> Option<IntMatrix> {
    let inv = integer_inverse(form)?;
    Some(int_mat_mul(&transpose(&inv), form))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxeterVerdict {
    pub holds: bool,
    /// Positions whose classes disagree.
    pub failures: Vec<usize>,
    pub objects: usize,
}

/// Checks [R^{n-s(i)} E^i] = (-1)^m Phi^{-1} [L^{s(i)} E^i] for every object,
/// where the collection has length m + 1 and Phi^{-1} = form^{-T} form.
pub fn coxeter_check(c: &EulerCollection) -> Result<CoxeterVerdict, MutationError> {
    let (blocks, top) = level_positions(c)?;
    let cls: Vec<Vec<Q>> = c
        .classes
        .iter()
        .map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect())
        .collect();
    if inverse(&cls).is_none() {
        return Err(MutationError::NotFull);
    }
    let phi_inv = inverse_coxeter(&c.form).ok_or(MutationError::NotFull)?;
    let m = c.len().saturating_sub(1);
    let sign = if m.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let n = top as usize;
    let mut failures = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        for &k in block {
            let right = iterated_right(c, &blocks, k, i, n - i);
            let left = iterated_left(c, &blocks, k, i, i);
            // classes are rows, so apply Phi^{-1} to the column vector
            let image: Vec<BigInt> = phi_inv
                .iter()
                .map(|row| &sign * row.iter().zip(&left).map(|(a, b)| a * b).sum::<BigInt>())
                .collect();
            if image != right {
                failures.push(k);
            }
        }
    }
    Ok(CoxeterVerdict {
        holds: failures.is_empty(),
        failures,
        objects: c.len(),
    })
}

/// Indecomposable projectives in level order, with the Cartan matrix as Gram
/// matrix: Gram[x][y] = dim Hom(P_x, P_y) = number of basis paths x -> y.
pub fn projective_collection(tab: &AlgebraTable, lv: &LevelledStructure) -> Result<EulerCollection, MutationError> {
    let cartan = tab.cartan_matrix();
    let names = tab.quiver().vertices();
    let labels = lv.order.iter().map(|&v| format!("P_{}", names[v])).collect();
    let form = lv
        .order
        .iter()
        .map(|&a| lv.order.iter().map(|&b| BigInt::from(cartan[a][b])).collect())
        .collect();
    let levels = lv.order.iter().map(|&v| lv.level(v)).collect();
    EulerCollection::new(labels, form, Some(levels))
}

/// Vertices with levels descending and vertex order within a level: the
/// positions of the left dual of the projective collection.
pub fn reversed_level_order(lv: &LevelledStructure) -> Vec<usize> {
    let mut order = lv.order.clone();
    order.sort_by_key(|&v| (std::cmp::Reverse(lv.level(v)), v));
    order
}

/// The left dual of the projectives is (S_a[-s(a)]) in reversed level order;
/// Gram[x][y] = dim Ext^{s(a)-s(b)}(S_a, S_b) for a, b at positions x, y.
pub fn shifted_simples_collection(
    tab: &AlgebraTable,
    lv: &LevelledStructure,
    ext: &ExtTable,
) -> Result<(Vec<String>, Vec<Vec<usize>>), MutationError> {
    if !ext.is_complete() {
        return Err(MutationError::IncompleteExt);
    }
    let order = reversed_level_order(lv);
    let names = tab.quiver().vertices();
    let labels = order
        .iter()
        .map(|&v| match lv.level(v) {
            0 => format!("S_{}", names[v]),
            s => format!("S_{}[-{}]", names[v], s),
        })
        .collect();
    let gram = order
        .iter()
        .map(|&a| {
            order
                .iter()
                .map(|&b| {
                    let (sa, sb) = (lv.level(a), lv.level(b));
                    if sa >= sb {
                        ext.get((sa - sb) as usize, a, b)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    Ok((labels, gram))
}

/// chi as nonnegative integers, or `None` if some entry is negative.
pub fn gram_as_usize(chi: &IntMatrix) -> Option<Vec<Vec<usize>>> {
    chi.iter()
        .map(|r| r.iter().map(|x| if x.is_negative() { None } else { x.to_usize() }).collect())
        .collect()
}
