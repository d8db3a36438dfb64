//! Random presentations and collections shared by the property tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use tilt_forge_core::linalg::{q, q_frac, Q};
use tilt_forge_core::mutation::EulerCollection;
use tilt_forge_core::presentation::{Arrow, GradedPresentation, Path, Quiver, Relation};

/// Quiver data: vertex count and arrow endpoints.
#[derive(Debug, Clone)]
pub struct QuiverSeed {
    pub n: usize,
    pub arrows: Vec<(usize, usize)>,
    pub coeffs: Vec<i64>,
    pub degrees: Vec<u32>,
}

pub fn quiver_seed(acyclic: bool) -> impl Strategy<Value = QuiverSeed> {
    (if acyclic { 2usize } else { 1 }..=4)
        .prop_flat_map(move |n| {
            let arrow = (0..n, 0..n).prop_filter_map("acyclic", move |(s, t)| {
                if !acyclic || s < t {
                    Some((s, t))
                } else if t < s {
                    Some((t, s))
                } else {
                    None
                }
            });
            (
                Just(n),
                prop::collection::vec(arrow, 1..=6),
                prop::collection::vec(-3i64..=3, 48),
                prop::collection::vec(0u32..=3, 6),
            )
        })
        .prop_map(|(n, arrows, coeffs, degrees)| QuiverSeed {
            n,
            arrows,
            coeffs,
            degrees,
        })
}

fn build_quiver(seed: &QuiverSeed) -> Quiver {
    let vertices = (0..seed.n).map(|v| v.to_string()).collect();
    let arrows = seed
        .arrows
        .iter()
        .enumerate()
        .map(|(i, &(s, t))| Arrow {
            id: format!("a{i}"),
            label: format!("x{}", i % 3 + 1),
            source: s,
            target: t,
        })
        .collect();
    Quiver::new(vertices, arrows).expect("distinct ids")
}

/// Relations from the coefficient pool: for every endpoint pair with paths
/// of length 2, some combinations of those paths.
fn quadratic_relations(quiver: &Quiver, coeffs: &[i64]) -> Vec<Relation> {
    let mut groups: std::collections::BTreeMap<(usize, usize), Vec<Path>> = Default::default();
    for (a, x) in quiver.arrows().iter().enumerate() {
        for b in quiver.arrows_from(x.target) {
            let p = Path::from_arrows(quiver, &[a, b]).expect("composable");
            groups.entry((p.source, p.target)).or_default().push(p);
        }
    }
    let mut pool = coeffs.iter().cycle();
    let mut out = Vec::new();
    for paths in groups.values() {
        let count = pool.next().unwrap().unsigned_abs() as usize % (paths.len() + 1);
        for _ in 0..count {
            let terms: Vec<(Q, Path)> = paths.iter().map(|p| (q(*pool.next().unwrap()), p.clone())).collect();
            if let Ok(r) = Relation::new(terms) {
                out.push(r);
            }
        }
    }
    out
}

pub fn quadratic_presentation() -> impl Strategy<Value = GradedPresentation> {
    quiver_seed(false).prop_map(|seed| {
        let quiver = build_quiver(&seed);
        let relations = quadratic_relations(&quiver, &seed.coeffs);
        let degrees = vec![1; quiver.num_arrows()];
        GradedPresentation::new(quiver, degrees, relations).expect("homogeneous")
    })
}

/// Acyclic presentations with quadratic relations, so the algebra is finite.
pub fn acyclic_presentation() -> impl Strategy<Value = GradedPresentation> {
    quiver_seed(true).prop_map(|seed| {
        let quiver = build_quiver(&seed);
        let relations = quadratic_relations(&quiver, &seed.coeffs);
        let degrees = vec![1; quiver.num_arrows()];
        GradedPresentation::new(quiver, degrees, relations).expect("homogeneous")
    })
}

/// Arbitrary degrees and single-term or rational relations, for the text
/// format.
pub fn any_presentation() -> impl Strategy<Value = GradedPresentation> {
    quiver_seed(false).prop_map(|seed| {
        let quiver = build_quiver(&seed);
        let degrees: Vec<u32> = (0..quiver.num_arrows()).map(|i| seed.degrees[i % seed.degrees.len()]).collect();
        let relations = quadratic_relations(&quiver, &seed.coeffs)
            .into_iter()
            .enumerate()
            .filter_map(|(k, r)| {
                let terms: Vec<(Q, Path)> = r
                    .terms()
                    .iter()
                    .map(|(c, p)| (c * q_frac(1, k as i64 % 3 + 1), p.clone()))
                    .collect();
                Relation::new(terms).ok()
            })
            .collect();
        GradedPresentation::new(quiver, degrees, relations).expect("valid")
    })
}

/// Upper unitriangular forms: exceptional by construction.
pub fn exceptional_collection() -> impl Strategy<Value = EulerCollection> {
    (1usize..=6)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(-3i64..=3, n * n)))
        .prop_map(|(n, entries)| {
            let form: Vec<Vec<BigInt>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| match i.cmp(&j) {
                            std::cmp::Ordering::Equal => BigInt::from(1),
                            std::cmp::Ordering::Less => BigInt::from(entries[i * n + j]),
                            std::cmp::Ordering::Greater => BigInt::from(0),
                        })
                        .collect()
                })
                .collect();
            let labels = (0..n).map(|i| format!("E{i}")).collect();
            EulerCollection::new(labels, form, None).expect("unitriangular")
        })
}

/// Levelled: objects within a level are orthogonal.
pub fn levelled_collection() -> impl Strategy<Value = EulerCollection> {
    prop::collection::vec(1usize..=3, 1..=4)
        .prop_flat_map(|sizes| {
            let n: usize = sizes.iter().sum();
            (Just(sizes), prop::collection::vec(-2i64..=3, n * n))
        })
        .prop_map(|(sizes, entries)| {
            let levels: Vec<u32> = sizes
                .iter()
                .enumerate()
                .flat_map(|(l, &k)| std::iter::repeat_n(l as u32, k))
                .collect();
            let n = levels.len();
            let form = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                BigInt::from(1)
                            } else if levels[i] < levels[j] {
                                BigInt::from(entries[i * n + j])
                            } else {
                                BigInt::from(0)
                            }
                        })
                        .collect()
                })
                .collect();
            let labels = (0..n).map(|i| format!("E{i}")).collect();
            EulerCollection::new(labels, form, Some(levels)).expect("levelled")
        })
}
