//! Built-in graded McKay presentations used by tests, benches and the CLI.

use crate::presentation::GradedPresentation;
use crate::skewgroup::{mckay_quiver, CyclicGroup, Grading};

pub const SILTING_GRADING: &str = include_str!("../fixtures/silting_1_5_122.grading");
pub const FINAL_GRADING: &str = include_str!("../fixtures/final_1_4_1133.grading");

fn graded(r: usize, weights: &[i64], grading: &str) -> (CyclicGroup, GradedPresentation) {
    let g = CyclicGroup::new(r, weights).expect("fixture group is valid");
    let grading = Grading::parse(grading).expect("fixture grading parses");
    let pres = grading.apply(&mckay_quiver(&g)).expect("fixture grading matches its quiver");
    (g, pres)
}

/// 1/5(1,2,2) with five arrows in degree 0; ell = 2, e = vertex 0.
pub fn silting_example() -> (CyclicGroup, GradedPresentation) {
    graded(5, &[1, 2, 2], SILTING_GRADING)
}

/// 1/4(1,1,3,3) with the arrows out of odd vertices in degree 1; ell = 2.
pub fn final_example() -> (CyclicGroup, GradedPresentation) {
    graded(4, &[1, 1, 3, 3], FINAL_GRADING)
}

/// k[x, y] with both variables in degree 1.
pub fn plane() -> (CyclicGroup, GradedPresentation) {
    let g = CyclicGroup::new(1, &[0, 0]).expect("trivial group");
    let pres = mckay_quiver(&g);
    (g, pres)
}
