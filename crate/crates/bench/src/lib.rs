//! Inputs shared by the benchmarks.

use tilt_forge_core::fixtures;
use tilt_forge_core::presentation::GradedPresentation;
use tilt_forge_core::skewgroup::folded_quiver;

/// The Beilinson quiver of the final fixture.
pub fn final_nabla() -> GradedPresentation {
    let (g, pres) = fixtures::final_example();
    folded_quiver(&g, &pres).expect("fixture folds").0
}

/// The Beilinson quiver of the silting fixture.
pub fn silting_nabla() -> GradedPresentation {
    let (g, pres) = fixtures::silting_example();
    folded_quiver(&g, &pres).expect("fixture folds").0
}
