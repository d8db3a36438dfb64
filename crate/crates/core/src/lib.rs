//! Graded path algebras of McKay quivers, their Beilinson algebras, Koszul
//! duals and idempotent truncations, and exceptional collections on the
//! Euler lattice.

pub mod findim;
pub mod fixtures;
pub mod homological;
pub mod linalg;
pub mod mutation;
pub mod pipeline;
pub mod presentation;
pub mod skewgroup;

pub use findim::{build_algebra, AlgebraTable, FindimError};
pub use homological::{ExtTable, KoszulVerdict, LevelledStructure};
pub use mutation::{EulerCollection, MutationError};
pub use pipeline::{PipelineError, PipelineInput, RouteChoice, TiltReport};
pub use presentation::{Arrow, GradedPresentation, Path, Quiver, Relation};
pub use skewgroup::{CyclicGroup, Grading};
