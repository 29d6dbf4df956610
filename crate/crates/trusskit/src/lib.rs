/*!
Combinatorics of manifold diagrams: open and closed trusses.

A truss is a tower of bundles of stratified intervals, recorded purely
combinatorially: each level is a family of fiber ordinals over the previous
level's element poset, glued by monotone transition maps. This crate
implements the calculus on top of that data — validation, duality and
compactification, bordisms with their degeneracy/inert/active classification
and factorization, subtruss closure and atoms, singularity types, labelled
normal forms, progressivity and submersivity checks for diagram towers,
computad-style type checking, and a small SVG renderer.

The crate is `no_std` (with `alloc`); everything IO-shaped lives in the
companion CLI crate.
*/
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod computad;
pub mod diagram;
pub mod fiber;
pub mod label;
pub mod level;
pub mod normalize;
pub mod ops;
pub mod render;
pub mod order;
pub mod tower;

pub use fiber::{fiber_index, fiber_len, fiber_order, hom_exists, FiberElement, Flavor};
pub use label::{Label, Labelling};
pub use level::TrussLevel;
pub use order::{enumerate_monotone, FinitePoset, MonotoneMap};
pub use tower::{ElementPath, TrussTower, ValidationIssue};
