/*!
The truss calculus: duality, grids, bordisms, subtrusses, singularity types.
*/

pub mod bordism;
pub mod dual;
pub mod grid;
pub mod stype;
pub mod subtruss;

pub use bordism::{collage, closed_inert_collage, compose, identity_bordism, Bordism, BordismClass, TowerMap};
pub use dual::{compactify, dualize, retract};
pub use grid::{grid, line, stacked_product};
pub use stype::{sdepth, shape, shape_bordism, stype};
pub use subtruss::{
    atom_at, atoms, cell_at, factorize, is_atom, smallest_subtruss, Factorization, SubTruss,
};
