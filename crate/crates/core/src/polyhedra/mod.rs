//! Rational polyhedral cones and polytopes: duality, Reeb slices, Okounkov
//! bodies, triangulation, volume and lattice points.

mod cone;
mod dd;
mod lattice;
mod polytope;
mod reeb;
mod triangulate;

pub use cone::{Cone, Lattice, PolyhedronJson};
pub use lattice::{lattice_count, lattice_points, LatticeInt, LatticePoints, SliceGeometry, Slicer};
pub use polytope::{affine_dimension, simplex_volume, Halfspace, Polytope};
pub use reeb::{check_reeb, okounkov_body, reeb_slice, ReebSlice};
pub use triangulate::Triangulation;
