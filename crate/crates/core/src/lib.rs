//! Exact computation with simplicial and cell complexes under finite group
//! actions.
//!
//! The crate is layered:
//!
//! * [`geometry`]: rational points, exact linear algebra and convex cells;
//! * [`complex`]: geometric simplicial complexes, cell complexes, stars,
//!   links, cones and canonical subdivisions;
//! * [`group`]: vertex-permutation actions, orbits, automorphism groups and
//!   the equivariant triangulation of PL group actions;
//! * [`approx`]: simplex thickness, edgewise subdivision and secant
//!   approximation of piecewise differentiable maps;
//! * [`manifold`]: integral homology and vertex-link manifold checks;
//! * [`smoothing`]: cut-offs, cone extensions and the radial reparametrisation
//!   maps used to smooth near vertices, with numerical embedding checks;
//! * [`io`]: the JSON complex file format and OFF export;
//! * [`catalog`]: named standard complexes and group actions.

// `!(x > 0.0)` deliberately rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// ConvexCell caches its halfspaces in a OnceLock; order and equality use the vertices only
#![allow(clippy::mutable_key_type)]
// index loops follow the matrix formulas they implement
#![allow(clippy::needless_range_loop)]

pub mod approx;
pub mod catalog;
pub mod complex;
pub mod geometry;
pub mod group;
pub mod io;
pub mod manifold;
pub mod smoothing;
