//! Construction and exact analysis of Neumaier graphs built from cyclotomy.
//!
//! The crate provides:
//!
//! * exact arithmetic in GF(p^r) with discrete-log tables ([`field`]);
//! * cyclotomic numbers of order m, brute force and closed forms for
//!   m = 2, 3, 4, together with the quadratic-form invariants u_m/v_m
//!   ([`cyclotomy`]);
//! * finite abelian groups, group-ring convolution and Cayley graphs
//!   ([`group`], [`graph`]);
//! * the graph families themselves: the cyclotomic Cayley family
//!   Γ_m(α₁,α₂), the antipodal blow-up of a distance-regular graph, the
//!   ℤ/pqℤ clique-spread family, and small named fixtures
//!   ([`constructions`]);
//! * edge-regularity / regular-clique / strong-regularity classification
//!   ([`regularity`]);
//! * the coherent closure via exact 2-dimensional Weisfeiler–Leman
//!   refinement, its rank, flags, support, and Schur-partition
//!   verification ([`coherent`]);
//! * Diophantine searches over prime-power pairs reproducing the
//!   published hit tables ([`search`]).
//!
//! All computation is integer-exact; no floating point is used anywhere.

pub mod coherent;
pub mod constructions;
pub mod cyclotomy;
pub mod error;
pub mod field;
pub mod graph;
pub mod group;
pub mod regularity;
pub mod search;

pub use error::{Error, Result};
