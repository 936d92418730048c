//! Isometric representations of the odometer semigroup `O_n`, modeled as
//! combinatorial phase-labeled graphs, together with a four-part Wold-type
//! classifier and an independent dense-matrix numerical oracle.
//!
//! `O_n` is generated by `w, v_1, ..., v_n` with `w v_k = v_{k+1}` (`k < n`)
//! and `w v_n = v_1 w`. An isometric representation is an isometry `W` and a
//! row isometry `{V_1, ..., V_n}` satisfying the same relations; every such
//! representation splits uniquely into four reducing pieces on which the pair
//! is unitary/row-unitary, unitary/pure, pure/row-unitary, and a weak
//! bi-shift. Under Nica covariance (`W* V_1 = V_n W*`) the residual piece is
//! a direct sum of copies of the left regular representation.
//!
//! The crate decides, per basis vector of an atomic representation, which
//! piece it lies in — with finite, replayable certificates — and
//! cross-validates every verdict against truncated projection computations on
//! dense complex matrix windows.

pub mod classify;
pub mod format;
pub mod matrix;
pub mod oracle;
pub mod phase;
pub mod rep;
pub mod semigroup;

pub use phase::Phase;
pub use rep::{AtomicRep, VertexKey};
