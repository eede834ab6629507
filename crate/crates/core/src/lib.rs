//! Classification of closed plane curves up to regular homotopy.
//!
//! A curve is stored as uniform samples of position and velocity
//! ([`SampledCurve`]). Its turning number is read off the unwrapped tangent
//! angle ([`turning_number`]) or, combinatorially, from the sequence of
//! tangents perpendicular to a generic direction ([`extract_turn_code`]).
//! Opposite adjacent turns cancel ([`reduce`]), which leads to a canonical
//! curve `γ_k`, and the [`homotopy`] module turns each of those steps into an
//! explicit frame sequence checked by [`verify_homotopy`].

// `!(x > 0.0)` is used on purpose so that NaN fails the test
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod dsl;
pub mod error;
pub mod flatten;
pub mod geom;
pub mod homotopy;
pub mod invariant;
pub mod rewrite;

pub use curve::{make_gamma, resample, reverse, transform, CanonicalIndex, CurveFile, SampledCurve};
pub use error::{CurveError, Result};
pub use flatten::{
    choose_generic_direction, code_turning_number, extract_turn_code, Direction, Turn, TurnCode,
};
pub use geom::{Affine, Point2};
pub use homotopy::{
    assemble_canonical, flatten_homotopy, realize_cancellation, realize_code, realize_reduction,
    rotation_homotopy, synthesize_homotopy, terminal_index, TurnRunCurve,
};
pub use invariant::{
    angle_lift, turning_number, verify_homotopy, AngleLift, HomotopyPath, VerificationReport,
};
pub use rewrite::{cancel_step, find_cancellable, reduce, CyclicWord, Letter, ReductionTrace};
