//! Exact privacy-utility trade-offs under ε-local differential privacy.
//!
//! Everything that touches the geometry of LDP channels is done in exact
//! rational arithmetic. The privacy level is carried as `t = e^ε`, a rational
//! number, so that the staircase matrix, the weight polytope and every
//! dominance/maximality predicate stay inside ℚ. Floating point only appears
//! in information measures (logarithms) and in the cardioid estimation
//! example (trigonometry).
//!
//! The crate is `no_std` with `alloc`; file formats and the command-line
//! front end live in the companion `ldpput` crate.
//!
//! Module map:
//!
//! * [`groups`]: permutation groups, actions, orbits, the subset action.
//! * [`channels`]: channel matrices, the LDP predicate, Blackwell dominance.
//! * [`geometry`]: staircase matrix, weight polytope, extremal channels,
//!   maximality certification and vertex enumeration.
//! * [`invariant`]: the symmetry-reduced polytope and subset selection.
//! * [`decision`]: decision problems, Bayes/minimax risk, information measures.
//! * [`put`]: the trade-off solvers and the random audit.
//! * [`applications`]: hypothesis testing and cardioid estimation.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod applications;
pub mod channels;
pub mod decision;
pub mod geometry;
pub mod groups;
pub mod invariant;
pub mod linalg;
pub mod lp;
pub mod put;
pub mod rational;
mod vertex;

pub use channels::{Channel, ChannelError, DominanceWitness, PrivacyLevel};
pub use decision::{DecisionError, DecisionProblem, DecisionRule, Prior};
pub use geometry::{GeometryError, StaircaseMatrix, WeightVector};
pub use groups::{Alphabet, GroupAction, GroupError, PermGroup, Permutation, Subset};
pub use invariant::{InvariantError, InvariantPolytope, OrbitWeightVector};
pub use put::{Certificate, Method, PutError, PutResult};
pub use rational::Rational;

/// Default cap on the order of a materialized permutation group.
pub const DEFAULT_GROUP_CAP: usize = 10_080;

/// Default cap on the alphabet size for full vertex enumeration.
pub const DEFAULT_VERTEX_CAP_M: usize = 5;
