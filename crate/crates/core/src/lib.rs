//! Exact inner and outer bounds on the capacity region of distributed index
//! coding problems.
//!
//! A problem has `n` receivers; receiver `j` wants message `j` and knows the
//! messages in `A_j`. Each nonempty message set `J` sits on its own server,
//! which broadcasts over a link of capacity `C_J`. This crate builds
//!
//! * outer bounds: the generalized MAIS region, the polymatroidal LP, and a
//!   pattern-matched Shannon-type cut for one family of three-receiver
//!   problems ([`outer`]);
//! * inner bounds: composite coding run per server, across all servers, or
//!   per server group ([`inner`]);
//!
//! and evaluates them exactly with a rational simplex ([`lp`]) and
//! Fourier–Motzkin projection ([`fm`]).
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod fm;
pub mod inner;
pub mod lp;
pub mod outer;
pub mod polyhedron;
pub mod problem;
pub mod rational;
pub mod subset;

pub use error::{Error, Result};
pub use fm::{fm_eliminate, remove_redundant, support_equal};
pub use inner::{
    grouped_region, scheme_grouped, scheme_joint, scheme_separate, search_decoding_sets,
    search_groupings, Decoding, DecodingConfig, SchemeValue, ServerGrouping,
};
pub use lp::{lp_max, LpOutcome, LpSolution};
pub use outer::{outer_region, outer_support, OuterBoundKind};
pub use polyhedron::{Coefficients, LinearInequality, Polyhedron, Relation, VariableId};
pub use problem::{enumerate_problems, parse_problem, ProblemInstance, RateVector};
pub use rational::Rational;
pub use subset::SubsetId;
