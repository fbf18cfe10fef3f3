//! Distance-generalized core decomposition of undirected graphs.
//!
//! A node belongs to the (k,h)-core when it can reach at least k other
//! members of the core over paths of length at most h that stay inside the
//! core. The core number c(v) is the largest k whose (k,h)-core contains v;
//! with h = 1 this is the classical k-core. This crate provides an exact
//! decomposition by iterated minimum-reach peeling, an approximate
//! decomposition that replaces exhaustive neighborhood counts with bounded
//! samples of geometric ranks (in a straightforward and in an incrementally
//! maintained variant), and a harness for comparing the two.
//!
//! All numeric kernels are generic over the floating-point scalar; the
//! `*32`/`*64` aliases pin the common instantiations.

use std::fmt::{Debug, Display};

use num_traits::Float;

pub mod approx_fast;
pub mod approx_naive;
pub mod eval_harness;
pub mod exact_decomposition;
pub mod graph_core;
pub mod rank_sketch;

/// Floating-point scalar the decompositions are computed in.
pub trait Real: Float + Debug + Display {}

impl<T: Float + Debug + Display> Real for T {}

/// Converts a primitive count or constant into the working scalar.
///
/// Panics when the value does not fit, which cannot happen for the node
/// counts and small integer constants this crate converts.
pub(crate) fn cast<S: Real, T: num_traits::ToPrimitive + Debug + Copy>(value: T) -> S {
    S::from(value).expect("value representable in the scalar type")
}

pub use approx_fast::{
    compute_fast, core_fast, core_fast_traced, delete_entries, merge_sorted, union_candidates,
    update_fast, CountedList, FastState, FastTrace, Handle,
};
pub use approx_naive::{compute_naive, core_naive, update_naive, NaiveState};
pub use eval_harness::{
    max_relative_error, run_trials, zero_core_violations, Algorithm, HarnessError, TrialPlan,
    TrialReport, CSV_HEADER,
};
pub use exact_decomposition::{exact_core_decomposition, CoreMap};
pub use graph_core::{
    h_neighborhood, load_edge_list, AliveMask, Graph, NodeError, ParseError,
};
pub use rank_sketch::{
    compute_budget, confidence_constant, est, estimate_node, sample_ranks, ConfigError,
    EmptyRankList, RankAssignment, RunConfig, RANK_CAP,
};

pub type CoreMap32 = CoreMap<f32>;
pub type CoreMap64 = CoreMap<f64>;
pub type RunConfig32 = RunConfig<f32>;
pub type RunConfig64 = RunConfig<f64>;
pub type TrialReport32 = TrialReport<f32>;
pub type TrialReport64 = TrialReport<f64>;
