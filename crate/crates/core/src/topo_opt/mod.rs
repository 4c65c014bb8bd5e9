//! Differentiable persistence.
//!
//! Every finite diagram point `(b, d)` is traced back to its creator and
//! destroyer simplices, and each of those to its governing edge, the vertex
//! pair whose distance *is* the filtration value. With the pairing held
//! fixed, `b` and `d` are edge lengths, so the gradient of a diagram
//! functional `E` with respect to point `x_u` is
//!
//! `Σ_i ∂E/∂b_i · ∂|x_u − x_v|/∂x_u [u on the birth edge of i]
//!  + Σ_i ∂E/∂d_i · ∂|x_u − x_v|/∂x_u [u on the death edge of i]`.
//!
//! Contributions from pairs sharing a governing edge accumulate.

mod attribution;
mod functional;
mod gradient;
mod optimize;

pub use attribution::{attribute, governing_edge, Attribution, Edge, PairAttribution};
pub use functional::{eval_functional, DiagramFunctional, Direction, FunctionalKind};
pub use gradient::{grad, GradResult, GradientField, Objective, PipelineConfig};
pub use optimize::{optimize, OptimizeConfig, Trajectory, MAX_SPREAD_GROWTH};
