//! Deciders, reductions to the counting CSP, and exact evaluation.

pub mod active;
pub mod backend;
pub mod decide;
pub mod evaluate;
pub mod gauss;
pub mod passive;
pub mod reduce;

pub use active::active_reduce;
pub use backend::{affine_csp_value, product_csp_value};
pub use decide::{decide, decide_arity4, decide_pure, decide_rebalancing, Outcome, Pipeline, Verdict};
pub use evaluate::{backend_value, evaluate, Backend, EvalOptions, Evaluation, Route, Strategy};
pub use gauss::{gauss_sum, QuadraticPhaseSystem};
pub use passive::{passive_reduce, psi_after_pair, theta_mapping};
pub use reduce::{Reduced, Reduction, Rule, Step, ZeroCertificate};
