//! Independent oracles, analytic reference solutions and acceptance harnesses.

pub mod convergence;
pub mod kernels;
pub mod oracle;
pub mod suites;

pub use convergence::{convergence_study, ConvergenceRow, ConvergenceTable};
pub use kernels::{kernel_eval, AnalyticKernel, KernelKind};
pub use oracle::{hurwitz_zeta, tail_oracle, weight_oracle, TailSide};
pub use suites::{run_all, Check, Suite};
