//! Finite-difference solver for the one-dimensional space-fractional diffusion equation
//!
//! ```text
//! ∂C/∂t = K_α D^α_θ C,   0 < α <= 2,  |θ| <= min(α, 2 - α)
//! ```
//!
//! where `D^α_θ` is the Riesz-Feller derivative, on a bounded interval with Dirichlet data.
//! The numerical core is generic over the scalar type ([`Real`], implemented for `f32` and
//! `f64`); the `*64` aliases below fix it to `f64`, which is what the CLI and the
//! verification harnesses use.

// `!(x > 0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod scalar;
pub mod scheme;
pub mod simulation;
pub mod verification;

pub use error::{
    ConfigError, GridError, KernelError, LinalgError, ParamError, SchemeError, SimulationError,
    VerifyError,
};
pub use grid::{
    boundary_at_half_step, build_grid, mass, sample_initial, BoundarySpec, FieldState, Grid1D,
    InitialCondition,
};
pub use kernel::{
    rf_coefficients, tail_sum_left, tail_sum_right, v_kernel, validate_params, weight,
    weight_table, Branch, FractionalParams, RfCoefficients, TailSums, WeightTable,
};
pub use linalg::{lu_factor, lu_solve, DenseMatrix, LuFactors};
pub use scalar::Real;
pub use scheme::{
    assemble_system, explicit_step, implicit_step, max_stable_dt, p_coefficient, rf_apply_bounded,
    Discretization, LinearSystem, SchemeConfig, Stepper,
};
pub use simulation::{run, DtPolicy, SimulationConfig, SnapshotSeries};

pub type Params = FractionalParams<f64>;
pub type Coefficients = RfCoefficients<f64>;
pub type WeightTable64 = WeightTable<f64>;
pub type TailSums64 = TailSums<f64>;
pub type Grid = Grid1D<f64>;
pub type Field = FieldState<f64>;
pub type Initial = InitialCondition<f64>;
pub type Boundary = BoundarySpec<f64>;
pub type Scheme = SchemeConfig<f64>;
pub type Matrix = DenseMatrix<f64>;
pub type Simulation = SimulationConfig<f64>;
pub type Snapshots = SnapshotSeries<f64>;
