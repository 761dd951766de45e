//! σ-weighted time stepping on a bounded domain.
//!
//! For interior nodes `i = 1..N-1` one step solves
//!
//! ```text
//! (C_i^{f+1} - C_i^f) / Δt = K/h^α [ Σ_{k=-i}^{N-i} (σ C_{i+k}^f + (1-σ) C_{i+k}^{f+1}) w_k
//!                                    + g_L s_L(i) + g_R s_R(N-i) ]
//! ```
//!
//! with both boundary values taken at the half step `t = Δt (f + 1/2)`, and the boundary
//! nodes set to those values. `σ = 1` is the explicit scheme, `σ = 0` fully implicit.

use crate::error::SchemeError;
use crate::grid::{boundary_at_half_step, BoundarySpec, FieldState, Grid1D};
use crate::kernel::{weight, Branch, FractionalParams, TailSums, WeightTable};
use crate::linalg::{lu_factor, DenseMatrix, LuFactors};
use crate::scalar::{gamma, Real};

/// Diffusion coefficient, time step, σ weight and Dirichlet data.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig<T> {
    pub params: FractionalParams<T>,
    pub k_alpha: T,
    pub dt: T,
    pub sigma: T,
    pub bc_left: BoundarySpec<T>,
    pub bc_right: BoundarySpec<T>,
    /// Lets explicit steps run at or above the stability limit.
    pub allow_unstable: bool,
}

impl<T: Real> SchemeConfig<T> {
    pub fn new(
        params: FractionalParams<T>,
        k_alpha: T,
        dt: T,
        sigma: T,
        bc_left: BoundarySpec<T>,
        bc_right: BoundarySpec<T>,
    ) -> Result<Self, SchemeError> {
        let cfg = Self {
            params,
            k_alpha,
            dt,
            sigma,
            bc_left,
            bc_right,
            allow_unstable: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Explicit scheme with constant zero boundary values.
    pub fn explicit(params: FractionalParams<T>, k_alpha: T, dt: T) -> Result<Self, SchemeError> {
        Self::new(
            params,
            k_alpha,
            dt,
            T::one(),
            BoundarySpec::default(),
            BoundarySpec::default(),
        )
    }

    pub fn validate(&self) -> Result<(), SchemeError> {
        if !(self.k_alpha > T::zero()) || !self.k_alpha.is_finite() {
            return Err(SchemeError::InvalidConfig(format!(
                "k_alpha must be positive, got {}",
                self.k_alpha
            )));
        }
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(SchemeError::InvalidConfig(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.sigma >= T::zero() && self.sigma <= T::one()) {
            return Err(SchemeError::InvalidConfig(format!(
                "sigma must lie in [0, 1], got {}",
                self.sigma
            )));
        }
        for bc in [&self.bc_left, &self.bc_right] {
            bc.validate()
                .map_err(|e| SchemeError::InvalidConfig(e.to_string()))?;
        }
        Ok(())
    }

    /// `K Δt / h^α`.
    #[inline]
    pub fn ratio(&self, h: T) -> T {
        self.k_alpha * self.dt / h.powf(self.params.alpha())
    }

    pub fn is_explicit(&self) -> bool {
        self.sigma == T::one()
    }

    fn check_stable(&self, h: T) -> Result<(), SchemeError> {
        if self.allow_unstable {
            return Ok(());
        }
        let limit = max_stable_dt(&self.params, self.k_alpha, h);
        if self.dt >= limit {
            return Err(SchemeError::UnstableTimestep {
                dt: self.dt.to_f64_lossy(),
                limit: limit.to_f64_lossy(),
            });
        }
        Ok(())
    }
}

/// Weights and tail sums sized for a grid of `n_cells` cells, computed once per run.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretization<T> {
    pub table: WeightTable<T>,
    pub tails: TailSums<T>,
}

impl<T: Real> Discretization<T> {
    pub fn new(params: &FractionalParams<T>, n_cells: usize) -> Self {
        let reach = n_cells.saturating_sub(1).max(1);
        Self {
            table: WeightTable::symmetric(*params, reach),
            tails: TailSums::new(params, reach),
        }
    }

    pub fn for_grid(params: &FractionalParams<T>, grid: &Grid1D<T>) -> Self {
        Self::new(params, grid.n_cells())
    }

    fn check(&self, n_cells: usize) -> Result<(), SchemeError> {
        let required = n_cells - 1;
        if self.table.reach() < required {
            return Err(SchemeError::WindowTooSmall {
                required,
                available: self.table.reach(),
            });
        }
        if self.tails.j_max() < required {
            return Err(SchemeError::TailsTooShort {
                required,
                available: self.tails.j_max(),
            });
        }
        Ok(())
    }

    /// `Σ_{k=-i}^{N-i} C_{i+k} w_k`, summed in increasing `k`, skipping exact-zero weights
    /// outside the table support.
    #[inline]
    fn window_sum(&self, values: &[T], i: usize) -> T {
        let n = values.len() - 1;
        let (lo, hi) = self.table.support();
        let k_lo = (-(i as i64)).max(lo);
        let k_hi = ((n - i) as i64).min(hi);
        let mut acc = T::zero();
        for k in k_lo..=k_hi {
            acc = acc + values[(i as i64 + k) as usize] * self.table.at(k);
        }
        acc
    }

    #[inline]
    fn boundary_terms(&self, n: usize, i: usize, g_left: T, g_right: T) -> T {
        g_left * self.tails.left(i) + g_right * self.tails.right(n - i)
    }
}

fn check_state<T: Real>(state: &FieldState<T>) -> Result<(), SchemeError> {
    let expected = state.grid.n_nodes();
    if state.values.len() != expected {
        return Err(SchemeError::FieldLength {
            expected,
            found: state.values.len(),
        });
    }
    Ok(())
}

/// Explicit update coefficient `p_k`.
pub fn p_coefficient<T: Real>(k: i64, cfg: &SchemeConfig<T>, h: T) -> T {
    let scaled = cfg.ratio(h) * weight(k, &cfg.params);
    if k == 0 {
        T::one() + scaled
    } else {
        scaled
    }
}

/// Largest explicit time step keeping `p_0` positive: `-h^α / (K w_0)`.
pub fn max_stable_dt<T: Real>(params: &FractionalParams<T>, k_alpha: T, h: T) -> T {
    -h.powf(params.alpha()) / (k_alpha * weight(0, params))
}

/// The same bound written through `c_L + c_R` and the branch-specific denominator.
pub fn max_stable_dt_branch_form<T: Real>(params: &FractionalParams<T>, k_alpha: T, h: T) -> T {
    let coef = params.coefficients();
    let alpha = params.alpha();
    let two = T::lit(2.0);
    let lambda = coef.lambda();
    let branch = match params.branch() {
        Branch::BelowOne => {
            gamma(two - alpha) / (two.powf(T::one() - alpha) * lambda - T::lit(3.0) * lambda + two)
        }
        Branch::AboveOne => {
            gamma(T::lit(3.0) - alpha)
                / (two.powf(two - alpha) * (two - lambda) + T::lit(4.0) * lambda - T::lit(6.0))
        }
    };
    two * h.powf(alpha) / (k_alpha * (coef.c_left + coef.c_right)) * branch
}

/// Bounded-domain operator at interior nodes,
/// `h^{-α} [Σ_{k=-i}^{N-i} C_{i+k} w_k + g_L s_L(i) + g_R s_R(N-i)]` for `i = 1..N-1`.
pub fn rf_apply_bounded<T: Real>(
    state: &FieldState<T>,
    g_left: T,
    g_right: T,
    disc: &Discretization<T>,
) -> Result<Vec<T>, SchemeError> {
    check_state(state)?;
    let n = state.grid.n_cells();
    disc.check(n)?;
    let scale = state.grid.h().powf(disc.table.params().alpha()).recip();
    Ok((1..n)
        .map(|i| {
            (disc.window_sum(&state.values, i) + disc.boundary_terms(n, i, g_left, g_right)) * scale
        })
        .collect())
}

fn advanced<T: Real>(state: &FieldState<T>, values: Vec<T>, dt: T) -> FieldState<T> {
    let step_index = state.step_index + 1;
    FieldState {
        grid: state.grid,
        values,
        time: dt * T::from_index(step_index),
        step_index,
    }
}

fn half_step_boundaries<T: Real>(cfg: &SchemeConfig<T>, f: usize) -> (T, T) {
    (
        boundary_at_half_step(&cfg.bc_left, cfg.dt, f),
        boundary_at_half_step(&cfg.bc_right, cfg.dt, f),
    )
}

/// One explicit (`σ = 1`) step. Refuses `Δt >= max_stable_dt` unless the config allows it.
pub fn explicit_step<T: Real>(
    state: &FieldState<T>,
    cfg: &SchemeConfig<T>,
    disc: &Discretization<T>,
) -> Result<FieldState<T>, SchemeError> {
    check_state(state)?;
    let n = state.grid.n_cells();
    disc.check(n)?;
    let h = state.grid.h();
    cfg.check_stable(h)?;
    let ratio = cfg.ratio(h);
    let (g_left, g_right) = half_step_boundaries(cfg, state.step_index);
    let c = &state.values;
    let mut next = Vec::with_capacity(n + 1);
    next.push(g_left);
    for i in 1..n {
        let sum = disc.window_sum(c, i) + disc.boundary_terms(n, i, g_left, g_right);
        next.push(c[i] + ratio * sum);
    }
    next.push(g_right);
    Ok(advanced(state, next, cfg.dt))
}

/// Matrix and right-hand side of `A C^{f+1} = B`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem<T> {
    pub matrix: DenseMatrix<T>,
    pub rhs: Vec<T>,
}

/// Time-independent system matrix: unit boundary rows, interior `A[i][j] = δ_ij + a_{j-i}`
/// with `a_m = (σ - 1) K Δt / h^α w_m`.
pub fn system_matrix<T: Real>(
    grid: &Grid1D<T>,
    cfg: &SchemeConfig<T>,
    disc: &Discretization<T>,
) -> Result<DenseMatrix<T>, SchemeError> {
    let n = grid.n_cells();
    disc.check(n)?;
    let factor = (cfg.sigma - T::one()) * cfg.ratio(grid.h());
    let mut a = DenseMatrix::zeros(n + 1);
    a[(0, 0)] = T::one();
    a[(n, n)] = T::one();
    for i in 1..n {
        for j in 0..=n {
            let off = j as i64 - i as i64;
            let delta = if i == j { T::one() } else { T::zero() };
            a[(i, j)] = delta + factor * disc.table.at(off);
        }
    }
    Ok(a)
}

/// `B` for the step leaving `state`.
pub fn assemble_rhs<T: Real>(
    state: &FieldState<T>,
    cfg: &SchemeConfig<T>,
    disc: &Discretization<T>,
) -> Result<Vec<T>, SchemeError> {
    check_state(state)?;
    let n = state.grid.n_cells();
    disc.check(n)?;
    let ratio = cfg.ratio(state.grid.h());
    let (g_left, g_right) = half_step_boundaries(cfg, state.step_index);
    let c = &state.values;
    let mut rhs = Vec::with_capacity(n + 1);
    rhs.push(g_left);
    for j in 1..n {
        let explicit_part = if cfg.sigma == T::zero() {
            T::zero()
        } else {
            cfg.sigma * disc.window_sum(c, j)
        };
        rhs.push(c[j] + ratio * (disc.boundary_terms(n, j, g_left, g_right) + explicit_part));
    }
    rhs.push(g_right);
    Ok(rhs)
}

pub fn assemble_system<T: Real>(
    state: &FieldState<T>,
    cfg: &SchemeConfig<T>,
    disc: &Discretization<T>,
) -> Result<LinearSystem<T>, SchemeError> {
    Ok(LinearSystem {
        matrix: system_matrix(&state.grid, cfg, disc)?,
        rhs: assemble_rhs(state, cfg, disc)?,
    })
}

/// One σ-weighted step using a factorization of [`system_matrix`].
pub fn implicit_step<T: Real>(
    state: &FieldState<T>,
    cfg: &SchemeConfig<T>,
    disc: &Discretization<T>,
    solver: &LuFactors<T>,
) -> Result<FieldState<T>, SchemeError> {
    let rhs = assemble_rhs(state, cfg, disc)?;
    let next = solver.solve(&rhs)?;
    Ok(advanced(state, next, cfg.dt))
}

/// Reusable per-run stepping state: cached weights, tails and (for `σ < 1`) the LU factors.
#[derive(Debug, Clone)]
pub struct Stepper<T> {
    cfg: SchemeConfig<T>,
    disc: Discretization<T>,
    lu: Option<LuFactors<T>>,
}

impl<T: Real> Stepper<T> {
    pub fn new(cfg: SchemeConfig<T>, grid: &Grid1D<T>) -> Result<Self, SchemeError> {
        cfg.validate()?;
        let disc = Discretization::for_grid(&cfg.params, grid);
        let lu = if cfg.is_explicit() {
            cfg.check_stable(grid.h())?;
            None
        } else {
            Some(lu_factor(&system_matrix(grid, &cfg, &disc)?)?)
        };
        Ok(Self { cfg, disc, lu })
    }

    pub fn config(&self) -> &SchemeConfig<T> {
        &self.cfg
    }

    pub fn discretization(&self) -> &Discretization<T> {
        &self.disc
    }

    pub fn step(&self, state: &FieldState<T>) -> Result<FieldState<T>, SchemeError> {
        match &self.lu {
            None => explicit_step(state, &self.cfg, &self.disc),
            Some(lu) => implicit_step(state, &self.cfg, &self.disc, lu),
        }
    }
}
