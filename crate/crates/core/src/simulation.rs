//! Time integration driver.

use sha2::{Digest, Sha256};

use crate::error::SimulationError;
use crate::grid::{sample_initial, BoundarySpec, FieldState, Grid1D, InitialCondition};
use crate::kernel::FractionalParams;
use crate::scalar::Real;
use crate::scheme::{max_stable_dt, SchemeConfig, Stepper};

/// How the time step is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtPolicy<T> {
    Fixed(T),
    /// `safety * max_stable_dt`, then shrunk so that `t_end` is a whole number of steps.
    Auto {
        safety: T,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig<T> {
    pub grid: Grid1D<T>,
    pub params: FractionalParams<T>,
    pub k_alpha: T,
    pub sigma: T,
    pub bc_left: BoundarySpec<T>,
    pub bc_right: BoundarySpec<T>,
    pub allow_unstable: bool,
    pub initial: InitialCondition<T>,
    pub t_end: T,
    pub snapshot_times: Vec<T>,
    pub dt_policy: DtPolicy<T>,
}

impl<T: Real> SimulationConfig<T> {
    /// Explicit run with zero boundary values, auto time step (safety 0.9) and a single
    /// snapshot at `t_end`.
    pub fn explicit_free_space(
        grid: Grid1D<T>,
        params: FractionalParams<T>,
        k_alpha: T,
        initial: InitialCondition<T>,
        t_end: T,
    ) -> Self {
        Self {
            grid,
            params,
            k_alpha,
            sigma: T::one(),
            bc_left: BoundarySpec::default(),
            bc_right: BoundarySpec::default(),
            allow_unstable: false,
            initial,
            t_end,
            snapshot_times: vec![t_end],
            dt_policy: DtPolicy::Auto {
                safety: T::lit(0.9),
            },
        }
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        let invalid = |m: String| Err(SimulationError::ConfigInvalid(m));
        if !(self.t_end > T::zero()) || !self.t_end.is_finite() {
            return invalid(format!("t_end must be positive, got {}", self.t_end));
        }
        if self.snapshot_times.windows(2).any(|w| !(w[1] >= w[0])) {
            return invalid("snapshot times must be sorted".into());
        }
        if let Some(t) = self
            .snapshot_times
            .iter()
            .find(|t| !(**t >= T::zero() && **t <= self.t_end))
        {
            return invalid(format!("snapshot time {t} lies outside [0, t_end]"));
        }
        match self.dt_policy {
            DtPolicy::Fixed(dt) if !(dt > T::zero()) || !dt.is_finite() => {
                return invalid(format!("fixed dt must be positive, got {dt}"));
            }
            DtPolicy::Auto { safety } if !(safety > T::zero() && safety < T::one()) => {
                return invalid(format!("dt safety factor must lie in (0, 1), got {safety}"));
            }
            _ => {}
        }
        let dt = self.resolve_dt();
        if self.sigma == T::one() && !self.allow_unstable {
            let limit = max_stable_dt(&self.params, self.k_alpha, self.grid.h());
            if !(dt < limit) {
                return invalid(format!(
                    "explicit time step {dt} is not below the stability limit {limit}"
                ));
            }
        }
        self.scheme(dt)
            .validate()
            .map_err(|e| SimulationError::ConfigInvalid(e.to_string()))
    }

    /// Time step the run will use.
    pub fn resolve_dt(&self) -> T {
        match self.dt_policy {
            DtPolicy::Fixed(dt) => dt,
            DtPolicy::Auto { safety } => {
                let target = safety * max_stable_dt(&self.params, self.k_alpha, self.grid.h());
                let steps = (self.t_end / target).ceil().max(T::one());
                self.t_end / steps
            }
        }
    }

    pub fn scheme(&self, dt: T) -> SchemeConfig<T> {
        SchemeConfig {
            params: self.params,
            k_alpha: self.k_alpha,
            dt,
            sigma: self.sigma,
            bc_left: self.bc_left.clone(),
            bc_right: self.bc_right.clone(),
            allow_unstable: self.allow_unstable,
        }
    }

    /// Short content hash of the configuration, stable across runs of the same build.
    pub fn config_hash(&self) -> String {
        let digest = Sha256::digest(format!("{self:?}").as_bytes());
        digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
    }
}

/// First step index whose time is not before `t`.
fn step_at_or_after<T: Real>(t: T, dt: T) -> usize {
    let ratio = t / dt;
    // times that are whole multiples of dt up to rounding map to that multiple
    let nearest = ratio.round();
    let idx = if (ratio - nearest).abs() <= T::lit(1e-9) * nearest.max(T::one()) {
        nearest
    } else {
        ratio.ceil()
    };
    idx.to_usize().unwrap_or(usize::MAX)
}

/// One recorded state.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    /// Time that was asked for.
    pub requested: T,
    pub state: FieldState<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSeries<T> {
    pub snapshots: Vec<Snapshot<T>>,
    pub params: FractionalParams<T>,
    pub grid: Grid1D<T>,
    pub scheme: SchemeConfig<T>,
    pub n_steps: usize,
    pub config_hash: String,
}

impl<T: Real> SnapshotSeries<T> {
    pub fn dt(&self) -> T {
        self.scheme.dt
    }

    /// Snapshot whose time is closest to `time`, if it lies within one step of it.
    pub fn at(&self, time: T) -> Result<&FieldState<T>, SimulationError> {
        let best = self
            .snapshots
            .iter()
            .map(|s| &s.state)
            .min_by(|a, b| {
                let da = (a.time - time).abs();
                let db = (b.time - time).abs();
                da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
            })
            .ok_or(SimulationError::NoSuchSnapshot(time.to_f64_lossy()))?;
        if (best.time - time).abs() <= self.dt() {
            Ok(best)
        } else {
            Err(SimulationError::NoSuchSnapshot(time.to_f64_lossy()))
        }
    }

    pub fn last(&self) -> &FieldState<T> {
        &self
            .snapshots
            .last()
            .expect("series always holds the initial state")
            .state
    }
}

/// Advances the initial condition to `t_end`, recording the first post-step state at or
/// after each requested time. The state at `t = 0` is always recorded first.
pub fn run<T: Real>(config: &SimulationConfig<T>) -> Result<SnapshotSeries<T>, SimulationError> {
    config.validate()?;
    let dt = config.resolve_dt();
    let scheme = config.scheme(dt);
    let stepper = Stepper::new(scheme.clone(), &config.grid)?;
    let n_steps = step_at_or_after(config.t_end, dt).max(1);

    let mut requested: Vec<T> = std::iter::once(T::zero())
        .chain(config.snapshot_times.iter().copied())
        .chain(std::iter::once(config.t_end))
        .collect();
    requested.sort_by(|a, b| a.partial_cmp(b).expect("validated times are finite"));
    requested.dedup();
    let targets: Vec<(T, usize)> = requested
        .iter()
        .map(|&t| {
            (
                t,
                if t == T::zero() {
                    0
                } else {
                    step_at_or_after(t, dt).clamp(1, n_steps)
                },
            )
        })
        .collect();

    let mut state = sample_initial(&config.initial, &config.grid)?;
    let mut snapshots = Vec::with_capacity(targets.len());
    let mut next_target = 0;
    let mut record = |state: &FieldState<T>, next_target: &mut usize| {
        while *next_target < targets.len() && targets[*next_target].1 == state.step_index {
            snapshots.push(Snapshot {
                requested: targets[*next_target].0,
                state: state.clone(),
            });
            *next_target += 1;
        }
    };
    record(&state, &mut next_target);
    for _ in 0..n_steps {
        state = stepper.step(&state)?;
        record(&state, &mut next_target);
    }

    Ok(SnapshotSeries {
        snapshots,
        params: config.params,
        grid: config.grid,
        scheme,
        n_steps,
        config_hash: config.config_hash(),
    })
}

/// Discrete error norms against an analytic profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorNorm {
    /// `‖numeric - exact‖₂ / ‖exact‖₂` over the nodes.
    L2Rel,
    /// `max |numeric - exact|`.
    LInf,
}

/// Error of a field against `exact(x, t)` at the field's own time, optionally restricted to
/// nodes inside `[window.0, window.1]`.
pub fn field_error<T: Real>(
    state: &FieldState<T>,
    exact: impl Fn(T, T) -> T,
    norm: ErrorNorm,
    window: Option<(T, T)>,
) -> T {
    let pts = state
        .grid
        .nodes()
        .zip(&state.values)
        .filter(|(x, _)| window.is_none_or(|(a, b)| *x >= a && *x <= b))
        .map(|(x, &v)| (v, exact(x, state.time)));
    match norm {
        ErrorNorm::LInf => pts.fold(T::zero(), |m, (v, e)| m.max((v - e).abs())),
        ErrorNorm::L2Rel => {
            let (num, den) = pts.fold((T::zero(), T::zero()), |(n, d), (v, e)| {
                (n + (v - e) * (v - e), d + e * e)
            });
            if den == T::zero() {
                num.sqrt()
            } else {
                (num / den).sqrt()
            }
        }
    }
}

/// Error of the snapshot nearest `time` against `exact(x, t)`.
pub fn snapshot_error<T: Real>(
    series: &SnapshotSeries<T>,
    exact: impl Fn(T, T) -> T,
    time: T,
    norm: ErrorNorm,
) -> Result<T, SimulationError> {
    Ok(field_error(series.at(time)?, exact, norm, None))
}
