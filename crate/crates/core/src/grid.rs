//! Uniform grids, nodal fields, initial conditions and Dirichlet data.

use crate::error::GridError;
use crate::scalar::Real;

/// Uniform grid of `n_cells` cells on `[left, right]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D<T> {
    left: T,
    right: T,
    n_cells: usize,
    h: T,
}

impl<T: Real> Grid1D<T> {
    pub fn new(left: T, right: T, n_cells: usize) -> Result<Self, GridError> {
        let ok = left.is_finite() && right.is_finite() && right > left && n_cells >= 2;
        if !ok {
            return Err(GridError::DegenerateDomain {
                left: left.to_f64_lossy(),
                right: right.to_f64_lossy(),
                n_cells,
            });
        }
        Ok(Self {
            left,
            right,
            n_cells,
            h: (right - left) / T::from_index(n_cells),
        })
    }

    pub fn left(&self) -> T {
        self.left
    }

    pub fn right(&self) -> T {
        self.right
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    pub fn h(&self) -> T {
        self.h
    }

    /// `x_i = L + i h`, with the last node pinned to `R`.
    #[inline]
    pub fn node(&self, i: usize) -> T {
        if i == self.n_cells {
            self.right
        } else {
            self.left + T::from_index(i) * self.h
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = T> + '_ {
        (0..=self.n_cells).map(move |i| self.node(i))
    }
}

pub fn build_grid<T: Real>(left: T, right: T, n_cells: usize) -> Result<Grid1D<T>, GridError> {
    Grid1D::new(left, right, n_cells)
}

/// Nodal values `C_i^f` at time level `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState<T> {
    pub grid: Grid1D<T>,
    pub values: Vec<T>,
    pub time: T,
    pub step_index: usize,
}

impl<T: Real> FieldState<T> {
    pub fn zeros(grid: Grid1D<T>) -> Self {
        Self::from_values(grid, vec![T::zero(); grid.n_nodes()]).expect("length matches")
    }

    pub fn from_values(grid: Grid1D<T>, values: Vec<T>) -> Result<Self, GridError> {
        if values.len() != grid.n_nodes() {
            return Err(GridError::InvalidTable(format!(
                "expected {} nodal values, got {}",
                grid.n_nodes(),
                values.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            time: T::zero(),
            step_index: 0,
        })
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Discrete integral `h Σ C_i` with trapezoid end weights.
pub fn mass<T: Real>(state: &FieldState<T>) -> T {
    let v = &state.values;
    let n = v.len();
    if n == 0 {
        return T::zero();
    }
    let half = T::lit(0.5);
    let inner = v[1..n - 1].iter().fold(T::zero(), |acc, &x| acc + x);
    state.grid.h() * (inner + half * (v[0] + v[n - 1]))
}

/// Piecewise-linear lookup in a strictly increasing table, clamped at both ends.
pub(crate) fn interp_clamped<T: Real>(table: &[(T, T)], x: T) -> T {
    let (first, last) = (table[0], table[table.len() - 1]);
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let upper = table.partition_point(|&(tx, _)| tx < x);
    let (x1, y1) = table[upper];
    if x1 == x {
        return y1;
    }
    let (x0, y0) = table[upper - 1];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

fn check_table<T: Real>(table: &[(T, T)], what: &str) -> Result<(), GridError> {
    if table.is_empty() {
        return Err(GridError::InvalidTable(format!("{what} table is empty")));
    }
    if table.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(GridError::InvalidTable(format!(
            "{what} table has non-finite entries"
        )));
    }
    if table.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(GridError::InvalidTable(format!(
            "{what} table abscissae must be strictly increasing"
        )));
    }
    Ok(())
}

/// Initial profile `c_0(x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition<T> {
    /// Unit mass on the centre node: `1/h` at `x_{N/2}`.
    Delta,
    /// `value` on the closed interval `[from, to]`, zero elsewhere.
    Box { value: T, from: T, to: T },
    /// Piecewise-linear profile through `(x, value)` pairs, clamped outside the table.
    Tabulated(Vec<(T, T)>),
}

pub fn sample_initial<T: Real>(
    ic: &InitialCondition<T>,
    grid: &Grid1D<T>,
) -> Result<FieldState<T>, GridError> {
    let n = grid.n_cells();
    let values = match ic {
        InitialCondition::Delta => {
            if !n.is_multiple_of(2) {
                return Err(GridError::DeltaNeedsEvenN(n));
            }
            let mut v = vec![T::zero(); n + 1];
            v[n / 2] = T::one() / grid.h();
            v
        }
        InitialCondition::Box { value, from, to } => {
            let (from, to, value) = (*from, *to, *value);
            if !(from <= to && from >= grid.left() && to <= grid.right()) || !value.is_finite() {
                return Err(GridError::BoxOutOfDomain {
                    from: from.to_f64_lossy(),
                    to: to.to_f64_lossy(),
                    left: grid.left().to_f64_lossy(),
                    right: grid.right().to_f64_lossy(),
                });
            }
            // nodes are L + i h; absorb the rounding of i h against the box ends
            let slack = grid.h() * T::lit(1e-9);
            grid.nodes()
                .map(|x| {
                    if x >= from - slack && x <= to + slack {
                        value
                    } else {
                        T::zero()
                    }
                })
                .collect()
        }
        InitialCondition::Tabulated(table) => {
            check_table(table, "initial-condition")?;
            grid.nodes().map(|x| interp_clamped(table, x)).collect()
        }
    };
    Ok(FieldState {
        grid: *grid,
        values,
        time: T::zero(),
        step_index: 0,
    })
}

/// Dirichlet data `g(t)` at one end of the domain.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundarySpec<T> {
    Constant(T),
    /// `(t, value)` pairs, linearly interpolated and clamped outside the table.
    TimeTable(Vec<(T, T)>),
}

impl<T: Real> BoundarySpec<T> {
    pub fn time_table(table: Vec<(T, T)>) -> Result<Self, GridError> {
        check_table(&table, "boundary")?;
        Ok(Self::TimeTable(table))
    }

    pub fn validate(&self) -> Result<(), GridError> {
        match self {
            BoundarySpec::Constant(v) if v.is_finite() => Ok(()),
            BoundarySpec::Constant(_) => Err(GridError::InvalidTable(
                "boundary value is not finite".into(),
            )),
            BoundarySpec::TimeTable(t) => check_table(t, "boundary"),
        }
    }

    pub fn at(&self, t: T) -> T {
        match self {
            BoundarySpec::Constant(v) => *v,
            BoundarySpec::TimeTable(table) => interp_clamped(table, t),
        }
    }
}

impl<T: Real> Default for BoundarySpec<T> {
    fn default() -> Self {
        BoundarySpec::Constant(T::zero())
    }
}

/// `g(Δt (f + 1/2))`, the value used for both boundary rows and tail corrections of step `f`.
pub fn boundary_at_half_step<T: Real>(spec: &BoundarySpec<T>, dt: T, f: usize) -> T {
    spec.at(dt * (T::from_index(f) + T::lit(0.5)))
}
