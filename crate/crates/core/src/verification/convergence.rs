//! Grid refinement studies against an analytic kernel.

use crate::error::SimulationError;
use crate::grid::build_grid;
use crate::simulation::{field_error, run, ErrorNorm, SimulationConfig};

use super::kernels::AnalyticKernel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n_cells: usize,
    pub h: f64,
    pub dt: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].error < w[0].error)
    }

    /// Observed orders `log2(e_k / e_{k+1})` between consecutive refinements.
    pub fn observed_orders(&self) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|w| (w[0].error / w[1].error).log2())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n_cells,h,dt,error\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.n_cells, r.h, r.dt, r.error));
        }
        out
    }
}

/// Runs `base` and `refinements` successively halved grids, reporting the relative L2 error
/// of the final state against `kernel` on nodes inside `window` (all nodes if `None`).
pub fn convergence_study(
    base: &SimulationConfig<f64>,
    kernel: &AnalyticKernel<f64>,
    refinements: usize,
    window: Option<(f64, f64)>,
) -> Result<ConvergenceTable, SimulationError> {
    let mut rows = Vec::with_capacity(refinements + 1);
    for level in 0..=refinements {
        let n_cells = base.grid.n_cells() << level;
        let mut cfg = base.clone();
        cfg.grid = build_grid(base.grid.left(), base.grid.right(), n_cells)?;
        cfg.snapshot_times = vec![cfg.t_end];
        let series = run(&cfg)?;
        let last = series.last();
        let error = field_error(last, |x, t| kernel.value(x, t), ErrorNorm::L2Rel, window);
        rows.push(ConvergenceRow {
            n_cells,
            h: cfg.grid.h(),
            dt: series.dt(),
            error,
        });
    }
    Ok(ConvergenceTable { rows })
}
