//! Configuration documents, manifests and CSV/plot-data output.

pub mod config;
pub mod csv;

use std::fs;
use std::path::Path;

pub use config::{
    load_config, parse_config, parse_run_config, BoundaryDoc, ConfigDoc, DtDoc, InitialDoc,
    RunConfig, RunManifest,
};
pub use csv::{
    format_float, gnuplot_script, parse_xy_csv, read_xy_csv, snapshot_csv, snapshot_file_name,
    weights_csv, write_snapshot_csv,
};

use crate::error::ConfigError;
use crate::simulation::SnapshotSeries;

pub const MANIFEST_FILE: &str = "manifest.toml";
pub const PLOT_FILE: &str = "plot.gp";

/// Writes every snapshot, the manifest and a gnuplot script into `dir`.
pub fn write_outputs(
    series: &SnapshotSeries<f64>,
    manifest: &RunManifest,
    dir: &Path,
) -> Result<(), ConfigError> {
    let io = |source| ConfigError::Io {
        path: dir.display().to_string(),
        source,
    };
    fs::create_dir_all(dir).map_err(io)?;
    let mut files = Vec::new();
    for snap in &series.snapshots {
        let name = snapshot_file_name(snap.requested);
        write_snapshot_csv(&snap.state, &dir.join(&name))?;
        files.push((snap.requested, name));
    }
    fs::write(dir.join(MANIFEST_FILE), manifest.to_toml()).map_err(io)?;
    fs::write(dir.join(PLOT_FILE), gnuplot_script(&files)).map_err(io)?;
    Ok(())
}
