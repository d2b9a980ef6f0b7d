//! Command-line front end: `transform`, `verify`, `scan-nu` and `figure`.
//!
//! Exit codes: 0 success, 1 spectrum check failed, 2 usage error,
//! 3 singular transformation, 4 any other error.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

use anyhow::Result;

use args::{parse_nu_list, Cli, Command};
use config::{BaseConfig, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_SINGULAR: i32 = 3;
pub const EXIT_ERROR: i32 = 4;

pub const DEFAULT_SPECTRUM_TOL: f64 = 5e-3;

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Transform(a) => commands::cmd_transform(&RunConfig::from_args(&a)?),
        Command::Verify(a) => commands::cmd_verify(&RunConfig::from_args(&a.transform)?, a.levels, !a.no_widen),
        Command::ScanNu(a) => {
            let nus = parse_nu_list(&a.nu_list).map_err(anyhow::Error::msg)?;
            let base = BaseConfig::from_parts(&a.potential, &a.seed, &a.grid, &a.tolerances)?;
            commands::cmd_scan_nu(&base, &nus, &a.out_dir)
        }
        Command::Figure(a) => {
            commands::cmd_figure(&a.name, &a.out_dir, a.tolerances.singular_tol, a.tolerances.spectrum_tol)
        }
    }
}
