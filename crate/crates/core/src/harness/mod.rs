//! Scenario runner, reports, JSON input and the command line.

pub mod cli;
pub mod io;
pub mod report;
pub mod scenario;

pub use cli::run;
pub use report::{Check, Report, Status};
pub use scenario::{remark_ball_not_ur_scenario, DEFAULT_SEED};
