//! The `run` and `compare` commands.

mod compare;
mod output;

pub use compare::{cmd_compare, intensity_maxima};
pub use output::{cmd_run, profile_file_name, MANIFEST_FILE, REPORT_FILE, TRAJECTORY_FILE};

/// Process exit statuses.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// Bad configuration, missing inputs or I/O failure.
    pub const CONFIG: i32 = 1;
    /// The engine aborted (caustic, escape, underflow, ...).
    pub const ENGINE: i32 = 2;
}
