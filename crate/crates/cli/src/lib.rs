//! IO side of `dynex-core`: JSON check reports, SVG figures, CSV curve
//! exports and the check suites run by the `dynex` binary.

pub mod error;
pub mod export;
pub mod figures;
pub mod report;
pub mod suites;
pub mod svg;

pub use error::{CliError, Result};
