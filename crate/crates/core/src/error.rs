use alloc::string::String;

/// Errors raised by the verification routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical procedure failed to converge or lost its bracket.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// A map or system was configured with parameters outside their admissible range.
    #[error("configuration error: {0}")]
    Configuration(String),
    /// A predicate cannot be decided at the current resolution; the caller must refine.
    #[error("indeterminate: {0}")]
    Indeterminate(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(alloc::format!($($arg)*)) };
}
macro_rules! numerical {
    ($($arg:tt)*) => { $crate::error::Error::Numerical(alloc::format!($($arg)*)) };
}
macro_rules! config {
    ($($arg:tt)*) => { $crate::error::Error::Configuration(alloc::format!($($arg)*)) };
}

pub(crate) use config;
pub(crate) use domain;
pub(crate) use numerical;
