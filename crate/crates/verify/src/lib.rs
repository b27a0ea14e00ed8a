//! Verification suites and report types for the Mahler-measure / L-value
//! identity checks; the `verify` binary is a thin CLI over [`suites`].

pub mod oracle;
pub mod report;
pub mod suites;
