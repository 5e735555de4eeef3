//! Command-line front end for the `brauer` library: a small job language,
//! dispatch to the library, and text or JSON reports.

pub mod job;
pub mod render;
pub mod run;

pub use job::{parse_job, JobError, JobErrorKind, JobSpec, OutputMode, Verb};
pub use run::{run_job, Failure, Report};
