//! Experiment harness: shapes, ε-sweeps, extrapolation and reporting.

mod fit;
pub mod report;
pub mod shapes;
pub mod study;

pub use fit::{fit_linear, ContentSeries, FitResult};
pub use shapes::{blob, builtin_body, builtin_shape, resolve_body, resolve_polygon};
pub use study::{execute, run_study, StudyConfig, StudyKind, StudyReport, StudyRow, StudySummary};
