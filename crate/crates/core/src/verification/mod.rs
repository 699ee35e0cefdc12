//! Independent checks of the discretization: manufactured solutions, a
//! finite-difference check of the tangent, a dense oracle for single steps
//! and a stability probe for perturbed data.

pub mod compare;
pub mod dependence;
pub mod fd;
pub mod mms;
pub mod oracle;
pub mod suite;

pub use compare::{residual_discrepancy, step_comparison, StepComparison};
pub use dependence::{continuous_dependence_probe, ratio_spread, DependenceRatio, Perturbation};
pub use fd::{fd_discrepancy, jacobian_fd_check, FdDiscrepancy};
pub use mms::{spatial_study, temporal_study, LadderResult, Manufactured, TrigSolution};
pub use oracle::OracleResidual;
pub use suite::{report_csv, run_suite, Bound, ReportRow, SuiteOptions, REPORT_HEADER};
