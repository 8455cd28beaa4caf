//! Centrally extended sl(1|1)² superalgebras: graded tensor calculus, modules,
//! R-matrices, the u-deformed Yangian, the q-deformation and its affinization.

pub mod affine;
pub mod error;
pub mod graded;
pub mod halg;
pub mod linalg;
pub mod qalg;
pub mod report;
pub mod rmatrix;
pub mod sample;
pub mod series;
pub mod suites;
pub mod terms;
pub mod yangian;
pub mod zparam;

pub use error::{Error, Result};
pub use graded::{graded_comm, graded_kron, graded_perm, GradedSpace, Parity, SuperMatrix, C64};
pub use halg::{GeneratorImage, RepLabels};
pub use report::ResidualReport;
