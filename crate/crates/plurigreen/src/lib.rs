//! Certified lower/upper bounds for the pluricomplex Green function and the
//! Carathéodory/Kobayashi/Azukawa/Royden invariant functions on concrete
//! model domains in C^1 and C^2.
//!
//! Every numeric this crate reports is one-sided and carries a witness: lower
//! bounds come from holomorphic maps to the disk or from plurisubharmonic
//! competitors that are negative by construction, upper bounds from analytic
//! disks with a containment certificate. The two sides are combined into
//! [`bounds::BoundInterval`]s whose ordering is enforced, never clamped.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI live in
//! the companion `plurigreen-cli` crate.

#![no_std]

extern crate alloc;

// Modules import `num_traits::Float` for f64 math, with an
// allow(unused_imports): whenever std enters the crate graph (tests, std
// consumers of num-traits), the primitive's inherent methods shadow the
// trait and the import lint misfires.
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod compactify;
pub mod config;
pub mod disk;
pub mod error;
pub mod field;
pub mod geometry;
pub mod hyperconvex;
pub mod jensen;
pub mod metrics;
pub mod optim;
pub mod quad;
pub mod roots;

pub use config::SearchBudget;
pub use error::Error;
pub use geometry::{ComplexPoint, Direction, DomainSpec, HoloMap};

/// Complex scalar used throughout.
pub type Cplx = num_complex::Complex64;
