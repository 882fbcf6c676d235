//! Truncated-matrix toolkit for weighted composition operators
//! `W_{φ,ψ} f = ψ · (f ∘ φ)` on weighted Hardy spaces `H^2(β)`.
//!
//! The crate is layered bottom-up:
//!
//! * [`series`]: truncated complex Taylor series (arithmetic, composition, reversion).
//! * [`space`]: weight sequences, inner products and reproducing kernels.
//! * [`maps`]: linear-fractional self-maps of the disk and their fixed points.
//! * [`operator`]: exact truncated matrices and symmetry / normality / hermiticity checks.
//! * [`koenigs`]: Koenigs eigenfunctions and the obstruction they impose.
//! * [`cli`]: command implementations, report formats and the verification suite.

pub mod cli;
pub mod error;
pub mod koenigs;
pub mod maps;
pub mod operator;
pub mod series;
pub mod space;

pub use error::{Error, Result};
pub use maps::{FixedPointInfo, MobiusMap, PPFParams};
pub use operator::{OperatorMatrix, SymmetryReport};
pub use series::TruncatedSeries;
pub use space::WeightSequence;

pub use num_complex::Complex64;
