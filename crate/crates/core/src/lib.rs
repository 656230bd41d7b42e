//! Simulation of three-level open quantum systems on the eight-dimensional
//! Bloch sphere.
//!
//! The crate provides, bottom up:
//!
//! - [`linalg`]: dense complex matrices/vectors, Hermitian eigendecomposition,
//!   unitary matrix exponentials;
//! - [`generators`]: Pauli and Gell-Mann generator sets, SU(3) structure
//!   constants and Casimir operators;
//! - [`bloch`]: density matrices, 8-component Bloch vectors, sphere
//!   parametrization and the non-unit ray ansatz;
//! - [`adjoint`]: the SU(2)→SO(3) and SU(3)→SO(8) adjoint maps and octet
//!   vector products;
//! - [`lindblad`]: Lindblad models, an RK4 trajectory integrator, and the
//!   closed-form dephasing solution used as an oracle;
//! - [`phase`]: Pancharatnam/Bargmann/Berry geometric phase machinery;
//! - [`polarization`]: Stokes operators on truncated two-mode Fock spaces and
//!   the depolarization models (lossy, pure dephasing, atomic bath);
//! - [`verify`]: the self-check suite behind the CLI `verify` subcommand.

pub mod adjoint;
pub mod bloch;
pub mod generators;
pub mod linalg;
pub mod lindblad;
pub mod phase;
pub mod polarization;
pub mod verify;

pub use linalg::{ComplexMatrix, ComplexVector};
pub use num_complex::Complex64;
