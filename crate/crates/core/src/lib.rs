//! Adiabatic geometric phases of three-level quantum systems.
//!
//! States, Hamiltonians and eigenframes are built from the SU(3) Euler-angle
//! parameterization
//! `D = e^{i l3 alpha} e^{i l2 beta} e^{i l3 gamma} e^{i l5 theta} e^{i l3 a} e^{i l2 b} e^{i l3 c} e^{i l8 phi}`.
//! From there the crate provides
//!
//! * pure-state density matrices and their Gell-Mann coordinates ([`state`]),
//! * the abelian Berry connection, its curvature and loop phases ([`abelian`]),
//! * the non-abelian connection of the doubly degenerate Hamiltonian family
//!   and path-ordered holonomies ([`nonabelian`]),
//! * direct Schroedinger evolution to check the adiabatic limit ([`adiabatic`]).
//!
//! Every closed form is paired with an independent numerical route
//! (finite differences, quadrature, ODE evolution) in the test suites and in
//! the `su3phase verify` command.

pub mod abelian;
pub mod adiabatic;
pub mod cli;
pub mod error;
pub mod euler;
pub mod gellmann;
pub mod nonabelian;
pub mod path;
pub mod report;
pub mod smallcomplex;
pub mod spec;
pub mod state;
pub mod suites;

pub use error::{Error, Result};
pub use euler::EulerAngles;
pub use gellmann::AlgebraVector8;
pub use path::{Coord, Keyframe, ParameterPath};
pub use smallcomplex::{ComplexMatrix3, ComplexVector3, DynMatrix, C64};
