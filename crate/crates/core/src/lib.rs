//! Numerical laboratory for Bergman kernels under proper holomorphic maps.
//!
//! The library evaluates the Bergman kernels of the Cartan domain `R_II`
//! (2x2 complex symmetric matrices of operator norm < 1), the tetrablock
//! `E` (the image of `R_II` under `(z11, z22, z) -> (z11, z22, z11*z22 - z^2)`),
//! and kernels pushed forward through proper holomorphic maps via Bell's
//! transformation formula. On top of the kernel machinery it provides
//!
//! * the unitary operator `Gamma f = (1/sqrt(m)) (f o pi) Jpi` between
//!   Bergman spaces, its inverse and the orthogonal projection onto its
//!   range, realised exactly on sparse polynomials;
//! * seeded, deterministic Monte Carlo quadrature over the domains for
//!   statistical verification of the change-of-variables identity, the
//!   reproducing property and operator isometry;
//! * zero hunting for the tetrablock kernel: the axis-family polynomial,
//!   certified interior zero pairs and a grid scanner. The zero
//!   certificates witness that the tetrablock is not a Lu Qi-Keng domain.

pub mod geometry;
pub mod kernels;
pub mod lqk;
pub mod maps;
pub mod operators;
pub mod quadrature;
pub mod verify;

/// Complex scalar used throughout.
pub type C = num_complex::Complex64;

pub use geometry::{DomainDescriptor, DomainName, SampleBatch, SymPoint, TetraPoint};
pub use kernels::{Kernel, VolumeConstant};
pub use maps::{MapName, ProperMap, TransformGroup};
pub use operators::{Poly3, WeightFunction};
pub use quadrature::MCEstimate;
