//! Radial harmonic analysis on the quantum disc: q-special functions, the
//! q-difference Laplacian on the geometric lattice q^{-2j}, its
//! eigenfunctions and Green kernel, the spectral (Fourier-like) transform
//! with its Plancherel measure, and the principal-series action of the
//! quantized enveloping algebra of sl2 on boundary Laurent polynomials.

pub mod eigen;
pub mod error;
pub mod lattice;
pub mod qspecial;
pub mod transform;
pub mod uqsl2;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{Lattice, LatticeFunction, LatticeSample};
pub use qspecial::{Deformation, SeriesTolerance, SpectralParameter};
pub use transform::{SpectralFunction, SpectralGrid, SpectralSample};
pub use uqsl2::{LaurentPolynomial, LaurentTerm, ModuleWeight};
pub use verify::{run_suite, CheckResult, Suite, SuiteReport, VerifyParams};
