//! Exact factorization-method engine.
//!
//! Ladder operators for the 1D, 2D and 3D oscillators and the 2D and 3D
//! Coulomb problems, their operator Rodrigues formulas, and normalized
//! eigenfunctions checked symbolically and by quadrature. Units are
//! dimensionless throughout (`hbar = M = omega = e^2 = a0 = 1`), and one
//! coordinate symbol `x` stands for `x`, `r` and `rho`.
//!
//! Polynomial code is generic over [`num::Coefficient`], so the same
//! recurrences run over exact rationals, `f64` and `f32`.

pub mod algebra;
pub mod dsl;
pub mod error;
pub mod highprec;
pub mod num;
pub mod poly;
pub mod quadrature;
pub mod rodrigues;
pub mod scalar;
pub mod systems;
pub mod verify;
pub mod wavefunction;

pub use algebra::{normal_order, FnState, Format, FunctionFactor, OpAst, OpExpr};
pub use error::{Error, Result};
pub use num::{Coefficient, Rational};
pub use poly::{Argument, Poly, Polynomial};
pub use scalar::{Gaussian, Scalar};
pub use systems::{QuantumNumbers, SystemKind};
pub use wavefunction::{GroundNormConstant, Wavefunction};

/// Polynomial over exact rationals.
pub type ExactPoly = Poly<Rational>;
pub type Poly64 = Poly<f64>;
pub type Poly32 = Poly<f32>;
/// A physical system together with its chain of partner Hamiltonians.
pub type SystemSpec = SystemKind;
