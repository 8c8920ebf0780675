//! Weighted L² invariants of Coxeter groups: exact growth series, the
//! deformed Hecke algebra, finite slices of the Davis complex and numerical
//! estimates of weighted L² Betti numbers, cross-checked against balls in
//! right-angled buildings.
//!
//! ```
//! use l2coxeter::{growth::growth_series, CoxeterSystem};
//!
//! let w = growth_series(&CoxeterSystem::infinite_dihedral()).unwrap();
//! assert_eq!(w.render(), "(1+t)/(1-t)");
//! ```

pub mod building;
pub mod cache;
pub mod coxeter;
pub mod davis;
pub mod growth;
pub mod hecke;
mod error;
pub mod numfield;
pub mod poly;
pub mod scalar;
pub mod spectral;
pub mod verify;

pub use building::{BuildingSlice, Chamber};
pub use coxeter::{ArithmeticMode, Ball, CoxeterSystem, GenSet, GroupElement, SphericalSubset};
pub use error::{Error, Result};
pub use davis::{Cell, Cellulation, ComplexSlice};
pub use hecke::HeckeElement;
pub use poly::{Poly, RationalFunction};
pub use scalar::Scalar;
pub use spectral::{BettiEstimate, CellComplex, Scheme, SolverOptions};
