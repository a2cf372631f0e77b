//! Embedded resolution of affine hypersurface singularities by iterated
//! blow-ups at non-singular centers, together with the invariants that can
//! be read off the resulting tree of charts: intersection matrix and dual
//! graph, discrepancies, log-canonical threshold, topological zeta function,
//! monodromy characteristic polynomial and the normal-crossing
//! Bernstein-Sato polynomial.
//!
//! All arithmetic is exact over the rationals.

pub mod blowup;
pub mod divisors;
pub mod error;
pub mod ideal;
pub mod invariants;
pub mod parse;
pub mod poly;
pub mod resolve;
pub mod ring;
pub mod univar;
pub mod zeta;

pub use error::Error;
pub use ideal::Ideal;
pub use poly::{Poly, Rat};
pub use ring::{Monomial, Ring, TermOrder};
pub use univar::{RationalFunction, UnivariatePoly};

pub type Result<T> = std::result::Result<T, Error>;
