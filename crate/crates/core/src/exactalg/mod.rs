//! Exact arithmetic: cyclotomic numbers, Laurent polynomials over them and
//! monomial substitutions of the parameter torus.

mod cyclotomic;
mod laurent;
mod linsolve;
mod monomial_map;

pub use cyclotomic::{cyclotomic_polynomial, totient, Cyclotomic, RootOfUnity};
pub use laurent::LaurentPolynomial;
pub use linsolve::solve_in_span;
pub use monomial_map::{reynolds, substitute, MonomialAffineMap};
