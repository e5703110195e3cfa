//! Exact arithmetic: rationals, univariate and bivariate polynomials, real
//! algebraic numbers and simple real number fields.

pub mod bipoly;
pub mod factor;
pub mod field;
pub mod poly;
pub mod real;

pub type Rational = num::BigRational;

pub use bipoly::{gcd_bipoly, is_squarefree, squarefree_part, BiPoly, Exp};
pub use field::{field_join, sign_of, Join, Num, NumberField};
pub use poly::{Coef, Poly, UPoly};
pub use real::{isolate_real_roots, AlgebraicReal, RealRoot};
