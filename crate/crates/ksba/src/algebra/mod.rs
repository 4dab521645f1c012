//! Exact arithmetic: rationals, first-order ε-numbers, polynomials, and the
//! projective line.

mod eps;
mod parse;
mod poly;
mod proj;
mod rat;
mod upoly;

pub use eps::{eps_compare, EpsNum, EpsQuad};
pub use parse::{parse_poly, parse_poly_in, VARIABLES};
pub use poly::{poly_substitute, Poly, RationalFunction};
pub use proj::{mobius_apply, Mobius, ProjPoint};
pub use rat::Rat;
pub use upoly::{content_in, gcd2, is_squarefree2, resultant_in, UPoly};
