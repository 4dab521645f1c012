use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Rat;

/// `c + e·ε` with ε a formal positive infinitesimal, truncated at first order.
///
/// The derived ordering compares `c` first and then `e`, which is the order
/// of the real numbers `c + e·ε` for every sufficiently small `ε > 0`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct EpsNum {
    pub c: Rat,
    pub e: Rat,
}

impl EpsNum {
    pub fn new(c: Rat, e: Rat) -> Self {
        EpsNum { c, e }
    }

    pub fn constant(c: Rat) -> Self {
        EpsNum { c, e: Rat::zero() }
    }

    /// `e·ε`.
    pub fn eps(e: Rat) -> Self {
        EpsNum { c: Rat::zero(), e }
    }

    pub fn zero() -> Self {
        EpsNum::default()
    }

    pub fn one() -> Self {
        EpsNum::constant(Rat::one())
    }

    /// The boundary coefficient `(1+ε)/2`.
    pub fn half_one_plus_eps() -> Self {
        EpsNum::new(Rat::new(1, 2), Rat::new(1, 2))
    }

    /// The Hassett weight `1/4 + ε`.
    pub fn quarter_plus_eps() -> Self {
        EpsNum::new(Rat::new(1, 4), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && self.e.is_zero()
    }

    pub fn scale(&self, r: &Rat) -> Self {
        EpsNum::new(&self.c * r, &self.e * r)
    }

    /// Value at a concrete `ε`.
    pub fn eval(&self, eps: &Rat) -> Rat {
        &self.c + &self.e * eps
    }

    /// Untruncated product, a polynomial of degree two in ε.
    pub fn mul_exact(&self, o: &EpsNum) -> EpsQuad {
        EpsQuad {
            c0: &self.c * &o.c,
            c1: &self.c * &o.e + &self.e * &o.c,
            c2: &self.e * &o.e,
        }
    }
}

/// Lexicographic comparison of `(c, e)`.
pub fn eps_compare(u: &EpsNum, v: &EpsNum) -> Ordering {
    u.cmp(v)
}

impl fmt::Display for EpsNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_eps_terms(f, &[(&self.c, ""), (&self.e, "ε")])
    }
}

impl fmt::Debug for EpsNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_eps_terms(f: &mut fmt::Formatter<'_>, terms: &[(&Rat, &str)]) -> fmt::Result {
    let mut first = true;
    for (coef, unit) in terms {
        if coef.is_zero() {
            continue;
        }
        let mag = coef.abs();
        if first {
            if coef.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if coef.is_negative() { "-" } else { "+" })?;
        }
        if unit.is_empty() || !mag.is_one() {
            write!(f, "{mag}")?;
        }
        write!(f, "{unit}")?;
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl Add for &EpsNum {
    type Output = EpsNum;
    fn add(self, o: &EpsNum) -> EpsNum {
        EpsNum::new(&self.c + &o.c, &self.e + &o.e)
    }
}

impl Add for EpsNum {
    type Output = EpsNum;
    fn add(self, o: EpsNum) -> EpsNum {
        &self + &o
    }
}

impl Sub for &EpsNum {
    type Output = EpsNum;
    fn sub(self, o: &EpsNum) -> EpsNum {
        EpsNum::new(&self.c - &o.c, &self.e - &o.e)
    }
}

impl Sub for EpsNum {
    type Output = EpsNum;
    fn sub(self, o: EpsNum) -> EpsNum {
        &self - &o
    }
}

impl Mul for &EpsNum {
    type Output = EpsNum;
    /// Truncating product: the ε² term is dropped.
    fn mul(self, o: &EpsNum) -> EpsNum {
        EpsNum::new(&self.c * &o.c, &self.c * &o.e + &self.e * &o.c)
    }
}

impl Mul for EpsNum {
    type Output = EpsNum;
    fn mul(self, o: EpsNum) -> EpsNum {
        &self * &o
    }
}

impl Neg for &EpsNum {
    type Output = EpsNum;
    fn neg(self) -> EpsNum {
        EpsNum::new(-&self.c, -&self.e)
    }
}

impl Neg for EpsNum {
    type Output = EpsNum;
    fn neg(self) -> EpsNum {
        -&self
    }
}

/// `c0 + c1·ε + c2·ε²`, used where second-order quantities such as
/// self-intersections of ε-linear classes are needed exactly.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct EpsQuad {
    pub c0: Rat,
    pub c1: Rat,
    pub c2: Rat,
}

impl EpsQuad {
    pub fn new(c0: Rat, c1: Rat, c2: Rat) -> Self {
        EpsQuad { c0, c1, c2 }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        EpsQuad::new(&self.c0 * r, &self.c1 * r, &self.c2 * r)
    }

    /// Drops the ε² term.
    pub fn truncate(&self) -> EpsNum {
        EpsNum::new(self.c0.clone(), self.c1.clone())
    }
}

impl Add for &EpsQuad {
    type Output = EpsQuad;
    fn add(self, o: &EpsQuad) -> EpsQuad {
        EpsQuad::new(&self.c0 + &o.c0, &self.c1 + &o.c1, &self.c2 + &o.c2)
    }
}

impl fmt::Display for EpsQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_eps_terms(f, &[(&self.c0, ""), (&self.c1, "ε"), (&self.c2, "ε²")])
    }
}

impl fmt::Debug for EpsQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
