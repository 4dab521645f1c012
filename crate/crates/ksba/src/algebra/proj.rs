use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rat;
use crate::error::{precondition, Error, Result};

/// A point `[a:b]` of the projective line with rational coordinates, stored
/// as `[λ:1]` or `[1:0]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    a: Rat,
    b: Rat,
}

impl ProjPoint {
    pub fn new(a: Rat, b: Rat) -> Result<Self> {
        if b.is_zero() {
            if a.is_zero() {
                return precondition("[0:0] is not a point of the projective line");
            }
            return Ok(ProjPoint::infinity());
        }
        Ok(ProjPoint { a: a / &b, b: Rat::one() })
    }

    pub fn finite(l: Rat) -> Self {
        ProjPoint { a: l, b: Rat::one() }
    }

    pub fn int(n: i64) -> Self {
        ProjPoint::finite(Rat::int(n))
    }

    pub fn infinity() -> Self {
        ProjPoint { a: Rat::one(), b: Rat::zero() }
    }

    pub fn is_infinity(&self) -> bool {
        self.b.is_zero()
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    /// The affine coordinate, `None` at infinity.
    pub fn value(&self) -> Option<&Rat> {
        (!self.is_infinity()).then_some(&self.a)
    }

    /// `a_p b_q - b_p a_q`, zero iff the points coincide.
    pub fn det(p: &ProjPoint, q: &ProjPoint) -> Rat {
        &p.a * &q.b - &p.b * &q.a
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.a)
        }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.a, self.b)
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    /// `inf`, `∞`, or a rational `p`/`p/q`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(ProjPoint::infinity()),
            t => Ok(ProjPoint::finite(t.parse()?)),
        }
    }
}

impl Serialize for ProjPoint {
    /// As the pair `["a", "b"]` of its normalized representative.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (&self.a, &self.b).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (a, b) = <(Rat, Rat)>::deserialize(d)?;
        ProjPoint::new(a, b).map_err(serde::de::Error::custom)
    }
}

/// Invertible 2×2 rational matrix acting on the projective line.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Mobius {
    m: [[Rat; 2]; 2],
}

impl Mobius {
    pub fn new(m00: Rat, m01: Rat, m10: Rat, m11: Rat) -> Result<Self> {
        let m = Mobius { m: [[m00, m01], [m10, m11]] };
        if m.det().is_zero() {
            return precondition("singular Möbius matrix");
        }
        Ok(m)
    }

    /// Integer entries, for tests and fixed constructions.
    ///
    /// # Panics
    /// If the matrix is singular.
    pub fn ints(m00: i64, m01: i64, m10: i64, m11: i64) -> Self {
        Mobius::new(Rat::int(m00), Rat::int(m01), Rat::int(m10), Rat::int(m11))
            .expect("nonsingular matrix")
    }

    pub fn identity() -> Self {
        Mobius::ints(1, 0, 0, 1)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.m[i][j]
    }

    pub fn det(&self) -> Rat {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let a = &self.m[0][0] * p.a() + &self.m[0][1] * p.b();
        let b = &self.m[1][0] * p.a() + &self.m[1][1] * p.b();
        ProjPoint::new(a, b).expect("invertible matrix maps points to points")
    }

    /// Matrix product `self · o`, acting as "first `o`, then `self`".
    pub fn compose(&self, o: &Mobius) -> Mobius {
        let e = |i: usize, j: usize| &self.m[i][0] * &o.m[0][j] + &self.m[i][1] * &o.m[1][j];
        Mobius { m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]] }
    }

    pub fn inverse(&self) -> Mobius {
        let d = self.det().recip().expect("nonsingular");
        Mobius {
            m: [
                [&self.m[1][1] * &d, -(&self.m[0][1] * &d)],
                [-(&self.m[1][0] * &d), &self.m[0][0] * &d],
            ],
        }
    }
}

/// `m` applied to `p`.
pub fn mobius_apply(m: &Mobius, p: &ProjPoint) -> ProjPoint {
    m.apply(p)
}

impl fmt::Debug for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl<'de> Deserialize<'de> for Mobius {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            m: [[Rat; 2]; 2],
        }
        let [[a, b], [c, e]] = Raw::deserialize(d)?.m;
        Mobius::new(a, b, c, e).map_err(serde::de::Error::custom)
    }
}
