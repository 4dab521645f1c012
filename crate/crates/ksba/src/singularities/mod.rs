//! ADE classification of plane curve germs at the origin.

mod audit;
mod milnor;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{gcd2, parse_poly_in, EpsNum, Poly, Rat};
use crate::error::{precondition, Error, Result};

pub use audit::{audit_curve, CurveAudit, PointFilter, PointLocation, PointRecord};

/// A polynomial `f(x, y)` with `f(0, 0) = 0`, studied near the origin.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "Poly", into = "Poly")]
pub struct CurveGerm {
    f: Poly,
}

impl CurveGerm {
    pub fn new(f: Poly) -> Result<Self> {
        let f = f.with_vars(&["x".to_string(), "y".to_string()])?;
        if f.is_zero() {
            return precondition("the zero polynomial is not a curve germ");
        }
        if !f.constant_term().is_zero() {
            return precondition(format!("{f} does not vanish at the origin"));
        }
        Ok(CurveGerm { f })
    }

    pub fn parse(s: &str) -> Result<Self> {
        CurveGerm::new(parse_poly_in(s, &["x", "y"])?)
    }

    /// The germ of `f` at `(a, b)`, moved to the origin.
    pub fn at_point(f: &Poly, a: &Rat, b: &Rat) -> Result<Self> {
        let v = ["x", "y"];
        let mut subs = BTreeMap::new();
        subs.insert("x".to_string(), &Poly::var(&v, "x") + &Poly::constant(&v, a.clone()));
        subs.insert("y".to_string(), &Poly::var(&v, "y") + &Poly::constant(&v, b.clone()));
        let f = f.with_vars(&["x".to_string(), "y".to_string()])?;
        CurveGerm::new(f.compose(&subs))
    }

    /// The polynomial over `[x, y]`.
    pub fn f(&self) -> &Poly {
        &self.f
    }
}

impl TryFrom<Poly> for CurveGerm {
    type Error = Error;
    fn try_from(f: Poly) -> Result<Self> {
        CurveGerm::new(f)
    }
}

impl From<CurveGerm> for Poly {
    fn from(g: CurveGerm) -> Poly {
        g.f
    }
}

impl fmt::Display for CurveGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.f, f)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum MilnorNumber {
    Finite(u32),
    Infinite,
}

impl fmt::Display for MilnorNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MilnorNumber::Finite(m) => write!(f, "{m}"),
            MilnorNumber::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum NonSimpleReason {
    #[serde(rename = "multiplicity>=4")]
    MultiplicityAtLeast4,
    #[serde(rename = "non-reduced")]
    NonReduced,
    #[serde(rename = "triple-line-large-mu")]
    TripleLineLargeMu,
    #[serde(rename = "non-isolated")]
    NonIsolated,
}

impl fmt::Display for NonSimpleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NonSimpleReason::MultiplicityAtLeast4 => "multiplicity>=4",
            NonSimpleReason::NonReduced => "non-reduced",
            NonSimpleReason::TripleLineLargeMu => "triple-line-large-mu",
            NonSimpleReason::NonIsolated => "non-isolated",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum SingularityType {
    Smooth,
    A(u32),
    D(u32),
    E(u32),
    NonSimple(NonSimpleReason),
}

impl SingularityType {
    pub fn is_simple(&self) -> bool {
        !matches!(self, SingularityType::NonSimple(_))
    }

    /// The index of an A/D/E type.
    pub fn index(&self) -> Option<u32> {
        match self {
            SingularityType::A(n) | SingularityType::D(n) | SingularityType::E(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityType::Smooth => write!(f, "Smooth"),
            SingularityType::A(n) => write!(f, "A{n}"),
            SingularityType::D(n) => write!(f, "D{n}"),
            SingularityType::E(n) => write!(f, "E{n}"),
            SingularityType::NonSimple(r) => write!(f, "NonSimple({r})"),
        }
    }
}

pub fn multiplicity(g: &CurveGerm) -> u32 {
    g.f.order().expect("nonzero germ")
}

/// Milnor number: the local intersection multiplicity of the partials.
pub fn milnor_number(g: &CurveGerm) -> MilnorNumber {
    milnor::milnor(g)
}

/// Whether `f` has a repeated factor through the origin.
pub fn is_non_reduced(g: &CurveGerm) -> bool {
    let f = &g.f;
    let h = gcd2(&f.derivative("x"), &f.derivative("y"), "x", "y").expect("bivariate");
    let h = gcd2(f, &h, "x", "y").expect("bivariate");
    !h.is_constant() && h.constant_term().is_zero()
}

/// Number of distinct lines in a binary cubic form, from the degree of the
/// gcd of its partials: 0 → three lines, 1 → a double line, 2 → a triple line.
fn cubic_repeated_degree(h: &Poly) -> u32 {
    let g = gcd2(&h.derivative("x"), &h.derivative("y"), "x", "y").expect("bivariate");
    g.total_degree().unwrap_or(0)
}

pub fn classify_ade(g: &CurveGerm) -> SingularityType {
    use SingularityType::*;
    if is_non_reduced(g) {
        return NonSimple(NonSimpleReason::NonReduced);
    }
    let mu = match milnor_number(g) {
        MilnorNumber::Infinite => return NonSimple(NonSimpleReason::NonIsolated),
        MilnorNumber::Finite(m) => m,
    };
    match multiplicity(g) {
        1 => Smooth,
        2 => A(mu),
        3 => match cubic_repeated_degree(&g.f.homogeneous_part(3)) {
            0 => D(4),
            1 => D(mu),
            _ if (6..=8).contains(&mu) => E(mu),
            _ => NonSimple(NonSimpleReason::TripleLineLargeMu),
        },
        _ => NonSimple(NonSimpleReason::MultiplicityAtLeast4),
    }
}

/// Log canonicity of `(A², ((1+ε)/2)·{f = 0})` at the origin; holds exactly
/// for the simple germs.
pub fn is_lc_pair(g: &CurveGerm, coeff: &EpsNum) -> Result<bool> {
    if *coeff != EpsNum::half_one_plus_eps() {
        return precondition(format!("only the coefficient (1+ε)/2 is supported, got {coeff}"));
    }
    Ok(classify_ade(g).is_simple())
}

/// The branch curve germ at a collision of the given points.
///
/// Points with indices in the pattern are moved to `x = 0`; the remaining
/// points of `{1..4}` sit at 1, 2, 3 and those of `{5..8}` at −1, −2, −3.
/// The germ is taken where the collision is worst: at `y0 = 0` when two
/// points of `{1..4}` collide, at `y1 = 0` when two of `{5..8}` do, and at
/// the transverse meeting point `y = 1` of the fiber `x = 0` with the rest of
/// the curve when one point of each half collides.
pub fn table1_germ(pattern: &[usize]) -> Result<CurveGerm> {
    let mut idx = pattern.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.len() != pattern.len() || idx.iter().any(|i| !(1..=8).contains(i)) {
        return precondition(format!("{pattern:?} is not a set of indices in 1..8"));
    }
    if idx.len() < 2 {
        return precondition("a collision needs at least two points");
    }
    if idx.len() > 3 {
        return precondition(format!("collision {pattern:?} of four or more points is not stable"));
    }
    let k0 = idx.iter().filter(|&&i| i <= 4).count();
    let k1 = idx.len() - k0;
    let mut lambda: [Rat; 8] = std::array::from_fn(|_| Rat::zero());
    let (mut lo, mut hi) = (1i64, -1i64);
    for i in 1..=8 {
        if idx.contains(&i) {
            continue;
        }
        if i <= 4 {
            lambda[i - 1] = Rat::int(lo);
            lo += 1;
        } else {
            lambda[i - 1] = Rat::int(hi);
            hi -= 1;
        }
    }
    let v = ["x", "y"];
    let x = Poly::var(&v, "x");
    let y = Poly::var(&v, "y");
    let prod = |ls: &[Rat]| {
        ls.iter().fold(Poly::constant(&v, Rat::one()), |a, l| &a * &(&x - &Poly::constant(&v, l.clone())))
    };
    let p = prod(&lambda[..4]);
    let q = prod(&lambda[4..]);
    // Chart y1 = 1: y(y²P + Q). Chart y0 = 1 with y = v: v(P + v²Q).
    let chart_a = &y * &(&(&y.pow(2) * &p) + &q);
    let chart_b = &y * &(&p + &(&y.pow(2) * &q));
    if k0 >= 2 {
        CurveGerm::new(chart_b)
    } else if k1 >= 2 {
        CurveGerm::new(chart_a)
    } else {
        // Other component y²P/x + Q/x meets x = 0 where y² = −Q'(0)/P'(0).
        let p1 = p.div_exact(&x).expect("x | P").eval(&[Rat::zero(), Rat::zero()])?;
        let q1 = q.div_exact(&x).expect("x | Q").eval(&[Rat::zero(), Rat::zero()])?;
        let y2 = -(q1 / p1);
        let ys = y2
            .sqrt()
            .ok_or_else(|| Error::Internal(format!("meeting point y² = {y2} is not rational")))?;
        CurveGerm::at_point(&chart_a, &Rat::zero(), &ys)
    }
}

/// Singularity type of the branch curve at the collision `pattern`.
pub fn table1_check(pattern: &[usize]) -> Result<SingularityType> {
    Ok(classify_ade(&table1_germ(pattern)?))
}
