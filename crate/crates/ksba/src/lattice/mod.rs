//! Numerical divisor classes on the surfaces appearing in the stable limits:
//! pairings, canonical classes, blow-ups, log divisors and positivity.

mod catalog;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::algebra::{EpsNum, EpsQuad, Rat};
use crate::error::{precondition, Error, Result};

pub use catalog::{catalog, catalog_ids};

/// Coefficients over a surface's basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct DivisorClass {
    pub coeffs: Vec<EpsNum>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<EpsNum>) -> Self {
        DivisorClass { coeffs }
    }

    pub fn from_rats(c: &[Rat]) -> Self {
        DivisorClass { coeffs: c.iter().cloned().map(EpsNum::constant).collect() }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        DivisorClass { coeffs: c.iter().map(|&k| EpsNum::constant(Rat::int(k))).collect() }
    }

    pub fn zero(n: usize) -> Self {
        DivisorClass { coeffs: vec![EpsNum::zero(); n] }
    }

    /// The `i`-th basis vector.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut d = DivisorClass::zero(n);
        d.coeffs[i] = EpsNum::one();
        d
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &EpsNum) -> Self {
        DivisorClass { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        DivisorClass { coeffs: self.coeffs.iter().map(|a| a.scale(r)).collect() }
    }

    /// Appends zero coefficients up to length `n`.
    fn extended(&self, n: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(n, EpsNum::zero());
        DivisorClass { coeffs: c }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coeffs.iter().join(", "))
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: &DivisorClass) -> DivisorClass {
        assert_eq!(self.len(), o.len(), "classes over different bases");
        DivisorClass { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: &DivisorClass) -> DivisorClass {
        self + &(-o)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

/// How a curve passes through a marked point.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Incidence {
    pub curve: String,
    pub multiplicity: u32,
    /// Valuation for the weight-2 blow-up (weights 1 and 2 on the two local
    /// coordinates).
    pub weighted_valuation: u32,
}

/// A point that can be blown up, with the test curves through it.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MarkedPoint {
    pub label: String,
    pub incidences: Vec<Incidence>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SingularPoint {
    pub location: String,
    pub kind: String,
}

/// A surface as a lattice of named classes with an exact pairing.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub name: String,
    pub basis: Vec<String>,
    pub pairing: Vec<Vec<Rat>>,
    pub canonical: DivisorClass,
    pub test_curves: Vec<(String, DivisorClass)>,
    pub singular_points: Vec<SingularPoint>,
    pub points: Vec<MarkedPoint>,
    /// Further named classes, such as a branch divisor given by its pairings.
    pub classes: Vec<(String, DivisorClass)>,
}

impl SurfaceModel {
    /// Checks the shape and symmetry of the data.
    pub fn validate(&self) -> Result<()> {
        let n = self.basis.len();
        if self.pairing.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.pairing.len() });
        }
        for (i, row) in self.pairing.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            for j in 0..n {
                if row[j] != self.pairing[j][i] {
                    return precondition(format!("{}: pairing is not symmetric", self.name));
                }
            }
        }
        let classes = std::iter::once(&self.canonical)
            .chain(self.test_curves.iter().map(|(_, c)| c))
            .chain(self.classes.iter().map(|(_, c)| c));
        for c in classes {
            if c.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: c.len() });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The basis element, test curve or named class called `name`.
    pub fn class(&self, name: &str) -> Result<DivisorClass> {
        if let Some(i) = self.basis.iter().position(|b| b == name) {
            return Ok(DivisorClass::unit(self.dim(), i));
        }
        self.test_curves
            .iter()
            .chain(&self.classes)
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.clone())
            .ok_or_else(|| Error::UnknownLabel(format!("{}: {name}", self.name)))
    }

    fn check(&self, d: &DivisorClass) -> Result<()> {
        if d.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: d.len() });
        }
        Ok(())
    }

    /// The class with the given pairings against the basis, found by exact
    /// elimination. When the pairing is degenerate the class is determined
    /// numerically only; free coordinates are set to zero.
    pub fn class_from_pairings(&self, column: &[Rat]) -> Result<DivisorClass> {
        let n = self.dim();
        if column.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: column.len() });
        }
        let mut m: Vec<Vec<Rat>> = self
            .pairing
            .iter()
            .zip(column)
            .map(|(row, c)| {
                let mut r = row.clone();
                r.push(c.clone());
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..n).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let inv = m[row][col].recip().expect("nonzero pivot");
            for k in col..=n {
                m[row][k] = &m[row][k] * &inv;
            }
            for r in 0..n {
                if r != row && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for k in col..=n {
                        let t = &f * &m[row][k];
                        m[r][k] -= &t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if m[row..].iter().any(|r| !r[n].is_zero()) {
            return precondition(format!("{}: no class has pairings {column:?}", self.name));
        }
        let mut v = vec![Rat::zero(); n];
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = m[r][n].clone();
        }
        Ok(DivisorClass::from_rats(&v))
    }

    /// Whether the two classes have the same pairing with every basis element.
    pub fn numerically_equal(&self, a: &DivisorClass, b: &DivisorClass) -> Result<bool> {
        let d = a - b;
        for i in 0..self.dim() {
            if !pair(self, &d, &DivisorClass::unit(self.dim(), i))?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Pairings with the basis, the numerical fingerprint of a class.
    pub fn pairing_vector(&self, d: &DivisorClass) -> Result<Vec<EpsNum>> {
        (0..self.dim()).map(|i| pair(self, d, &DivisorClass::unit(self.dim(), i))).collect()
    }
}

/// The intersection number, truncated at first order in ε.
pub fn pair(s: &SurfaceModel, a: &DivisorClass, b: &DivisorClass) -> Result<EpsNum> {
    Ok(pair_exact(s, a, b)?.truncate())
}

/// The intersection number with its ε² term.
pub fn pair_exact(s: &SurfaceModel, a: &DivisorClass, b: &DivisorClass) -> Result<EpsQuad> {
    s.check(a)?;
    s.check(b)?;
    let mut acc = EpsQuad::default();
    for (i, ai) in a.coeffs.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate() {
            let g = &s.pairing[i][j];
            if g.is_zero() || bj.is_zero() {
                continue;
            }
            acc = &acc + &ai.mul_exact(bj).scale(g);
        }
    }
    Ok(acc)
}

/// `K + conductor + coeff·branch`.
pub fn log_divisor(
    s: &SurfaceModel,
    conductor: &DivisorClass,
    branch: &DivisorClass,
    coeff: &EpsNum,
) -> Result<DivisorClass> {
    s.check(conductor)?;
    s.check(branch)?;
    Ok(&(&s.canonical + conductor) + &branch.scale(coeff))
}

/// Blows up a marked point. Weight 1 is the ordinary blow-up; weight 2 is
/// the weighted blow-up with weights (1, 2), whose exceptional curve has
/// self-intersection −1/2 and discrepancy 2.
///
/// The basis gains the exceptional class `e_<label>`. Old classes become
/// pullbacks; each test curve through the point also gets its strict
/// transform `<curve>@<label>`, and `e_<label>` becomes a test curve.
pub fn blow_up(s: &SurfaceModel, point: &str, weight: u32) -> Result<SurfaceModel> {
    let (e2, discrepancy) = match weight {
        1 => (Rat::int(-1), 1),
        2 => (Rat::new(-1, 2), 2),
        w => return precondition(format!("blow-up weight must be 1 or 2, got {w}")),
    };
    let pos = s
        .points
        .iter()
        .position(|p| p.label == point)
        .ok_or_else(|| Error::UnknownLabel(format!("{}: point {point}", s.name)))?;
    let n = s.dim();
    let mut t = s.clone();
    t.name = format!("Bl_{point}({})", s.name);
    let e_name = format!("e_{point}");
    t.basis.push(e_name.clone());
    for row in t.pairing.iter_mut() {
        row.push(Rat::zero());
    }
    let mut last = vec![Rat::zero(); n];
    last.push(e2);
    t.pairing.push(last);
    let e = DivisorClass::unit(n + 1, n);
    t.canonical = &s.canonical.extended(n + 1) + &e.scale_rat(&Rat::int(discrepancy));
    t.test_curves = s.test_curves.iter().map(|(k, c)| (k.clone(), c.extended(n + 1))).collect();
    t.classes = s.classes.iter().map(|(k, c)| (k.clone(), c.extended(n + 1))).collect();
    let center = t.points.remove(pos);
    for inc in &center.incidences {
        let c = s.class(&inc.curve)?.extended(n + 1);
        let m = if weight == 1 { inc.multiplicity } else { inc.weighted_valuation };
        let strict = &c - &e.scale_rat(&Rat::int(m as i64));
        t.test_curves.push((format!("{}@{point}", inc.curve), strict));
    }
    t.test_curves.push((e_name, e));
    t.validate()?;
    Ok(t)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Verdict {
    AmpleCertified,
    Degenerate(Vec<String>),
    Negative(Vec<String>),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PositivityReport {
    pub values: Vec<(String, EpsNum)>,
    pub verdict: Verdict,
}

/// Pairs `d` with every test curve. Strict positivity on all of them is the
/// ampleness certificate, valid when the test curves span the cone of curves
/// (true for the catalog models).
pub fn positivity_report(s: &SurfaceModel, d: &DivisorClass) -> Result<PositivityReport> {
    let mut values = Vec::new();
    for (name, c) in &s.test_curves {
        values.push((name.clone(), pair(s, d, c)?));
    }
    let zero = EpsNum::zero();
    let neg: Vec<String> = values.iter().filter(|(_, v)| *v < zero).map(|(n, _)| n.clone()).collect();
    let deg: Vec<String> = values.iter().filter(|(_, v)| v.is_zero()).map(|(n, _)| n.clone()).collect();
    let verdict = if !neg.is_empty() {
        Verdict::Negative(neg)
    } else if !deg.is_empty() {
        Verdict::Degenerate(deg)
    } else {
        Verdict::AmpleCertified
    };
    Ok(PositivityReport { values, verdict })
}

/// Test curves on which `d` is numerically trivial.
pub fn contraction_rulings(s: &SurfaceModel, d: &DivisorClass) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (name, c) in &s.test_curves {
        if pair(s, d, c)?.is_zero() {
            out.push(name.clone());
        }
    }
    Ok(out)
}

/// The zero curves of a log class sorted into fibrations.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ContractionEvidence {
    /// One representative per numerical class of zero curves with `C² = 0`.
    pub rulings: Vec<String>,
    /// Zero curves with `C² < 0` that pair trivially with a ruling, i.e.
    /// components of its reducible fibers.
    pub fiber_components: Vec<String>,
    /// Zero curves fitting neither description.
    pub stray: Vec<String>,
}

impl ContractionEvidence {
    /// A single fibration accounts for every zero curve.
    pub fn is_single_ruling(&self) -> bool {
        self.rulings.len() == 1 && self.stray.is_empty()
    }
}

pub fn contraction_evidence(s: &SurfaceModel, d: &DivisorClass) -> Result<ContractionEvidence> {
    let zero = contraction_rulings(s, d)?;
    let mut ev = ContractionEvidence::default();
    let mut ruling_classes: Vec<(Vec<EpsNum>, DivisorClass)> = Vec::new();
    let mut negative = Vec::new();
    for name in zero {
        let c = s.class(&name)?;
        let sq = pair(s, &c, &c)?;
        if sq.is_zero() {
            let fp = s.pairing_vector(&c)?;
            if !ruling_classes.iter().any(|(f, _)| *f == fp) {
                ruling_classes.push((fp, c));
                ev.rulings.push(name);
            }
        } else if sq < EpsNum::zero() {
            negative.push((name, c));
        } else {
            ev.stray.push(name);
        }
    }
    for (name, c) in negative {
        let mut in_fiber = false;
        for (_, f) in &ruling_classes {
            in_fiber |= pair(s, &c, f)?.is_zero();
        }
        if in_fiber {
            ev.fiber_components.push(name);
        } else {
            ev.stray.push(name);
        }
    }
    Ok(ev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1xp1_pairing() {
        let s = catalog("P1xP1").unwrap();
        let d = DivisorClass::from_ints(&[1, 1]);
        assert_eq!(pair(&s, &d, &d).unwrap(), EpsNum::constant(Rat::int(2)));
    }

    #[test]
    fn solve_for_class() {
        let s = catalog("P1xP1").unwrap();
        let c = s.class_from_pairings(&[Rat::int(3), Rat::int(5)]).unwrap();
        assert_eq!(c, DivisorClass::from_ints(&[5, 3]));
    }

    #[test]
    fn blow_up_basics() {
        let s = catalog("P1xP1").unwrap();
        let t = blow_up(&s, "p0", 1).unwrap();
        let e = t.class("e_p0").unwrap();
        assert_eq!(pair(&t, &e, &e).unwrap(), EpsNum::constant(Rat::int(-1)));
        let h = t.class("horizontal").unwrap();
        assert!(pair(&t, &h, &e).unwrap().is_zero());
        assert!(blow_up(&s, "nowhere", 1).is_err());
        let w = blow_up(&s, "p0", 2).unwrap();
        let e = w.class("e_p0").unwrap();
        assert_eq!(pair(&w, &e, &e).unwrap(), EpsNum::constant(Rat::new(-1, 2)));
    }

    fn eps(p: i64, q: i64) -> EpsNum {
        EpsNum::eps(Rat::new(p, q))
    }

    #[test]
    fn type_c_component_log_class() {
        let y = catalog("Ex5.7-Y1").unwrap();
        let l = log_divisor(&y, &y.class("D_Y1").unwrap(), &y.class("B_Y1").unwrap(), &EpsNum::half_one_plus_eps())
            .unwrap();
        let r = positivity_report(&y, &l).unwrap();
        let vals: Vec<EpsNum> = r.values.iter().map(|(_, v)| v.clone()).collect();
        assert_eq!(vals, vec![eps(1, 2), eps(3, 2), eps(2, 1), eps(1, 1)]);
        assert_eq!(r.verdict, Verdict::AmpleCertified);
    }

    #[test]
    fn central_type_a_contracts_horizontally() {
        let s = catalog("P1xP1").unwrap();
        let l = log_divisor(
            &s,
            &DivisorClass::from_ints(&[2, 0]),
            &DivisorClass::from_ints(&[0, 4]),
            &EpsNum::half_one_plus_eps(),
        )
        .unwrap();
        assert_eq!(l, DivisorClass::new(vec![EpsNum::zero(), eps(2, 1)]));
        assert_eq!(positivity_report(&s, &l).unwrap().verdict, Verdict::Degenerate(vec!["horizontal".into()]));
        let ev = contraction_evidence(&s, &l).unwrap();
        assert!(ev.is_single_ruling());
        assert_eq!(ev.rulings, vec!["horizontal".to_string()]);
    }

    #[test]
    fn central_type_b_contracts_diagonally() {
        let s = catalog("Ex5.5-central").unwrap();
        let l = DivisorClass::from_ints(&[2, 2, -2, -2]).scale(&eps(1, 1));
        let ev = contraction_evidence(&s, &l).unwrap();
        assert_eq!(ev.rulings, vec!["diagonal".to_string()]);
        assert_eq!(ev.fiber_components.len(), 4);
        assert!(ev.is_single_ruling());
    }

    #[test]
    fn flip_curve_is_trivial() {
        let s = catalog("Ex5.4-Pprime").unwrap();
        let e = s.class("e_p0").unwrap();
        let l = log_divisor(&s, &e, &s.class("B").unwrap(), &EpsNum::half_one_plus_eps()).unwrap();
        assert!(pair(&s, &s.class("horizontal@p0").unwrap(), &l).unwrap().is_zero());
    }

    #[test]
    fn singular_gram_is_checked() {
        let y = catalog("Ex5.7-Y1").unwrap();
        // L0 and 2D have equal pairings, so L0 and D columns must stay proportional.
        assert!(y.class_from_pairings(&[Rat::one(), Rat::one(), Rat::one(), Rat::zero()]).is_err());
        let l0 = y.class("L0").unwrap();
        let d2 = y.class("D_Y1").unwrap().scale_rat(&Rat::int(2));
        assert!(y.numerically_equal(&l0, &d2).unwrap());
    }
}
