//! GIT stability of eight points on the projective line, the strictly
//! semistable closed-orbit types, and stability on the Kirwan blow-up.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::algebra::{EpsNum, Mobius, ProjPoint, Rat};
use crate::error::{precondition, Error, Result};

/// An ordered 8-tuple of points on the projective line.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<ProjPoint>", into = "Vec<ProjPoint>")]
pub struct Configuration {
    points: Vec<ProjPoint>,
}

impl TryFrom<Vec<ProjPoint>> for Configuration {
    type Error = Error;
    fn try_from(points: Vec<ProjPoint>) -> Result<Self> {
        Configuration::new(points)
    }
}

impl From<Configuration> for Vec<ProjPoint> {
    fn from(c: Configuration) -> Self {
        c.points
    }
}

impl Configuration {
    pub fn new(points: Vec<ProjPoint>) -> Result<Self> {
        if points.len() != 8 {
            return Err(Error::DimensionMismatch { expected: 8, got: points.len() });
        }
        Ok(Configuration { points })
    }

    /// Finite points `[λ_i : 1]`.
    pub fn from_values(values: &[Rat]) -> Result<Self> {
        Configuration::new(values.iter().cloned().map(ProjPoint::finite).collect())
    }

    pub fn from_ints(values: [i64; 8]) -> Self {
        Configuration { points: values.iter().map(|&v| ProjPoint::int(v)).collect() }
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    /// The point with 1-based index `i`.
    pub fn point(&self, i: usize) -> &ProjPoint {
        &self.points[i - 1]
    }

    /// Distinct values with the 1-based indices landing on them, ordered by
    /// smallest index.
    pub fn clusters(&self) -> Vec<(ProjPoint, Vec<usize>)> {
        let mut out: Vec<(ProjPoint, Vec<usize>)> = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            match out.iter_mut().find(|(q, _)| q == p) {
                Some((_, idx)) => idx.push(i + 1),
                None => out.push((p.clone(), vec![i + 1])),
            }
        }
        out
    }

    pub fn max_multiplicity(&self) -> usize {
        self.clusters().iter().map(|(_, i)| i.len()).max().unwrap_or(0)
    }

    pub fn distinct_count(&self) -> usize {
        self.clusters().len()
    }

    /// The diagonal action of `m`.
    pub fn transform(&self, m: &Mobius) -> Configuration {
        Configuration { points: self.points.iter().map(|p| m.apply(p)).collect() }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.points.iter().join(", "))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum StabilityClass {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// At most three coincident points is stable, exactly four strictly
/// semistable, five or more unstable.
pub fn classify_stability(cfg: &Configuration) -> StabilityClass {
    match cfg.max_multiplicity() {
        0..=3 => StabilityClass::Stable,
        4 => StabilityClass::StrictlySemistable,
        _ => StabilityClass::Unstable,
    }
}

/// The kind of a 4+4 split, from how many indices of `I` lie in `{1,2,3,4}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    A,
    B,
    C,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::A, Kind::B, Kind::C];

    /// Kind of a 4-element index set with `k` elements in `{1,2,3,4}`.
    pub fn from_overlap(k: usize) -> Option<Kind> {
        match k {
            2 => Some(Kind::A),
            1 | 3 => Some(Kind::B),
            0 | 4 => Some(Kind::C),
            _ => None,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::A => "a",
            Kind::B => "b",
            Kind::C => "c",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind> {
        match s.trim() {
            "a" | "A" => Ok(Kind::A),
            "b" | "B" => Ok(Kind::B),
            "c" | "C" => Ok(Kind::C),
            t => Err(Error::Parse(format!("unknown type `{t}`, expected a, b or c"))),
        }
    }
}

pub(crate) fn validate_subset(indices: &[usize]) -> Result<[usize; 4]> {
    if indices.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: indices.len() });
    }
    let mut s: Vec<usize> = indices.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != 4 || s.iter().any(|&i| !(1..=8).contains(&i)) {
        return precondition(format!("{indices:?} is not a 4-element subset of 1..8"));
    }
    Ok([s[0], s[1], s[2], s[3]])
}

pub(crate) fn complement(i: &[usize; 4]) -> [usize; 4] {
    let c: Vec<usize> = (1..=8).filter(|k| !i.contains(k)).collect();
    [c[0], c[1], c[2], c[3]]
}

/// A strictly semistable closed-orbit type: the split `{I, I^c}` of the
/// indices into two clusters of four. `I` is stored as the lexicographically
/// smaller of the two sides, so it always contains 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct SSSType {
    pub kind: Kind,
    pub partition: [usize; 4],
}

impl SSSType {
    pub fn from_partition(indices: &[usize]) -> Result<SSSType> {
        let i = validate_subset(indices)?;
        let c = complement(&i);
        let partition = i.min(c);
        let k = partition.iter().filter(|&&x| x <= 4).count();
        let kind = Kind::from_overlap(k).expect("0..=4");
        Ok(SSSType { kind, partition })
    }

    pub fn complement(&self) -> [usize; 4] {
        complement(&self.partition)
    }
}

impl fmt::Display for SSSType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type {} I={{{}}}", self.kind, self.partition.iter().join(","))
    }
}

/// The type of a configuration made of exactly two values of multiplicity four.
pub fn closed_orbit_type(cfg: &Configuration) -> Option<SSSType> {
    let cl = cfg.clusters();
    if cl.len() != 2 || cl[0].1.len() != 4 {
        return None;
    }
    SSSType::from_partition(&cl[0].1).ok()
}

/// All unordered splits `{I, I^c}` of the given kind.
pub fn components(kind: Kind) -> Vec<SSSType> {
    (1..=8)
        .combinations(4)
        .filter_map(|s| SSSType::from_partition(&s).ok())
        .filter(|t| t.kind == kind)
        .unique()
        .collect()
}

/// Number of connected components of the type locus.
pub fn component_count(kind: Kind) -> usize {
    components(kind).len()
}

/// First-order separation data at a closed-orbit point: `λ_i` for the
/// indices of each cluster.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct NormalDirection {
    pub lambda: [Rat; 8],
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum KirwanPoint {
    PlainConfig(Configuration),
    ExceptionalPoint { base: Configuration, sss_type: SSSType, normal: NormalDirection },
}

/// Stability on the Kirwan blow-up.
///
/// Off the exceptional divisor this is GIT stability. On it, a point is
/// stable iff it avoids both strict transforms, i.e. neither cluster's
/// λ-values are all equal.
pub fn kirwan_stable(p: &KirwanPoint) -> Result<bool> {
    match p {
        KirwanPoint::PlainConfig(c) => Ok(classify_stability(c) == StabilityClass::Stable),
        KirwanPoint::ExceptionalPoint { base, sss_type, normal } => {
            match closed_orbit_type(base) {
                None => precondition("exceptional point over a base without closed orbit"),
                Some(t) if t != *sss_type => precondition(format!(
                    "base has {t} but the exceptional point claims {sss_type}"
                )),
                Some(t) => {
                    let all_equal = |idx: &[usize; 4]| {
                        idx.iter().all(|&i| normal.lambda[i - 1] == normal.lambda[idx[0] - 1])
                    };
                    Ok(!all_equal(&t.partition) && !all_equal(&t.complement()))
                }
            }
        }
    }
}

fn exact_log2(r: &Rat) -> Option<i32> {
    let is_pow2 = |n: &num_bigint::BigInt| {
        let n = n.magnitude();
        n.count_ones() == 1
    };
    if !r.is_positive() || !is_pow2(r.numer()) || !is_pow2(r.denom()) {
        return None;
    }
    let bits = |n: &num_bigint::BigInt| n.bits() as i32 - 1;
    Some(bits(r.numer()) - bits(r.denom()))
}

/// Multiplier of the Möbius map `m` at a fixed point `p`: the derivative in
/// a local coordinate at `p`.
fn multiplier_at(m: &Mobius, p: &ProjPoint) -> Rat {
    let (a, c, d) = (m.entry(0, 0), m.entry(1, 0), m.entry(1, 1));
    let det = m.det();
    match p.value() {
        Some(x) => {
            let den = c * x + d;
            det / (&den * &den)
        }
        // Local coordinate w = 1/x; w ↦ (c + d w)/(a + b w) near w = 0.
        None => det / (a * a),
    }
}

/// Weights of the stabilizer torus on the six normal coordinates at a
/// closed-orbit configuration, listed in decreasing order.
///
/// The torus is `diag(2, 1/2)` conjugated to fix both cluster values, with
/// the `I`-cluster (the one containing index 1) as its attracting side. Each
/// cluster contributes its four displacements modulo the barycenter
/// direction, three coordinates scaling by the multiplier at that cluster.
pub fn normal_weights(cfg: &Configuration) -> Result<Vec<i32>> {
    if closed_orbit_type(cfg).is_none() {
        return precondition("normal weights need a closed-orbit configuration");
    }
    let cl = cfg.clusters();
    let (p, q) = (&cl[0].0, &cl[1].0);
    // g sends p to 0 and q to ∞.
    let g = Mobius::new(p.b().clone(), -p.a(), q.b().clone(), -q.a())?;
    let torus = Mobius::new(Rat::int(2), Rat::zero(), Rat::zero(), Rat::new(1, 2))?;
    let stab = g.inverse().compose(&torus).compose(&g);
    let mut out = Vec::with_capacity(6);
    for (pt, idx) in &cl {
        debug_assert_eq!(stab.apply(pt), *pt);
        let w = exact_log2(&multiplier_at(&stab, pt))
            .ok_or_else(|| Error::Internal("torus multiplier is not a power of 2".into()))?;
        // Displacements of the cluster, minus the barycenter line.
        let dim = idx.len() - 1;
        out.extend(std::iter::repeat(w).take(dim));
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    Ok(out)
}

/// Hassett stability for equal weights on a single smooth rational curve:
/// at least three distinct points, and total weight at most one at each.
pub fn hassett_stable(cfg: &Configuration, weight: &EpsNum) -> bool {
    let cl = cfg.clusters();
    cl.len() >= 3
        && cl.iter().all(|(_, idx)| weight.scale(&Rat::int(idx.len() as i64)) <= EpsNum::one())
}
