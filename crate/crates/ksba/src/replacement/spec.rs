use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Poly, ProjPoint, Rat};
use crate::error::{precondition, Error, Result};
use crate::groups::{cross_ratio, Permutation};
use crate::stability::{validate_subset, Configuration, Kind, SSSType, StabilityClass};

/// The index set `I` that each kind's normal form expects.
pub fn normal_partition(kind: Kind) -> [usize; 4] {
    match kind {
        Kind::A => [1, 2, 5, 6],
        Kind::B => [1, 2, 3, 5],
        Kind::C => [1, 2, 3, 4],
    }
}

/// A one-parameter degeneration towards a closed-orbit configuration, given
/// by its type, one side `I` of the split and the normal direction λ.
///
/// Points of `I` move as `x0 = tλ_i`, the others as `t·x0 = λ_i`, in the
/// original labels. The normal forms are reached through
/// [`DegenerationSpec::relabeling`].
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct DegenerationSpec {
    kind: Kind,
    partition: [usize; 4],
    lambda: [Rat; 8],
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    kind: Kind,
    partition: Vec<usize>,
    lambda: Vec<Rat>,
}

impl TryFrom<RawSpec> for DegenerationSpec {
    type Error = Error;
    fn try_from(r: RawSpec) -> Result<Self> {
        let lambda: [Rat; 8] = r
            .lambda
            .try_into()
            .map_err(|v: Vec<Rat>| Error::DimensionMismatch { expected: 8, got: v.len() })?;
        DegenerationSpec::new(r.kind, &r.partition, lambda)
    }
}

impl From<DegenerationSpec> for RawSpec {
    fn from(s: DegenerationSpec) -> Self {
        RawSpec { kind: s.kind, partition: s.partition.to_vec(), lambda: s.lambda.to_vec() }
    }
}

/// Which of the degeneration hypotheses hold, in normal-form labels.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Hypotheses {
    /// The product of the four λ's that must not vanish.
    pub nonvanishing: bool,
    /// The `I`-side λ's are not all equal.
    pub first_cluster_spread: bool,
    /// The `I^c`-side λ's are not all equal.
    pub second_cluster_spread: bool,
    /// λ as a configuration has no value of multiplicity above four.
    pub semistable: bool,
}

impl Hypotheses {
    pub fn all(&self) -> bool {
        self.nonvanishing && self.first_cluster_spread && self.second_cluster_spread && self.semistable
    }
}

impl DegenerationSpec {
    /// Validates the partition against the kind and the degeneration hypotheses.
    pub fn new(kind: Kind, partition: &[usize], lambda: [Rat; 8]) -> Result<Self> {
        let p = validate_subset(partition)?;
        let t = SSSType::from_partition(&p)?;
        if t.kind != kind {
            return precondition(format!("partition {p:?} is of type {}, not {kind}", t.kind));
        }
        let s = DegenerationSpec { kind, partition: p, lambda };
        let h = s.hypotheses();
        if !h.all() {
            return precondition(format!("{s}: hypotheses fail: {h:?}"));
        }
        Ok(s)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn partition(&self) -> [usize; 4] {
        self.partition
    }

    pub fn lambda(&self) -> &[Rat; 8] {
        &self.lambda
    }

    /// The element ρ of H taking this spec to its kind's normal form: it maps
    /// the partition onto [`normal_partition`], swapping the halves first when
    /// the block sizes require it and otherwise preserving index order.
    pub fn relabeling(&self) -> Permutation {
        canonical_relabeling(self.kind, &self.partition)
    }

    /// λ in normal-form labels: entry `ρ(i)` is the original `λ_i`.
    pub fn normal_lambda(&self) -> [Rat; 8] {
        let rho = self.relabeling();
        let mut out: [Rat; 8] = std::array::from_fn(|_| Rat::zero());
        for i in 1..=8 {
            out[rho.apply(i) - 1] = self.lambda[i - 1].clone();
        }
        out
    }

    pub fn hypotheses(&self) -> Hypotheses {
        let l = self.normal_lambda();
        let at = |i: usize| &l[i - 1];
        let i = normal_partition(self.kind);
        let ic = crate::stability::complement(&i);
        let nonzero: &[usize] = match self.kind {
            Kind::A => &[3, 4, 7, 8],
            Kind::B => &[4, 6, 7, 8],
            Kind::C => &[5, 6, 7, 8],
        };
        let spread = |idx: &[usize; 4]| idx.iter().any(|&k| at(k) != at(idx[0]));
        let semistable = Configuration::from_values(&l)
            .map(|c| crate::stability::classify_stability(&c) != StabilityClass::Unstable)
            .unwrap_or(false);
        Hypotheses {
            nonvanishing: nonzero.iter().all(|&k| !at(k).is_zero()),
            first_cluster_spread: spread(&i),
            second_cluster_spread: spread(&ic),
            semistable,
        }
    }

    /// Applies a relabeling: point `i` becomes point `σ(i)`.
    pub fn act(&self, sigma: &Permutation) -> Result<DegenerationSpec> {
        let p: Vec<usize> = self.partition.iter().map(|&i| sigma.apply(i)).collect();
        let mut lambda: [Rat; 8] = std::array::from_fn(|_| Rat::zero());
        for i in 1..=8 {
            lambda[sigma.apply(i) - 1] = self.lambda[i - 1].clone();
        }
        let t = SSSType::from_partition(&p)?;
        DegenerationSpec::new(t.kind, &p, lambda)
    }
}

impl fmt::Display for DegenerationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self.lambda.iter().map(|r| r.to_string()).collect();
        write!(f, "type {} I={:?} λ=({})", self.kind, self.partition, l.join(", "))
    }
}

fn canonical_relabeling(kind: Kind, partition: &[usize; 4]) -> Permutation {
    let low = |i: &&usize| **i <= 4;
    let target = normal_partition(kind);
    let mut p = *partition;
    let swap = p.iter().filter(low).count() != target.iter().filter(low).count();
    if swap {
        for i in p.iter_mut() {
            *i = if *i <= 4 { *i + 4 } else { *i - 4 };
        }
        p.sort_unstable();
    }
    let mut img = [0usize; 8];
    for half in [1..=4, 5..=8] {
        let (src_in, src_out): (Vec<usize>, Vec<usize>) =
            half.clone().partition(|i| p.contains(i));
        let (dst_in, dst_out): (Vec<usize>, Vec<usize>) = half.partition(|i| target.contains(i));
        for (s, d) in src_in.iter().zip(&dst_in).chain(src_out.iter().zip(&dst_out)) {
            img[s - 1] = *d;
        }
    }
    let base = Permutation::new(img).expect("blocks of equal size");
    if swap {
        let s = Permutation::new([5, 6, 7, 8, 1, 2, 3, 4]).expect("half swap");
        base.compose(&s)
    } else {
        base
    }
}

fn finite(r: &Rat) -> ProjPoint {
    ProjPoint::finite(r.clone())
}

/// Cross-ratio of four marked points on a component's boundary line, if
/// they are pairwise distinct.
fn marked_cross_ratio(p: [ProjPoint; 4]) -> Result<Rat> {
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] == p[j] {
                return precondition(format!("marked points {} and {} coincide", p[i], p[j]));
            }
        }
    }
    let c = cross_ratio(&p[0], &p[1], &p[2], &p[3])?;
    c.value().cloned().ok_or_else(|| Error::Internal("cross-ratio of distinct points is ∞".into()))
}

/// The four marked points on the boundary of a component, in normal-form
/// labels: the two branch lines' intersections with `C` for type a, three
/// of them plus the conductor point for type b, the points on `T` for type c.
pub(crate) fn marked_points(spec: &DegenerationSpec, side: usize) -> [ProjPoint; 4] {
    let l = spec.normal_lambda();
    let f = |i: usize| finite(&l[i - 1]);
    match (spec.kind, side) {
        (Kind::A, 0) => [f(1), f(2), f(5), f(6)],
        (Kind::A, _) => [f(3), f(4), f(7), f(8)],
        (Kind::B, 0) => [f(1), f(2), f(3), ProjPoint::infinity()],
        (Kind::B, _) => [f(6), f(7), f(8), ProjPoint::int(0)],
        (Kind::C, 0) => [f(1), f(2), f(3), f(4)],
        (Kind::C, _) => [f(5), f(6), f(7), f(8)],
    }
}

/// The cross-ratio distinguishing stable limits over one exceptional divisor.
pub fn separation_invariant(spec: &DegenerationSpec) -> Result<Rat> {
    marked_cross_ratio(marked_points(spec, 0))
}

/// [`separation_invariant`] for each side, where defined.
pub fn component_invariants(spec: &DegenerationSpec) -> [Option<Rat>; 2] {
    [0, 1].map(|s| marked_cross_ratio(marked_points(spec, s)).ok())
}

/// The smallest of the six values `β, 1−β, 1/β, 1/(1−β), β/(β−1), (β−1)/β`.
pub fn cross_ratio_orbit_rep(beta: &Rat) -> Result<Rat> {
    if beta.is_zero() || beta.is_one() {
        return precondition(format!("{beta} is not the cross-ratio of distinct points"));
    }
    let one = Rat::one();
    let b = beta.clone();
    let omb = &one - &b;
    let inv = |r: &Rat| r.recip().expect("nonzero");
    let orbit = [b.clone(), omb.clone(), inv(&b), inv(&omb), &b / &(&b - &one), &(&b - &one) / &b];
    Ok(orbit.into_iter().min().expect("six values"))
}

/// The branch curve restricted to the exceptional component on `side`, in
/// that component's chart coordinates and normal-form labels.
pub fn component_branch_curve(spec: &DegenerationSpec, side: usize) -> Result<Poly> {
    if side > 1 {
        return precondition(format!("side must be 0 or 1, got {side}"));
    }
    let l = spec.normal_lambda();
    let lam = |i: usize| l[i - 1].clone();
    let vars: [&str; 5] = ["x0", "x1", "t", "y0", "y1"];
    let v = |n: &str| Poly::var(&vars, n);
    let c = |r: Rat| Poly::constant(&vars, r);
    let prod = |ps: Vec<Poly>| ps.into_iter().fold(c(Rat::one()), |a, b| &a * &b);
    // `u − t·λ_i` in the side-0 charts, `t − λ_i·u` in the side-1 charts.
    let lin0 = |i: usize| &v("x0") - &(&v("t") * &c(lam(i)));
    let lin1 = |i: usize| &v("t") - &(&v("x1") * &c(lam(i)));
    let sq = |n: &str| &v(n) * &v(n);
    let k = |idx: &[usize]| idx.iter().fold(Rat::one(), |a, &i| &a * &lam(i));
    let f = match (spec.kind, side) {
        (Kind::A, 0) => {
            &(&sq("y0") * &prod(vec![lin0(1), lin0(2)])).scale(&k(&[3, 4]))
                + &(&sq("y1") * &prod(vec![lin0(5), lin0(6)])).scale(&k(&[7, 8]))
        }
        (Kind::A, _) => &(&sq("y0") * &prod(vec![lin1(3), lin1(4)])) + &(&sq("y1") * &prod(vec![lin1(7), lin1(8)])),
        (Kind::B, 0) => {
            &prod(vec![lin0(1), lin0(2), lin0(3)]).scale(&lam(4)) + &(&sq("y1") * &lin0(5)).scale(&k(&[6, 7, 8]))
        }
        (Kind::B, _) => &(&sq("y0") * &lin1(4)) + &prod(vec![lin1(6), lin1(7), lin1(8)]),
        (Kind::C, 0) => &prod((1..=4).map(lin0).collect()) + &sq("y1").scale(&k(&[5, 6, 7, 8])),
        (Kind::C, _) => &sq("y0") + &prod((5..=8).map(lin1).collect()),
    };
    let used: Vec<String> = vars
        .iter()
        .filter(|n| f.degree_in(n) > 0)
        .map(|n| n.to_string())
        .collect();
    f.with_vars(&used)
}
