//! Relabeling groups acting on configurations, cross-ratios, canonical
//! forms modulo SL2, and the transposition identity for the double covers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{poly_substitute, Mobius, Poly, ProjPoint, Rat};
use crate::error::{precondition, Error, Result};
use crate::stability::Configuration;

/// A bijection of `{1..8}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    // 0-based images.
    img: [u8; 8],
}

impl Permutation {
    /// From the 1-based images `σ(1), …, σ(8)`.
    pub fn new(images: [usize; 8]) -> Result<Self> {
        let mut seen = [false; 8];
        let mut img = [0u8; 8];
        for (k, &i) in images.iter().enumerate() {
            if !(1..=8).contains(&i) || seen[i - 1] {
                return precondition(format!("{images:?} is not a permutation of 1..8"));
            }
            seen[i - 1] = true;
            img[k] = (i - 1) as u8;
        }
        Ok(Permutation { img })
    }

    pub fn identity() -> Self {
        Permutation { img: [0, 1, 2, 3, 4, 5, 6, 7] }
    }

    /// The transposition `(i j)`.
    pub fn transposition(i: usize, j: usize) -> Result<Self> {
        let mut im = [1, 2, 3, 4, 5, 6, 7, 8];
        if !(1..=8).contains(&i) || !(1..=8).contains(&j) {
            return precondition(format!("transposition ({i} {j}) out of range"));
        }
        im.swap(i - 1, j - 1);
        Permutation::new(im)
    }

    /// `σ(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.img[i - 1] as usize + 1
    }

    pub fn images(&self) -> [usize; 8] {
        self.img.map(|k| k as usize + 1)
    }

    /// `self ∘ o`: first `o`, then `self`.
    pub fn compose(&self, o: &Permutation) -> Permutation {
        Permutation { img: o.img.map(|k| self.img[k as usize]) }
    }

    pub fn inverse(&self) -> Permutation {
        let mut img = [0u8; 8];
        for (k, &v) in self.img.iter().enumerate() {
            img[v as usize] = k as u8;
        }
        Permutation { img }
    }

    /// Preserves or swaps the halves `{1..4}` and `{5..8}`.
    pub fn in_h(&self) -> bool {
        let low = |k: u8| k < 4;
        let first = low(self.img[0]);
        self.img[..4].iter().all(|&k| low(k) == first) && self.img[4..].iter().all(|&k| low(k) != first)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        let arr: [usize; 8] =
            v.try_into().map_err(|v: Vec<usize>| Error::DimensionMismatch { expected: 8, got: v.len() })?;
        Permutation::new(arr)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images().to_vec()
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, e.g. `(1 5)(2 3 4)`; the identity is `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = [false; 8];
        let mut any = false;
        for s in 0..8 {
            if seen[s] || self.img[s] as usize == s {
                continue;
            }
            let mut cyc = Vec::new();
            let mut k = s;
            while !seen[k] {
                seen[k] = true;
                cyc.push(k + 1);
                k = self.img[k] as usize;
            }
            write!(f, "({})", cyc.iter().join(" "))?;
            any = true;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum GroupSpec {
    S8,
    /// Permutations preserving or swapping `{1..4}` and `{5..8}`.
    H,
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "s8" => Ok(GroupSpec::S8),
            "h" => Ok(GroupSpec::H),
            t => Err(Error::Parse(format!("unknown group `{t}`, expected s8 or h"))),
        }
    }
}

/// All elements, in lexicographic order of their image arrays.
pub fn enumerate_group(g: GroupSpec) -> &'static [Permutation] {
    static S8: OnceLock<Vec<Permutation>> = OnceLock::new();
    static H: OnceLock<Vec<Permutation>> = OnceLock::new();
    let s8 = || {
        S8.get_or_init(|| {
            (0u8..8)
                .permutations(8)
                .map(|v| Permutation { img: v.try_into().expect("length 8") })
                .collect()
        })
    };
    match g {
        GroupSpec::S8 => s8(),
        GroupSpec::H => H.get_or_init(|| s8().iter().copied().filter(Permutation::in_h).collect()),
    }
}

/// Point `i` of the result is point `σ⁻¹(i)` of `cfg`.
pub fn act(sigma: &Permutation, cfg: &Configuration) -> Configuration {
    let inv = sigma.inverse();
    let pts = (1..=8).map(|i| cfg.point(inv.apply(i)).clone()).collect();
    Configuration::new(pts).expect("eight points")
}

/// `((p1−p3)(p2−p4)) / ((p1−p4)(p2−p3))`, evaluated with projective
/// determinants; the result is a point of the projective line so that the
/// value ∞ is representable.
pub fn cross_ratio(p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint, p4: &ProjPoint) -> Result<ProjPoint> {
    let d = ProjPoint::det;
    let num = d(p1, p3) * d(p2, p4);
    let den = d(p1, p4) * d(p2, p3);
    if num.is_zero() && den.is_zero() {
        return precondition("cross-ratio undefined: three of the four points coincide");
    }
    ProjPoint::new(num, den)
}

fn first_three_distinct(cfg: &Configuration) -> Result<[ProjPoint; 3]> {
    let cl = cfg.clusters();
    if cl.len() < 3 {
        return precondition(format!("{cfg} has fewer than three distinct points"));
    }
    Ok([cl[0].0.clone(), cl[1].0.clone(), cl[2].0.clone()])
}

/// The Möbius map sending the first three pairwise distinct points of `cfg`
/// (in index order) to ∞, 0, 1.
pub fn canonicalizing_map(cfg: &Configuration) -> Result<Mobius> {
    let [p, q, r] = first_three_distinct(cfg)?;
    let pr = ProjPoint::det(&p, &r);
    let qr = ProjPoint::det(&q, &r);
    Mobius::new(-(&pr * q.b()), &pr * q.a(), -(&qr * p.b()), &qr * p.a())
}

pub fn canonical_form_sl2(cfg: &Configuration) -> Result<Configuration> {
    Ok(cfg.transform(&canonicalizing_map(cfg)?))
}

fn cluster_profile(c: &Configuration) -> Vec<usize> {
    let mut v: Vec<usize> = c.clusters().iter().map(|(_, i)| i.len()).collect();
    v.sort_unstable();
    v
}

/// Whether some `σ ∈ g` carries `c1` to `c2`, exactly or modulo SL2.
pub fn same_orbit(c1: &Configuration, c2: &Configuration, g: GroupSpec, mod_sl2: bool) -> Result<bool> {
    if cluster_profile(c1) != cluster_profile(c2) {
        if mod_sl2 {
            first_three_distinct(c1)?;
            first_three_distinct(c2)?;
        }
        return Ok(false);
    }
    let target = if mod_sl2 { canonical_form_sl2(c2)? } else { c2.clone() };
    if mod_sl2 {
        first_three_distinct(c1)?;
    }
    Ok(enumerate_group(g).par_iter().any(|s| {
        let moved = act(s, c1);
        if mod_sl2 {
            canonical_form_sl2(&moved).is_ok_and(|m| m == target)
        } else {
            moved == target
        }
    }))
}

/// The orbit of `cfg` under `g`, as a sorted set of representatives
/// (canonical forms when `mod_sl2`).
pub fn orbit(cfg: &Configuration, g: GroupSpec, mod_sl2: bool) -> Result<Vec<Configuration>> {
    if mod_sl2 {
        first_three_distinct(cfg)?;
    }
    let set: BTreeSet<Configuration> = enumerate_group(g)
        .par_iter()
        .map(|s| {
            let m = act(s, cfg);
            if mod_sl2 {
                canonical_form_sl2(&m).expect("same cluster pattern")
            } else {
                m
            }
        })
        .collect();
    Ok(set.into_iter().collect())
}

fn branch_equation(lambda: &[Rat; 8]) -> Poly {
    let v = ["x", "y", "z"];
    let x = Poly::var(&v, "x");
    let y = Poly::var(&v, "y");
    let z = Poly::var(&v, "z");
    let lin = |l: &Rat| &x - &Poly::constant(&v, l.clone());
    let p = lambda[..4].iter().fold(Poly::constant(&v, Rat::one()), |a, l| &a * &lin(l));
    let q = lambda[4..].iter().fold(Poly::constant(&v, Rat::one()), |a, l| &a * &lin(l));
    &z.pow(2) - &(&y * &(&(&y.pow(2) * &p) + &q))
}

/// Checks that `z² = y(y²∏_{k≤4}(x−λ_k) + ∏_{k>4}(x−λ_k))` pulled back along
/// `(x, y, z) ↦ (x, r·y, r·z)` with `r = (x−λ_j)/(x−λ_i)` equals `r²` times
/// the same equation for `target`.
pub fn verify_transposition_identity_with_target(
    lambda: &[Rat; 8],
    i: usize,
    j: usize,
    target: &[Rat; 8],
) -> Result<bool> {
    if !(1..=8).contains(&i) || !(1..=8).contains(&j) || i == j {
        return precondition(format!("({i} {j}) is not a transposition of 1..8"));
    }
    let (li, lj) = (&lambda[i - 1], &lambda[j - 1]);
    if li == lj {
        return precondition(format!("λ_{i} = λ_{j}"));
    }
    let f = branch_equation(lambda);
    let ft = branch_equation(target);
    if (i <= 4) == (j <= 4) {
        return Ok(f == ft);
    }
    let v = ["x", "y", "z"];
    let x = Poly::var(&v, "x");
    let xi = &x - &Poly::constant(&v, li.clone());
    let xj = &x - &Poly::constant(&v, lj.clone());
    let mut map = BTreeMap::new();
    map.insert("y".to_string(), (&Poly::var(&v, "y") * &xj, xi.clone()));
    map.insert("z".to_string(), (&Poly::var(&v, "z") * &xj, xi.clone()));
    let (num, den) = poly_substitute(&f, &map)?;
    Ok(&num * &xi.pow(2) == &(&den * &xj.pow(2)) * &ft)
}

/// The identity above with `target` equal to `λ` with entries `i` and `j`
/// exchanged; for `i`, `j` in the same half it is the literal symmetry of
/// the equation.
pub fn verify_transposition_identity(lambda: &[Rat; 8], i: usize, j: usize) -> Result<bool> {
    if !(1..=8).contains(&i) || !(1..=8).contains(&j) {
        return precondition(format!("({i} {j}) out of range"));
    }
    let mut target = lambda.clone();
    target.swap(i - 1, j - 1);
    verify_transposition_identity_with_target(lambda, i, j, &target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(enumerate_group(GroupSpec::S8).len(), 40320);
        assert_eq!(enumerate_group(GroupSpec::H).len(), 1152);
        assert!(enumerate_group(GroupSpec::H).contains(&Permutation::identity()));
    }

    #[test]
    fn transposition_action() {
        let c = Configuration::from_ints([1, 2, 3, 4, 5, 6, 7, 8]);
        let s = Permutation::transposition(1, 5).unwrap();
        assert_eq!(act(&s, &c), Configuration::from_ints([5, 2, 3, 4, 1, 6, 7, 8]));
        assert_eq!(s.to_string(), "(1 5)");
    }

    #[test]
    fn cross_ratio_examples() {
        let p = |n| ProjPoint::int(n);
        assert_eq!(
            cross_ratio(&ProjPoint::infinity(), &p(0), &p(1), &p(7)).unwrap(),
            p(7)
        );
        assert_eq!(cross_ratio(&p(1), &p(2), &p(3), &p(4)).unwrap(), ProjPoint::finite(Rat::new(4, 3)));
        assert!(cross_ratio(&p(1), &p(1), &p(1), &p(4)).is_err());
    }

    #[test]
    fn transposition_identity() {
        let l: [Rat; 8] = std::array::from_fn(|k| Rat::int(k as i64 + 1));
        assert!(verify_transposition_identity(&l, 1, 5).unwrap());
        assert!(verify_transposition_identity(&l, 2, 3).unwrap());
        let mut wrong = l.clone();
        wrong.swap(0, 5);
        assert!(!verify_transposition_identity_with_target(&l, 1, 5, &wrong).unwrap());
    }
}
