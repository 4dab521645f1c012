//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use ksba::algebra::{Poly, Rat};
use ksba::groups::{enumerate_group, GroupSpec};
use ksba::replacement::{normal_partition, DegenerationSpec};
use ksba::stability::Kind;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rat(r: &mut impl Rng) -> Rat {
    let p = r.gen_range(-9i64..=9);
    let q = r.gen_range(1i64..=5);
    Rat::new(p, q)
}

fn nonzero_rat(r: &mut impl Rng) -> Rat {
    loop {
        let x = small_rat(r);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Rank of a dense rational matrix.
fn rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip().unwrap();
        let pivot: Vec<Rat> = rows[rank].iter().map(|a| a * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a -= &(&f * b);
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

fn monomials_below(k: u32) -> Vec<(u32, u32)> {
    (0..k).flat_map(|d| (0..=d).map(move |i| (i, d - i))).collect()
}

/// `dim Q[x,y] / (J + m^k)` for `J = (f_x, f_y)`.
fn truncated_quotient_dim(fx: &Poly, fy: &Poly, k: u32) -> usize {
    let mons = monomials_below(k);
    let index: BTreeMap<(u32, u32), usize> = mons.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut rows = Vec::new();
    for g in [fx, fy] {
        for &(a, b) in &mons {
            let mut row = vec![Rat::zero(); mons.len()];
            for (e, c) in g.terms() {
                let m = (e[0] + a, e[1] + b);
                if let Some(&i) = index.get(&m) {
                    row[i] = &row[i] + c;
                }
            }
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
    }
    mons.len() - rank(rows)
}

/// Milnor number at the origin as the dimension of the local Jacobian
/// algebra. The truncation order grows until `dim(k) = dim(k+1)`, at which
/// point Nakayama gives `m^k ⊂ J` locally. `None` if no stabilization by
/// `max_k`.
pub fn jacobian_oracle(f: &Poly, max_k: u32) -> Option<u32> {
    let vars = ["x".to_string(), "y".to_string()];
    let f = f.with_vars(&vars).unwrap();
    let fx = f.derivative("x");
    let fy = f.derivative("y");
    let mut prev = truncated_quotient_dim(&fx, &fy, 1);
    for k in 2..=max_k {
        let d = truncated_quotient_dim(&fx, &fy, k);
        if d == prev {
            return Some(d as u32);
        }
        prev = d;
    }
    None
}

/// The ADE normal forms with index at most 8, with their names.
pub fn ade_normal_forms() -> Vec<(String, &'static str, u32)> {
    let mut v = Vec::new();
    for n in 1..=8u32 {
        v.push((format!("y^2 + x^{}", n + 1), "A", n));
    }
    for n in 4..=8u32 {
        v.push((format!("x^2*y + y^{}", n - 1), "D", n));
    }
    v.push(("x^3 + y^4".into(), "E", 6));
    v.push(("x^3 + x*y^3".into(), "E", 7));
    v.push(("x^3 + y^5".into(), "E", 8));
    v
}

/// `f(ax + by, cx + dy)` for a random invertible rational matrix.
pub fn random_linear_change(f: &Poly, r: &mut impl Rng) -> Poly {
    let xy = ["x", "y"];
    loop {
        let [a, b, c, d] = [0; 4].map(|_| small_rat(r));
        if (&a * &d - &b * &c).is_zero() {
            continue;
        }
        let lin = |p: &Rat, q: &Rat| {
            &Poly::var(&xy, "x").scale(p) + &Poly::var(&xy, "y").scale(q)
        };
        let subs = BTreeMap::from([("x".to_string(), lin(&a, &b)), ("y".to_string(), lin(&c, &d))]);
        return f.compose(&subs).with_vars(&["x".to_string(), "y".to_string()]).unwrap();
    }
}

/// The 14 set partitions of four slots other than the single block, as
/// block labels per slot.
pub fn collision_patterns() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..1 {
        for b in 0..=1 {
            for c in 0..=2 {
                for d in 0..=3 {
                    let p = [a, b, c, d];
                    // Restricted growth strings.
                    let ok = (1..4).all(|i| p[i] <= p[..i].iter().max().unwrap() + 1);
                    if ok && p != [0, 0, 0, 0] {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Values following a collision pattern: equal slots share a value,
/// distinct blocks get distinct random values.
fn pattern_values(p: [usize; 4], nonzero: bool, r: &mut impl Rng) -> [Rat; 4] {
    let mut blocks: Vec<Rat> = Vec::new();
    let nblocks = p.iter().max().unwrap() + 1;
    while blocks.len() < nblocks {
        let v = if nonzero { nonzero_rat(r) } else { small_rat(r) };
        if !blocks.contains(&v) {
            blocks.push(v);
        }
    }
    p.map(|b| blocks[b].clone())
}

/// A valid spec whose two clusters follow the given collision patterns,
/// relabeled by a random element of H.
pub fn random_spec(kind: Kind, pi: [usize; 4], pc: [usize; 4], r: &mut impl Rng) -> DegenerationSpec {
    let i = normal_partition(kind);
    let ic: Vec<usize> = (1..=8).filter(|k| !i.contains(k)).collect();
    let nonzero: &[usize] = match kind {
        Kind::A => &[3, 4, 7, 8],
        Kind::B => &[4, 6, 7, 8],
        Kind::C => &[5, 6, 7, 8],
    };
    let h = enumerate_group(GroupSpec::H);
    loop {
        let mut lambda: [Rat; 8] = std::array::from_fn(|_| Rat::zero());
        let need_nz = |idx: &[usize]| idx.iter().any(|k| nonzero.contains(k));
        for (idx, p) in [(i.to_vec(), pi), (ic.clone(), pc)] {
            let vals = pattern_values(p, need_nz(&idx), r);
            for (k, v) in idx.iter().zip(vals) {
                lambda[k - 1] = v;
            }
        }
        let Ok(s) = DegenerationSpec::new(kind, &i, lambda) else { continue };
        let sigma = &h[r.gen_range(0..h.len())];
        if let Ok(t) = s.act(sigma) {
            return t;
        }
    }
}
