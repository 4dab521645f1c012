use crate::algebra::{gcd2, Poly, Rat};

use super::{CurveGerm, MilnorNumber};

const X: &str = "x";
const Y: &str = "y";

fn vanishes_at_origin(p: &Poly) -> bool {
    p.constant_term().is_zero()
}

/// `p(x, 0)` as coefficients in `x`, lowest first.
fn restrict_y0(p: &Poly) -> Vec<Rat> {
    let mut c: Vec<Rat> = Vec::new();
    let xi = p.var_index(X).expect("x");
    let yi = p.var_index(Y).expect("y");
    for (e, a) in p.terms() {
        if e[yi] == 0 {
            let k = e[xi] as usize;
            if c.len() <= k {
                c.resize(k + 1, Rat::zero());
            }
            c[k] = a.clone();
        }
    }
    c
}

fn degree(c: &[Rat]) -> Option<usize> {
    c.iter().rposition(|a| !a.is_zero())
}

fn xpow(k: u32) -> Poly {
    let mut e = vec![0; 2];
    e[0] = k;
    Poly::from_terms(vec![X.into(), Y.into()], [(e, Rat::one())]).expect("two variables")
}

/// Local intersection multiplicity at the origin of two plane curves with
/// no common component through the origin, by Fulton's algorithm.
pub(crate) fn intersection_at_origin(f: &Poly, g: &Poly) -> u32 {
    let mut f = f.primitive().1;
    let mut g = g.primitive().1;
    let mut acc = 0u32;
    // Each step lowers deg g(x,0) or removes a factor y; the bound is generous.
    for _ in 0..100_000 {
        if !vanishes_at_origin(&f) || !vanishes_at_origin(&g) {
            return acc;
        }
        let mut fr = restrict_y0(&f);
        let mut gr = restrict_y0(&g);
        let rank = |c: &[Rat]| degree(c).map_or(-1, |d| d as i64);
        if rank(&fr) > rank(&gr) {
            std::mem::swap(&mut f, &mut g);
            std::mem::swap(&mut fr, &mut gr);
        }
        match degree(&fr) {
            None => {
                // y divides f: I(y·h, g) = ord_x g(x,0) + I(h, g).
                let ord = gr.iter().position(|a| !a.is_zero()).expect("no common factor y");
                acc += ord as u32;
                f = f.div_exact(&Poly::var(&[X, Y], Y)).expect("y divides f").primitive().1;
            }
            Some(r) => {
                let s = degree(&gr).expect("deg g(x,0) >= deg f(x,0)");
                let next = &g.scale(&fr[r]) - &(&f * &xpow((s - r) as u32)).scale(&gr[s]);
                g = next.primitive().1;
            }
        }
    }
    unreachable!("intersection multiplicity loop did not terminate")
}

pub(crate) fn milnor(g: &CurveGerm) -> MilnorNumber {
    let f = g.f();
    let mut fx = f.derivative(X);
    let mut fy = f.derivative(Y);
    if fx.is_zero() && fy.is_zero() {
        return MilnorNumber::Infinite;
    }
    let common = gcd2(&fx, &fy, X, Y).expect("bivariate");
    if !common.is_constant() {
        if vanishes_at_origin(&common) {
            return MilnorNumber::Infinite;
        }
        fx = fx.div_exact(&common).expect("gcd divides");
        fy = fy.div_exact(&common).expect("gcd divides");
    }
    if fx.is_zero() || fy.is_zero() {
        // The other partial is then the gcd, a unit at the origin.
        return MilnorNumber::Finite(0);
    }
    MilnorNumber::Finite(intersection_at_origin(&fx, &fy))
}
