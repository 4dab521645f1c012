use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Poly, Rat};
use crate::error::{Error, Result};

/// Dense univariate polynomial over the rationals, coefficients listed from
/// the constant term up. Trailing zeros are trimmed, so the zero polynomial
/// has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    c: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(Rat::is_zero) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn constant(a: Rat) -> Self {
        UPoly::new(vec![a])
    }

    pub fn one() -> Self {
        UPoly::constant(Rat::one())
    }

    pub fn x() -> Self {
        UPoly::new(vec![Rat::zero(), Rat::one()])
    }

    /// `x - r`.
    pub fn linear(r: &Rat) -> Self {
        UPoly::new(vec![-r, Rat::one()])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Rat>) -> Self {
        roots.into_iter().fold(UPoly::one(), |acc, r| &acc * &UPoly::linear(r))
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rat {
        self.c.last().cloned().unwrap_or_default()
    }

    /// Multiplicity of 0 as a root; 0 for the zero polynomial.
    pub fn valuation(&self) -> usize {
        self.c.iter().position(|a| !a.is_zero()).unwrap_or(0)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.c.iter().rev().fold(Rat::zero(), |acc, a| acc * x + a)
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * Rat::int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, r: &Rat) -> Self {
        UPoly::new(self.c.iter().map(|a| a * r).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Rat::zero(); k];
        c.extend(self.c.iter().cloned());
        UPoly { c }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(UPoly::one(), |acc, _| &acc * self)
    }

    pub fn monic(&self) -> Self {
        match self.lc().recip() {
            Some(inv) => self.scale(&inv),
            None => UPoly::zero(),
        }
    }

    /// Euclidean division, `None` when dividing by zero.
    pub fn div_rem(&self, d: &UPoly) -> Option<(UPoly, UPoly)> {
        let dd = d.degree()?;
        let inv = d.lc().recip()?;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Some((UPoly::zero(), self.clone()));
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] * &inv;
            if !coef.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    let t = &coef * b;
                    r[k + j] -= &t;
                }
            }
            q[k] = coef;
        }
        r.truncate(dd);
        Some((UPoly::new(q), UPoly::new(r)))
    }

    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.div_rem(d)?;
        r.is_zero().then_some(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Coefficients after clearing denominators and content:
    /// integer coefficients with gcd 1 and positive leading coefficient.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = Rat::lcm_denoms(self.c.iter());
        let ints: Vec<BigInt> = self
            .c
            .iter()
            .map(|a| (a * Rat::from_bigint(l.clone())).numer().clone())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
        if ints.last().expect("nonzero").is_negative() {
            g = -g;
        }
        ints.into_iter().map(|a| a / &g).collect()
    }

    /// Rational roots with multiplicities, sorted increasingly.
    pub fn rational_roots(&self) -> Result<Vec<(Rat, u32)>> {
        if self.is_zero() {
            return Err(Error::Precondition("roots of the zero polynomial".into()));
        }
        let mut out: Vec<(Rat, u32)> = Vec::new();
        let v = self.valuation();
        if v > 0 {
            out.push((Rat::zero(), v as u32));
        }
        let mut rest = UPoly::new(self.c[v..].to_vec());
        if rest.degree() == Some(0) {
            return Ok(out);
        }
        for r in squarefree_rational_roots(&rest.div_exact(&rest.gcd(&rest.derivative())).expect("gcd divides")) {
            let lin = UPoly::linear(&r);
            let mut m = 0;
            while let Some(q) = rest.div_exact(&lin) {
                rest = q;
                m += 1;
            }
            if m > 0 {
                out.push((r, m));
            }
            if rest.degree() == Some(0) {
                break;
            }
        }
        out.sort();
        Ok(out)
    }
}

fn sign_changes(chain: &[UPoly], x: &Rat) -> usize {
    let signs: Vec<i32> = chain.iter().map(|p| p.eval(x).signum()).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Rational roots of a squarefree polynomial with nonzero constant term.
///
/// Every rational root of a primitive integer polynomial with leading
/// coefficient `a_n` has the form `m / a_n`. Sturm bisection shrinks each
/// root-bearing interval below width `1 / |a_n|`, leaving one candidate `m`.
fn squarefree_rational_roots(p: &UPoly) -> Vec<Rat> {
    let Some(n) = p.degree() else { return vec![] };
    if n == 0 {
        return vec![];
    }
    let ints = p.integer_coeffs();
    let an = Rat::from_bigint(ints[n].abs());
    let lc = p.lc();
    let bound = p.c.iter().map(|a| (a / &lc).abs()).max().expect("nonempty") + Rat::one();
    let mut chain = vec![p.clone(), p.derivative()];
    while let Some(last) = chain.last().filter(|q| q.degree().is_some_and(|d| d > 0)) {
        let r = chain[chain.len() - 2].div_rem(last).expect("nonzero").1;
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    let mut out = Vec::new();
    let mut stack = vec![(-&bound, bound.clone())];
    while let Some((a, b)) = stack.pop() {
        if sign_changes(&chain, &a) == sign_changes(&chain, &b) {
            continue;
        }
        if &(&b - &a) * &an < Rat::one() {
            // The only candidate numerator in (a·a_n, b·a_n].
            let m = Rat::from_bigint((&b * &an).floor());
            let x = &m / &an;
            if x > a && p.eval(&x).is_zero() {
                out.push(x);
            }
            continue;
        }
        let mid = (&a + &b) * Rat::new(1, 2);
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.c.iter().map(|a| -a).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Rat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        UPoly::new(c)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&Poly::from_upoly(self, &["x"], "x"), f)
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({self})")
    }
}

// Bivariate arithmetic: a polynomial in y whose coefficients are UPolys in x.
type Biv = Vec<UPoly>;

fn trim(mut b: Biv) -> Biv {
    while b.last().is_some_and(UPoly::is_zero) {
        b.pop();
    }
    b
}

fn to_biv(f: &Poly, x: &str, y: &str) -> Result<Biv> {
    let xi = f.var_index(x);
    let yi = f.var_index(y);
    let mut out: Biv = Vec::new();
    for (e, c) in f.terms() {
        for (i, &k) in e.iter().enumerate() {
            if k > 0 && Some(i) != xi && Some(i) != yi {
                return Err(Error::Precondition(format!(
                    "bivariate gcd in ({x},{y}) but `{}` occurs",
                    f.vars()[i]
                )));
            }
        }
        let kx = xi.map_or(0, |i| e[i]) as usize;
        let ky = yi.map_or(0, |i| e[i]) as usize;
        if out.len() <= ky {
            out.resize(ky + 1, UPoly::zero());
        }
        let mut cs = out[ky].coeffs().to_vec();
        if cs.len() <= kx {
            cs.resize(kx + 1, Rat::zero());
        }
        cs[kx] = c.clone();
        out[ky] = UPoly::new(cs);
    }
    Ok(trim(out))
}

fn from_biv(b: &Biv, x: &str, y: &str) -> Poly {
    let vars = [x, y];
    let mut terms = Vec::new();
    for (ky, u) in b.iter().enumerate() {
        for (kx, c) in u.coeffs().iter().enumerate() {
            terms.push((vec![kx as u32, ky as u32], c.clone()));
        }
    }
    Poly::from_terms(vars.iter().map(|s| s.to_string()).collect(), terms).expect("two variables")
}

fn biv_content(b: &Biv) -> UPoly {
    b.iter().fold(UPoly::zero(), |g, u| g.gcd(u))
}

fn biv_div_upoly(b: &Biv, d: &UPoly) -> Biv {
    b.iter().map(|u| u.div_exact(d).expect("content divides")).collect()
}

fn pseudo_rem(a: &Biv, b: &Biv) -> Biv {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Biv = r.iter().map(|u| u * lb).collect();
        for (j, bj) in b.iter().enumerate() {
            next[j + shift] = &next[j + shift] - &(bj * &lr);
        }
        r = trim(next);
    }
    r
}

/// Greatest common divisor of two polynomials in the variables `x` and `y`,
/// normalized by [`Poly::primitive`]. Both zero gives zero.
///
/// Computed with the primitive polynomial remainder sequence in `y` over
/// `Q[x]`. The result is expressed over the variable list `[x, y]`.
pub fn gcd2(f: &Poly, g: &Poly, x: &str, y: &str) -> Result<Poly> {
    let a = to_biv(f, x, y)?;
    let b = to_biv(g, x, y)?;
    if a.is_empty() && b.is_empty() {
        return Ok(Poly::zero(&[x, y]));
    }
    if a.is_empty() || b.is_empty() {
        let p = if a.is_empty() { g } else { f };
        return Ok(p.with_vars(&[x.to_string(), y.to_string()])?.primitive().1);
    }
    let ca = biv_content(&a);
    let cb = biv_content(&b);
    let c = ca.gcd(&cb);
    let mut p = biv_div_upoly(&a, &ca);
    let mut q = biv_div_upoly(&b, &cb);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while q.len() > 1 {
        let r = pseudo_rem(&p, &q);
        p = q;
        if r.is_empty() {
            q = Vec::new();
            break;
        }
        let cr = biv_content(&r);
        q = biv_div_upoly(&r, &cr);
    }
    // q is empty (p is the gcd) or a nonzero constant in y (gcd is 1).
    let prim = if q.is_empty() {
        let cp = biv_content(&p);
        biv_div_upoly(&p, &cp)
    } else {
        vec![UPoly::one()]
    };
    let res: Biv = prim.iter().map(|u| u * &c).collect();
    Ok(from_biv(&res, x, y).primitive().1)
}

/// The content of `f` as a polynomial in `y` over `Q[x]`: the monic gcd of
/// its coefficients. Zero for the zero polynomial.
pub fn content_in(f: &Poly, x: &str, y: &str) -> Result<UPoly> {
    Ok(biv_content(&to_biv(f, x, y)?))
}

/// Resultant with respect to `y` of two polynomials in `x` and `y`, a
/// polynomial in `x`. Computed as the Sylvester determinant by fraction-free
/// elimination.
pub fn resultant_in(f: &Poly, g: &Poly, x: &str, y: &str) -> Result<UPoly> {
    let a = to_biv(f, x, y)?;
    let b = to_biv(g, x, y)?;
    if a.is_empty() || b.is_empty() {
        return Ok(UPoly::zero());
    }
    let (m, n) = (a.len() - 1, b.len() - 1);
    if m == 0 {
        return Ok(a[0].pow(n as u32));
    }
    if n == 0 {
        return Ok(b[0].pow(m as u32));
    }
    let size = m + n;
    let mut mat = vec![vec![UPoly::zero(); size]; size];
    for r in 0..n {
        for (k, c) in a.iter().enumerate() {
            mat[r][r + m - k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in b.iter().enumerate() {
            mat[n + r][r + n - k] = c.clone();
        }
    }
    Ok(bareiss_det(mat))
}

fn bareiss_det(mut m: Vec<Vec<UPoly>>) -> UPoly {
    let n = m.len();
    let mut prev = UPoly::one();
    let mut negate = false;
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return UPoly::zero();
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

impl UPoly {
    /// The rational roots with multiplicities, and `self` with them divided out.
    pub fn split_rational(&self) -> Result<(Vec<(Rat, u32)>, UPoly)> {
        let roots = self.rational_roots()?;
        let mut rest = self.clone();
        for (r, m) in &roots {
            rest = rest.div_exact(&UPoly::linear(r).pow(*m)).expect("root divides");
        }
        Ok((roots, rest))
    }
}

/// True when `f` has no repeated factor, i.e. `gcd(f, f_x, f_y)` is constant.
pub fn is_squarefree2(f: &Poly, x: &str, y: &str) -> Result<bool> {
    if f.is_zero() {
        return Ok(false);
    }
    let g = gcd2(f, &f.derivative(x), x, y)?;
    let g = gcd2(&g, &f.derivative(y), x, y)?;
    Ok(g.is_constant())
}
