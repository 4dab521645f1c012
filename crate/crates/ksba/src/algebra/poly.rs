use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Rat, UPoly};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial over the rationals.
///
/// Terms are keyed by exponent vectors whose length equals the number of
/// variables; zero coefficients are never stored. Binary operations on
/// polynomials over different variable lists work over the union of the
/// lists (left operand's order first).
#[derive(Clone)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(vars: &[&str]) -> Poly {
        Poly::zero_in(vars.iter().map(|v| v.to_string()).collect())
    }

    pub fn zero_in(vars: Vec<String>) -> Poly {
        Poly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[&str], c: Rat) -> Poly {
        let mut p = Poly::zero(vars);
        p.insert(vec![0; vars.len()], c);
        p
    }

    /// The variable `name` as a polynomial.
    ///
    /// # Panics
    /// If `name` is not one of `vars`.
    pub fn var(vars: &[&str], name: &str) -> Poly {
        let i = vars
            .iter()
            .position(|v| *v == name)
            .unwrap_or_else(|| panic!("variable `{name}` not in {vars:?}"));
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Poly::zero(vars);
        p.insert(e, Rat::one());
        p
    }

    pub fn from_terms(
        vars: Vec<String>,
        terms: impl IntoIterator<Item = (Vec<u32>, Rat)>,
    ) -> Result<Poly> {
        let mut p = Poly::zero_in(vars);
        for (e, c) in terms {
            if e.len() != p.vars.len() {
                return Err(Error::DimensionMismatch { expected: p.vars.len(), got: e.len() });
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }

    fn insert(&mut self, e: Vec<u32>, c: Rat) {
        if !c.is_zero() {
            self.terms.insert(e, c);
        }
    }

    fn add_term(&mut self, e: Vec<u32>, c: &Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], &Rat)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.vars.len()])
    }

    /// Largest total degree of a term, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Smallest total degree of a term, `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly {
        let mut p = Poly::zero_in(self.vars.clone());
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == d {
                p.terms.insert(e.clone(), c.clone());
            }
        }
        p
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.var_index(name) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Largest power of `name` dividing every term.
    pub fn valuation_in(&self, name: &str) -> u32 {
        match self.var_index(name) {
            Some(i) => self.terms.keys().map(|e| e[i]).min().unwrap_or(0),
            None => 0,
        }
    }

    pub fn derivative(&self, name: &str) -> Poly {
        let mut p = Poly::zero_in(self.vars.clone());
        let Some(i) = self.var_index(name) else {
            return p;
        };
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.add_term(f, &(c * Rat::int(e[i] as i64)));
            }
        }
        p
    }

    /// Value at a point given in the order of [`Poly::vars`].
    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.vars.len() {
            return Err(Error::DimensionMismatch { expected: self.vars.len(), got: point.len() });
        }
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= &x.pow(k as i32).expect("non-negative exponent");
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Substitutes a constant for one variable; the variable list is kept.
    pub fn eval_var(&self, name: &str, value: &Rat) -> Poly {
        let Some(i) = self.var_index(name) else {
            return self.clone();
        };
        let mut p = Poly::zero_in(self.vars.clone());
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = std::mem::replace(&mut f[i], 0);
            p.add_term(f, &(c * value.pow(k as i32).expect("non-negative exponent")));
        }
        p
    }

    /// Polynomial composition: each variable with an entry in `subs` is
    /// replaced by that polynomial, the others are kept.
    pub fn compose(&self, subs: &BTreeMap<String, Poly>) -> Poly {
        let mut out_vars: Vec<String> = self
            .vars
            .iter()
            .filter(|v| !subs.contains_key(*v))
            .cloned()
            .collect();
        for p in subs.values() {
            for v in &p.vars {
                if !out_vars.contains(v) {
                    out_vars.push(v.clone());
                }
            }
        }
        let images: Vec<Poly> = self
            .vars
            .iter()
            .map(|v| match subs.get(v) {
                Some(p) => p.with_vars(&out_vars).expect("superset of variables"),
                None => {
                    let names: Vec<&str> = out_vars.iter().map(String::as_str).collect();
                    Poly::var(&names, v)
                }
            })
            .collect();
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![p.one_like()]).collect();
        let mut acc = Poly::zero_in(out_vars.clone());
        for (e, c) in &self.terms {
            let mut t = Poly::constant_in(out_vars.clone(), c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    fn constant_in(vars: Vec<String>, c: Rat) -> Poly {
        let n = vars.len();
        let mut p = Poly::zero_in(vars);
        p.insert(vec![0; n], c);
        p
    }

    fn one_like(&self) -> Poly {
        Poly::constant_in(self.vars.clone(), Rat::one())
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable that actually occurs.
    pub fn with_vars(&self, vars: &[String]) -> Result<Poly> {
        if vars == self.vars.as_slice() {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> =
            self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut p = Poly::zero_in(vars.to_vec());
        for (e, c) in &self.terms {
            let mut f = vec![0; vars.len()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => f[j] = k,
                    None => {
                        return Err(Error::Precondition(format!(
                            "variable `{}` occurs but is not in {:?}",
                            self.vars[i], vars
                        )))
                    }
                }
            }
            p.terms.insert(f, c.clone());
        }
        Ok(p)
    }

    /// Variables that actually occur, in list order.
    pub fn used_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|e| e[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero_in(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Lex-largest term.
    pub fn leading_term(&self) -> Option<(&[u32], &Rat)> {
        self.terms.iter().next_back().map(|(e, c)| (e.as_slice(), c))
    }

    /// Splits off the rational content: returns `(c, p)` with `self = c·p`,
    /// `p` having coprime integer coefficients and a positive leading term.
    /// The zero polynomial gives `(0, 0)`.
    pub fn primitive(&self) -> (Rat, Poly) {
        if self.is_zero() {
            return (Rat::zero(), self.clone());
        }
        let l = Rat::lcm_denoms(self.terms.values());
        let g = self
            .terms
            .values()
            .map(|c| (c * Rat::from_bigint(l.clone())).numer().clone())
            .fold(BigInt::zero(), |a, b| a.gcd(&b));
        let mut content = Rat::from_bigints(g, l).expect("nonzero lcm");
        if self.leading_term().expect("nonzero").1.is_negative() {
            content = -content;
        }
        let inv = content.recip().expect("nonzero content");
        (content, self.scale(&inv))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        let vars = union_vars(&self.vars, &d.vars);
        let mut r = self.with_vars(&vars).ok()?;
        let d = d.with_vars(&vars).ok()?;
        let (de, dc) = d.leading_term().map(|(e, c)| (e.to_vec(), c.clone()))?;
        let mut q = Poly::zero_in(vars.clone());
        while let Some((re, rc)) = r.leading_term().map(|(e, c)| (e.to_vec(), c.clone())) {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let c = rc / &dc;
            let mut t = Poly::zero_in(vars.clone());
            t.insert(e, c);
            r = &r - &(&t * &d);
            q = &q + &t;
        }
        Some(q)
    }

    /// The polynomial as a univariate one in `name`, if no other variable occurs.
    pub fn to_upoly(&self, name: &str) -> Option<UPoly> {
        let i = self.var_index(name);
        let mut coeffs: Vec<Rat> = Vec::new();
        for (e, c) in &self.terms {
            let k = match i {
                Some(i) => {
                    if e.iter().enumerate().any(|(j, &v)| j != i && v > 0) {
                        return None;
                    }
                    e[i] as usize
                }
                None => {
                    if e.iter().any(|&v| v > 0) {
                        return None;
                    }
                    0
                }
            };
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rat::zero());
            }
            coeffs[k] = c.clone();
        }
        Some(UPoly::new(coeffs))
    }

    /// Builds a polynomial in the single variable `name`.
    pub fn from_upoly(u: &UPoly, vars: &[&str], name: &str) -> Poly {
        let x = Poly::var(vars, name);
        let mut acc = Poly::zero(vars);
        for (k, c) in u.coeffs().iter().enumerate().rev() {
            acc = &(&acc * &x) + &Poly::constant(vars, c.clone());
            let _ = k;
        }
        acc
    }

    /// Coefficients with respect to `name`: entry `k` is the coefficient of
    /// `name^k`, a polynomial in the remaining variables (same variable list).
    pub fn coefficients_in(&self, name: &str) -> Vec<Poly> {
        let Some(i) = self.var_index(name) else {
            return vec![self.clone()];
        };
        let mut out: Vec<Poly> = Vec::new();
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            while out.len() <= k {
                out.push(Poly::zero_in(self.vars.clone()));
            }
            let mut f = e.clone();
            f[i] = 0;
            out[k].terms.insert(f, c.clone());
        }
        out
    }
}

pub(crate) fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut v = a.to_vec();
    for x in b {
        if !v.contains(x) {
            v.push(x.clone());
        }
    }
    v
}

fn aligned<'a>(a: &'a Poly, b: &'a Poly) -> (Vec<String>, Option<(Poly, Poly)>) {
    if a.vars == b.vars {
        (a.vars.clone(), None)
    } else {
        let v = union_vars(&a.vars, &b.vars);
        let pa = a.with_vars(&v).expect("superset");
        let pb = b.with_vars(&v).expect("superset");
        (v, Some((pa, pb)))
    }
}

impl PartialEq for Poly {
    /// Equality as polynomials: variable lists may differ in order or in
    /// unused variables.
    fn eq(&self, o: &Poly) -> bool {
        if self.vars == o.vars {
            return self.terms == o.terms;
        }
        let (_, al) = aligned(self, o);
        let (a, b) = al.expect("distinct variable lists");
        a.terms == b.terms
    }
}

impl Eq for Poly {}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let (vars, al) = aligned(self, o);
        let (a, b) = match &al {
            Some((a, b)) => (a, b),
            None => (self, o),
        };
        let mut p = Poly { vars, terms: a.terms.clone() };
        for (e, c) in &b.terms {
            p.add_term(e.clone(), c);
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let (vars, al) = aligned(self, o);
        let (a, b) = match &al {
            Some((a, b)) => (a, b),
            None => (self, o),
        };
        let mut p = Poly::zero_in(vars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                p.add_term(e, &(ca * cb));
            }
        }
        p
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: &Poly) -> Poly {
                (&self).$m(o)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                self.$m(&o)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    /// Terms in decreasing lex order, e.g. `x^2*y - 1/2*y + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], k)
                    }
                })
                .collect();
            let mag = c.abs();
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.vars.join(","), self)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: Vec<String>,
    terms: Vec<(Vec<u32>, Rat)>,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        Poly::from_terms(r.vars, r.terms).map_err(serde::de::Error::custom)
    }
}

/// Result of [`poly_substitute`]: `numerator / denominator`.
pub type RationalFunction = (Poly, Poly);

/// Substitutes rational functions `num/den` for variables of `f` and clears
/// denominators.
///
/// Every variable `v` of `f` with an entry in `map` is replaced by the pair's
/// quotient; the returned numerator is `f` with each `v` raised to at most
/// its degree `d_v` in `f` multiplied through by `den_v^{d_v}`, and the
/// denominator is the product of those powers. A common rational factor is
/// removed so that the denominator is primitive with positive leading term.
pub fn poly_substitute(
    f: &Poly,
    map: &BTreeMap<String, RationalFunction>,
) -> Result<RationalFunction> {
    for (v, (_, den)) in map {
        if den.is_zero() {
            return Err(Error::ZeroDenominator(v.clone()));
        }
    }
    let mut vars: Vec<String> = f.vars.clone();
    for (n, d) in map.values() {
        vars = union_vars(&vars, &n.vars);
        vars = union_vars(&vars, &d.vars);
    }
    let f = f.with_vars(&vars)?;
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let one = Poly::constant(&names, Rat::one());

    // Per substituted variable: degree in f, powers of num and den.
    struct Sub {
        idx: usize,
        deg: u32,
        num_pows: Vec<Poly>,
        den_pows: Vec<Poly>,
    }
    let mut subs: Vec<Sub> = Vec::new();
    for (v, (n, d)) in map {
        let Some(idx) = vars.iter().position(|w| w == v) else {
            continue;
        };
        let deg = f.degree_in(v);
        let n = n.with_vars(&vars)?;
        let d = d.with_vars(&vars)?;
        let mut num_pows = vec![one.clone()];
        let mut den_pows = vec![one.clone()];
        for k in 1..=deg as usize {
            num_pows.push(&num_pows[k - 1] * &n);
            den_pows.push(&den_pows[k - 1] * &d);
        }
        subs.push(Sub { idx, deg, num_pows, den_pows });
    }

    let mut num = Poly::zero_in(vars.clone());
    for (e, c) in &f.terms {
        let mut rest = e.clone();
        let mut t = one.clone();
        for s in &subs {
            let k = e[s.idx];
            rest[s.idx] = 0;
            t = &t * &s.num_pows[k as usize];
            t = &t * &s.den_pows[(s.deg - k) as usize];
        }
        let mut mono = Poly::zero_in(vars.clone());
        mono.insert(rest, c.clone());
        num = &num + &(&t * &mono);
    }
    let mut den = one;
    for s in &subs {
        den = &den * &s.den_pows[s.deg as usize];
    }
    let (content, den) = den.primitive();
    let num = num.scale(&content.recip().expect("nonzero denominator"));
    Ok((num, den))
}
