//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*      division only by nonzero constants
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | variable | '(' expr ')'
//! ```

use super::{Poly, Rat};
use crate::error::{Error, Result};

/// Variable names accepted by [`parse_poly`], in canonical order.
pub const VARIABLES: [&str; 7] = ["x", "y", "t", "x0", "x1", "y0", "y1"];

const MAX_EXPONENT: u32 = 1000;

/// Parses an expression over [`VARIABLES`]. The result's variable list holds
/// the variables that occur, in canonical order.
pub fn parse_poly(s: &str) -> Result<Poly> {
    let p = Parser::new(s, &VARIABLES).run()?;
    let used = p.used_vars();
    let vars: Vec<String> =
        VARIABLES.iter().filter(|v| used.iter().any(|u| u == *v)).map(|v| v.to_string()).collect();
    p.with_vars(&vars)
}

/// Parses an expression whose variables must come from `vars`; the result is
/// expressed over exactly `vars`.
pub fn parse_poly_in(s: &str, vars: &[&str]) -> Result<Poly> {
    let p = Parser::new(s, vars).run()?;
    p.with_vars(&vars.iter().map(|v| v.to_string()).collect::<Vec<_>>())
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a [&'a str],
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Sym(char),
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, vars: &'a [&'a str]) -> Self {
        Parser { src, toks: Vec::new(), pos: 0, vars }
    }

    fn err<T>(&self, at: usize, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at offset {at} in `{}`", self.src)))
    }

    fn lex(&mut self) -> Result<()> {
        let b = self.src.as_bytes();
        let mut i = 0;
        while i < b.len() {
            let c = b[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let s = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                self.toks.push((s, Tok::Int(self.src[s..i].to_string())));
            } else if c.is_ascii_alphabetic() {
                let s = i;
                while i < b.len() && b[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                self.toks.push((s, Tok::Ident(self.src[s..i].to_string())));
            } else if "+-*/^()".contains(c) {
                self.toks.push((i, Tok::Sym(c)));
                i += 1;
            } else {
                let ch = self.src[i..].chars().next().expect("in bounds");
                return self.err(i, &format!("unexpected character `{ch}`"));
            }
        }
        Ok(())
    }

    fn run(mut self) -> Result<Poly> {
        self.lex()?;
        if self.toks.is_empty() {
            return self.err(0, "empty expression");
        }
        let p = self.expr()?;
        if let Some((at, t)) = self.toks.get(self.pos) {
            return self.err(*at, &format!("unexpected token {t:?}"));
        }
        Ok(p)
    }

    fn peek_sym(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((_, Tok::Sym(c))) => Some(*c),
            _ => None,
        }
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |t| t.0)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_sym() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_sym() {
            self.pos += 1;
            let at = self.offset();
            let t = self.unary()?;
            if c == '*' {
                acc = &acc * &t;
            } else {
                let d = t.constant_term();
                if !t.is_constant() || d.is_zero() {
                    return self.err(at, "division only by a nonzero constant");
                }
                acc = acc.scale(&d.recip().expect("nonzero"));
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek_sym() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek_sym() == Some('^') {
            self.pos += 1;
            let at = self.offset();
            match self.toks.get(self.pos) {
                Some((_, Tok::Int(s))) => {
                    let k: u32 = match s.parse() {
                        Ok(k) if k <= MAX_EXPONENT => k,
                        _ => return self.err(at, "exponent too large"),
                    };
                    self.pos += 1;
                    Ok(base.pow(k))
                }
                _ => self.err(at, "expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let at = self.offset();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return self.err(at, "unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Int(s) => {
                let r: Rat = s.parse()?;
                Ok(Poly::constant(&[], r))
            }
            Tok::Ident(name) => {
                if !self.vars.contains(&name.as_str()) {
                    return self.err(at, &format!("unknown variable `{name}`"));
                }
                Ok(Poly::var(&[name.as_str()], &name))
            }
            Tok::Sym('(') => {
                let p = self.expr()?;
                if self.peek_sym() != Some(')') {
                    return self.err(self.offset(), "expected `)`");
                }
                self.pos += 1;
                Ok(p)
            }
            Tok::Sym(c) => self.err(at, &format!("unexpected `{c}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let p = parse_poly("-x^2 + 2*(y - 1)*y").unwrap();
        assert_eq!(p.to_string(), "-x^2 + 2*y^2 - 2*y");
        assert_eq!(p.vars(), &["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn all_variables() {
        let p = parse_poly("y1*x0 - t*x1 + y0 + x*y").unwrap();
        assert_eq!(p.vars().len(), 7);
        let q = parse_poly("3/6 * t").unwrap();
        assert_eq!(q, Poly::var(&["t"], "t").scale(&Rat::new(1, 2)));
    }

    #[test]
    fn errors() {
        for s in ["", "x +", "z", "x^y", "(x", "x / y", "x / 0", "2 $ 3", "x)"] {
            assert!(matches!(parse_poly(s), Err(Error::Parse(_))), "{s}");
        }
    }

    #[test]
    fn fixed_variable_list() {
        let p = parse_poly_in("y^2 - x^3", &["x", "y"]).unwrap();
        assert_eq!(p.vars(), &["x".to_string(), "y".to_string()]);
        assert!(parse_poly_in("t", &["x", "y"]).is_err());
    }
}
