//! Graph-description output for gluing graphs, and a minimal syntax checker
//! for the subset of the language the emitter produces.

use std::fmt::Write;

use ksba::lattice::Verdict;
use ksba::replacement::StablePairModel;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// The dual graph: one node per component, one edge per double curve.
/// Contracted components are dashed.
pub fn gluing_graph(m: &StablePairModel) -> String {
    let mut s = String::from("graph gluing {\n  node [shape=box];\n");
    for c in &m.components {
        let cert = match &c.certificate.verdict {
            Verdict::AmpleCertified => "ample",
            Verdict::Degenerate(_) => "degenerate",
            Verdict::Negative(_) => "negative",
        };
        let audit = if c.audit.passes() { "lc" } else { "audit failed" };
        let label = format!("{}\n{}\nK+D+(1+e)/2 B = {}\n{cert}, {audit}", c.label, c.surface.name, c.log_class);
        let _ = writeln!(s, "  {} [label={}];", quote(&c.label), quote(&label));
    }
    for c in &m.contracted {
        let label = format!("{}\n{}\ncontracted {}", c.label, c.surface.name, c.direction);
        let _ = writeln!(s, "  {} [label={}, style=dashed];", quote(&c.label), quote(&label));
    }
    for e in &m.gluing {
        let _ = writeln!(s, "  {} -- {} [label={}];", quote(&e.from), quote(&e.to), quote(&e.curve));
    }
    s.push_str("}\n");
    s
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Sym(char),
    Edge,
}

fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut it = src.chars().peekable();
    while let Some(&c) = it.peek() {
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '{' | '}' | '[' | ']' | '=' | ',' | ';' => {
                out.push(Tok::Sym(c));
                it.next();
            }
            '-' => {
                it.next();
                match it.next() {
                    Some('-') => out.push(Tok::Edge),
                    Some('>') => return Err("directed edge `->` in an undirected graph".into()),
                    _ => return Err("stray `-`".into()),
                }
            }
            '"' => {
                it.next();
                let mut id = String::new();
                loop {
                    match it.next() {
                        None => return Err("unterminated string".into()),
                        Some('"') => break,
                        Some('\\') => match it.next() {
                            Some(e) => {
                                id.push('\\');
                                id.push(e);
                            }
                            None => return Err("unterminated escape".into()),
                        },
                        Some(ch) => id.push(ch),
                    }
                }
                out.push(Tok::Id(id));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let mut id = String::new();
                while let Some(&ch) = it.peek() {
                    if ch.is_alphanumeric() || ch == '_' || ch == '.' {
                        id.push(ch);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Id(id));
            }
            c => return Err(format!("unexpected character `{c}`")),
        }
    }
    Ok(out)
}

struct Checker {
    toks: Vec<Tok>,
    pos: usize,
}

impl Checker {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        match self.next() {
            Some(Tok::Sym(d)) if d == c => Ok(()),
            t => Err(format!("expected `{c}`, found {t:?}")),
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.next() {
            Some(Tok::Id(s)) => Ok(s),
            t => Err(format!("expected an identifier, found {t:?}")),
        }
    }

    fn attr_list(&mut self) -> Result<(), String> {
        self.expect('[')?;
        loop {
            match self.peek() {
                Some(Tok::Sym(']')) => {
                    self.next();
                    return Ok(());
                }
                Some(Tok::Sym(',' | ';')) => {
                    self.next();
                }
                _ => {
                    self.id()?;
                    self.expect('=')?;
                    self.id()?;
                }
            }
        }
    }

    fn stmt(&mut self) -> Result<(), String> {
        self.id()?;
        match self.peek() {
            Some(Tok::Sym('=')) => {
                self.next();
                self.id()?;
                return Ok(());
            }
            Some(Tok::Edge) => {
                while matches!(self.peek(), Some(Tok::Edge)) {
                    self.next();
                    self.id()?;
                }
            }
            _ => {}
        }
        if matches!(self.peek(), Some(Tok::Sym('['))) {
            self.attr_list()?;
        }
        Ok(())
    }
}

/// Accepts `[strict] graph [ID] { stmt* }` with node, edge (`--`),
/// attribute and `key = value` statements.
pub fn check_dot(src: &str) -> Result<(), String> {
    let mut c = Checker { toks: tokenize(src)?, pos: 0 };
    if matches!(c.peek(), Some(Tok::Id(s)) if s == "strict") {
        c.next();
    }
    match c.next() {
        Some(Tok::Id(s)) if s == "graph" => {}
        t => return Err(format!("expected `graph`, found {t:?}")),
    }
    if matches!(c.peek(), Some(Tok::Id(_))) {
        c.next();
    }
    c.expect('{')?;
    loop {
        match c.peek() {
            Some(Tok::Sym('}')) => {
                c.next();
                break;
            }
            Some(Tok::Sym(';')) => {
                c.next();
            }
            None => return Err("missing `}`".into()),
            _ => c.stmt()?,
        }
    }
    if c.pos != c.toks.len() {
        return Err("trailing input after the graph".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_simple_graphs() {
        assert!(check_dot("graph g { a -- b [label=\"x\\\"y\"]; node [shape=box]; rankdir = LR }").is_ok());
        assert!(check_dot("strict graph { \"a b\" }").is_ok());
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert!(check_dot("graph g { a -- }").is_err());
        assert!(check_dot("graph g { a -> b }").is_err());
        assert!(check_dot("graph g { a [label=] }").is_err());
        assert!(check_dot("graph g { \"open }").is_err());
        assert!(check_dot("digraph g { }").is_err());
        assert!(check_dot("graph g { } extra").is_err());
    }
}
