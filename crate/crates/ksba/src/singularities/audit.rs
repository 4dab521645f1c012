//! Exhaustive search for the singular points of an affine plane curve, with
//! exact classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{classify_ade, milnor_number, CurveGerm, MilnorNumber, SingularityType};
use crate::algebra::{content_in, is_squarefree2, resultant_in, Poly, Rat, UPoly};
use crate::error::Result;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum PointLocation {
    Rational { x: Rat, y: Rat },
    /// `count` points on the line `line`, at the roots of `roots_of`, a
    /// factor without rational roots.
    Irrational { line: String, roots_of: String, count: u32 },
}

impl fmt::Display for PointLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointLocation::Rational { x, y } => write!(f, "({x}, {y})"),
            PointLocation::Irrational { line, roots_of, count } => {
                write!(f, "{count} point(s) on {line} where {roots_of} = 0")
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PointRecord {
    pub location: PointLocation,
    pub singularity: SingularityType,
    pub mu: MilnorNumber,
}

/// Singular points found, and anything the search could not certify.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct CurveAudit {
    pub points: Vec<PointRecord>,
    pub failures: Vec<String>,
}

impl CurveAudit {
    pub fn is_certified(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn all_simple(&self) -> bool {
        self.is_certified() && self.points.iter().all(|p| p.singularity.is_simple())
    }

    pub fn count(&self, t: SingularityType) -> u32 {
        self.points
            .iter()
            .filter(|p| p.singularity == t)
            .map(|p| match &p.location {
                PointLocation::Irrational { count, .. } => *count,
                PointLocation::Rational { .. } => 1,
            })
            .sum()
    }
}

/// Which points of the affine chart to report.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PointFilter {
    All,
    /// Only points on `y = 0`, for a second chart overlapping the first.
    OnlyYZero,
}

fn fiber(f: &Poly, c: &Rat) -> UPoly {
    f.eval_var("x", c).to_upoly("y").expect("only y remains")
}

/// Finds and classifies every singular point of `f(x, y) = 0` in the affine
/// plane that pass `filter`.
///
/// On `y = 0` alone the candidates are the roots of `gcd(f, f_x, f_y)`
/// restricted to the line, or, when the line is a component, its meeting
/// points with the rest. In the whole plane, candidate `x` values are the rational roots of the content of `f` in `y`
/// and of `Res_y(g, g_y)` for the primitive part `g`. Singular points over
/// irrational `x` are excluded by checking that the irrational part of that
/// resultant is coprime to `Res_y(g, g_x)`; where this fails, or a point
/// cannot be classified over Q, a failure is recorded instead.
pub fn audit_curve(f: &Poly, filter: PointFilter) -> Result<CurveAudit> {
    let f = f.with_vars(&["x".to_string(), "y".to_string()])?;
    let mut out = CurveAudit::default();
    if f.is_zero() || f.is_constant() {
        return Ok(out);
    }
    if !is_squarefree2(&f, "x", "y")? {
        out.failures.push(format!("{f} has a repeated component"));
        return Ok(out);
    }
    match filter {
        PointFilter::All => audit_plane(&f, &mut out)?,
        PointFilter::OnlyYZero => audit_line(&f, &mut out)?,
    }
    Ok(out)
}

fn classify_at(f: &Poly, x: Rat, y: Rat) -> Result<PointRecord> {
    let germ = CurveGerm::at_point(f, &x, &y)?;
    Ok(PointRecord {
        location: PointLocation::Rational { x, y },
        singularity: classify_ade(&germ),
        mu: milnor_number(&germ),
    })
}

/// Transverse crossings of a line with the rest of the curve at the roots of
/// `rest`; certified only when those roots are simple.
fn crossings(out: &mut CurveAudit, line: String, rest: &UPoly, var: &str) {
    if rest.degree().unwrap_or(0) == 0 {
        return;
    }
    if rest.is_squarefree() {
        out.points.push(PointRecord {
            location: PointLocation::Irrational {
                line,
                roots_of: Poly::from_upoly(rest, &[var], var).to_string(),
                count: rest.degree().expect("positive") as u32,
            },
            singularity: SingularityType::A(1),
            mu: MilnorNumber::Finite(1),
        });
    } else {
        out.failures.push(format!("multiple irrational points on {line}"));
    }
}

/// Singular points on `y = 0` only.
fn audit_line(f: &Poly, out: &mut CurveAudit) -> Result<()> {
    let vars = ["x", "y"];
    let on_line = |p: &Poly| p.eval_var("y", &Rat::zero()).to_upoly("x").expect("only x remains");
    let ys = match f.div_exact(&Poly::var(&vars, "y")) {
        Some(h) => {
            let hc = on_line(&h);
            let (_, rest) = hc.split_rational()?;
            crossings(out, "y = 0".into(), &rest, "x");
            hc
        }
        None => {
            let phi = on_line(f).gcd(&on_line(&f.derivative("x"))).gcd(&on_line(&f.derivative("y")));
            let (_, rest) = phi.split_rational()?;
            if rest.degree().unwrap_or(0) > 0 {
                out.failures.push(format!("singular points on y = 0 at the roots of {rest}"));
            }
            phi
        }
    };
    if ys.is_zero() {
        return Ok(());
    }
    for (x, _) in ys.rational_roots()? {
        out.points.push(classify_at(f, x, Rat::zero())?);
    }
    Ok(())
}

fn audit_plane(f: &Poly, out: &mut CurveAudit) -> Result<()> {
    let content = content_in(f, "x", "y")?;
    let g = f.div_exact(&Poly::from_upoly(&content, &["x", "y"], "x")).expect("content divides");

    let mut cands: Vec<Rat> = Vec::new();
    if content.degree().unwrap_or(0) > 0 {
        let (roots, rest) = content.split_rational()?;
        if rest.degree().unwrap_or(0) > 0 && g.degree_in("y") > 0 {
            out.failures.push(format!("vertical component {rest} = 0 over irrational x"));
        }
        cands.extend(roots.into_iter().map(|(r, _)| r));
    }
    if g.degree_in("y") > 0 {
        let gy = g.derivative("y");
        let disc = resultant_in(&g, &gy, "x", "y")?;
        let (roots, rest) = disc.split_rational()?;
        cands.extend(roots.into_iter().map(|(r, _)| r));
        if rest.degree().unwrap_or(0) > 0 {
            let gx = g.derivative("x");
            let r2 = if gx.is_zero() { UPoly::zero() } else { resultant_in(&g, &gx, "x", "y")? };
            if r2.is_zero() || rest.gcd(&r2).degree().unwrap_or(0) > 0 {
                out.failures.push(format!("possible singular points over the roots of {rest}"));
            }
        }
    }
    cands.sort();
    cands.dedup();

    let fx = f.derivative("x");
    let fy = f.derivative("y");
    let vars = ["x", "y"];
    for c in cands {
        let line = &Poly::var(&vars, "x") - &Poly::constant(&vars, c.clone());
        let ys: UPoly = match f.div_exact(&line) {
            // A vertical line component: singular points are where it meets the rest.
            Some(h) => {
                let hc = fiber(&h, &c);
                let (_, rest) = hc.split_rational()?;
                crossings(out, format!("x = {c}"), &rest, "y");
                hc
            }
            None => {
                let phi = fiber(f, &c).gcd(&fiber(&fx, &c)).gcd(&fiber(&fy, &c));
                if phi.degree().unwrap_or(0) == 0 {
                    continue;
                }
                let (_, rest) = phi.split_rational()?;
                if rest.degree().unwrap_or(0) > 0 {
                    out.failures.push(format!("singular points on x = {c} at irrational y"));
                }
                phi
            }
        };
        for (y, _) in ys.rational_roots()? {
            out.points.push(classify_at(f, c.clone(), y)?);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly_in;

    fn audit(s: &str) -> CurveAudit {
        audit_curve(&parse_poly_in(s, &["x", "y"]).unwrap(), PointFilter::All).unwrap()
    }

    #[test]
    fn nodal_cubic_and_lines() {
        let a = audit("y^2 - x^2*(x + 1)");
        assert!(a.is_certified());
        assert_eq!(a.points.len(), 1);
        assert_eq!(a.points[0].singularity, SingularityType::A(1));

        // Three concurrent lines plus a far away node.
        let a = audit("y*(x^2 - y^2)*((x - 5)^2 - (y - 7)^2)");
        assert!(a.is_certified());
        assert_eq!(a.count(SingularityType::D(4)), 1);
        assert!(a.count(SingularityType::A(1)) >= 1);
    }

    #[test]
    fn irrational_transverse_points() {
        // The line x = 0 meets the conic y² = 2 + x at two irrational points.
        let a = audit("x*(y^2 - 2 - x)");
        assert!(a.is_certified());
        assert_eq!(a.count(SingularityType::A(1)), 2);
    }

    #[test]
    fn repeated_component_fails() {
        assert!(!audit("(x - y)^2*y").is_certified());
    }
}
