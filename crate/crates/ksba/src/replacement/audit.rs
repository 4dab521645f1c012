//! Singularity and conductor audits of a branch curve on a whole component,
//! by a disjoint cover of affine strata.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{EpsNum, Poly, Rat};
use crate::error::Result;
use crate::singularities::{
    audit_curve, classify_ade, is_lc_pair, multiplicity, CurveGerm, PointFilter, PointLocation, SingularityType,
};

/// The ambient surface of a component, by its homogeneous coordinates. The
/// conductor is `t = 0` in each case.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Ambient {
    /// `[u:t] × [a:b]`.
    P1xP1 { u: String, t: String, a: String, b: String },
    /// `[u:t:w]`.
    P2 { u: String, t: String, w: String },
    /// `[u:t:w]` with `w` of weight two.
    P112 { u: String, t: String, w: String },
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::P1xP1 { u, t, a, b } => write!(f, "P1xP1 [{u}:{t}]x[{a}:{b}]"),
            Ambient::P2 { u, t, w } => write!(f, "P2 [{u}:{t}:{w}]"),
            Ambient::P112 { u, t, w } => write!(f, "P(1,1,2) [{u}:{t}:{w}]"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AuditPoint {
    pub location: String,
    pub singularity: SingularityType,
    pub count: u32,
    pub lc: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComponentAudit {
    pub ambient: Ambient,
    pub points: Vec<AuditPoint>,
    /// The branch meets the conductor transversally at smooth points.
    pub conductor_transverse: bool,
    pub failures: Vec<String>,
}

impl ComponentAudit {
    pub fn passes(&self) -> bool {
        self.failures.is_empty() && self.conductor_transverse && self.points.iter().all(|p| p.lc)
    }

    pub fn count(&self, t: SingularityType) -> u32 {
        self.points.iter().filter(|p| p.singularity == t).map(|p| p.count).sum()
    }
}

enum Slot {
    One,
    Zero,
    X,
    Y,
}

/// Substitutes the homogeneous coordinates by 1, 0, `x` or `y`.
fn chart(f: &Poly, assign: &[(&str, Slot)]) -> Result<Poly> {
    let xy = ["x", "y"];
    let subs: BTreeMap<String, Poly> = assign
        .iter()
        .map(|(n, s)| {
            let p = match s {
                Slot::One => Poly::constant(&xy, Rat::one()),
                Slot::Zero => Poly::zero(&xy),
                Slot::X => Poly::var(&xy, "x"),
                Slot::Y => Poly::var(&xy, "y"),
            };
            (n.to_string(), p)
        })
        .collect();
    let g = f.compose(&subs);
    // Fails if `f` has a variable outside the ambient coordinates.
    g.with_vars(&["x".to_string(), "y".to_string()])
}

struct Stratum<'a> {
    assign: Vec<(&'a str, Slot)>,
    filter: PointFilter,
    x: &'a str,
    y: &'a str,
    fixed: String,
}

fn record(out: &mut ComponentAudit, location: String, singularity: SingularityType, count: u32, lc: bool) {
    out.points.push(AuditPoint { location, singularity, count, lc });
}

fn lc_at(germ: &CurveGerm) -> Result<bool> {
    is_lc_pair(germ, &EpsNum::half_one_plus_eps())
}

fn run_stratum(f: &Poly, s: &Stratum, out: &mut ComponentAudit) -> Result<()> {
    let g = chart(f, &s.assign)?;
    let a = audit_curve(&g, s.filter)?;
    for fail in a.failures {
        out.failures.push(format!("{}: {fail}", s.fixed));
    }
    for p in a.points {
        match &p.location {
            PointLocation::Rational { x, y } => {
                let lc = lc_at(&CurveGerm::at_point(&g, x, y)?)?;
                record(out, format!("{}={x}, {}={y} ({})", s.x, s.y, s.fixed), p.singularity, 1, lc);
            }
            // Transverse crossings of a line with the rest of the curve.
            PointLocation::Irrational { line, roots_of, count } => {
                let loc = format!("{count} point(s) on {line} where {roots_of} = 0, x={} y={} ({})", s.x, s.y, s.fixed);
                record(out, loc, p.singularity, *count, p.singularity.is_simple());
            }
        }
    }
    Ok(())
}

/// Checks a single point, the origin of the chart.
fn run_point(f: &Poly, assign: Vec<(&str, Slot)>, label: String, out: &mut ComponentAudit) -> Result<()> {
    let g = chart(f, &assign)?;
    if !g.constant_term().is_zero() {
        return Ok(());
    }
    let germ = CurveGerm::new(g)?;
    if multiplicity(&germ) >= 2 {
        let lc = lc_at(&germ)?;
        record(out, label, classify_ade(&germ), 1, lc);
    }
    Ok(())
}

/// Whether a binary form, dehomogenized to `p` (of the given form degree),
/// has only simple roots including the point at infinity.
fn binary_form_reduced(p: &Poly, var: &str, form_degree: u32) -> bool {
    let Some(u) = p.to_upoly(var) else { return false };
    match u.degree() {
        None => false,
        Some(d) => u.is_squarefree() && form_degree - (d as u32) <= 1,
    }
}

/// Audits `(S, D + ((1+ε)/2)·{f = 0})` where `f` is the product of the
/// branch pieces and `D = {t = 0}`.
pub fn audit_branch(ambient: &Ambient, pieces: &[Poly]) -> Result<ComponentAudit> {
    let f = pieces.iter().fold(None::<Poly>, |acc, p| Some(match acc {
        None => p.clone(),
        Some(a) => &a * p,
    }));
    let mut out = ComponentAudit {
        ambient: ambient.clone(),
        points: vec![],
        conductor_transverse: false,
        failures: vec![],
    };
    let Some(f) = f else {
        out.failures.push("empty branch".into());
        return Ok(out);
    };
    use Slot::*;
    match ambient {
        Ambient::P1xP1 { u, t, a, b } => {
            let strata = [
                Stratum { assign: vec![(t, One), (b, One), (u, X), (a, Y)], filter: PointFilter::All, x: u, y: a, fixed: format!("{t}=1, {b}=1") },
                Stratum { assign: vec![(t, One), (a, One), (u, X), (b, Y)], filter: PointFilter::OnlyYZero, x: u, y: b, fixed: format!("{t}=1, {a}=1") },
                Stratum { assign: vec![(u, One), (b, One), (a, X), (t, Y)], filter: PointFilter::OnlyYZero, x: a, y: t, fixed: format!("{u}=1, {b}=1") },
            ];
            for s in &strata {
                run_stratum(&f, s, &mut out)?;
            }
            let label = format!("{t}=0, {b}=0 ({u}=1, {a}=1)");
            run_point(&f, vec![(u, One), (a, One), (t, X), (b, Y)], label, &mut out)?;
            let d = f.terms().next().map(|(e, _)| {
                let ia = f.var_index(a).map_or(0, |i| e[i]);
                let ib = f.var_index(b).map_or(0, |i| e[i]);
                ia + ib
            });
            let restricted = chart(&f, &[(u, One), (t, Zero), (a, X), (b, One)])?;
            out.conductor_transverse = binary_form_reduced(&restricted, "x", d.unwrap_or(0));
        }
        Ambient::P2 { u, t, w } => {
            let strata = [
                Stratum { assign: vec![(t, One), (u, X), (w, Y)], filter: PointFilter::All, x: u, y: w, fixed: format!("{t}=1") },
                Stratum { assign: vec![(w, One), (u, X), (t, Y)], filter: PointFilter::OnlyYZero, x: u, y: t, fixed: format!("{w}=1") },
            ];
            for s in &strata {
                run_stratum(&f, s, &mut out)?;
            }
            let label = format!("{t}=0, {w}=0 ({u}=1)");
            run_point(&f, vec![(u, One), (t, X), (w, Y)], label, &mut out)?;
            let restricted = chart(&f, &[(t, Zero), (u, X), (w, One)])?;
            out.conductor_transverse = binary_form_reduced(&restricted, "x", f.total_degree().unwrap_or(0));
        }
        Ambient::P112 { u, t, w } => {
            let strata = [
                Stratum { assign: vec![(t, One), (u, X), (w, Y)], filter: PointFilter::All, x: u, y: w, fixed: format!("{t}=1") },
                Stratum { assign: vec![(u, One), (w, X), (t, Y)], filter: PointFilter::OnlyYZero, x: w, y: t, fixed: format!("{u}=1") },
            ];
            for s in &strata {
                run_stratum(&f, s, &mut out)?;
            }
            let vertex = chart(&f, &[(u, Zero), (t, Zero), (w, One)])?;
            if vertex.constant_term().is_zero() {
                out.failures.push(format!("branch passes through the vertex {u}={t}=0"));
            }
            // The vertex is off the branch, so only the chart u = 1 matters.
            let restricted = chart(&f, &[(u, One), (t, Zero), (w, X)])?;
            let deg = restricted.degree_in("x");
            out.conductor_transverse = binary_form_reduced(&restricted, "x", deg);
        }
    }
    Ok(out)
}
