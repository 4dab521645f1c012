//! The built-in surfaces. The type c lattices are entered directly from their
//! intersection tables.

use super::{blow_up, DivisorClass, Incidence, MarkedPoint, SingularPoint, SurfaceModel};
use crate::algebra::Rat;
use crate::error::{Error, Result};

const IDS: [&str; 8] = [
    "P1xP1",
    "P2",
    "F2cone",
    "Ex5.4-Pprime",
    "Ex5.5-central",
    "Ex5.7-Y1",
    "Ex5.7-Y2",
    "Ex5.8-Y1",
];

pub fn catalog_ids() -> &'static [&'static str] {
    &IDS
}

/// Looks up a built-in model by identifier.
pub fn catalog(id: &str) -> Result<SurfaceModel> {
    let s = match id {
        "P1xP1" => p1xp1(),
        "P2" => p2(),
        "F2cone" => f2cone(),
        "Ex5.4-Pprime" => pprime()?,
        "Ex5.5-central" => central_b()?,
        "Ex5.7-Y1" => toric_y(id, ["M0", "M1", "L0", "D_Y1"], "B_Y1"),
        "Ex5.7-Y2" => toric_y(id, ["N0", "N1", "T", "D_Y2"], "B_Y2"),
        "Ex5.8-Y1" => middle_y(),
        _ => return Err(Error::UnknownLabel(format!("surface model {id}"))),
    };
    s.validate()?;
    Ok(s)
}

fn r(p: i64, q: i64) -> Rat {
    Rat::new(p, q)
}

fn matrix(rows: &[&[(i64, i64)]]) -> Vec<Vec<Rat>> {
    rows.iter().map(|row| row.iter().map(|&(p, q)| r(p, q)).collect()).collect()
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn point(label: &str, curves: &[&str]) -> MarkedPoint {
    MarkedPoint {
        label: label.into(),
        incidences: curves
            .iter()
            .map(|c| Incidence { curve: c.to_string(), multiplicity: 1, weighted_valuation: 1 })
            .collect(),
    }
}

fn sing(location: &str, kind: &str) -> SingularPoint {
    SingularPoint { location: location.into(), kind: kind.into() }
}

/// Basis (1,0), (0,1): the classes of a vertical line `x = c` and a
/// horizontal line `y = c`. The marked points are `p0 = {x0 = y1 = 0}` and
/// `p1 = {x1 = y0 = 0}`.
fn p1xp1() -> SurfaceModel {
    SurfaceModel {
        name: "P1xP1".into(),
        basis: names(&["(1,0)", "(0,1)"]),
        pairing: matrix(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]),
        canonical: DivisorClass::from_ints(&[-2, -2]),
        test_curves: vec![
            ("vertical".into(), DivisorClass::from_ints(&[1, 0])),
            ("horizontal".into(), DivisorClass::from_ints(&[0, 1])),
        ],
        singular_points: vec![],
        points: vec![point("p0", &["vertical", "horizontal"]), point("p1", &["vertical", "horizontal"])],
        classes: vec![],
    }
}

fn p2() -> SurfaceModel {
    SurfaceModel {
        name: "P2".into(),
        basis: names(&["h"]),
        pairing: matrix(&[&[(1, 1)]]),
        canonical: DivisorClass::from_ints(&[-3]),
        test_curves: vec![("line".into(), DivisorClass::from_ints(&[1]))],
        singular_points: vec![],
        points: vec![point("p", &["line"])],
        classes: vec![],
    }
}

/// The quadric cone P(1,1,2); `f` is a ruling line through the vertex.
fn f2cone() -> SurfaceModel {
    SurfaceModel {
        name: "F2cone".into(),
        basis: names(&["f"]),
        pairing: matrix(&[&[(1, 2)]]),
        canonical: DivisorClass::from_ints(&[-4]),
        test_curves: vec![("ruling".into(), DivisorClass::from_ints(&[1]))],
        singular_points: vec![sing("vertex", "A1")],
        points: vec![],
        classes: vec![],
    }
}

/// P1xP1 blown up at `p0`, with the branch class of the type b degeneration.
fn pprime() -> Result<SurfaceModel> {
    let mut s = blow_up(&p1xp1(), "p0", 1)?;
    s.name = "Ex5.4-Pprime".into();
    let b = &DivisorClass::from_ints(&[4, 4, 0]) - &DivisorClass::from_ints(&[0, 0, 4]);
    s.classes.push(("B".into(), b));
    Ok(s)
}

/// P1xP1 blown up at `p0` and `p1`. The pencil of (1,1) curves through both
/// points is the diagonal ruling.
fn central_b() -> Result<SurfaceModel> {
    let s = blow_up(&blow_up(&p1xp1(), "p0", 1)?, "p1", 1)?;
    let rename = |n: &str| match n {
        "e_p0" => "D_E0".to_string(),
        "e_p1" => "D_E1".to_string(),
        _ => n.to_string(),
    };
    let mut s = SurfaceModel {
        name: "Ex5.5-central".into(),
        basis: s.basis.iter().map(|b| rename(b)).collect(),
        test_curves: s.test_curves.iter().map(|(n, c)| (rename(n), c.clone())).collect(),
        ..s
    };
    s.test_curves.push(("diagonal".into(), DivisorClass::from_ints(&[1, 1, -1, -1])));
    Ok(s)
}

/// The two components of the type c limit: toric, with boundary curves
/// `m0, m1, l, d` in basis order, where `d` is the double curve and `l` lies
/// in the branch.
fn toric_y(id: &str, b: [&str; 4], branch_name: &str) -> SurfaceModel {
    let [m0, m1, _, d] = b;
    let mut s = SurfaceModel {
        name: id.into(),
        basis: names(&b),
        pairing: matrix(&[
            &[(-1, 2), (0, 1), (1, 1), (1, 2)],
            &[(0, 1), (1, 2), (1, 1), (1, 2)],
            &[(1, 1), (1, 1), (0, 1), (0, 1)],
            &[(1, 2), (1, 2), (0, 1), (0, 1)],
        ]),
        canonical: DivisorClass::from_ints(&[-1, -1, -1, -1]),
        test_curves: b.iter().enumerate().map(|(i, n)| (n.to_string(), DivisorClass::unit(4, i))).collect(),
        singular_points: vec![sing(&format!("{m0}∩{d}"), "A1"), sing(&format!("{m1}∩{d}"), "A1")],
        points: vec![],
        classes: vec![],
    };
    let branch = s
        .class_from_pairings(&[r(1, 1), r(3, 1), r(4, 1), r(2, 1)])
        .expect("the printed branch column is consistent");
    // The branch minus its boundary line.
    let residual = &branch - &DivisorClass::unit(4, 2);
    s.classes.push((branch_name.into(), branch));
    s.classes.push(("C".into(), residual));
    s
}

/// The middle component of the type c limit, contracted vertically.
fn middle_y() -> SurfaceModel {
    let b = ["M0", "M1", "D12", "D13"];
    let mut s = SurfaceModel {
        name: "Ex5.8-Y1".into(),
        basis: names(&b),
        pairing: matrix(&[
            &[(0, 1), (0, 1), (1, 2), (1, 2)],
            &[(0, 1), (0, 1), (1, 2), (1, 2)],
            &[(1, 2), (1, 2), (0, 1), (0, 1)],
            &[(1, 2), (1, 2), (0, 1), (0, 1)],
        ]),
        canonical: DivisorClass::from_ints(&[-2, 0, 0, -2]),
        test_curves: b.iter().enumerate().map(|(i, n)| (n.to_string(), DivisorClass::unit(4, i))).collect(),
        singular_points: vec![
            sing("M0∩D12", "A1"),
            sing("M0∩D13", "A1"),
            sing("M1∩D12", "A1"),
            sing("M1∩D13", "A1"),
        ],
        points: vec![],
        classes: vec![],
    };
    let branch = s
        .class_from_pairings(&[r(0, 1), r(0, 1), r(2, 1), r(2, 1)])
        .expect("the printed branch column is consistent");
    s.classes.push(("B_Y1".into(), branch));
    s
}
