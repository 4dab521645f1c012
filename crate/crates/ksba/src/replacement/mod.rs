//! Stable limits of the branch-curve pairs over the exceptional divisors of
//! the Kirwan blow-up, for the three normal forms.

mod audit;
mod spec;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::algebra::{EpsNum, Poly, Rat};
use crate::error::{precondition, Error, Result};
use crate::groups::Permutation;
use crate::lattice::{
    catalog, contraction_evidence, log_divisor, pair, positivity_report, ContractionEvidence, DivisorClass,
    PositivityReport, SurfaceModel, Verdict,
};
use crate::singularities::SingularityType;
use crate::stability::Kind;

pub use audit::{audit_branch, Ambient, AuditPoint, ComponentAudit};
pub use spec::{
    component_branch_curve, component_invariants, cross_ratio_orbit_rep, normal_partition, separation_invariant,
    DegenerationSpec, Hypotheses,
};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BranchPiece {
    pub label: String,
    pub class: DivisorClass,
    pub poly: Option<Poly>,
}

/// A surviving component of the stable limit.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    pub surface: SurfaceModel,
    pub branch: Vec<BranchPiece>,
    pub conductor: DivisorClass,
    pub log_class: DivisorClass,
    pub certificate: PositivityReport,
    pub audit: ComponentAudit,
    /// Cross-ratio of the four marked boundary points, when distinct.
    pub marked_invariant: Option<Rat>,
}

/// A component of the semistable limit removed by the final contraction.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ContractedComponent {
    pub label: String,
    pub surface: SurfaceModel,
    pub conductor: DivisorClass,
    pub branch: DivisorClass,
    pub log_class: DivisorClass,
    pub evidence: ContractionEvidence,
    /// "horizontal", "diagonal" or "vertical".
    pub direction: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GluingEdge {
    pub from: String,
    pub to: String,
    pub curve: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StablePairModel {
    pub spec: Option<DegenerationSpec>,
    pub relabeling: Permutation,
    pub components: Vec<Component>,
    pub gluing: Vec<GluingEdge>,
    pub contracted: Vec<ContractedComponent>,
    /// Steps of the construction, including those carried without lattices.
    pub pipeline: Vec<String>,
}

pub const GENUS_ONE: &str = "genus-one double curve";

fn coeff() -> EpsNum {
    EpsNum::half_one_plus_eps()
}

fn sum_classes(s: &SurfaceModel, pieces: &[BranchPiece]) -> DivisorClass {
    pieces.iter().fold(DivisorClass::zero(s.dim()), |acc, p| &acc + &p.class)
}

fn var(name: &str) -> Poly {
    Poly::var(&[name], name)
}

struct SideData {
    label: &'static str,
    surface: SurfaceModel,
    ambient: Ambient,
    conductor: DivisorClass,
    /// (label, class) of the curve `C_i` and of each branch line.
    curve_class: DivisorClass,
    lines: Vec<(&'static str, &'static str, DivisorClass)>,
}

fn side_data(kind: Kind, side: usize) -> Result<SideData> {
    let (u, w_line, w_label) = if side == 0 { ("x0", "y1", "L1") } else { ("x1", "y0", "L0") };
    let s = |x: &str| x.to_string();
    Ok(match kind {
        Kind::A => {
            let p = catalog("P1xP1")?;
            SideData {
                label: if side == 0 { "E0" } else { "E1" },
                ambient: Ambient::P1xP1 { u: s(u), t: s("t"), a: s("y0"), b: s("y1") },
                conductor: DivisorClass::from_ints(&[1, 0]),
                curve_class: DivisorClass::from_ints(&[2, 2]),
                lines: vec![
                    ("L0", "y0", DivisorClass::from_ints(&[0, 1])),
                    ("L1", "y1", DivisorClass::from_ints(&[0, 1])),
                ],
                surface: p,
            }
        }
        Kind::B => SideData {
            label: if side == 0 { "E0" } else { "E1" },
            surface: catalog("P2")?,
            ambient: Ambient::P2 { u: s(u), t: s("t"), w: s(w_line) },
            conductor: DivisorClass::from_ints(&[1]),
            curve_class: DivisorClass::from_ints(&[3]),
            lines: vec![(w_label, w_line, DivisorClass::from_ints(&[1]))],
        },
        Kind::C => {
            let (id, d, l) = if side == 0 { ("Ex5.7-Y1", "D_Y1", "L0") } else { ("Ex5.7-Y2", "D_Y2", "T") };
            let y = catalog(id)?;
            SideData {
                label: if side == 0 { "Y2" } else { "Y3" },
                ambient: Ambient::P112 { u: s(u), t: s("t"), w: s(w_line) },
                conductor: y.class(d)?,
                curve_class: y.class("C")?,
                lines: vec![(w_label, w_line, y.class(l)?)],
                surface: y,
            }
        }
    })
}

fn build_component(spec: &DegenerationSpec, side: usize) -> Result<Component> {
    let d = side_data(spec.kind(), side)?;
    let c = component_branch_curve(spec, side)?;
    let mut branch = vec![BranchPiece { label: format!("C{side}"), class: d.curve_class, poly: Some(c) }];
    for (label, v, class) in d.lines {
        branch.push(BranchPiece { label: label.into(), class, poly: Some(var(v)) });
    }
    let polys: Vec<Poly> = branch.iter().filter_map(|b| b.poly.clone()).collect();
    let audit = audit_branch(&d.ambient, &polys)?;
    let log_class = log_divisor(&d.surface, &d.conductor, &sum_classes(&d.surface, &branch), &coeff())?;
    let certificate = positivity_report(&d.surface, &log_class)?;
    Ok(Component {
        label: d.label.into(),
        surface: d.surface,
        branch,
        conductor: d.conductor,
        log_class,
        certificate,
        audit,
        marked_invariant: component_invariants(spec)[side].clone(),
    })
}

fn expected_direction(kind: Kind) -> &'static str {
    match kind {
        Kind::A => "horizontal",
        Kind::B => "diagonal",
        Kind::C => "vertical",
    }
}

/// The direction a single ruling represents, by its test-curve name.
fn direction_of(ruling: &str) -> Option<&'static str> {
    match ruling {
        "horizontal" => Some("horizontal"),
        "vertical" => Some("vertical"),
        "diagonal" => Some("diagonal"),
        // The fibers of the middle type c component are M0 and M1.
        "M0" | "M1" => Some("vertical"),
        _ => None,
    }
}

fn central_component(kind: Kind) -> Result<ContractedComponent> {
    let (label, surface, conductor, branch) = match kind {
        Kind::A => {
            let s = catalog("P1xP1")?;
            (
                "P",
                s,
                DivisorClass::from_ints(&[2, 0]),
                DivisorClass::from_ints(&[0, 4]),
            )
        }
        Kind::B => {
            let s = catalog("Ex5.5-central")?;
            let d = &s.class("D_E0")? + &s.class("D_E1")?;
            let b = DivisorClass::from_ints(&[4, 4, -4, -4]);
            ("P''", s, d, b)
        }
        Kind::C => {
            let s = catalog("Ex5.8-Y1")?;
            let d = &s.class("D12")? + &s.class("D13")?;
            let b = s.class("B_Y1")?;
            ("Y1", s, d, b)
        }
    };
    let log_class = log_divisor(&surface, &conductor, &branch, &coeff())?;
    let evidence = contraction_evidence(&surface, &log_class)?;
    let direction = evidence
        .rulings
        .first()
        .and_then(|r| direction_of(r))
        .unwrap_or("none")
        .to_string();
    Ok(ContractedComponent { label: label.into(), surface, conductor, branch, log_class, evidence, direction })
}

fn pipeline(kind: Kind) -> Vec<String> {
    let steps: &[&str] = match kind {
        Kind::A => &[
            "blow up the double lines x0=t=0 and x1=t=0 in the central fiber",
            "exceptional components E0, E1 ≅ P1xP1 glued to the central P",
            "contract P horizontally",
        ],
        Kind::B => &[
            "blow up the non-lc points x0=y1=t=0 and x1=y0=t=0",
            "exceptional components E0, E1 ≅ P2 glued to the central ruled surface P''",
            "contract P'' diagonally",
        ],
        Kind::C => &[
            "weighted (1,1,2) blow-ups at the points x0=y1=t=0 and x1=y0=t=0, giving F0, F1",
            "flips of the curves W_i and V_i (intermediate surfaces carried without lattices)",
            "components Y2, Y3 with the toric lattices, glued to the central Y1",
            "contract Y1 vertically",
        ],
    };
    steps.iter().map(|s| s.to_string()).collect()
}

/// The stable limit for a degeneration in normal form, with all audits.
/// Fails with [`Error::Audit`] rather than return an uncertified model.
pub fn limit_stable_pair(spec: &DegenerationSpec) -> Result<StablePairModel> {
    let components = [0, 1]
        .into_iter()
        .map(|side| build_component(spec, side))
        .collect::<Result<Vec<_>>>()?;
    let gluing = vec![GluingEdge {
        from: components[0].label.clone(),
        to: components[1].label.clone(),
        curve: GENUS_ONE.into(),
    }];
    let m = StablePairModel {
        spec: Some(spec.clone()),
        relabeling: spec.relabeling(),
        components,
        gluing,
        contracted: vec![central_component(spec.kind())?],
        pipeline: pipeline(spec.kind()),
    };
    let report = verify_stability(&m);
    if let Some(f) = report.failures.first() {
        return Err(Error::Audit { component: f.component.clone(), item: f.item.clone() });
    }
    Ok(m)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StabilityFailure {
    pub component: String,
    pub item: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct StabilityReport {
    pub failures: Vec<StabilityFailure>,
}

impl StabilityReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, component: &str, item: impl Into<String>) {
        self.failures.push(StabilityFailure { component: component.into(), item: item.into() });
    }
}

fn verify_component(c: &Component, r: &mut StabilityReport) {
    let label = c.label.as_str();
    if let Err(e) = c.surface.validate() {
        r.fail(label, format!("invalid surface: {e}"));
        return;
    }
    match log_divisor(&c.surface, &c.conductor, &sum_classes(&c.surface, &c.branch), &coeff())
        .and_then(|l| positivity_report(&c.surface, &l))
    {
        Ok(p) => match p.verdict {
            Verdict::AmpleCertified => {}
            Verdict::Degenerate(v) => r.fail(label, format!("log class is trivial on {}", v.join(", "))),
            Verdict::Negative(v) => r.fail(label, format!("log class is negative on {}", v.join(", "))),
        },
        Err(e) => r.fail(label, format!("log class: {e}")),
    }
    let mut polys = Vec::new();
    for b in &c.branch {
        match &b.poly {
            Some(p) => polys.push(p.clone()),
            None => r.fail(label, format!("branch piece {} has no equation to audit", b.label)),
        }
    }
    match audit_branch(&c.audit.ambient, &polys) {
        Ok(a) => {
            for f in &a.failures {
                r.fail(label, format!("audit: {f}"));
            }
            for p in a.points.iter().filter(|p| !p.lc) {
                r.fail(label, format!("non-lc point {} of type {}", p.location, p.singularity));
            }
            if !a.conductor_transverse {
                r.fail(label, "branch is not transverse to the conductor");
            }
        }
        Err(e) => r.fail(label, format!("audit: {e}")),
    }
}

fn verify_contracted(c: &ContractedComponent, r: &mut StabilityReport) {
    let label = c.label.as_str();
    let ev = log_divisor(&c.surface, &c.conductor, &c.branch, &coeff())
        .and_then(|l| contraction_evidence(&c.surface, &l));
    match ev {
        Ok(ev) if ev.is_single_ruling() => {
            let dir = direction_of(&ev.rulings[0]);
            if dir != Some(c.direction.as_str()) {
                r.fail(label, format!("contracts along {:?}, recorded as {}", ev.rulings[0], c.direction));
            }
        }
        Ok(ev) => r.fail(label, format!("not a single ruling: {ev:?}")),
        Err(e) => r.fail(label, format!("contraction: {e}")),
    }
}

fn connected(m: &StablePairModel) -> bool {
    let labels: BTreeSet<&str> = m.components.iter().map(|c| c.label.as_str()).collect();
    let Some(&start) = labels.iter().next() else { return false };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for e in &m.gluing {
            for (a, b) in [(e.from.as_str(), e.to.as_str()), (e.to.as_str(), e.from.as_str())] {
                if a == v && labels.contains(b) && seen.insert(b) {
                    stack.push(b);
                }
            }
        }
    }
    seen.len() == labels.len()
}

/// Re-runs every audit from the stored equations and classes.
pub fn verify_stability(m: &StablePairModel) -> StabilityReport {
    let mut r = StabilityReport::default();
    for c in &m.components {
        verify_component(c, &mut r);
    }
    for c in &m.contracted {
        verify_contracted(c, &mut r);
    }
    if let Some(spec) = &m.spec {
        let want = expected_direction(spec.kind());
        for c in &m.contracted {
            if c.direction != want {
                r.fail(&c.label, format!("contracted {}, expected {want}", c.direction));
            }
        }
    }
    if !connected(m) {
        r.fail("gluing", "gluing graph is not connected");
    }
    r
}

/// Data of the double cover of one component branched along its branch
/// divisor.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CoverMetadata {
    pub component: String,
    /// `K_X = π^*(K + B/2)`, as the class downstairs.
    pub canonical_downstairs: DivisorClass,
    /// `K_X² = 2·(K + B/2)²`.
    pub k_squared: Rat,
    /// Singular points of the cover, over the branch singularities.
    pub singularities: BTreeMap<String, u32>,
    pub flags: Vec<String>,
}

pub fn double_cover_metadata(m: &StablePairModel, index: usize) -> Result<CoverMetadata> {
    let c = m
        .components
        .get(index)
        .ok_or_else(|| Error::UnknownLabel(format!("component index {index}")))?;
    let s = &c.surface;
    let b = sum_classes(s, &c.branch);
    let k = &s.canonical + &b.scale_rat(&Rat::new(1, 2));
    let k2 = pair(s, &k, &k)?.c.clone() * Rat::int(2);
    let mut flags: Vec<String> = match s.name.as_str() {
        "P1xP1" | "Ex5.7-Y1" | "Ex5.7-Y2" => vec!["rational".into(), "elliptic-fibration".into()],
        "P2" => vec!["anti-ample-canonical".into(), "weak-dP2-resolution".into()],
        other => return precondition(format!("no double-cover data for surface {other}")),
    };
    if m.gluing.iter().any(|e| (e.from == c.label || e.to == c.label) && e.curve == GENUS_ONE) {
        flags.push("genus-one-gluing".into());
    }
    let mut singularities = BTreeMap::new();
    for p in &c.audit.points {
        *singularities.entry(p.singularity.to_string()).or_insert(0) += p.count;
    }
    Ok(CoverMetadata {
        component: c.label.clone(),
        canonical_downstairs: k,
        k_squared: k2,
        singularities,
        flags,
    })
}

/// What a component contributes to the isomorphism test.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Signature {
    surface: String,
    ample: bool,
    singularities: BTreeMap<String, u32>,
    invariant_orbit: Option<Rat>,
}

fn signature(c: &Component) -> Result<Signature> {
    let mut singularities = BTreeMap::new();
    for p in &c.audit.points {
        *singularities.entry(p.singularity.to_string()).or_insert(0) += p.count;
    }
    Ok(Signature {
        surface: c.surface.name.clone(),
        ample: c.certificate.verdict == Verdict::AmpleCertified,
        singularities,
        invariant_orbit: c.marked_invariant.as_ref().map(cross_ratio_orbit_rep).transpose()?,
    })
}

/// Compares models by their component multisets, certificates, singularity
/// counts and the S₄-orbits of the marked cross-ratios.
pub fn models_isomorphic(a: &StablePairModel, b: &StablePairModel) -> Result<bool> {
    let sig = |m: &StablePairModel| -> Result<Vec<Signature>> {
        let mut v = m.components.iter().map(signature).collect::<Result<Vec<_>>>()?;
        v.sort();
        Ok(v)
    };
    let contracted = |m: &StablePairModel| {
        let mut v: Vec<(String, String)> =
            m.contracted.iter().map(|c| (c.surface.name.clone(), c.direction.clone())).collect();
        v.sort();
        v
    };
    Ok(sig(a)? == sig(b)? && contracted(a) == contracted(b))
}

/// The singularity type counts of a component audit.
pub fn singularity_summary(a: &ComponentAudit) -> Vec<(SingularityType, u32)> {
    let mut m: BTreeMap<SingularityType, u32> = BTreeMap::new();
    for p in &a.points {
        *m.entry(p.singularity).or_insert(0) += p.count;
    }
    m.into_iter().collect()
}
