mod common;

use ksba::algebra::{Mobius, ProjPoint, Rat};
use ksba::groups::{enumerate_group, GroupSpec};
use ksba::replacement::{component_invariants, cross_ratio_orbit_rep, limit_stable_pair, models_isomorphic, DegenerationSpec};
use ksba::stability::Kind;
use proptest::prelude::*;
use rand::Rng;

use common::{collision_patterns, random_spec, rng, small_rat};

fn kind() -> impl Strategy<Value = Kind> {
    prop::sample::select(Kind::ALL.to_vec())
}

fn spec(kind: Kind, seed: u64) -> DegenerationSpec {
    let mut g = rng(seed);
    let pats = collision_patterns();
    let (a, b) = (g.gen_range(0..pats.len()), g.gen_range(0..pats.len()));
    random_spec(kind, pats[a], pats[b], &mut g)
}

fn random_mobius(g: &mut impl Rng, fixing: Option<&ProjPoint>) -> Mobius {
    loop {
        let m = Mobius::new(small_rat(g), small_rat(g), small_rat(g), small_rat(g));
        if let Ok(m) = m {
            if fixing.map_or(true, |p| m.apply(p) == *p) {
                return m;
            }
        }
    }
}

/// Applies `on_i` to the λ's of `I` and `on_c` to the rest; `None` if any
/// value leaves the affine line or the hypotheses fail.
fn twist(s: &DegenerationSpec, on_i: &Mobius, on_c: &Mobius) -> Option<DegenerationSpec> {
    let mut out: [Rat; 8] = std::array::from_fn(|_| Rat::zero());
    for i in 1..=8 {
        let m = if s.partition().contains(&i) { on_i } else { on_c };
        out[i - 1] = m.apply(&ProjPoint::finite(s.lambda()[i - 1].clone())).value()?.clone();
    }
    DegenerationSpec::new(s.kind(), &s.partition(), out).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn limits_are_h_equivariant(k in kind(), seed in any::<u64>(), h in 0usize..1152) {
        let s = spec(k, seed);
        let t = s.act(&enumerate_group(GroupSpec::H)[h]).unwrap();
        prop_assert_eq!(t.kind(), s.kind());
        let (ms, mt) = (limit_stable_pair(&s).unwrap(), limit_stable_pair(&t).unwrap());
        prop_assert!(models_isomorphic(&ms, &mt).unwrap(), "{} vs {}", s, t);
    }

    #[test]
    fn invariants_are_h_invariant(k in kind(), seed in any::<u64>(), h in 0usize..1152) {
        let s = spec(k, seed);
        let t = s.act(&enumerate_group(GroupSpec::H)[h]).unwrap();
        // Relabeling permutes the marked points, so only the S4-orbits agree.
        let reps = |x: &DegenerationSpec| {
            let mut v: Vec<Option<Rat>> = component_invariants(x)
                .into_iter()
                .map(|b| b.map(|b| cross_ratio_orbit_rep(&b).unwrap()))
                .collect();
            v.sort();
            v
        };
        prop_assert_eq!(reps(&s), reps(&t));
    }

    /// Types a and c take one Möbius map on every λ. Type b marks the points
    /// ∞ and 0, so it takes an affine map on `I` and a map fixing 0 on `I^c`.
    #[test]
    fn limits_are_mobius_invariant(k in kind(), seed in any::<u64>()) {
        let s = spec(k, seed);
        let mut g = rng(seed ^ 0x5eed);
        let twisted = (0..64).find_map(|_| {
            let (on_i, on_c) = match k {
                Kind::B => (
                    random_mobius(&mut g, Some(&ProjPoint::infinity())),
                    random_mobius(&mut g, Some(&ProjPoint::int(0))),
                ),
                _ => {
                    let m = random_mobius(&mut g, None);
                    (m.clone(), m)
                }
            };
            twist(&s, &on_i, &on_c)
        });
        let Some(t) = twisted else { return Ok(()) };
        let (ms, mt) = (limit_stable_pair(&s).unwrap(), limit_stable_pair(&t).unwrap());
        prop_assert!(models_isomorphic(&ms, &mt).unwrap(), "{} vs {}", s, t);
    }

    #[test]
    fn spec_json_round_trips(k in kind(), seed in any::<u64>()) {
        let s = spec(k, seed);
        let back: DegenerationSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }
}
