use compdyn_core::analytic::{check_rule_realizability, derive_tolerances, modulus_radius};
use compdyn_core::dynamics::{classify, default_probe, Map};
use compdyn_core::oracle::{brute_classify, BruteVerdict, BRUTE_STEPS, BRUTE_WINDOW};
use compdyn_core::schedule::{builtin, Cell, Family, Mode, Schedule, TheoremId};
use compdyn_core::{OrbitClass, Region};

fn disks(max: i64) -> Vec<Region> {
    let mut out = vec![Region::Base];
    for k in 1..=max {
        out.push(Region::GDisk(k));
        out.push(Region::BDisk(k));
    }
    out
}

#[test]
fn exactly_one_rule_matches_everywhere() {
    for id in TheoremId::ALL {
        let p = builtin(id);
        for s in [&p.f, &p.g] {
            let count = |c: &Cell| s.rules().iter().filter(|r| r.pattern.matches(s.mode(), c)).count();
            assert_eq!(count(&Cell::BASE), 1);
            for family in [Family::G, Family::B] {
                match s.mode() {
                    Mode::Linear => {
                        for k in 1..=10_000 {
                            assert_eq!(count(&Cell::new(family, [k, 0])), 1, "{id} [{}] {family}{k}", s.name());
                        }
                    }
                    Mode::Grid => {
                        for p in 0..=100 {
                            for q in 1..=100 {
                                assert_eq!(count(&Cell::new(family, [p, q])), 1, "{id} [{}] {family}({p},{q})", s.name());
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn every_rule_is_realizable() {
    for id in TheoremId::ALL {
        let p = builtin(id);
        for s in [&p.f, &p.g] {
            let tol = derive_tolerances(s, disks(50)).unwrap_or_else(|e| panic!("{id} [{}]: {e}", s.name()));
            assert_eq!(tol.epsilon.len(), 101);
            for r in disks(50) {
                let (target, lt) = s.log_target(r).unwrap();
                let rep = check_rule_realizability(r, target, &lt);
                assert!(rep.realizable(), "{id} [{}] {r}: {rep:?}", s.name());
                assert_eq!(tol.get(r), Some(modulus_radius(lt.c().unsigned_abs() as f64).unwrap()));
            }
        }
    }
}

#[test]
fn classifier_matches_brute_force_on_builtins() {
    let mut disagreements = Vec::new();
    for id in TheoremId::ALL {
        let p = builtin(id);
        for r in default_probe(p.f.mode()) {
            for m in Map::ALL {
                let (fast, slow) = m.with(&p.f, &p.g, |s| {
                    (classify(s, r).unwrap(), brute_classify(s, r, BRUTE_STEPS, BRUTE_WINDOW).unwrap())
                });
                let agree = match (&fast, slow) {
                    (OrbitClass::Periodic { period }, BruteVerdict::Periodic { period: q }) => *period == q,
                    (OrbitClass::Preperiodic { tail, period }, BruteVerdict::Preperiodic { tail: t, period: q }) => {
                        (*tail, *period) == (t, q)
                    }
                    (OrbitClass::Wandering { .. }, BruteVerdict::Wandering) => true,
                    _ => false,
                };
                if !agree {
                    disagreements.push(format!("{id} {m} {r}: {fast:?} vs {slow:?}"));
                }
            }
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:#?}");
}
