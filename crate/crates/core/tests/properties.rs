use std::collections::HashSet;

use proptest::prelude::*;

use compdyn_core::dynamics::{classify, orbit, OrbitClass};
use compdyn_core::lattice::{grid_to_linear, linear_to_grid, GridIndex, LinearIndex};
use compdyn_core::oracle::{brute_classify, BruteVerdict};
use compdyn_core::schedule::{builtin, compose, parse_spec, Mode, Schedule, TheoremId, TransitionSpec};
use compdyn_core::Region;

#[derive(Debug, Clone)]
enum Target {
    Base,
    Abs(u8, i64),
    Var(u8, i64),
}

fn family(f: u8) -> &'static str {
    if f == 0 {
        "G"
    } else {
        "B"
    }
}

fn target() -> impl Strategy<Value = Target> {
    prop_oneof![
        1 => Just(Target::Base),
        3 => (0u8..2, 1i64..=6).prop_map(|(f, v)| Target::Abs(f, v)),
    ]
}

fn guard_target(m: i64) -> impl Strategy<Value = Target> {
    prop_oneof![
        1 => target(),
        3 => (0u8..2, (1 - m)..=3).prop_map(|(f, d)| Target::Var(f, d)),
    ]
}

fn render(t: &Target, var: &str) -> String {
    match t {
        Target::Base => "BASE".into(),
        Target::Abs(f, v) => format!("{}[{v}]", family(*f)),
        Target::Var(f, 0) => format!("{}[{var}]", family(*f)),
        Target::Var(f, d) if *d > 0 => format!("{}[{var}+{d}]", family(*f)),
        Target::Var(f, d) => format!("{}[{var}-{}]", family(*f), -d),
    }
}

/// Total, disjoint linear spec: per family, exact rules below `m` and one
/// guard `k>=m`.
fn linear_spec() -> impl Strategy<Value = String> {
    let side = (1i64..=4).prop_flat_map(|m| (Just(m), prop::collection::vec(target(), (m - 1) as usize), guard_target(m)));
    (target(), side.clone(), side).prop_map(|(base, g, b)| {
        let mut text = format!("mode = linear\n[s]\nBASE -> {}\n", render(&base, "k"));
        for (fam, (m, exact, guard)) in [("G", g), ("B", b)] {
            for (k, t) in exact.iter().enumerate() {
                text.push_str(&format!("{fam}[{}] -> {}\n", k + 1, render(t, "k")));
            }
            text.push_str(&format!("{fam}[k>={m}] -> {}\n", render(&guard, "k")));
        }
        text
    })
}

/// Grid spec splitting rows `p < m` exactly and `p >= m` by guard; targets
/// either reset or shift each slot forward.
fn grid_spec() -> impl Strategy<Value = String> {
    let slot_p = prop_oneof![(0i64..=3).prop_map(|v| format!("{v}")), (0i64..=2).prop_map(|d| format!("p+{d}"))];
    let slot_q = prop_oneof![(1i64..=3).prop_map(|v| format!("{v}")), (0i64..=2).prop_map(|d| format!("q+{d}"))];
    let tgt = prop_oneof![
        1 => Just(None),
        4 => (0u8..2, slot_p, slot_q).prop_map(|(f, p, q)| Some((f, p, q))),
    ];
    let side = (1i64..=3).prop_flat_map(move |m| (Just(m), prop::collection::vec(tgt.clone(), (m + 1) as usize)));
    (side.clone(), side).prop_map(|(g, b)| {
        let mut text = String::from("mode = grid\n[s]\nBASE -> BASE\n");
        for (fam, (m, tgts)) in [("G", g), ("B", b)] {
            for (row, t) in tgts.iter().enumerate() {
                let lhs = if row as i64 == m { format!("{fam}[p>={m},q]") } else { format!("{fam}[{row},q]") };
                let rhs = match t {
                    None => "BASE".to_string(),
                    Some((f, p, q)) => {
                        // Exact rows bind no `p`.
                        let p = if row as i64 != m && p.starts_with('p') { "0".to_string() } else { p.clone() };
                        format!("{}[{p},{q}]", family(*f))
                    }
                };
                text.push_str(&format!("{lhs} -> {rhs}\n"));
            }
        }
        text
    })
}

fn probe(mode: Mode) -> Vec<Region> {
    compdyn_core::dynamics::probe_set(mode, if mode == Mode::Linear { 12 } else { 4 })
}

fn check_sound(s: &dyn Schedule, r: Region) -> Result<(), TestCaseError> {
    match classify(s, r).unwrap() {
        OrbitClass::Periodic { period } => {
            let o = orbit(s, r, period).unwrap();
            prop_assert_eq!(o[period], o[0]);
            prop_assert!(!o[1..period].contains(&o[0]));
        }
        OrbitClass::Preperiodic { tail, period } => {
            let o = orbit(s, r, tail + period).unwrap();
            prop_assert_eq!(o[tail], o[tail + period]);
            let distinct: HashSet<_> = o[..tail + period].iter().collect();
            prop_assert_eq!(distinct.len(), tail + period);
        }
        OrbitClass::Wandering { certificate } => {
            prop_assert!(certificate.net_shift > 0);
            let replay = certificate.replay(100).unwrap();
            let direct = orbit(s, r, replay.len() - 1).unwrap();
            prop_assert_eq!(&replay, &direct);
            let distinct: HashSet<_> = replay.iter().collect();
            prop_assert_eq!(distinct.len(), replay.len());
            let t = certificate.transient.len() - 1;
            let len = certificate.guard_cycle.len();
            let starts: Vec<i64> =
                (1..=100).map(|k| replay[t + k * len].disk_index().unwrap_or(0)).collect();
            prop_assert!(starts.windows(2).all(|w| w[1] > w[0]));
        }
    }
    Ok(())
}

fn all_builtin_specs() -> Vec<&'static TransitionSpec> {
    TheoremId::ALL.iter().flat_map(|&id| [&builtin(id).f, &builtin(id).g]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lattice_round_trip(n in 1i64..=1_000_000_000_000, p in 0i64..=1_000_000, q in 1i64..=1_000_000) {
        let g = linear_to_grid(LinearIndex::new(n).unwrap()).unwrap();
        prop_assert_eq!(grid_to_linear(g).unwrap().get(), n);
        let g = GridIndex::new(p, q).unwrap();
        prop_assert_eq!(linear_to_grid(grid_to_linear(g).unwrap()).unwrap(), g);
    }

    #[test]
    fn printed_rules_reparse(text in linear_spec()) {
        let s = parse_spec(&text).unwrap();
        let mut again = String::from("mode = linear\n[s]\n");
        for r in s.rules() {
            again.push_str(&format!("{r}\n"));
        }
        prop_assert_eq!(parse_spec(&again).unwrap(), s);
    }

    #[test]
    fn linear_classification_is_sound(text in linear_spec()) {
        let s = parse_spec(&text).unwrap();
        for r in probe(Mode::Linear) {
            check_sound(&s, r)?;
        }
    }

    #[test]
    fn grid_classification_is_sound(text in grid_spec()) {
        let s = parse_spec(&text).unwrap();
        for r in probe(Mode::Grid) {
            check_sound(&s, r)?;
        }
    }

    #[test]
    fn composites_are_sound(a in linear_spec(), b in linear_spec()) {
        let (a, b) = (parse_spec(&a).unwrap(), parse_spec(&b).unwrap());
        let ab = compose(&a, &b).unwrap();
        for r in probe(Mode::Linear) {
            check_sound(&ab, r)?;
        }
    }

    #[test]
    fn agrees_with_brute_force(text in linear_spec()) {
        let s = parse_spec(&text).unwrap();
        for r in probe(Mode::Linear) {
            let fast = classify(&s, r).unwrap();
            let slow = brute_classify(&s, r, 2_000, 200).unwrap();
            match (&fast, slow) {
                (_, BruteVerdict::Undetermined) => {}
                (OrbitClass::Periodic { period }, BruteVerdict::Periodic { period: p }) => prop_assert_eq!(*period, p),
                (OrbitClass::Preperiodic { tail, period }, BruteVerdict::Preperiodic { tail: t, period: p }) => {
                    prop_assert_eq!((*tail, *period), (t, p))
                }
                (OrbitClass::Wandering { .. }, BruteVerdict::Wandering) => {}
                (f, s) => prop_assert!(false, "{r}: {f:?} vs {s:?}"),
            }
        }
    }

    #[test]
    fn compose_is_associative(i in 0usize..20, j in 0usize..20, k in 0usize..20, idx in 1i64..=60, fam in 0u8..3) {
        let specs = all_builtin_specs();
        let (a, b, c) = (specs[i], specs[j], specs[k]);
        prop_assume!(a.mode() == b.mode() && b.mode() == c.mode());
        let r = match fam { 0 => Region::Base, 1 => Region::GDisk(idx), _ => Region::BDisk(idx) };
        let bc = compose(b, c).unwrap();
        let ab = compose(a, b).unwrap();
        let left = compose(a, &bc).unwrap();
        let right = compose(&ab, c).unwrap();
        prop_assert_eq!(left.apply(r).unwrap(), right.apply(r).unwrap());
        prop_assert_eq!(left.threshold(), right.threshold());
    }

    #[test]
    fn composite_orbit_alternates(id in prop::sample::select(TheoremId::ALL.to_vec()), idx in 1i64..=40, fam in 0u8..2, n in 0usize..30) {
        let p = builtin(id);
        let r = if fam == 0 { Region::GDisk(idx) } else { Region::BDisk(idx) };
        let gf = compose(&p.f, &p.g).unwrap();
        let comp = orbit(&gf, r, n).unwrap();
        let mut alt = vec![r];
        for i in 0..2 * n {
            let step: &dyn Schedule = if i % 2 == 0 { &p.f } else { &p.g };
            alt.push(step.apply(*alt.last().unwrap()).unwrap());
        }
        for i in 0..=n {
            prop_assert_eq!(comp[i], alt[2 * i]);
        }
    }
}

#[test]
fn composing_with_identity_changes_nothing() {
    let id = parse_spec("mode = linear\n[id]\nBASE -> BASE\nG[k] -> G[k]\nB[k] -> B[k]\n").unwrap();
    for spec in all_builtin_specs().into_iter().filter(|s| s.mode() == Mode::Linear) {
        let left = compose(&id, spec).unwrap();
        let right = compose(spec, &id).unwrap();
        for r in probe(Mode::Linear) {
            let want = spec.apply(r).unwrap();
            assert_eq!(left.apply(r).unwrap(), want);
            assert_eq!(right.apply(r).unwrap(), want);
        }
    }
}
