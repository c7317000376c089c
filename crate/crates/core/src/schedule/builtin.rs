//! The ten compiled-in schedule pairs.
//!
//! Each pair is parsed from its `.sched` source; the per-rule centre tables
//! below are transcribed separately from the displayed inequalities so the
//! realisability check compares two independent encodings.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use super::{parse_schedule, CenterFn, TransitionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TheoremId {
    T2_1,
    T2_2,
    T2_3,
    T2_4,
    T2_5,
    T2_7,
    T2_9,
    T2_11,
    T2_13,
    T2_15,
}

impl TheoremId {
    pub const ALL: [TheoremId; 10] = [
        TheoremId::T2_1,
        TheoremId::T2_2,
        TheoremId::T2_3,
        TheoremId::T2_4,
        TheoremId::T2_5,
        TheoremId::T2_7,
        TheoremId::T2_9,
        TheoremId::T2_11,
        TheoremId::T2_13,
        TheoremId::T2_15,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T2_1 => "2.1",
            TheoremId::T2_2 => "2.2",
            TheoremId::T2_3 => "2.3",
            TheoremId::T2_4 => "2.4",
            TheoremId::T2_5 => "2.5",
            TheoremId::T2_7 => "2.7",
            TheoremId::T2_9 => "2.9",
            TheoremId::T2_11 => "2.11",
            TheoremId::T2_13 => "2.13",
            TheoremId::T2_15 => "2.15",
        }
    }

    /// Claim shape for the G-side headline region, kinds in the order
    /// `f, g, gf, fg` (`w`andering, `p`eriodic, p`r`eperiodic, `-` unclaimed).
    pub fn alias(self) -> &'static str {
        match self {
            TheoremId::T2_1 => "wwp-",
            TheoremId::T2_2 => "wwww",
            TheoremId::T2_3 => "ppww",
            TheoremId::T2_4 => "pppw",
            TheoremId::T2_5 => "pwrp",
            TheoremId::T2_7 => "pwww",
            TheoremId::T2_9 => "pwpp",
            TheoremId::T2_11 => "pwrw",
            TheoremId::T2_13 => "rrrr",
            TheoremId::T2_15 => "rrrw",
        }
    }

    fn index(self) -> usize {
        Self::ALL.iter().position(|&t| t == self).expect("listed")
    }

    fn source(self) -> &'static str {
        match self {
            TheoremId::T2_1 => include_str!("../../schedules/thm_2_1.sched"),
            TheoremId::T2_2 => include_str!("../../schedules/thm_2_2.sched"),
            TheoremId::T2_3 => include_str!("../../schedules/thm_2_3.sched"),
            TheoremId::T2_4 => include_str!("../../schedules/thm_2_4.sched"),
            TheoremId::T2_5 => include_str!("../../schedules/thm_2_5.sched"),
            TheoremId::T2_7 => include_str!("../../schedules/thm_2_7.sched"),
            TheoremId::T2_9 => include_str!("../../schedules/thm_2_9.sched"),
            TheoremId::T2_11 => include_str!("../../schedules/thm_2_11.sched"),
            TheoremId::T2_13 => include_str!("../../schedules/thm_2_13.sched"),
            TheoremId::T2_15 => include_str!("../../schedules/thm_2_15.sched"),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTheorem(pub String);

impl fmt::Display for UnknownTheorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown theorem id '{}'", self.0)
    }
}

impl std::error::Error for UnknownTheorem {}

impl FromStr for TheoremId {
    type Err = UnknownTheorem;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "wandering-to-periodic" {
            return Ok(TheoremId::T2_1);
        }
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == s || t.alias() == s)
            .ok_or_else(|| UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug)]
pub struct BuiltinPair {
    pub id: TheoremId,
    pub f: TransitionSpec,
    pub g: TransitionSpec,
    pub source: &'static str,
}

fn tri(q: i64) -> i64 {
    q * (q - 1) / 2
}

/// `q(q+1)/2 + 1 + p(q+1) + p(p+1)/2`.
fn next_in_column(s: &[i64]) -> i64 {
    let (p, q) = (s[0], s[1]);
    q * (q + 1) / 2 + 1 + p * (q + 1) + p * (p + 1) / 2
}

fn disk(n: i64) -> i64 {
    4 * n + 2
}

const BASE: CenterFn = |_| 2;
const G_SUCC: CenterFn = |s| disk(next_in_column(s));
const B_SUCC: CenterFn = |s| -disk(next_in_column(s));
const TO_G_ROW0: CenterFn = |s| disk(tri(s[1]) + 1);
const TO_B_ROW0: CenterFn = |s| -disk(tri(s[1]) + 1);
const TO_B_ROW1: CenterFn = |s| -disk(tri(s[1]) + s[1] + 2);
const TO_B_ROW2: CenterFn = |s| -disk(tri(s[1]) + 2 * s[1] + 4);
const TO_B_ROW3: CenterFn = |s| -disk(tri(s[1]) + 3 * s[1] + 7);
const G_UP: CenterFn = |s| 4 * s[0] + 6;
const B_UP: CenterFn = |s| -(4 * s[0] + 6);
const G_DOWN: CenterFn = |s| 4 * s[0] - 2;
const B_DOWN: CenterFn = |s| -(4 * s[0] - 2);

fn lit<const C: i64>(_: &[i64]) -> i64 {
    C
}

/// Displayed centres, one per rule in file order.
fn centers(id: TheoremId) -> (Vec<CenterFn>, Vec<CenterFn>) {
    match id {
        TheoremId::T2_1 => (vec![BASE, TO_B_ROW0, B_SUCC], vec![BASE, TO_G_ROW0, G_SUCC]),
        TheoremId::T2_2 => (vec![BASE, TO_B_ROW0, B_SUCC], vec![BASE, B_SUCC, TO_B_ROW0, G_SUCC]),
        TheoremId::T2_3 => (
            vec![BASE, TO_B_ROW0, TO_G_ROW0, B_SUCC, G_SUCC],
            vec![BASE, TO_B_ROW1, TO_B_ROW2, B_SUCC, TO_G_ROW0, G_SUCC],
        ),
        TheoremId::T2_4 => (
            vec![BASE, TO_B_ROW0, TO_G_ROW0, TO_B_ROW3, TO_B_ROW1, B_SUCC, G_SUCC],
            vec![BASE, TO_B_ROW1, TO_B_ROW2, TO_G_ROW0, B_SUCC, G_SUCC],
        ),
        TheoremId::T2_5 => (
            vec![BASE, lit::<{ -6 }>, lit::<6>, lit::<{ -10 }>, lit::<10>, B_UP, G_UP],
            vec![BASE, lit::<{ -6 }>, lit::<{ -10 }>, B_UP, G_UP],
        ),
        TheoremId::T2_7 => (
            vec![BASE, lit::<{ -6 }>, lit::<{ -10 }>, lit::<6>, B_UP, G_UP],
            vec![BASE, lit::<{ -6 }>, B_UP, G_UP],
        ),
        TheoremId::T2_9 => (
            vec![BASE, lit::<{ -6 }>, lit::<6>, lit::<6>, B_DOWN, G_UP],
            vec![BASE, lit::<{ -6 }>, lit::<6>, lit::<{ -14 }>, B_UP, G_UP],
        ),
        TheoremId::T2_11 => (
            vec![BASE, lit::<{ -6 }>, lit::<6>, lit::<{ -14 }>, lit::<{ -18 }>, lit::<{ -6 }>, B_UP, G_UP],
            vec![BASE, lit::<{ -10 }>, lit::<6>, lit::<{ -18 }>, lit::<{ -6 }>, B_UP, G_UP],
        ),
        TheoremId::T2_13 => (
            vec![BASE, lit::<{ -6 }>, lit::<{ -10 }>, B_DOWN],
            vec![BASE, lit::<{ -6 }>, lit::<{ -10 }>, B_DOWN, G_DOWN],
        ),
        TheoremId::T2_15 => (
            vec![BASE, lit::<{ -6 }>, lit::<10>, lit::<{ -6 }>, B_UP, G_UP],
            vec![BASE, lit::<{ -14 }>, lit::<10>, lit::<{ -14 }>, lit::<{ -10 }>, G_UP, B_UP],
        ),
    }
}

fn attach(mut spec: TransitionSpec, table: Vec<CenterFn>) -> TransitionSpec {
    assert_eq!(spec.rules.len(), table.len(), "centre table for [{}] out of step", spec.name);
    for (rule, c) in spec.rules.iter_mut().zip(table) {
        rule.displayed_center = Some(c);
    }
    spec
}

fn load(id: TheoremId) -> BuiltinPair {
    let source = id.source();
    let set = parse_schedule(source).unwrap_or_else(|e| panic!("built-in {id}: {e}"));
    let (fc, gc) = centers(id);
    let f = set.get("f").cloned().unwrap_or_else(|| panic!("built-in {id} lacks [f]"));
    let g = set.get("g").cloned().unwrap_or_else(|| panic!("built-in {id} lacks [g]"));
    BuiltinPair { id, f: attach(f, fc), g: attach(g, gc), source }
}

pub fn builtin(id: TheoremId) -> &'static BuiltinPair {
    static CACHE: OnceLock<Vec<BuiltinPair>> = OnceLock::new();
    &CACHE.get_or_init(|| TheoremId::ALL.into_iter().map(load).collect())[id.index()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Region;
    use crate::schedule::{compose, Mode, Schedule};

    fn grid(family: char, p: i64, q: i64) -> Region {
        let n = crate::lattice::grid_to_linear(crate::lattice::GridIndex::new(p, q).unwrap()).unwrap().get();
        if family == 'G' {
            Region::GDisk(n)
        } else {
            Region::BDisk(n)
        }
    }

    #[test]
    fn ids_and_aliases() {
        for t in TheoremId::ALL {
            assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
            assert_eq!(t.alias().parse::<TheoremId>().unwrap(), t);
        }
        assert_eq!("wandering-to-periodic".parse::<TheoremId>().unwrap(), TheoremId::T2_1);
        assert!("2.6".parse::<TheoremId>().is_err());
    }

    #[test]
    fn all_load_and_fix_base() {
        for t in TheoremId::ALL {
            let b = builtin(t);
            for s in [&b.f, &b.g] {
                assert_eq!(s.apply(Region::Base).unwrap(), Region::Base);
                assert_eq!(s.mode(), if t <= TheoremId::T2_4 { Mode::Grid } else { Mode::Linear });
            }
        }
        assert_eq!(builtin(TheoremId::T2_5).f.rules().len(), 7);
    }

    #[test]
    fn documented_rules_present() {
        let has = |s: &TransitionSpec, text: &str| s.rules().iter().any(|r| r.to_string() == text);
        assert!(has(&builtin(TheoremId::T2_9).f, "B[k>=3] -> B[k-1]"));
        assert!(has(&builtin(TheoremId::T2_13).g, "G[k>=2] -> G[k-1]"));
        assert!(has(&builtin(TheoremId::T2_1).g, "G[p,q] -> G[p,q+1]"));
    }

    #[test]
    fn grid_examples() {
        let b = builtin(TheoremId::T2_1);
        assert_eq!(b.f.apply(grid('G', 0, 3)).unwrap(), grid('B', 0, 3));
        assert_eq!(b.f.apply(grid('B', 2, 3)).unwrap(), grid('B', 2, 4));
        let gf = compose(&b.f, &b.g).unwrap();
        for q in 1..=8 {
            assert_eq!(gf.apply(grid('G', 0, q)).unwrap(), grid('G', 0, q));
        }
        let b5 = builtin(TheoremId::T2_5);
        assert_eq!(compose(&b5.g, &b5.f).unwrap().apply(Region::GDisk(1)).unwrap(), Region::GDisk(2));
    }

    #[test]
    fn row_zero_g_goes_to_b_under_f() {
        for t in [TheoremId::T2_1, TheoremId::T2_2, TheoremId::T2_3, TheoremId::T2_4] {
            for q in 1..=20 {
                assert!(matches!(builtin(t).f.apply(grid('G', 0, q)).unwrap(), Region::BDisk(_)), "{t} q={q}");
            }
        }
    }
}
