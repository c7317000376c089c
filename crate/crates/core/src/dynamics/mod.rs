//! Orbit classification for schedules.
//!
//! [`classify`] simulates concretely and remembers every visited cell, so a
//! revisit gives the exact tail and period. Alongside, it tracks an abstract
//! state in which every slot above the schedule's threshold collapses to
//! `Large`; rules cannot tell such values apart. When an abstract state with
//! a `Large` slot recurs and the stretch between the two visits keeps those
//! slots large until they are reset and never lowers them, the stretch repeats
//! forever with a fixed non-negative shift, so a positive shift certifies an
//! injective orbit.
//!
//! Linear mode has one counter and grid mode never decrements, so either a
//! revisit or a certificate is always reached.

mod claims;

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::Region;
use crate::schedule::{Cell, Family, Mode, RuleRef, Schedule, ScheduleError, SlotMove};

pub use claims::{
    claim_table, classify_table, default_probe, probe_set, verify_claims, wandering_transfer_check, wandering_transfer_check_with, Claim,
    ClaimReport, ClaimResult, ClaimTable, Map, RegionPattern, TableRow, TransferViolation,
};

/// Safety net; the classifier provably stops long before this on accepted specs.
pub const MAX_STEPS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("no verdict for {region} after {steps} steps")]
    Undecided { region: String, steps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitKind {
    Periodic,
    Preperiodic,
    Wandering,
}

impl OrbitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OrbitKind::Periodic => "periodic",
            OrbitKind::Preperiodic => "preperiodic",
            OrbitKind::Wandering => "wandering",
        }
    }

    pub fn letter(self) -> char {
        match self {
            OrbitKind::Periodic => 'p',
            OrbitKind::Preperiodic => 'r',
            OrbitKind::Wandering => 'w',
        }
    }
}

impl std::fmt::Display for OrbitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One step of a certified cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleEdge {
    pub from: Cell,
    pub to_family: Family,
    pub rules: Vec<RuleRef>,
    pub moves: [SlotMove; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EscapeCertificate {
    pub mode: Mode,
    /// Regions from the start up to and including the first cycle entry.
    pub transient: Vec<Region>,
    pub guard_cycle: Vec<CycleEdge>,
    /// Slot that grows by `net_shift` on every pass of the cycle.
    pub growing_slot: usize,
    pub net_shift: i64,
    pub threshold: i64,
}

impl EscapeCertificate {
    /// Regions visited by the transient followed by `passes` passes of the
    /// cycle, computed from the recorded moves alone.
    pub fn replay(&self, passes: usize) -> Result<Vec<Region>, ScheduleError> {
        let mut out = self.transient.clone();
        let mut cell = self.mode.cell(*out.last().expect("transient is never empty"))?;
        for _ in 0..passes {
            for e in &self.guard_cycle {
                let mut slots = [0i64; 2];
                for (i, m) in e.moves.iter().enumerate() {
                    slots[i] = match *m {
                        SlotMove::Set(v) => v,
                        SlotMove::Shift(d) => cell.slots[i].checked_add(d).ok_or_else(ScheduleError::overflow)?,
                    };
                }
                cell = Cell::new(e.to_family, slots);
                out.push(self.mode.region(&cell)?);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OrbitClass {
    Periodic { period: usize },
    Preperiodic { tail: usize, period: usize },
    Wandering { certificate: Box<EscapeCertificate> },
}

impl OrbitClass {
    pub fn kind(&self) -> OrbitKind {
        match self {
            OrbitClass::Periodic { .. } => OrbitKind::Periodic,
            OrbitClass::Preperiodic { .. } => OrbitKind::Preperiodic,
            OrbitClass::Wandering { .. } => OrbitKind::Wandering,
        }
    }

    pub fn summary(&self) -> String {
        match self {
            OrbitClass::Periodic { period } => format!("periodic (period {period})"),
            OrbitClass::Preperiodic { tail, period } => format!("preperiodic (tail {tail}, period {period})"),
            OrbitClass::Wandering { certificate } => {
                format!("wandering (+{} per {}-step cycle)", certificate.net_shift, certificate.guard_cycle.len())
            }
        }
    }
}

/// `[r, s(r), s²(r), …]`, `n + 1` regions.
pub fn orbit(s: &dyn Schedule, r: Region, n: usize) -> Result<Vec<Region>, ScheduleError> {
    let mode = s.mode();
    let mut cell = mode.cell(r)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(mode.region(&cell)?);
    for _ in 0..n {
        cell = s.step(&cell)?.next;
        out.push(mode.region(&cell)?);
    }
    Ok(out)
}

type Abstract = (Family, [Option<i64>; 2]);

fn abstraction(c: &Cell, arity: usize, threshold: i64) -> Abstract {
    let mut a = [Some(0); 2];
    for (i, v) in c.slots.iter().enumerate().take(arity) {
        a[i] = (*v <= threshold).then_some(*v);
    }
    (c.family, a)
}

struct Trace {
    cells: Vec<Cell>,
    moves: Vec<[SlotMove; 2]>,
}

/// Checks that the stretch `i..j` replicates; returns the growing slot and
/// its shift per pass.
fn replicates(t: &Trace, i: usize, j: usize, arity: usize, threshold: i64) -> Option<(usize, i64)> {
    let (a, b) = (&t.cells[i], &t.cells[j]);
    let mut grow = None;
    for s in 0..arity {
        if a.slots[s] <= threshold {
            continue;
        }
        let reset = (i..j).find(|&k| t.cells[k + 1].is_base() || matches!(t.moves[k][s], SlotMove::Set(_)));
        let end = reset.unwrap_or(j);
        if (i..=end).any(|k| t.cells[k].slots[s] <= threshold) {
            return None;
        }
        if reset.is_none() {
            let d = b.slots[s] - a.slots[s];
            if d < 0 {
                return None;
            }
            if d > 0 && grow.is_none() {
                grow = Some((s, d));
            }
        }
    }
    grow
}

pub fn classify(s: &dyn Schedule, r: Region) -> Result<OrbitClass, DynamicsError> {
    let mode = s.mode();
    let arity = mode.arity();
    let threshold = s.threshold();
    let mut t = Trace { cells: vec![mode.cell(r)?], moves: Vec::new() };
    let mut seen: HashMap<Cell, usize> = HashMap::new();
    let mut last_abstract: HashMap<Abstract, usize> = HashMap::new();

    for now in 0..MAX_STEPS {
        let cell = t.cells[now];
        if let Some(&first) = seen.get(&cell) {
            let period = now - first;
            return Ok(if first == 0 { OrbitClass::Periodic { period } } else { OrbitClass::Preperiodic { tail: first, period } });
        }
        seen.insert(cell, now);

        let abs = abstraction(&cell, arity, threshold);
        if abs.1.iter().take(arity).any(Option::is_none) {
            if let Some(&i) = last_abstract.get(&abs) {
                if let Some((growing_slot, net_shift)) = replicates(&t, i, now, arity, threshold) {
                    let transient = t.cells[..=i].iter().map(|c| mode.region(c)).collect::<Result<_, _>>()?;
                    let guard_cycle = (i..now)
                        .map(|k| {
                            Ok(CycleEdge {
                                from: t.cells[k],
                                to_family: t.cells[k + 1].family,
                                rules: s.trace(&t.cells[k])?,
                                moves: t.moves[k],
                            })
                        })
                        .collect::<Result<_, ScheduleError>>()?;
                    let certificate =
                        EscapeCertificate { mode, transient, guard_cycle, growing_slot, net_shift, threshold };
                    return Ok(OrbitClass::Wandering { certificate: Box::new(certificate) });
                }
            }
            last_abstract.insert(abs, now);
        }

        let step = s.step(&cell)?;
        t.cells.push(step.next);
        t.moves.push(step.moves);
    }
    Err(DynamicsError::Undecided { region: mode.display(r), steps: MAX_STEPS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{grid_to_linear, GridIndex};
    use crate::schedule::{builtin, compose, parse_spec, TheoremId};

    fn grid_g(p: i64, q: i64) -> Region {
        Region::GDisk(grid_to_linear(GridIndex::new(p, q).unwrap()).unwrap().get())
    }

    #[test]
    fn orbit_examples() {
        let b = builtin(TheoremId::T2_5);
        use Region::*;
        assert_eq!(orbit(&b.f, GDisk(1), 4).unwrap(), vec![GDisk(1), BDisk(1), GDisk(2), BDisk(2), GDisk(1)]);
        assert_eq!(orbit(&b.f, Base, 3).unwrap(), vec![Base; 4]);
        let b1 = builtin(TheoremId::T2_1);
        let gf = compose(&b1.f, &b1.g).unwrap();
        assert_eq!(orbit(&gf, grid_g(0, 2), 2).unwrap(), vec![grid_g(0, 2); 3]);
    }

    #[test]
    fn classify_examples() {
        let b = builtin(TheoremId::T2_5);
        assert_eq!(classify(&b.f, Region::GDisk(1)).unwrap(), OrbitClass::Periodic { period: 4 });
        let gf = compose(&b.f, &b.g).unwrap();
        assert_eq!(classify(&gf, Region::GDisk(1)).unwrap(), OrbitClass::Preperiodic { tail: 1, period: 2 });
        let b1 = builtin(TheoremId::T2_1);
        assert_eq!(classify(&b1.f, grid_g(1, 1)).unwrap().kind(), OrbitKind::Wandering);
        let b9 = builtin(TheoremId::T2_9);
        let gf = compose(&b9.f, &b9.g).unwrap();
        assert_eq!(classify(&gf, Region::BDisk(7)).unwrap(), OrbitClass::Periodic { period: 1 });
        assert_eq!(classify(&b9.f, Region::Base).unwrap(), OrbitClass::Periodic { period: 1 });
    }

    #[test]
    fn certificate_replays() {
        let b = builtin(TheoremId::T2_5);
        let OrbitClass::Wandering { certificate } = classify(&b.g, Region::GDisk(1)).unwrap() else {
            panic!("expected wandering")
        };
        assert!(certificate.net_shift > 0);
        let regions = certificate.replay(50).unwrap();
        let distinct: std::collections::HashSet<_> = regions.iter().collect();
        assert_eq!(distinct.len(), regions.len());
        assert_eq!(&regions[..4], &orbit(&b.g, Region::GDisk(1), 3).unwrap()[..]);
    }

    #[test]
    fn descending_run_is_not_wandering() {
        let s = parse_spec("mode=linear\n[s]\nBASE->BASE\nG[k>=1]->B[k+1]\nB[1]->G[1]\nB[k>=2]->B[k-1]\n").unwrap();
        assert_eq!(classify(&s, Region::BDisk(30)).unwrap(), OrbitClass::Preperiodic { tail: 28, period: 3 });
        assert_eq!(classify(&s, Region::GDisk(1)).unwrap(), OrbitClass::Periodic { period: 3 });
    }
}
