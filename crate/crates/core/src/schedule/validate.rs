//! Symbolic totality, determinism and domain checks.
//!
//! Per family and slot, a rule covers an interval (`[c, c]` or `[b, inf)`),
//! so coverage is constant between consecutive breakpoints. Checking the
//! lexicographically ordered product of breakpoints is therefore exhaustive
//! and yields the smallest witness.

use std::collections::BTreeSet;

use super::{ErrorKind, Family, Mode, Rule, ScheduleError, SlotExpr};

fn render(mode: Mode, family: Family, slots: &[i64]) -> String {
    if family == Family::Base {
        return "BASE".into();
    }
    let body: Vec<String> = slots[..mode.arity()].iter().map(i64::to_string).collect();
    format!("{family}[{}]", body.join(","))
}

fn ranges(mode: Mode, r: &Rule) -> Vec<(i64, Option<i64>)> {
    r.pattern.slots.iter().enumerate().map(|(i, sp)| sp.range(mode.slot_min(i))).collect()
}

fn covers(mode: Mode, r: &Rule, family: Family, pt: &[i64]) -> bool {
    r.pattern.family == family
        && ranges(mode, r).iter().zip(pt).all(|(&(lo, hi), &v)| v >= lo && hi.is_none_or(|h| v <= h))
}

fn check_overlap(mode: Mode, rules: &[Rule]) -> Result<(), ScheduleError> {
    for (j, b) in rules.iter().enumerate() {
        for a in &rules[..j] {
            if a.pattern.family != b.pattern.family {
                continue;
            }
            let mut pt = Vec::new();
            let disjoint = ranges(mode, a).iter().zip(ranges(mode, b)).any(|(&(alo, ahi), (blo, bhi))| {
                let lo = alo.max(blo);
                pt.push(lo);
                [ahi, bhi].into_iter().flatten().any(|h| h < lo)
            });
            if !disjoint {
                let w = render(mode, b.pattern.family, &pt);
                return Err(ScheduleError::new(
                    ErrorKind::Overlap,
                    b.line,
                    1,
                    format!("rules '{a}' (line {}) and '{b}' both match {w}", a.line),
                )
                .with_witness(w));
            }
        }
    }
    Ok(())
}

fn check_gap(mode: Mode, rules: &[Rule], last_line: usize) -> Result<(), ScheduleError> {
    let gap = |w: String| {
        ScheduleError::new(ErrorKind::Gap, last_line, 1, format!("no rule matches {w}")).with_witness(w)
    };
    if !rules.iter().any(|r| r.pattern.family == Family::Base) {
        return Err(gap("BASE".into()));
    }
    for family in [Family::G, Family::B] {
        let mut cands: Vec<BTreeSet<i64>> = (0..mode.arity()).map(|i| BTreeSet::from([mode.slot_min(i)])).collect();
        for r in rules.iter().filter(|r| r.pattern.family == family) {
            for (i, (lo, hi)) in ranges(mode, r).into_iter().enumerate() {
                cands[i].insert(lo);
                if let Some(h) = hi {
                    cands[i].insert(h + 1);
                }
            }
        }
        for c in &mut cands {
            let min = *c.first().expect("seeded with the slot minimum");
            c.retain(|&v| v >= min);
        }
        let mut pt = vec![0i64; mode.arity()];
        if let Some(w) = first_uncovered(mode, rules, family, &cands, &mut pt, 0) {
            return Err(gap(w));
        }
    }
    Ok(())
}

fn first_uncovered(
    mode: Mode,
    rules: &[Rule],
    family: Family,
    cands: &[BTreeSet<i64>],
    pt: &mut Vec<i64>,
    slot: usize,
) -> Option<String> {
    if slot == cands.len() {
        let hit = rules.iter().any(|r| covers(mode, r, family, pt));
        return (!hit).then(|| render(mode, family, pt));
    }
    for &v in &cands[slot] {
        if v < mode.slot_min(slot) {
            continue;
        }
        pt[slot] = v;
        if let Some(w) = first_uncovered(mode, rules, family, cands, pt, slot + 1) {
            return Some(w);
        }
    }
    None
}

fn check_domain(mode: Mode, rules: &[Rule]) -> Result<(), ScheduleError> {
    for r in rules {
        if r.target.family == Family::Base {
            continue;
        }
        let lows: Vec<i64> = ranges(mode, r).into_iter().map(|(lo, _)| lo).collect();
        for (i, e) in r.target.slots.iter().enumerate() {
            let reached = match e {
                SlotExpr::Abs(v) => *v,
                SlotExpr::Var { offset, .. } => lows[i].saturating_add(*offset),
            };
            if reached < mode.slot_min(i) {
                let w = render(mode, r.pattern.family, &lows);
                return Err(ScheduleError::new(
                    ErrorKind::Domain,
                    r.line,
                    1,
                    format!("'{r}' sends {w} to slot value {reached} below the minimum {}", mode.slot_min(i)),
                )
                .with_witness(w));
            }
        }
    }
    Ok(())
}

fn check_pattern_domain(mode: Mode, rules: &[Rule]) -> Result<(), ScheduleError> {
    for r in rules {
        for (i, sp) in r.pattern.slots.iter().enumerate() {
            let (lo, _) = sp.range(mode.slot_min(i));
            if lo < mode.slot_min(i) {
                return Err(ScheduleError::new(
                    ErrorKind::Domain,
                    r.line,
                    1,
                    format!("pattern '{}' mentions slot value {lo} below the minimum {}", r.pattern, mode.slot_min(i)),
                ));
            }
        }
    }
    Ok(())
}

pub(super) fn validate(mode: Mode, rules: &[Rule]) -> Result<(), ScheduleError> {
    let last_line = rules.iter().map(|r| r.line).max().unwrap_or(1);
    check_pattern_domain(mode, rules)?;
    check_overlap(mode, rules)?;
    check_gap(mode, rules, last_line)?;
    check_domain(mode, rules)
}

#[cfg(test)]
mod tests {
    use super::super::{parse_spec, ErrorKind};

    fn err(text: &str) -> (ErrorKind, Option<String>) {
        let e = parse_spec(text).unwrap_err();
        (e.kind, e.witness)
    }

    #[test]
    fn gap_fixture() {
        let (k, w) = err("mode=linear\n[f]\nBASE->BASE\nG[k>=1]->G[k+1]");
        assert_eq!((k, w.as_deref()), (ErrorKind::Gap, Some("B[1]")));
        let (k, w) = err("mode=linear\n[f]\nBASE->BASE\nG[1]->G[1]\nG[k>=3]->G[k]\nB[k]->B[k]");
        assert_eq!((k, w.as_deref()), (ErrorKind::Gap, Some("G[2]")));
        let (k, w) = err("mode=linear\n[f]\nG[k]->G[k]\nB[k]->B[k]");
        assert_eq!((k, w.as_deref()), (ErrorKind::Gap, Some("BASE")));
        let (k, w) = err("mode=grid\n[f]\nBASE->BASE\nB[p,q]->B[p,q]\nG[0,q]->G[0,q]\nG[p>=1,1]->G[p,1]\nG[p>=2,q>=2]->G[p,q]");
        assert_eq!((k, w.as_deref()), (ErrorKind::Gap, Some("G[1,2]")));
    }

    #[test]
    fn overlap_fixture() {
        let (k, w) = err("mode=linear\n[f]\nBASE->BASE\nG[1]->B[1]\nG[k>=1]->G[k+1]\nB[k]->B[k+1]");
        assert_eq!((k, w.as_deref()), (ErrorKind::Overlap, Some("G[1]")));
        let (k, w) = err("mode=grid\n[f]\nBASE->BASE\nB[p,q]->B[p,q]\nG[p>=2,q]->G[p,q]\nG[p,q>=4]->G[p,q]");
        assert_eq!((k, w.as_deref()), (ErrorKind::Overlap, Some("G[2,4]")));
        let (k, _) = err("mode=linear\n[f]\nBASE->BASE\nBASE->G[1]\nG[k]->G[k]\nB[k]->B[k]");
        assert_eq!(k, ErrorKind::Overlap);
    }

    #[test]
    fn domain_fixture() {
        let (k, w) = err("mode=linear\n[f]\nBASE->BASE\nG[k]->G[k]\nB[k>=1]->B[k-1]");
        assert_eq!((k, w.as_deref()), (ErrorKind::Domain, Some("B[1]")));
        let (k, _) = err("mode=grid\n[f]\nBASE->BASE\nG[p,q]->G[p,0]\nB[p,q]->B[p,q]");
        assert_eq!(k, ErrorKind::Domain);
        let (k, _) = err("mode=linear\n[f]\nBASE->BASE\nG[0]->G[1]\nG[k]->G[k]\nB[k]->B[k]");
        assert_eq!(k, ErrorKind::Domain);
        assert!(parse_spec("mode=linear\n[f]\nBASE->BASE\nG[k]->G[k]\nB[1]->G[1]\nB[k>=2]->B[k-1]").is_ok());
    }
}
