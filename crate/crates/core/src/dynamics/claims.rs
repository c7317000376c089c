//! Stated classifications for each built-in pair, and their verification.

use std::fmt;

use serde::Serialize;

use super::{classify, DynamicsError, OrbitClass, OrbitKind};
use crate::exec::Exec;
use crate::geometry::Region;
use crate::schedule::{builtin, compose, Family, Mode, Schedule, TheoremId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Map {
    F,
    G,
    Gf,
    Fg,
}

impl Map {
    pub const ALL: [Map; 4] = [Map::F, Map::G, Map::Gf, Map::Fg];

    pub fn as_str(self) -> &'static str {
        match self {
            Map::F => "f",
            Map::G => "g",
            Map::Gf => "gf",
            Map::Fg => "fg",
        }
    }

    pub fn parse(s: &str) -> Option<Map> {
        Self::ALL.into_iter().find(|m| m.as_str() == s)
    }

    /// Runs `body` with the schedule this map denotes.
    pub fn with<R>(self, f: &dyn Schedule, g: &dyn Schedule, body: impl FnOnce(&dyn Schedule) -> R) -> R {
        match self {
            Map::F => body(f),
            Map::G => body(g),
            Map::Gf => body(&compose(f, g).expect("pair shares a mode")),
            Map::Fg => body(&compose(g, f).expect("pair shares a mode")),
        }
    }
}

impl fmt::Display for Map {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum RegionPattern {
    /// `G_{p,q}` (or `B`) for fixed row `p` and every column.
    GridRow { family: Family, p: i64 },
    Exact { family: Family, k: i64 },
    From { family: Family, k: i64 },
}

impl RegionPattern {
    pub fn matches(&self, mode: Mode, r: Region) -> bool {
        let Ok(c) = mode.cell(r) else { return false };
        match *self {
            RegionPattern::GridRow { family, p } => mode == Mode::Grid && c.family == family && c.slots[0] == p,
            RegionPattern::Exact { family, k } => mode == Mode::Linear && c.family == family && c.slots[0] == k,
            RegionPattern::From { family, k } => mode == Mode::Linear && c.family == family && c.slots[0] >= k,
        }
    }
}

impl fmt::Display for RegionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionPattern::GridRow { family, p } => write!(f, "{family}({p},q)"),
            RegionPattern::Exact { family, k } => write!(f, "{family}{k}"),
            RegionPattern::From { family, k } => write!(f, "{family}_k (k>={k})"),
        }
    }
}

/// Stated kinds for one region pattern, in the order `f, g, gf, fg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub pattern: RegionPattern,
    pub kinds: [Option<OrbitKind>; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimTable {
    pub theorem: TheoremId,
    pub rows: Vec<Claim>,
}

fn row(pattern: RegionPattern, shape: &str) -> Claim {
    let mut kinds = [None; 4];
    for (slot, ch) in kinds.iter_mut().zip(shape.chars()) {
        *slot = match ch {
            'p' => Some(OrbitKind::Periodic),
            'r' => Some(OrbitKind::Preperiodic),
            'w' => Some(OrbitKind::Wandering),
            _ => None,
        };
    }
    Claim { pattern, kinds }
}

pub fn claim_table(id: TheoremId) -> ClaimTable {
    use Family::{B, G};
    let row0 = |shape| row(RegionPattern::GridRow { family: G, p: 0 }, shape);
    let g = |k, shape| row(RegionPattern::Exact { family: G, k }, shape);
    let b = |k, shape| row(RegionPattern::Exact { family: B, k }, shape);
    let g_from = |k, shape| row(RegionPattern::From { family: G, k }, shape);
    let b_from = |k, shape| row(RegionPattern::From { family: B, k }, shape);
    let rows = match id {
        TheoremId::T2_1 => vec![row0("wwp-")],
        TheoremId::T2_2 => vec![row0("wwww")],
        TheoremId::T2_3 => vec![row0("ppww")],
        TheoremId::T2_4 => vec![row0("pppw")],
        TheoremId::T2_5 => vec![
            g(1, "pwrp"),
            b(2, "pwpw"),
            b(1, "pwpr"),
            g(2, "pwwp"),
            g_from(3, "wwww"),
            b_from(3, "wwww"),
        ],
        TheoremId::T2_7 => vec![g(1, "pwww"), b(1, "pwww"), b(2, "pwww"), b_from(3, "wwww"), g_from(2, "wwww")],
        TheoremId::T2_9 => vec![g(1, "pwpp"), b(1, "pwpp"), b(2, "rwrp"), b_from(3, "rwpp"), g_from(2, "wwww")],
        TheoremId::T2_11 => vec![
            g(1, "pwrw"),
            g_from(2, "wwww"),
            b(1, "pwwp"),
            b(2, "rwpr"),
            b(3, "rwwp"),
            b(4, "rwpw"),
            b_from(5, "wwww"),
        ],
        TheoremId::T2_13 => vec![g_from(1, "rrrr"), b(1, "pppp"), b(2, "pppp"), b_from(3, "rrrr")],
        TheoremId::T2_15 => vec![
            g(1, "rrrw"),
            b(1, "pwwp"),
            g(2, "pwpw"),
            g_from(3, "wwww"),
            b(2, "wppw"),
            b(3, "wpwp"),
            b_from(4, "wwww"),
        ],
    };
    ClaimTable { theorem: id, rows }
}

/// Base plus both families over linear indices `1..=max_index`, or over
/// `p in 0..=max_index`, `q in 1..=max_index` in grid mode.
pub fn probe_set(mode: Mode, max_index: i64) -> Vec<Region> {
    let mut out = vec![Region::Base];
    match mode {
        Mode::Linear => {
            for k in 1..=max_index {
                out.push(Region::GDisk(k));
                out.push(Region::BDisk(k));
            }
        }
        Mode::Grid => {
            for p in 0..=max_index {
                for q in 1..=max_index {
                    for family in [Family::G, Family::B] {
                        let cell = crate::schedule::Cell::new(family, [p, q]);
                        out.push(mode.region(&cell).expect("small grid indices"));
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Default probe bound: 40 in linear mode, 8 in grid mode.
pub fn default_probe(mode: Mode) -> Vec<Region> {
    probe_set(mode, if mode == Mode::Linear { 40 } else { 8 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub region: Region,
    pub label: String,
    /// Under `f`, `g`, `gf`, `fg`.
    pub classes: [OrbitClass; 4],
}

impl TableRow {
    pub fn kinds(&self) -> [OrbitKind; 4] {
        [0, 1, 2, 3].map(|i| self.classes[i].kind())
    }
}

pub fn classify_table(
    f: &dyn Schedule,
    g: &dyn Schedule,
    probe: &[Region],
    exec: Exec,
) -> Result<Vec<TableRow>, DynamicsError> {
    let gf = compose(f, g)?;
    let fg = compose(g, f)?;
    let maps: [&dyn Schedule; 4] = [f, g, &gf, &fg];
    let mode = f.mode();
    exec.map(probe, |&r| {
        let mut classes = Vec::with_capacity(4);
        for s in maps {
            classes.push(classify(s, r)?);
        }
        let classes: [OrbitClass; 4] = classes.try_into().expect("four maps");
        Ok(TableRow { region: r, label: mode.display(r), classes })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub pattern: String,
    pub map: Map,
    pub expected: OrbitKind,
    pub instances: usize,
    /// Probe regions whose computed kind differs, with that kind.
    pub failures: Vec<(String, OrbitKind)>,
    pub passed: bool,
}

impl ClaimResult {
    pub fn label(&self) -> String {
        format!("{}: {} under {}", self.pattern, self.expected, self.map)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub theorem: TheoremId,
    pub results: Vec<ClaimResult>,
}

impl ClaimReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn pass_count(&self) -> usize {
        self.results.iter().filter(|r| r.passed).count()
    }
}

/// Checks every stated kind of `id` on the default probe set.
pub fn verify_claims(id: TheoremId, exec: Exec) -> Result<ClaimReport, DynamicsError> {
    let pair = builtin(id);
    let mode = pair.f.mode();
    let table = claim_table(id);
    let rows = classify_table(&pair.f, &pair.g, &default_probe(mode), exec)?;
    let mut results = Vec::new();
    for claim in &table.rows {
        let hits: Vec<&TableRow> = rows.iter().filter(|r| claim.pattern.matches(mode, r.region)).collect();
        for (m, expected) in Map::ALL.into_iter().zip(claim.kinds) {
            let Some(expected) = expected else { continue };
            let slot = m as usize;
            let failures: Vec<(String, OrbitKind)> = hits
                .iter()
                .filter(|r| r.classes[slot].kind() != expected)
                .map(|r| (r.label.clone(), r.classes[slot].kind()))
                .collect();
            results.push(ClaimResult {
                pattern: claim.pattern.to_string(),
                map: m,
                expected,
                instances: hits.len(),
                passed: failures.is_empty() && !hits.is_empty(),
                failures,
            });
        }
    }
    Ok(ClaimReport { theorem: id, results })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferViolation {
    pub region: String,
    /// Composite under which `region` wanders.
    pub wandering_under: Map,
    /// Image of `region` that should wander under the other composite.
    pub image: String,
    pub image_kind: OrbitKind,
}

/// If `R` wanders under `g∘f` then `f(R)` wanders under `f∘g`, and
/// symmetrically with `g`.
pub fn wandering_transfer_check(
    f: &dyn Schedule,
    g: &dyn Schedule,
    probe: &[Region],
    exec: Exec,
) -> Result<Vec<TransferViolation>, DynamicsError> {
    let gf = compose(f, g)?;
    let fg = compose(g, f)?;
    wandering_transfer_check_with(f, g, &gf, &fg, probe, exec)
}

/// Same check with the two composites supplied explicitly.
pub fn wandering_transfer_check_with(
    f: &dyn Schedule,
    g: &dyn Schedule,
    gf: &dyn Schedule,
    fg: &dyn Schedule,
    probe: &[Region],
    exec: Exec,
) -> Result<Vec<TransferViolation>, DynamicsError> {
    let mode = f.mode();
    let per_region = exec.map(probe, |&r| -> Result<Vec<TransferViolation>, DynamicsError> {
        let mut out = Vec::new();
        for (m, here, there, first) in [(Map::Gf, gf, fg, f), (Map::Fg, fg, gf, g)] {
            if classify(here, r)?.kind() != OrbitKind::Wandering {
                continue;
            }
            let image = first.apply(r)?;
            let kind = classify(there, image)?.kind();
            if kind != OrbitKind::Wandering {
                out.push(TransferViolation {
                    region: mode.display(r),
                    wandering_under: m,
                    image: mode.display(image),
                    image_kind: kind,
                });
            }
        }
        Ok(out)
    });
    let mut all = Vec::new();
    for v in per_region {
        all.extend(v?);
    }
    Ok(all)
}
