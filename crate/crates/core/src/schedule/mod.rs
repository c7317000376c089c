//! Declarative transition schedules.
//!
//! A schedule is an ordered list of rules `pattern -> target` over the
//! families `G`, `B` and the sink `BASE`. In `linear` mode a region is
//! addressed by one index `k >= 1`; in `grid` mode by `(p, q)` with
//! `p >= 0`, `q >= 1`, related to the region's own index by the diagonal
//! bijection in [`crate::lattice`].
//!
//! A validated spec is total and deterministic: every region matches exactly
//! one rule. Targets are per-slot `var + offset` (same slot) or absolute.

mod builtin;
mod parse;
mod validate;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::analytic::{AnalyticError, LogTarget};
use crate::geometry::Region;
use crate::lattice::{self, GridIndex, LinearIndex};

pub use builtin::{builtin, BuiltinPair, TheoremId};
pub use parse::{parse_schedule, parse_spec, ScheduleSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ErrorKind {
    Syntax,
    Overlap,
    Gap,
    Domain,
    Unsupported,
    ModeMismatch,
    Overflow,
}

impl ErrorKind {
    pub fn code(self) -> &'static str {
        match self {
            ErrorKind::Syntax => "E_SYNTAX",
            ErrorKind::Overlap => "E_OVERLAP",
            ErrorKind::Gap => "E_GAP",
            ErrorKind::Domain => "E_DOMAIN",
            ErrorKind::Unsupported => "E_UNSUPPORTED",
            ErrorKind::ModeMismatch => "E_MODE_MISMATCH",
            ErrorKind::Overflow => "E_OVERFLOW",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{kind} at {line}:{col}: {message}")]
pub struct ScheduleError {
    pub kind: ErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
    /// A concrete region exhibiting the problem, rendered in the spec's mode.
    pub witness: Option<String>,
}

impl ScheduleError {
    pub(crate) fn new(kind: ErrorKind, line: usize, col: usize, message: impl Into<String>) -> Self {
        Self { kind, line, col, message: message.into(), witness: None }
    }

    pub(crate) fn overflow() -> Self {
        Self::new(ErrorKind::Overflow, 0, 0, "index arithmetic overflowed")
    }

    pub(crate) fn with_witness(mut self, w: String) -> Self {
        self.witness = Some(w);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Mode {
    Linear,
    Grid,
}

impl Mode {
    pub fn arity(self) -> usize {
        match self {
            Mode::Linear => 1,
            Mode::Grid => 2,
        }
    }

    /// Smallest admissible value of each slot.
    pub fn slot_min(self, slot: usize) -> i64 {
        match (self, slot) {
            (Mode::Grid, 0) => 0,
            _ => 1,
        }
    }

    pub fn cell(self, r: Region) -> Result<Cell, ScheduleError> {
        let (family, k) = match r.symbol() {
            Region::GDisk(k) => (Family::G, k),
            Region::BDisk(k) => (Family::B, k),
            _ => return Ok(Cell::BASE),
        };
        let slots = match self {
            Mode::Linear => [k, 0],
            Mode::Grid => {
                let n = LinearIndex::new(k).map_err(|_| ScheduleError::overflow())?;
                let g = lattice::linear_to_grid(n).map_err(|_| ScheduleError::overflow())?;
                [g.p(), g.q()]
            }
        };
        Ok(Cell { family, slots })
    }

    pub fn region(self, c: &Cell) -> Result<Region, ScheduleError> {
        let k = match self {
            _ if c.family == Family::Base => return Ok(Region::Base),
            Mode::Linear => c.slots[0],
            Mode::Grid => {
                let g = GridIndex::new(c.slots[0], c.slots[1]).map_err(|_| ScheduleError::overflow())?;
                lattice::grid_to_linear(g).map_err(|_| ScheduleError::overflow())?.get()
            }
        };
        Ok(match c.family {
            Family::G => Region::GDisk(k),
            _ => Region::BDisk(k),
        })
    }

    /// `G3` in linear mode, `G(0,3)` in grid mode.
    pub fn display(self, r: Region) -> String {
        match (self, self.cell(r)) {
            (Mode::Grid, Ok(c)) if c.family != Family::Base => {
                format!("{}({},{})", c.family, c.slots[0], c.slots[1])
            }
            _ => r.symbol().to_string(),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Linear => "linear",
            Mode::Grid => "grid",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    Base,
    G,
    B,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Base => "BASE",
            Family::G => "G",
            Family::B => "B",
        })
    }
}

/// Region in slot coordinates. Unused slots are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub family: Family,
    pub slots: [i64; 2],
}

impl Cell {
    pub const BASE: Cell = Cell { family: Family::Base, slots: [0, 0] };

    pub fn new(family: Family, slots: [i64; 2]) -> Self {
        if family == Family::Base {
            Self::BASE
        } else {
            Self { family, slots }
        }
    }

    pub fn is_base(&self) -> bool {
        self.family == Family::Base
    }
}

/// What one step does to a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SlotMove {
    Shift(i64),
    Set(i64),
}

impl SlotMove {
    /// `self` followed by `then`.
    pub fn then(self, then: SlotMove) -> SlotMove {
        match (self, then) {
            (_, SlotMove::Set(v)) => SlotMove::Set(v),
            (SlotMove::Shift(a), SlotMove::Shift(b)) => SlotMove::Shift(a + b),
            (SlotMove::Set(v), SlotMove::Shift(b)) => SlotMove::Set(v + b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub next: Cell,
    pub moves: [SlotMove; 2],
}

/// Which rule of which named spec fired.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RuleRef {
    pub spec: String,
    pub rule: usize,
    pub text: String,
}

/// Anything that maps regions to regions deterministically, one rule (or a
/// fixed chain of rules) per step.
pub trait Schedule: Send + Sync {
    fn mode(&self) -> Mode;

    fn label(&self) -> String;

    /// Slot values strictly above this never influence which rules fire.
    fn threshold(&self) -> i64;

    /// Largest amount one step can subtract from a shifted slot.
    fn max_drop(&self) -> i64;

    fn step(&self, cell: &Cell) -> Result<Step, ScheduleError>;

    /// Rules fired on one step from `cell`, in order.
    fn trace(&self, cell: &Cell) -> Result<Vec<RuleRef>, ScheduleError>;

    fn apply(&self, r: Region) -> Result<Region, ScheduleError> {
        let mode = self.mode();
        let next = self.step(&mode.cell(r)?)?.next;
        mode.region(&next)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SlotPattern {
    Exact(i64),
    Guard { var: String, min: i64 },
    Free { var: String },
}

impl SlotPattern {
    fn var(&self) -> Option<&str> {
        match self {
            SlotPattern::Exact(_) => None,
            SlotPattern::Guard { var, .. } | SlotPattern::Free { var } => Some(var),
        }
    }

    /// Inclusive `[lo, hi]`, `hi = None` for unbounded.
    pub fn range(&self, domain_min: i64) -> (i64, Option<i64>) {
        match self {
            SlotPattern::Exact(v) => (*v, Some(*v)),
            SlotPattern::Guard { min, .. } => (*min, None),
            SlotPattern::Free { .. } => (domain_min, None),
        }
    }

    pub fn is_unbounded(&self) -> bool {
        !matches!(self, SlotPattern::Exact(_))
    }
}

impl fmt::Display for SlotPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotPattern::Exact(v) => write!(f, "{v}"),
            SlotPattern::Guard { var, min } => write!(f, "{var}>={min}"),
            SlotPattern::Free { var } => f.write_str(var),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pattern {
    pub family: Family,
    pub slots: Vec<SlotPattern>,
}

impl Pattern {
    pub fn matches(&self, mode: Mode, c: &Cell) -> bool {
        self.family == c.family
            && self.slots.iter().enumerate().all(|(i, sp)| {
                let (lo, hi) = sp.range(mode.slot_min(i));
                c.slots[i] >= lo && hi.is_none_or(|h| c.slots[i] <= h)
            })
    }

    pub fn is_unbounded(&self) -> bool {
        self.slots.iter().any(SlotPattern::is_unbounded)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_family_slots(f, self.family, &self.slots)
    }
}

fn write_family_slots<T: fmt::Display>(f: &mut fmt::Formatter<'_>, family: Family, slots: &[T]) -> fmt::Result {
    if family == Family::Base {
        return f.write_str("BASE");
    }
    write!(f, "{family}[")?;
    for (i, s) in slots.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{s}")?;
    }
    f.write_str("]")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SlotExpr {
    Abs(i64),
    Var { var: String, offset: i64 },
}

impl SlotExpr {
    fn as_move(&self) -> SlotMove {
        match self {
            SlotExpr::Abs(v) => SlotMove::Set(*v),
            SlotExpr::Var { offset, .. } => SlotMove::Shift(*offset),
        }
    }
}

impl fmt::Display for SlotExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotExpr::Abs(v) => write!(f, "{v}"),
            SlotExpr::Var { var, offset: 0 } => f.write_str(var),
            SlotExpr::Var { var, offset } if *offset > 0 => write!(f, "{var}+{offset}"),
            SlotExpr::Var { var, offset } => write!(f, "{var}-{}", -offset),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleTarget {
    pub family: Family,
    pub slots: Vec<SlotExpr>,
}

impl fmt::Display for RuleTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_family_slots(f, self.family, &self.slots)
    }
}

/// Signed centre of the image disk as a function of the source slots.
pub type CenterFn = fn(&[i64]) -> i64;

#[derive(Debug, Clone, Serialize)]
pub struct Rule {
    pub pattern: Pattern,
    pub target: RuleTarget,
    pub line: usize,
    /// Centre written independently of the target, when one is known
    /// (built-ins carry the inequality they were transcribed from).
    #[serde(skip)]
    pub displayed_center: Option<CenterFn>,
}

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.pattern == other.pattern && self.target == other.target
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.pattern, self.target)
    }
}

impl Rule {
    fn fire(&self, c: &Cell) -> Result<Step, ScheduleError> {
        let mut slots = [0i64; 2];
        let mut moves = [SlotMove::Set(0); 2];
        if self.target.family != Family::Base {
            for (i, e) in self.target.slots.iter().enumerate() {
                moves[i] = e.as_move();
                slots[i] = match moves[i] {
                    SlotMove::Set(v) => v,
                    SlotMove::Shift(d) => c.slots[i].checked_add(d).ok_or_else(ScheduleError::overflow)?,
                };
            }
        }
        Ok(Step { next: Cell::new(self.target.family, slots), moves })
    }
}

/// A validated, total, deterministic rule set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionSpec {
    name: String,
    mode: Mode,
    rules: Vec<Rule>,
    threshold: i64,
    max_drop: i64,
}

impl TransitionSpec {
    /// Validates and assembles a spec.
    pub fn new(name: impl Into<String>, mode: Mode, rules: Vec<Rule>) -> Result<Self, ScheduleError> {
        validate::validate(mode, &rules)?;
        let mut threshold = 0;
        let mut max_drop = 0;
        for r in &rules {
            for (i, sp) in r.pattern.slots.iter().enumerate() {
                threshold = threshold.max(sp.range(mode.slot_min(i)).0);
            }
            for e in &r.target.slots {
                match e {
                    SlotExpr::Abs(v) => threshold = threshold.max(*v),
                    SlotExpr::Var { offset, .. } => max_drop = max_drop.max(-offset),
                }
            }
        }
        Ok(Self { name: name.into(), mode, rules, threshold, max_drop })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule_index(&self, c: &Cell) -> Option<usize> {
        self.rules.iter().position(|r| r.pattern.matches(self.mode, c))
    }

    fn matching(&self, c: &Cell) -> Result<(usize, &Rule), ScheduleError> {
        let idx = self.rule_index(c).ok_or_else(|| {
            ScheduleError::new(ErrorKind::Gap, 0, 0, format!("no rule of [{}] matches", self.name))
        })?;
        Ok((idx, &self.rules[idx]))
    }

    /// Target region of `r` with the centre its rule schedules. Uses the
    /// rule's independently displayed centre when present.
    pub fn log_target(&self, r: Region) -> Result<(Region, LogTarget), AnalyticError> {
        let cell = self.mode.cell(r)?;
        let (_, rule) = self.matching(&cell)?;
        let next = rule.fire(&cell)?.next;
        let target = self.mode.region(&next)?;
        let c = match rule.displayed_center {
            Some(f) => f(&cell.slots[..self.mode.arity()]),
            None => crate::geometry::center(target).map(|z| z.re).unwrap_or(0),
        };
        Ok((target, LogTarget::new(c)?))
    }
}

impl Schedule for TransitionSpec {
    fn mode(&self) -> Mode {
        self.mode
    }

    fn label(&self) -> String {
        self.name.clone()
    }

    fn threshold(&self) -> i64 {
        self.threshold
    }

    fn max_drop(&self) -> i64 {
        self.max_drop
    }

    fn step(&self, cell: &Cell) -> Result<Step, ScheduleError> {
        self.matching(cell)?.1.fire(cell)
    }

    fn trace(&self, cell: &Cell) -> Result<Vec<RuleRef>, ScheduleError> {
        let (idx, rule) = self.matching(cell)?;
        Ok(vec![RuleRef { spec: self.name.clone(), rule: idx, text: rule.to_string() }])
    }
}

/// `first` then `second`, i.e. `second ∘ first`.
#[derive(Clone, Copy)]
pub struct Composed<'a> {
    first: &'a dyn Schedule,
    second: &'a dyn Schedule,
}

pub fn compose<'a>(first: &'a dyn Schedule, second: &'a dyn Schedule) -> Result<Composed<'a>, ScheduleError> {
    if first.mode() != second.mode() {
        return Err(ScheduleError::new(
            ErrorKind::ModeMismatch,
            0,
            0,
            format!("cannot compose {} ({}) with {} ({})", first.label(), first.mode(), second.label(), second.mode()),
        ));
    }
    Ok(Composed { first, second })
}

impl Schedule for Composed<'_> {
    fn mode(&self) -> Mode {
        self.first.mode()
    }

    fn label(&self) -> String {
        format!("{}∘{}", self.second.label(), self.first.label())
    }

    fn threshold(&self) -> i64 {
        self.first.threshold().max(self.second.threshold() + self.first.max_drop())
    }

    fn max_drop(&self) -> i64 {
        self.first.max_drop() + self.second.max_drop()
    }

    fn step(&self, cell: &Cell) -> Result<Step, ScheduleError> {
        let a = self.first.step(cell)?;
        let b = self.second.step(&a.next)?;
        Ok(Step { next: b.next, moves: [a.moves[0].then(b.moves[0]), a.moves[1].then(b.moves[1])] })
    }

    fn trace(&self, cell: &Cell) -> Result<Vec<RuleRef>, ScheduleError> {
        let mid = self.first.step(cell)?.next;
        let mut out = self.first.trace(cell)?;
        out.extend(self.second.trace(&mid)?);
        Ok(out)
    }
}
