//! Symbolic dynamics of piecewise exponential target maps on a Carleman set.
//!
//! The crate models a closed set `S` made of disks, rays and lines, encodes
//! piecewise maps `z -> exp(alpha(z))` as transition schedules between the
//! pieces of `S`, checks that each scheduled transition is realisable by the
//! exponential (with an explicit tolerance), and classifies every piece's
//! orbit under `f`, `g`, `g∘f` and `f∘g` as periodic, preperiodic or
//! wandering.
//!
//! Module map:
//!
//! | module | content |
//! |---|---|
//! | [`lattice`] | diagonal bijection between `N` and the `(row, column)` array |
//! | [`geometry`] | regions, centres, membership, exact gaps, structural witness |
//! | [`analytic`] | continuity moduli of `exp`, rule realisability, tolerances |
//! | [`schedule`] | rule language, parser, validator, composition, built-ins |
//! | [`dynamics`] | orbits, classification with escape certificates, claim tables |
//! | [`oracle`] | brute-force reference implementations used for cross-checks |
//! | [`exec`] | sequential / parallel execution of the sweeps |

pub mod analytic;
pub mod dynamics;
pub mod exec;
pub mod geometry;
pub mod lattice;
pub mod oracle;
pub mod schedule;

pub use dynamics::{classify, orbit, EscapeCertificate, OrbitClass, OrbitKind};
pub use exec::Exec;
pub use geometry::Region;
pub use lattice::{GridIndex, LinearIndex};
pub use schedule::{builtin, compose, parse_schedule, parse_spec, Mode, Schedule, TheoremId, TransitionSpec};
