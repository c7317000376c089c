//! Slow reference implementations used to cross-check the fast paths.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::LogTarget;
use crate::exec::Exec;
use crate::geometry::Region;
use crate::schedule::{Schedule, ScheduleError};

pub const BRUTE_STEPS: usize = 10_000;
pub const BRUTE_WINDOW: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BruteVerdict {
    Periodic { period: usize },
    Preperiodic { tail: usize, period: usize },
    Wandering,
    Undetermined,
}

fn index(r: Region) -> i64 {
    r.disk_index().unwrap_or(0)
}

/// Iterates `steps` times; a repeated region decides the orbit, otherwise an
/// index that strictly increases over the last `window` steps calls it
/// wandering.
pub fn brute_classify(s: &dyn Schedule, r: Region, steps: usize, window: usize) -> Result<BruteVerdict, ScheduleError> {
    let mut orbit = vec![r.symbol()];
    let mut first_seen = HashMap::from([(r.symbol(), 0usize)]);
    for j in 1..=steps {
        let next = s.apply(orbit[j - 1])?;
        if let Some(&i) = first_seen.get(&next) {
            return Ok(if i == 0 {
                BruteVerdict::Periodic { period: j }
            } else {
                BruteVerdict::Preperiodic { tail: i, period: j - i }
            });
        }
        first_seen.insert(next, j);
        orbit.push(next);
    }
    let tail = &orbit[orbit.len().saturating_sub(window + 1)..];
    if tail.windows(2).all(|w| index(w[1]) > index(w[0])) {
        Ok(BruteVerdict::Wandering)
    } else {
        Ok(BruteVerdict::Undetermined)
    }
}

/// `max |exp(w0 + r e^{it}) - c|` over `samples` equally spaced `t`.
pub fn sampled_deviation(lt: &LogTarget, r: f64, samples: usize, exec: Exec) -> f64 {
    let c = Complex64::new(lt.c() as f64, 0.0);
    let w0 = lt.w0();
    exec.max_f64(samples, |i| {
        let t = std::f64::consts::TAU * i as f64 / samples as f64;
        ((w0 + Complex64::from_polar(r, t)).exp() - c).norm()
    })
    .unwrap_or(0.0)
}

/// Radius at which the sampled deviation first reaches `level`, by bisection.
pub fn deviation_crossing(lt: &LogTarget, level: f64, samples: usize, exec: Exec) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while sampled_deviation(lt, hi, samples, exec) < level {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if sampled_deviation(lt, mid, samples, exec) < level {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}
