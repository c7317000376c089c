//! Diagonal enumeration of the natural numbers as an infinite array.
//!
//! Row `p >= 0`, column `q >= 1` holds
//! `n = q(q-1)/2 + 1 + pq + p(p+1)/2`, so that `n` walks the anti-diagonals
//! `p + q = d` top to bottom: `(0,1), (0,2), (1,1), (0,3), (1,2), (2,1), ...`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("row must be >= 0 and column >= 1, got ({p}, {q})")]
    InvalidGrid { p: i64, q: i64 },
    #[error("linear index must be >= 1, got {0}")]
    InvalidLinear(i64),
    #[error("index arithmetic overflowed 64-bit range")]
    Overflow,
}

/// Position `(p, q)` in the array. `p` is the row, `q` the column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GridIndex {
    p: i64,
    q: i64,
}

impl GridIndex {
    pub fn new(p: i64, q: i64) -> Result<Self, LatticeError> {
        if p < 0 || q < 1 {
            return Err(LatticeError::InvalidGrid { p, q });
        }
        Ok(Self { p, q })
    }

    pub fn p(self) -> i64 {
        self.p
    }

    pub fn q(self) -> i64 {
        self.q
    }
}

impl fmt::Display for GridIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LinearIndex(i64);

impl LinearIndex {
    pub fn new(n: i64) -> Result<Self, LatticeError> {
        if n < 1 {
            return Err(LatticeError::InvalidLinear(n));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> i64 {
        self.0
    }
}

impl fmt::Display for LinearIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `k(k+1)/2` with overflow checking.
fn triangular(k: i64) -> Option<i64> {
    let (even, odd) = if k % 2 == 0 { (k / 2, k + 1) } else { ((k + 1) / 2, k) };
    even.checked_mul(odd)
}

pub fn grid_to_linear(g: GridIndex) -> Result<LinearIndex, LatticeError> {
    let GridIndex { p, q } = g;
    let n = triangular(q - 1)
        .and_then(|t| t.checked_add(1))
        .and_then(|t| p.checked_mul(q).and_then(|pq| t.checked_add(pq)))
        .and_then(|t| triangular(p).and_then(|tp| t.checked_add(tp)))
        .ok_or(LatticeError::Overflow)?;
    Ok(LinearIndex(n))
}

/// Inverse of [`grid_to_linear`].
///
/// `r` is the least positive integer with `r(r+1)/2 >= n`, found by integer
/// square root and then nudged, so no float rounding is involved.
pub fn linear_to_grid(n: LinearIndex) -> Result<GridIndex, LatticeError> {
    let n = n.0 as i128;
    let mut r = ((8 * n + 1).isqrt() - 1) / 2;
    while r * (r + 1) / 2 < n {
        r += 1;
    }
    while r > 1 && (r - 1) * r / 2 >= n {
        r -= 1;
    }
    let s = r * (r + 1) / 2 - n;
    let p = i64::try_from(r - s - 1).map_err(|_| LatticeError::Overflow)?;
    let q = i64::try_from(s + 1).map_err(|_| LatticeError::Overflow)?;
    Ok(GridIndex { p, q })
}

/// Walks the array in increasing linear order, one anti-diagonal at a time.
#[derive(Debug, Clone)]
pub struct DiagonalWalk {
    next_n: i64,
    diagonal: i64,
    row: i64,
}

impl Default for DiagonalWalk {
    fn default() -> Self {
        Self { next_n: 1, diagonal: 1, row: 0 }
    }
}

impl Iterator for DiagonalWalk {
    type Item = (LinearIndex, GridIndex);

    fn next(&mut self) -> Option<Self::Item> {
        let item = (
            LinearIndex(self.next_n),
            GridIndex { p: self.row, q: self.diagonal - self.row },
        );
        self.next_n = self.next_n.checked_add(1)?;
        self.row += 1;
        if self.row == self.diagonal {
            self.diagonal += 1;
            self.row = 0;
        }
        Some(item)
    }
}

pub fn enumerate_array(count: usize) -> Vec<(LinearIndex, GridIndex)> {
    DiagonalWalk::default().take(count).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: i64, q: i64) -> GridIndex {
        GridIndex::new(p, q).unwrap()
    }

    // Position of (p, q) found by walking diagonals one cell at a time.
    fn brute_position(p: i64, q: i64) -> i64 {
        let mut n = 0;
        for d in 1.. {
            for row in 0..d {
                n += 1;
                if row == p && d - row == q {
                    return n;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn brute_force_agrees_on_small_cells() {
        for p in 0..12 {
            for q in 1..12 {
                assert_eq!(grid_to_linear(g(p, q)).unwrap().get(), brute_position(p, q), "({p},{q})");
            }
        }
    }

    #[test]
    fn frozen_examples() {
        assert_eq!(grid_to_linear(g(0, 1)).unwrap().get(), 1);
        assert_eq!(grid_to_linear(g(1, 2)).unwrap().get(), 5);
        assert_eq!(grid_to_linear(g(2, 1)).unwrap().get(), 6);
        assert_eq!(linear_to_grid(LinearIndex::new(1).unwrap()).unwrap(), g(0, 1));
        assert_eq!(linear_to_grid(LinearIndex::new(5).unwrap()).unwrap(), g(1, 2));
        assert_eq!(linear_to_grid(LinearIndex::new(6).unwrap()).unwrap(), g(2, 1));
    }

    #[test]
    fn rejects_out_of_domain() {
        assert_eq!(GridIndex::new(-1, 1), Err(LatticeError::InvalidGrid { p: -1, q: 1 }));
        assert_eq!(GridIndex::new(0, 0), Err(LatticeError::InvalidGrid { p: 0, q: 0 }));
        assert_eq!(LinearIndex::new(0), Err(LatticeError::InvalidLinear(0)));
    }

    #[test]
    fn overflow_is_reported() {
        let big = g(0, i64::MAX / 2);
        assert_eq!(grid_to_linear(big), Err(LatticeError::Overflow));
        let big = g(i64::MAX / 4, 3);
        assert_eq!(grid_to_linear(big), Err(LatticeError::Overflow));
    }

    #[test]
    fn triangular_boundaries() {
        // n = r(r+1)/2 is the last cell of diagonal r, row r-1.
        for r in 1..2000i64 {
            let n = r * (r + 1) / 2;
            assert_eq!(linear_to_grid(LinearIndex(n)).unwrap(), g(r - 1, 1));
            assert_eq!(linear_to_grid(LinearIndex(n + 1)).unwrap(), g(0, r + 1));
        }
    }

    #[test]
    fn largest_linear_index_inverts() {
        let grid = linear_to_grid(LinearIndex(i64::MAX)).unwrap();
        assert_eq!(grid_to_linear(grid).unwrap().get(), i64::MAX);
    }

    #[test]
    fn enumeration_examples() {
        assert!(enumerate_array(0).is_empty());
        assert_eq!(
            enumerate_array(3),
            vec![
                (LinearIndex(1), g(0, 1)),
                (LinearIndex(2), g(0, 2)),
                (LinearIndex(3), g(1, 1)),
            ]
        );
        assert_eq!(enumerate_array(6).last(), Some(&(LinearIndex(6), g(2, 1))));
    }

    #[test]
    fn column_successor_matches_target_expression() {
        for p in 0..60 {
            for q in 1..60 {
                let expected = q * (q + 1) / 2 + 1 + p * (q + 1) + p * (p + 1) / 2;
                assert_eq!(grid_to_linear(g(p, q + 1)).unwrap().get(), expected);
            }
        }
    }
}
