//! Finite-index sublattices of `Z^m` in reduced upper-triangular form.
//!
//! Row `i` of an [`HnfBasis`] is zero before position `i`, has a positive pivot
//! `p_i` at position `i`, and every entry `j > i` lies in `[0, p_j)`. This form
//! is unique per sublattice, so equality of bases is equality of lattices.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rows do not form a reduced triangular basis")]
    NotReduced,
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, LatticeError>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HnfBasis {
    rows: Vec<Vec<i64>>,
}

impl HnfBasis {
    /// Validates the reduced triangular shape.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let m = rows.len();
        if let Some(row) = rows.iter().find(|row| row.len() != m) {
            return Err(LatticeError::DimensionMismatch {
                expected: m,
                got: row.len(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row[..i].iter().any(|&x| x != 0) || row[i] < 1 {
                return Err(LatticeError::NotReduced);
            }
            for j in (i + 1)..m {
                if !(0..rows[j][j].max(1)).contains(&row[j]) {
                    return Err(LatticeError::NotReduced);
                }
            }
        }
        Ok(Self { rows })
    }

    /// `Z^m` itself.
    pub fn identity(rank: usize) -> Self {
        Self::diagonal(&vec![1; rank])
    }

    /// Basis `diag(p_1, ..., p_m)`. Panics on a non-positive pivot.
    pub fn diagonal(pivots: &[i64]) -> Self {
        assert!(pivots.iter().all(|&p| p >= 1), "pivots must be positive");
        let m = pivots.len();
        let rows = (0..m)
            .map(|i| (0..m).map(|j| if i == j { pivots[i] } else { 0 }).collect())
            .collect();
        Self { rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<i64> {
        (0..self.rank()).map(|i| self.rows[i][i]).collect()
    }

    /// Index of the lattice in `Z^m`: the product of the pivots.
    pub fn determinant(&self) -> i64 {
        self.pivots().iter().product()
    }

    fn check_dim(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Canonical representative of `v` modulo the lattice: coordinate `j` ends
    /// up in `[0, p_j)`.
    pub fn reduce(&self, v: &[i64]) -> Result<Vec<i64>> {
        self.check_dim(v)?;
        let mut out = v.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let q = out[i].div_euclid(row[i]);
            if q == 0 {
                continue;
            }
            for j in i..out.len() {
                let step = q.checked_mul(row[j]).ok_or(LatticeError::Overflow)?;
                out[j] = out[j].checked_sub(step).ok_or(LatticeError::Overflow)?;
            }
        }
        Ok(out)
    }

    /// Membership by back-substitution down the triangle.
    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().all(|&x| x == 0))
    }

    /// True iff `M·row` lies in the lattice for every basis row (`M` row-major).
    pub fn is_stable(&self, action: &[Vec<i64>]) -> Result<bool> {
        if action.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                got: action.len(),
            });
        }
        for row in &self.rows {
            let image = action
                .iter()
                .map(|a| {
                    self.check_dim(a)?;
                    a.iter()
                        .zip(row)
                        .try_fold(0i64, |acc, (&x, &y)| acc.checked_add(x.checked_mul(y)?))
                        .ok_or(LatticeError::Overflow)
                })
                .collect::<Result<Vec<_>>>()?;
            if !self.contains(&image)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every canonical coset representative, lexicographically.
    pub fn coset_representatives(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        Odometer::new(self.pivots())
    }
}

impl fmt::Display for HnfBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{row:?}")?;
        }
        write!(f, "]")
    }
}

/// Iterates all vectors with `0 ≤ x_i < bounds[i]`, last coordinate fastest.
struct Odometer {
    bounds: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl Odometer {
    fn new(bounds: Vec<i64>) -> Self {
        let next = if bounds.iter().all(|&b| b > 0) {
            Some(vec![0; bounds.len()])
        } else {
            None
        };
        Self { bounds, next }
    }
}

impl Iterator for Odometer {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] < self.bounds[i] {
                self.next = Some(succ);
                return Some(current);
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

/// Ordered factorizations of `n` into `parts` positive factors, lexicographic.
fn ordered_factorizations(n: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 0 {
        return if n == 1 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        for mut rest in ordered_factorizations(n / d, parts - 1) {
            rest.insert(0, d);
            out.push(rest);
        }
    }
    out
}

/// All sublattices of `Z^rank` of the given index, each exactly once.
///
/// Outer order is over pivot factorizations, inner order over the reduced
/// off-diagonal entries `(0,1), (0,2), ..., (1,2), ...` lexicographically.
pub fn enumerate_hnf(rank: usize, index: u64) -> Vec<HnfBasis> {
    assert!(index >= 1, "index must be positive");
    let mut out = Vec::new();
    let slots: Vec<(usize, usize)> = (0..rank)
        .flat_map(|i| ((i + 1)..rank).map(move |j| (i, j)))
        .collect();
    for pivots in ordered_factorizations(index as i64, rank) {
        let bounds = slots.iter().map(|&(_, j)| pivots[j]).collect();
        for entries in Odometer::new(bounds) {
            let mut rows: Vec<Vec<i64>> = (0..rank)
                .map(|i| {
                    (0..rank)
                        .map(|j| if i == j { pivots[i] } else { 0 })
                        .collect()
                })
                .collect();
            for (&(i, j), &x) in slots.iter().zip(&entries) {
                rows[i][j] = x;
            }
            out.push(HnfBasis { rows });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_small() {
        assert_eq!(enumerate_hnf(3, 1), vec![HnfBasis::identity(3)]);
        assert_eq!(enumerate_hnf(3, 2).len(), 7);
        assert_eq!(enumerate_hnf(2, 3).len(), 4);
        // lexicographic over pivots first
        let first = &enumerate_hnf(2, 3)[0];
        assert_eq!(first.rows(), &[vec![1, 0], vec![0, 3]]);
        assert_eq!(enumerate_hnf(1, 5), vec![HnfBasis::diagonal(&[5])]);
    }

    #[test]
    fn membership() {
        let id = HnfBasis::identity(3);
        assert!(id.contains(&[7, -3, 11]).unwrap());
        let two = HnfBasis::diagonal(&[2, 2, 2]);
        assert!(two.contains(&[2, 0, 0]).unwrap());
        assert!(!two.contains(&[1, 0, 0]).unwrap());
        let l = HnfBasis::from_rows(vec![vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 2]]).unwrap();
        assert!(l.contains(&[0, 1, -1]).unwrap());
        assert!(!l.contains(&[0, 0, 1]).unwrap());
        assert_eq!(
            l.contains(&[1, 0]),
            Err(LatticeError::DimensionMismatch {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn reduction() {
        assert_eq!(
            HnfBasis::identity(3).reduce(&[4, -9, 2]).unwrap(),
            vec![0, 0, 0]
        );
        assert_eq!(
            HnfBasis::diagonal(&[2, 2, 2]).reduce(&[3, -1, 4]).unwrap(),
            vec![1, 1, 0]
        );
        let l = HnfBasis::from_rows(vec![vec![3, 1, 2], vec![0, 2, 1], vec![0, 0, 4]]).unwrap();
        let v = [10, -7, 5];
        let red = l.reduce(&v).unwrap();
        for (j, p) in l.pivots().into_iter().enumerate() {
            assert!((0..p).contains(&red[j]));
        }
        let diff: Vec<i64> = v.iter().zip(&red).map(|(a, b)| a - b).collect();
        assert!(l.contains(&diff).unwrap());
    }

    #[test]
    fn stability() {
        let l = HnfBasis::from_rows(vec![vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 2]]).unwrap();
        let identity = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let minus = vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]];
        // C2: e1 ↦ e1 + e2, e2 ↦ -e2, e3 ↦ -e3 (row-major)
        let c2 = vec![vec![1, 0, 0], vec![1, -1, 0], vec![0, 0, -1]];
        assert!(l.is_stable(&identity).unwrap());
        assert!(l.is_stable(&minus).unwrap());
        assert!(!l.is_stable(&c2).unwrap());
        assert!(l.contains(&[0, -1, -1]).unwrap());
        assert!(!l.contains(&[1, 1, 0]).unwrap());
    }

    #[test]
    fn from_rows_validates() {
        assert_eq!(
            HnfBasis::from_rows(vec![vec![2, 2], vec![0, 2]]),
            Err(LatticeError::NotReduced)
        );
        assert_eq!(
            HnfBasis::from_rows(vec![vec![2, 0], vec![1, 2]]),
            Err(LatticeError::NotReduced)
        );
        assert_eq!(
            HnfBasis::from_rows(vec![vec![0, 0], vec![0, 2]]),
            Err(LatticeError::NotReduced)
        );
        assert!(HnfBasis::from_rows(vec![vec![2, 1], vec![0, 2]]).is_ok());
    }

    #[test]
    fn coset_representatives_cover_the_quotient() {
        let l = HnfBasis::from_rows(vec![vec![2, 1], vec![0, 3]]).unwrap();
        let reps: Vec<_> = l.coset_representatives().collect();
        assert_eq!(reps.len(), 6);
        assert_eq!(reps[0], vec![0, 0]);
        assert_eq!(reps[1], vec![0, 1]);
        for r in &reps {
            assert_eq!(&l.reduce(r).unwrap(), r);
        }
    }

    #[test]
    fn factorizations() {
        assert_eq!(
            ordered_factorizations(4, 2),
            vec![vec![1, 4], vec![2, 2], vec![4, 1]]
        );
        assert_eq!(ordered_factorizations(6, 3).len(), 9);
    }
}
