//! Groups of the form `Z^m ⋊ C2`, possibly non-split.
//!
//! A group is fixed by an involution `M` on the translation lattice `T = Z^m`
//! (conjugation by the point-group generator `r`) and a translation word `w`
//! with `r² = w`. Matrices are stored row-major with the column convention
//! that column `j` is the image of the basis vector `e_j`, so `M·v` is an
//! ordinary matrix-vector product.
//!
//! An element `(ε, v)` stands for `t_v r^ε`. Multiplication is
//! `(ε1, v1)(ε2, v2) = (ε1 ⊕ ε2, v1 + M^{ε1} v2 + [ε1 ∧ ε2] w)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("unknown space group {0:?}")]
    UnknownGroup(String),
    #[error("family rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("action matrix must be {rank}x{rank}")]
    BadActionShape { rank: usize },
    #[error("square word has length {got}, expected {rank}")]
    BadWordLength { rank: usize, got: usize },
    #[error("action is not an involution (M*M != I)")]
    NotInvolution,
    #[error("square word is not fixed by the action (M*w != w)")]
    WordNotFixed,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("integer overflow in group arithmetic")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, GroupError>;

/// The eight space groups whose point group has order 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BuiltinGroup {
    #[serde(rename = "P-1")]
    PBar1,
    P2,
    P21,
    C2,
    Pm,
    Pc,
    Cm,
    Cc,
}

impl BuiltinGroup {
    pub const ALL: [BuiltinGroup; 8] = [
        BuiltinGroup::PBar1,
        BuiltinGroup::P2,
        BuiltinGroup::P21,
        BuiltinGroup::C2,
        BuiltinGroup::Pm,
        BuiltinGroup::Pc,
        BuiltinGroup::Cm,
        BuiltinGroup::Cc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinGroup::PBar1 => "P-1",
            BuiltinGroup::P2 => "P2",
            BuiltinGroup::P21 => "P21",
            BuiltinGroup::C2 => "C2",
            BuiltinGroup::Pm => "Pm",
            BuiltinGroup::Pc => "Pc",
            BuiltinGroup::Cm => "Cm",
            BuiltinGroup::Cc => "Cc",
        }
    }

    pub fn spec(self) -> SpaceGroupSpec {
        // Columns are images of e1, e2, e3.
        let e1 = [1, 0, 0];
        let e2 = [0, 1, 0];
        let e3 = [0, 0, 1];
        let ne1 = [-1, 0, 0];
        let ne2 = [0, -1, 0];
        let ne3 = [0, 0, -1];
        let shear = [1, 1, 0];
        let zero = [0, 0, 0];
        let (cols, w) = match self {
            BuiltinGroup::PBar1 => ([ne1, ne2, ne3], zero),
            BuiltinGroup::P2 => ([ne1, e2, ne3], zero),
            BuiltinGroup::P21 => ([ne1, e2, ne3], e2),
            BuiltinGroup::C2 => ([shear, ne2, ne3], zero),
            BuiltinGroup::Pm => ([e1, ne2, e3], zero),
            BuiltinGroup::Pc => ([e1, ne2, e3], e3),
            BuiltinGroup::Cm => ([shear, ne2, e3], zero),
            BuiltinGroup::Cc => ([shear, ne2, e3], e3),
        };
        let action = (0..3)
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        SpaceGroupSpec::new(self.name(), action, w.to_vec())
            .expect("builtin presentations are valid")
    }
}

impl fmt::Display for BuiltinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinGroup {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self> {
        BuiltinGroup::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| GroupError::UnknownGroup(s.to_string()))
    }
}

/// A presentation of `Z^m ⋊ C2` by its involution and square word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceGroupSpec {
    name: String,
    rank: usize,
    action: Vec<Vec<i64>>,
    square_word: Vec<i64>,
}

fn mat_vec(action: &[Vec<i64>], v: &[i64]) -> Option<Vec<i64>> {
    action
        .iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .try_fold(0i64, |acc, (&a, &x)| acc.checked_add(a.checked_mul(x)?))
        })
        .collect()
}

fn checked_add_vec(a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x.checked_add(y).ok_or(GroupError::Overflow))
        .collect()
}

impl SpaceGroupSpec {
    /// Validates shape, `M² = I` and `M·w = w`.
    pub fn new(
        name: impl Into<String>,
        action: Vec<Vec<i64>>,
        square_word: Vec<i64>,
    ) -> Result<Self> {
        let rank = action.len();
        if rank == 0 {
            return Err(GroupError::ZeroRank);
        }
        if action.iter().any(|row| row.len() != rank) {
            return Err(GroupError::BadActionShape { rank });
        }
        if square_word.len() != rank {
            return Err(GroupError::BadWordLength {
                rank,
                got: square_word.len(),
            });
        }
        for j in 0..rank {
            let mut e = vec![0; rank];
            e[j] = 1;
            let image = mat_vec(&action, &e).ok_or(GroupError::Overflow)?;
            let back = mat_vec(&action, &image).ok_or(GroupError::NotInvolution)?;
            if back != e {
                return Err(GroupError::NotInvolution);
            }
        }
        if mat_vec(&action, &square_word).as_deref() != Some(square_word.as_slice()) {
            return Err(GroupError::WordNotFixed);
        }
        Ok(Self {
            name: name.into(),
            rank,
            action,
            square_word,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Row-major action matrix.
    pub fn action(&self) -> &[Vec<i64>] {
        &self.action
    }

    pub fn square_word(&self) -> &[i64] {
        &self.square_word
    }

    fn check_dim(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.rank {
            return Err(GroupError::DimensionMismatch {
                expected: self.rank,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `M·v`.
    pub fn act(&self, v: &[i64]) -> Result<Vec<i64>> {
        self.check_dim(v)?;
        mat_vec(&self.action, v).ok_or(GroupError::Overflow)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::translation(vec![0; self.rank])
    }

    /// The point-group generator `r` itself, `(1, 0)`.
    pub fn rotation(&self) -> GroupElement {
        GroupElement::coset(vec![0; self.rank])
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check_dim(&g.vec)?;
        self.check_dim(&h.vec)?;
        let twisted = if g.coset {
            self.act(&h.vec)?
        } else {
            h.vec.clone()
        };
        let mut vec = checked_add_vec(&g.vec, &twisted)?;
        if g.coset && h.coset {
            vec = checked_add_vec(&vec, &self.square_word)?;
        }
        Ok(GroupElement {
            coset: g.coset ^ h.coset,
            vec,
        })
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check_dim(&g.vec)?;
        let negate = |v: &[i64]| -> Result<Vec<i64>> {
            v.iter()
                .map(|x| x.checked_neg().ok_or(GroupError::Overflow))
                .collect()
        };
        if !g.coset {
            return Ok(GroupElement::translation(negate(&g.vec)?));
        }
        // (1, v)(1, x) = (0, v + Mx + w) = 0  ⇒  x = -M(v + w), using M⁻¹ = M.
        let shifted = checked_add_vec(&g.vec, &self.square_word)?;
        Ok(GroupElement::coset(negate(&self.act(&shifted)?)?))
    }

    /// `by⁻¹ · g · by`.
    pub fn conjugate(&self, g: &GroupElement, by: &GroupElement) -> Result<GroupElement> {
        let left = self.multiply(&self.inverse(by)?, g)?;
        self.multiply(&left, by)
    }

    /// Returns a copy under a different name.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..self.clone()
        }
    }
}

/// `(ε, v)`: the element `t_v r^ε`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    /// Set when the element lies in the coset `rT`.
    pub coset: bool,
    pub vec: Vec<i64>,
}

impl GroupElement {
    pub fn translation(vec: Vec<i64>) -> Self {
        Self { coset: false, vec }
    }

    pub fn coset(vec: Vec<i64>) -> Self {
        Self { coset: true, vec }
    }
}

/// Builtin lookup by name: `P-1`, `P2`, `P21`, `C2`, `Pm`, `Pc`, `Cm`, `Cc`.
pub fn builtin(name: &str) -> Result<SpaceGroupSpec> {
    Ok(name.parse::<BuiltinGroup>()?.spec())
}

fn diagonal(rank: usize, value: i64) -> Vec<Vec<i64>> {
    (0..rank)
        .map(|i| (0..rank).map(|j| if i == j { value } else { 0 }).collect())
        .collect()
}

/// Rank-m group where `r` inverts every translation.
pub fn family_inversion(rank: usize) -> Result<SpaceGroupSpec> {
    if rank < 2 {
        return Err(GroupError::RankTooSmall(rank));
    }
    SpaceGroupSpec::new(
        format!("Family:inversion:{rank}"),
        diagonal(rank, -1),
        vec![0; rank],
    )
}

/// Rank-m group with `e1 ↦ e1 + e2` and `e_i ↦ -e_i` for `i ≥ 2`.
pub fn family_twisted(rank: usize) -> Result<SpaceGroupSpec> {
    if rank < 2 {
        return Err(GroupError::RankTooSmall(rank));
    }
    let mut action = diagonal(rank, -1);
    action[0][0] = 1;
    action[1][0] = 1;
    SpaceGroupSpec::new(format!("Family:twisted:{rank}"), action, vec![0; rank])
}
