//! Closed forms for the zeta and normal zeta functions, and the piecewise
//! divisor-sum evaluators of a_n and c_n.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dirichlet::{divisor_count, divisor_sum, divisors, ClosedFormExpr, Term};
use crate::spacegroup::{family_inversion, family_twisted, BuiltinGroup, SpaceGroupSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("unknown group id {0:?}")]
    UnknownGroup(String),
    #[error("family rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("no normal zeta closed form is known for {0}")]
    NoNormalForm(GroupId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyVariant {
    /// Every translation inverted.
    Inversion,
    /// `e1 ↦ e1 + e2`, the rest inverted.
    Twisted,
}

impl FamilyVariant {
    pub fn name(self) -> &'static str {
        match self {
            FamilyVariant::Inversion => "inversion",
            FamilyVariant::Twisted => "twisted",
        }
    }
}

/// One of the eight named groups or a member of a rank-m family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupId {
    Builtin(BuiltinGroup),
    Family { variant: FamilyVariant, rank: usize },
}

impl GroupId {
    pub fn family(variant: FamilyVariant, rank: usize) -> Result<Self, FormulaError> {
        if rank < 2 {
            return Err(FormulaError::RankTooSmall(rank));
        }
        Ok(GroupId::Family { variant, rank })
    }

    pub fn spec(self) -> Result<SpaceGroupSpec, FormulaError> {
        match self {
            GroupId::Builtin(g) => Ok(g.spec()),
            GroupId::Family { variant, rank } => {
                let spec = match variant {
                    FamilyVariant::Inversion => family_inversion(rank),
                    FamilyVariant::Twisted => family_twisted(rank),
                };
                spec.map_err(|_| FormulaError::RankTooSmall(rank))
            }
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupId::Builtin(g) => write!(f, "{g}"),
            GroupId::Family { variant, rank } => write!(f, "Family:{}:{rank}", variant.name()),
        }
    }
}

impl FromStr for GroupId {
    type Err = FormulaError;

    /// Accepts the eight builtin names and `Family:inversion:m` / `Family:twisted:m`.
    fn from_str(s: &str) -> Result<Self, FormulaError> {
        if let Ok(g) = s.parse::<BuiltinGroup>() {
            return Ok(GroupId::Builtin(g));
        }
        let unknown = || FormulaError::UnknownGroup(s.to_string());
        let mut parts = s.split(':');
        let (Some("Family"), Some(variant), Some(rank), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(unknown());
        };
        let variant = match variant {
            "inversion" => FamilyVariant::Inversion,
            "twisted" => FamilyVariant::Twisted,
            _ => return Err(unknown()),
        };
        let rank = rank.parse::<usize>().map_err(|_| unknown())?;
        GroupId::family(variant, rank)
    }
}

fn term(poly: &[i64], shifts: &[u32]) -> Term {
    Term::new(poly.to_vec(), shifts.to_vec())
}

/// ζ(s)ζ(s-1)...ζ(s-m+1), the zeta function of Z^m.
fn lattice_shifts(rank: usize) -> Vec<u32> {
    (0..rank as u32).collect()
}

/// The zeta function of a group as a sum of 2-adic polynomials times zeta products.
pub fn zeta_closed_form(id: GroupId) -> Result<ClosedFormExpr, FormulaError> {
    use BuiltinGroup::*;
    // every group gets 2^{-s} ζζ_1ζ_2 from its subgroups of T
    let in_t = term(&[0, 1], &[0, 1, 2]);
    let terms = match id {
        GroupId::Builtin(g) => match g {
            PBar1 => vec![term(&[1], &[1, 2, 3]), in_t],
            P2 => vec![term(&[1, 8], &[0, 1, 2])],
            P21 => vec![term(&[1], &[0, 1, 2])],
            C2 => vec![term(&[1, 0, 8], &[0, 1, 2])],
            Pm => vec![term(&[1, 9, 6], &[0, 1, 1]), in_t],
            Pc => vec![term(&[1, 1, -2], &[0, 1, 1]), in_t],
            Cm => vec![term(&[1, 1, 6, 8], &[0, 1, 1]), in_t],
            Cc => vec![term(&[1, -3, 10, -8], &[0, 1, 1]), in_t],
        },
        GroupId::Family { variant, rank } => {
            if rank < 2 {
                return Err(FormulaError::RankTooSmall(rank));
            }
            let base = lattice_shifts(rank);
            match variant {
                FamilyVariant::Inversion => {
                    let shifted: Vec<u32> = base.iter().map(|k| k + 1).collect();
                    vec![term(&[1], &shifted), term(&[0, 1], &base)]
                }
                FamilyVariant::Twisted => {
                    let top = 1i64 << rank;
                    vec![term(&[1, 0, top], &base)]
                }
            }
        }
    };
    Ok(ClosedFormExpr::new(terms))
}

/// The normal zeta function; only the eight named groups have one.
pub fn normal_zeta_closed_form(id: GroupId) -> Result<ClosedFormExpr, FormulaError> {
    use BuiltinGroup::*;
    let GroupId::Builtin(g) = id else {
        return Err(FormulaError::NoNormalForm(id));
    };
    let zz1 = [0, 0, 1];
    let terms = match g {
        PBar1 => vec![term(&[1, 14, 28, 8], &[]), term(&[0, 1], &[0, 1, 2])],
        P2 => vec![term(&[1, 13, 22, 4], &[0]), term(&[0, 1, 3], &zz1)],
        P21 => vec![term(&[1, 5, -2, -4], &[0]), term(&[0, 1, 3], &zz1)],
        C2 => vec![term(&[1, 5, 2], &[0]), term(&[0, 1, -1, 4], &zz1)],
        Pm => vec![term(&[1, 11, 12], &[0, 1]), term(&[0, 1, 3], &zz1)],
        Pc => vec![term(&[1, 3, -4], &[0, 1]), term(&[0, 1, 3], &zz1)],
        Cm => vec![term(&[1, 3], &[0, 1]), term(&[0, 1, -1, 4], &zz1)],
        Cc => vec![term(&[1, -1], &[0, 1]), term(&[0, 1, -1, 4], &zz1)],
    };
    Ok(ClosedFormExpr::new(terms))
}

fn to_i64(x: u64) -> i64 {
    i64::try_from(x).expect("divisor sums fit in i64")
}

/// `Σ_{l | n/2^k} f(l)`, or 0 when `2^k ∤ n`.
fn sum_over_quotient(n: u64, k: u32, f: impl Fn(u64) -> u64) -> i64 {
    let m = 1u64 << k;
    if !n.is_multiple_of(m) {
        return 0;
    }
    to_i64(divisors(n / m).into_iter().map(f).sum())
}

/// `σ(n/2^k)`, or 0 when `2^k ∤ n`.
fn sigma_of_quotient(n: u64, k: u32) -> i64 {
    let m = 1u64 << k;
    if !n.is_multiple_of(m) {
        return 0;
    }
    to_i64(divisor_sum(n / m))
}

fn l_sigma(l: u64) -> u64 {
    l * divisor_sum(l)
}

fn l_tau(l: u64) -> u64 {
    l * divisor_count(l)
}

/// a_n from the piecewise divisor-sum expressions.
pub fn a_formula(g: BuiltinGroup, n: u64) -> i64 {
    use BuiltinGroup::*;
    assert!(n >= 1, "index must be positive");
    let ls = |k| sum_over_quotient(n, k, l_sigma);
    let lt = |k| sum_over_quotient(n, k, l_tau);
    match g {
        // odd n: n Σ_{l|n} lσ(l); the second sum vanishes
        PBar1 => to_i64(n) * ls(0) + ls(1),
        P2 => ls(0) + 8 * ls(1),
        P21 => ls(0),
        // the extra term only appears for n ≡ 0 (mod 4)
        C2 => ls(0) + 8 * ls(2),
        _ if n % 2 == 1 => lt(0),
        Pm => match n % 4 {
            2 => lt(0) + 9 * lt(1) + ls(1),
            _ => lt(0) + 9 * lt(1) + 6 * lt(2) + ls(1),
        },
        Pc => match n % 4 {
            2 => lt(0) + lt(1) + ls(1),
            _ => lt(0) + lt(1) - 2 * lt(2) + ls(1),
        },
        Cm => match n % 8 {
            2 | 6 => lt(0) + lt(1) + ls(1),
            4 => lt(0) + lt(1) + 6 * lt(2) + ls(1),
            _ => lt(0) + lt(1) + 6 * lt(2) + 8 * lt(3) + ls(1),
        },
        Cc => match n % 8 {
            2 | 6 => lt(0) - 3 * lt(1) + ls(1),
            4 => lt(0) - 3 * lt(1) + 10 * lt(2) + ls(1),
            _ => lt(0) - 3 * lt(1) + 10 * lt(2) - 8 * lt(3) + ls(1),
        },
    }
}

/// c_n from the piecewise divisor-sum expressions.
pub fn c_formula(g: BuiltinGroup, n: u64) -> i64 {
    use BuiltinGroup::*;
    assert!(n >= 1, "index must be positive");
    let ls = |k| sum_over_quotient(n, k, l_sigma);
    // Σ_{l | n/2^k} σ(l)
    let ss = |k| sum_over_quotient(n, k, divisor_sum);
    let sq = |k| sigma_of_quotient(n, k);
    match g {
        PBar1 => match n {
            1 => 1,
            _ if n % 2 == 1 => 0,
            // The extra normal subgroups meeting rT only occur at indices dividing 8.
            2 => 15,
            4 => 35,
            8 => 43,
            _ => ls(1),
        },
        P2 | P21 | C2 if n % 2 == 1 => 1,
        P2 => match n % 8 {
            0 => 40 + 3 * ss(2) + ss(1),
            4 => 36 + 3 * ss(2) + ss(1),
            _ => 14 + ss(1),
        },
        P21 => match n % 8 {
            0 => 3 * ss(2) + ss(1),
            4 => 4 + 3 * ss(2) + ss(1),
            _ => 6 + ss(1),
        },
        C2 => match n % 8 {
            0 => 8 + 4 * ss(3) - ss(2) + ss(1),
            4 => 8 - ss(2) + ss(1),
            _ => 6 + ss(1),
        },
        _ if n % 2 == 1 => sq(0),
        Pm => match n % 4 {
            2 => sq(0) + 11 * sq(1) + ss(1),
            _ => sq(0) + 11 * sq(1) + 12 * sq(2) + ss(1) + 3 * ss(2),
        },
        Pc => match n % 4 {
            2 => sq(0) + 3 * sq(1) + ss(1),
            _ => sq(0) + 3 * sq(1) - 4 * sq(2) + ss(1) + 3 * ss(2),
        },
        Cm => match n % 8 {
            2 | 6 => sq(0) + 3 * sq(1) + ss(1),
            4 => sq(0) + 3 * sq(1) + ss(1) - ss(2),
            _ => sq(0) + 3 * sq(1) + ss(1) - ss(2) + 4 * ss(3),
        },
        Cc => match n % 8 {
            2 | 6 => sq(0) - sq(1) + ss(1),
            4 => sq(0) - sq(1) - ss(2) + ss(1),
            _ => sq(0) - sq(1) - ss(2) + ss(1) + 4 * ss(3),
        },
    }
}

/// Number of sublattices of index `n` in `Z^rank`, by the recursion
/// `f_m(n) = Σ_{d | n} d^{m-1} f_{m-1}(n/d)`, `f_1 = 1`.
pub fn sublattice_count(rank: usize, n: u64) -> i64 {
    assert!(n >= 1, "index must be positive");
    if rank <= 1 {
        return 1;
    }
    divisors(n)
        .into_iter()
        .map(|d| {
            to_i64(d.pow(rank as u32 - 1))
                .checked_mul(sublattice_count(rank - 1, n / d))
                .expect("sublattice count fits in i64")
        })
        .sum()
}

/// a_n of a family member, evaluated directly from its closed form.
pub fn family_a_formula(variant: FamilyVariant, rank: usize, n: u64) -> i64 {
    assert!(rank >= 2, "family rank must be at least 2");
    assert!(n >= 1, "index must be positive");
    match variant {
        FamilyVariant::Inversion => {
            let half = if n.is_multiple_of(2) {
                sublattice_count(rank, n / 2)
            } else {
                0
            };
            to_i64(n) * sublattice_count(rank, n) + half
        }
        FamilyVariant::Twisted => {
            let quarter = if n.is_multiple_of(4) {
                sublattice_count(rank, n / 4)
            } else {
                0
            };
            sublattice_count(rank, n) + (1i64 << rank) * quarter
        }
    }
}

/// a_n through whichever direct evaluator applies to `id`.
pub fn subgroup_count_formula(id: GroupId, n: u64) -> i64 {
    match id {
        GroupId::Builtin(g) => a_formula(g, n),
        GroupId::Family { variant, rank } => family_a_formula(variant, rank, n),
    }
}
