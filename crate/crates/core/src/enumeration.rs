//! Brute-force census of finite-index subgroups of `Z^m ⋊ C2`.
//!
//! Since `[G : T] = 2`, a finite-index subgroup `H` either lies inside the
//! translation lattice `T`, or meets the coset `rT` and then `HT = G`. In the
//! second case `H` is determined by `L = H ∩ T` together with one element
//! `(r, u)`, and `u` only matters modulo `L`. The pair is a subgroup exactly
//! when `L` is stable under the action and `(r, u)² = u + Mu + w` lies in `L`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dirichlet::CoefficientSeries;
use crate::lattice::{enumerate_hnf, HnfBasis};
use crate::spacegroup::{GroupElement, SpaceGroupSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubgroupKind {
    /// `H ⊆ T`.
    InTranslations,
    /// `H·T = G`.
    Surjective,
}

/// Canonical description of a finite-index subgroup.
///
/// Two descriptors are equal iff they describe the same subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubgroupDescriptor {
    kind: SubgroupKind,
    lattice: HnfBasis,
    coset: Option<Vec<i64>>,
}

fn expect_dims<T, E: std::fmt::Debug>(r: Result<T, E>) -> T {
    r.expect("subgroup and group rank agree")
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl SubgroupDescriptor {
    /// The subgroup `L ⊆ T`.
    pub fn in_translations(lattice: HnfBasis) -> Self {
        Self {
            kind: SubgroupKind::InTranslations,
            lattice,
            coset: None,
        }
    }

    /// `⟨L, (r, u)⟩`, or `None` when that is not a subgroup meeting `T` in `L`.
    pub fn surjective(spec: &SpaceGroupSpec, lattice: HnfBasis, u: &[i64]) -> Option<Self> {
        if lattice.rank() != spec.rank() || u.len() != spec.rank() {
            return None;
        }
        if !lattice.is_stable(spec.action()).ok()? {
            return None;
        }
        let square = add(&add(u, &spec.act(u).ok()?), spec.square_word());
        if !lattice.contains(&square).ok()? {
            return None;
        }
        let coset = lattice.reduce(u).ok()?;
        Some(Self {
            kind: SubgroupKind::Surjective,
            lattice,
            coset: Some(coset),
        })
    }

    pub fn kind(&self) -> SubgroupKind {
        self.kind
    }

    /// `H ∩ T`.
    pub fn lattice(&self) -> &HnfBasis {
        &self.lattice
    }

    /// Reduced `u` with `(r, u) ∈ H`; `None` for subgroups of `T`.
    pub fn coset(&self) -> Option<&[i64]> {
        self.coset.as_deref()
    }

    /// Index in the ambient group.
    pub fn index(&self) -> i64 {
        match self.kind {
            SubgroupKind::InTranslations => 2 * self.lattice.determinant(),
            SubgroupKind::Surjective => self.lattice.determinant(),
        }
    }

    /// Lattice rows as translations, then `(r, u)` when present.
    pub fn generators(&self) -> Vec<GroupElement> {
        let mut gens: Vec<GroupElement> = self
            .lattice
            .rows()
            .iter()
            .map(|row| GroupElement::translation(row.clone()))
            .collect();
        if let Some(u) = &self.coset {
            gens.push(GroupElement::coset(u.clone()));
        }
        gens
    }

    pub fn contains_element(&self, g: &GroupElement) -> bool {
        match (&self.coset, g.coset) {
            (_, false) => expect_dims(self.lattice.contains(&g.vec)),
            (None, true) => false,
            (Some(u), true) => expect_dims(self.lattice.contains(&sub(&g.vec, u))),
        }
    }
}

fn for_each_subgroup(spec: &SpaceGroupSpec, n: u64, mut visit: impl FnMut(SubgroupDescriptor)) {
    assert!(n >= 1, "index must be positive");
    let rank = spec.rank();
    for lattice in enumerate_hnf(rank, n) {
        if !expect_dims(lattice.is_stable(spec.action())) {
            continue;
        }
        for u in lattice.coset_representatives() {
            let square = add(&add(&u, &expect_dims(spec.act(&u))), spec.square_word());
            if expect_dims(lattice.contains(&square)) {
                visit(SubgroupDescriptor {
                    kind: SubgroupKind::Surjective,
                    lattice: lattice.clone(),
                    coset: Some(u),
                });
            }
        }
    }
    if n.is_multiple_of(2) {
        for lattice in enumerate_hnf(rank, n / 2) {
            visit(SubgroupDescriptor::in_translations(lattice));
        }
    }
}

/// Every subgroup of index `n`, surjective ones first, deterministic order.
pub fn enumerate_subgroups(spec: &SpaceGroupSpec, n: u64) -> Vec<SubgroupDescriptor> {
    let mut out = Vec::new();
    for_each_subgroup(spec, n, |h| out.push(h));
    out
}

/// a_n: the number of subgroups of index `n`.
pub fn count_subgroups(spec: &SpaceGroupSpec, n: u64) -> u64 {
    let mut count = 0;
    for_each_subgroup(spec, n, |_| count += 1);
    count
}

/// Conjugation by `(1, ±e_i)`, `r` and `r⁻¹`; closure under these gives
/// closure under all of `G`.
fn checking_set(spec: &SpaceGroupSpec) -> Vec<GroupElement> {
    let rank = spec.rank();
    let mut set = Vec::with_capacity(2 * rank + 2);
    for i in 0..rank {
        for sign in [1, -1] {
            let mut e = vec![0; rank];
            e[i] = sign;
            set.push(GroupElement::translation(e));
        }
    }
    let r = spec.rotation();
    set.push(expect_dims(spec.inverse(&r)));
    set.push(r);
    set
}

fn conjugates_stay_inside(
    spec: &SpaceGroupSpec,
    h: &SubgroupDescriptor,
    g: &GroupElement,
    checks: &[GroupElement],
) -> bool {
    checks
        .iter()
        .all(|by| h.contains_element(&expect_dims(spec.conjugate(g, by))))
}

/// Conjugates of the lattice rows are translations, so whether they stay in
/// `H` depends only on `H ∩ T`.
fn rows_stay_inside(
    spec: &SpaceGroupSpec,
    h: &SubgroupDescriptor,
    checks: &[GroupElement],
) -> bool {
    h.lattice.rows().iter().all(|row| {
        let g = GroupElement::translation(row.clone());
        conjugates_stay_inside(spec, h, &g, checks)
    })
}

fn coset_stays_inside(
    spec: &SpaceGroupSpec,
    h: &SubgroupDescriptor,
    checks: &[GroupElement],
) -> bool {
    match &h.coset {
        None => true,
        Some(u) => conjugates_stay_inside(spec, h, &GroupElement::coset(u.clone()), checks),
    }
}

/// True iff `h` is normal in the group. Panics if the ranks differ.
pub fn is_normal(spec: &SpaceGroupSpec, h: &SubgroupDescriptor) -> bool {
    assert_eq!(
        h.lattice.rank(),
        spec.rank(),
        "subgroup rank differs from group rank"
    );
    let checks = checking_set(spec);
    rows_stay_inside(spec, h, &checks) && coset_stays_inside(spec, h, &checks)
}

/// Normal subgroups of index `n`, counted separately for each kind:
/// `(surjective, in_translations)`.
pub fn count_normal_by_kind(spec: &SpaceGroupSpec, n: u64) -> (u64, u64) {
    let checks = checking_set(spec);
    let (mut surjective, mut inside) = (0, 0);
    // lattice whose row test was last evaluated, with its outcome
    let mut cached: Option<(HnfBasis, bool)> = None;
    for_each_subgroup(spec, n, |h| {
        let rows_ok = match &cached {
            Some((lattice, ok)) if *lattice == h.lattice => *ok,
            _ => {
                let ok = rows_stay_inside(spec, &h, &checks);
                cached = Some((h.lattice.clone(), ok));
                ok
            }
        };
        if rows_ok && coset_stays_inside(spec, &h, &checks) {
            match h.kind {
                SubgroupKind::Surjective => surjective += 1,
                SubgroupKind::InTranslations => inside += 1,
            }
        }
    });
    (surjective, inside)
}

/// c_n: the number of normal subgroups of index `n`.
pub fn count_normal_subgroups(spec: &SpaceGroupSpec, n: u64) -> u64 {
    let (s, t) = count_normal_by_kind(spec, n);
    s + t
}

fn to_series(counts: Vec<u64>) -> CoefficientSeries {
    let coeffs = counts
        .into_iter()
        .map(|c| i64::try_from(c).expect("count fits in i64"))
        .collect();
    CoefficientSeries::from_coeffs(coeffs).expect("limit is positive")
}

/// a_1..a_N (or c_1..c_N with `normal_only`). Indices are processed in
/// parallel; the result does not depend on scheduling.
pub fn census(spec: &SpaceGroupSpec, limit: usize, normal_only: bool) -> CoefficientSeries {
    assert!(limit >= 1, "census limit must be positive");
    let counts = (1..=limit as u64)
        .into_par_iter()
        .map(|n| {
            if normal_only {
                count_normal_subgroups(spec, n)
            } else {
                count_subgroups(spec, n)
            }
        })
        .collect();
    to_series(counts)
}

/// Normal census split by kind: `(surjective, in_translations)`.
pub fn normal_census_by_kind(
    spec: &SpaceGroupSpec,
    limit: usize,
) -> (CoefficientSeries, CoefficientSeries) {
    assert!(limit >= 1, "census limit must be positive");
    let (s, t): (Vec<u64>, Vec<u64>) = (1..=limit as u64)
        .into_par_iter()
        .map(|n| count_normal_by_kind(spec, n))
        .unzip();
    (to_series(s), to_series(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacegroup::{builtin, BuiltinGroup};

    #[test]
    fn index_one_is_the_whole_group() {
        for g in BuiltinGroup::ALL {
            let spec = g.spec();
            let subs = enumerate_subgroups(&spec, 1);
            assert_eq!(subs.len(), 1);
            assert_eq!(subs[0].kind(), SubgroupKind::Surjective);
            assert_eq!(subs[0].lattice(), &HnfBasis::identity(3));
            assert_eq!(subs[0].coset(), Some(&[0, 0, 0][..]));
            assert!(is_normal(&spec, &subs[0]));
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_subgroups(&builtin("P-1").unwrap(), 3), 39);
        assert_eq!(count_subgroups(&builtin("Pm").unwrap(), 2), 15);
        assert_eq!(count_subgroups(&builtin("P21").unwrap(), 6), 91);
        assert_eq!(count_subgroups(&builtin("C2").unwrap(), 4), 43);
        assert_eq!(count_subgroups(&builtin("P2").unwrap(), 5), 31);
    }

    #[test]
    fn small_normal_counts() {
        let p1 = builtin("P-1").unwrap();
        assert_eq!(count_normal_subgroups(&p1, 2), 15);
        assert_eq!(count_normal_subgroups(&p1, 8), 43);
        let c2 = builtin("C2").unwrap();
        for n in [1, 3, 5, 7, 9, 15] {
            assert_eq!(count_normal_subgroups(&c2, n), 1, "n = {n}");
        }
    }

    #[test]
    fn translation_subgroup_is_normal() {
        for g in BuiltinGroup::ALL {
            let t = SubgroupDescriptor::in_translations(HnfBasis::identity(3));
            assert_eq!(t.index(), 2);
            assert!(is_normal(&g.spec(), &t));
        }
    }

    #[test]
    fn every_sublattice_is_normal_in_p_bar_1() {
        let p1 = builtin("P-1").unwrap();
        for h in enumerate_subgroups(&p1, 8) {
            if h.kind() == SubgroupKind::InTranslations {
                assert!(is_normal(&p1, &h));
            }
        }
    }

    #[test]
    fn unstable_sublattice_is_not_normal_in_c2() {
        let c2 = builtin("C2").unwrap();
        let l = HnfBasis::from_rows(vec![vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 2]]).unwrap();
        let h = SubgroupDescriptor::in_translations(l.clone());
        assert!(!is_normal(&c2, &h));
        assert!(SubgroupDescriptor::surjective(&c2, l, &[0, 0, 0]).is_none());
    }

    #[test]
    fn descriptor_indices_match() {
        let spec = builtin("Cc").unwrap();
        for n in 1..=8 {
            for h in enumerate_subgroups(&spec, n) {
                assert_eq!(h.index(), n as i64);
            }
        }
    }

    #[test]
    fn surjective_constructor_reduces_coset() {
        let p1 = builtin("P-1").unwrap();
        let l = HnfBasis::diagonal(&[2, 1, 1]);
        let h = SubgroupDescriptor::surjective(&p1, l.clone(), &[5, 3, -2]).unwrap();
        assert_eq!(h.coset(), Some(&[1, 0, 0][..]));
        assert!(enumerate_subgroups(&p1, 2).contains(&h));
        // P21's screw part (0,1,0) is not in diag(1,2,1)
        let p21 = builtin("P21").unwrap();
        assert!(
            SubgroupDescriptor::surjective(&p21, HnfBasis::diagonal(&[1, 2, 1]), &[0, 0, 0])
                .is_none()
        );
    }

    #[test]
    fn census_normal_is_bounded_by_all() {
        let spec = builtin("Pm").unwrap();
        let all = census(&spec, 12, false);
        let normal = census(&spec, 12, true);
        for n in 1..=12 {
            assert!(normal.get(n) <= all.get(n));
        }
        let p1 = census(&builtin("P-1").unwrap(), 10, true);
        for n in [3, 5, 7, 9] {
            assert_eq!(p1.get(n), 0);
        }
    }
}
