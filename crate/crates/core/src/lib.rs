//! Subgroup growth of the space groups whose point group has order 2.
//!
//! The counts a_n (subgroups of index n) and c_n (normal subgroups of index n)
//! are computed three independent ways:
//!
//! - [`enumeration`]: brute-force census over sublattices in reduced
//!   triangular form ([`lattice`]) of a group presented as `Z^m ⋊ C2`
//!   ([`spacegroup`]);
//! - [`dirichlet`]: coefficient extraction from the closed-form zeta
//!   functions in [`formulas`];
//! - [`formulas`]: piecewise divisor-sum expressions in σ(n) and d(n).

pub mod dirichlet;
pub mod enumeration;
pub mod formulas;
pub mod lattice;
pub mod spacegroup;

pub use dirichlet::{ClosedFormExpr, CoefficientSeries, Term};
pub use enumeration::{SubgroupDescriptor, SubgroupKind};
pub use formulas::{FamilyVariant, GroupId};
pub use lattice::HnfBasis;
pub use spacegroup::{BuiltinGroup, GroupElement, SpaceGroupSpec};
