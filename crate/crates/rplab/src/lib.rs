//! A computational laboratory for the subgroup structure of `PSL(2,q)`.
//!
//! The crate constructs the groups `SL(2,q)`, `PSL(2,q)` and `PGL(2,q)` for
//! `q = p` or `p^2` (odd `p`) as explicit sets of canonicalized 2x2 matrices,
//! and verifies statements about irredundant generating sequences and the
//! replacement property by exhaustive enumeration: every subgroup that matters
//! is materialized by breadth-first closure and recognized from its element
//! structure, never inferred from trace identities alone.
//!
//! Module map:
//! - [`gf`]: arithmetic for `F_p` and `F_{p^2}` (square roots, orders,
//!   quadratic roots by scan).
//! - [`psl2`]: matrix groups over a field context, canonical projective
//!   representatives, element orders, the commutator-trace identity.
//! - [`groups`]: subgroup closure, recognition, normalizers, conjugation,
//!   maximal overgroups, subfield embeddings.
//! - [`genseq`]: irredundant generating sequences, the replacement-property
//!   checker, general-position machinery, bounded searches for `m(G)`.
//! - [`witness`]: builders for the explicit failure witnesses and the
//!   verification suites over dihedral/subfield structure.
//! - [`cli`]: deterministic JSON reports and the command-line entry points.

pub mod cli;
pub mod genseq;
pub mod gf;
pub mod groups;
pub mod psl2;
pub mod witness;

pub use gf::{FieldCtx, FqElem};
pub use groups::Subgroup;
pub use psl2::{GroupCtx, GroupElem, GroupKind, Mat2};
