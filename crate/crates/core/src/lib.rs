//! Exact computation in the Gupta–Sidki p-groups and the Grigorchuk group.
//!
//! The [`Engine`] solves the word problem and computes torsion orders,
//! sections and portraits for a [`GroupPreset`]. [`quotient`] builds the
//! finite congruence quotients `G/St(n)` with a stabilizer chain,
//! [`subgroup`] decides finiteness of finitely generated subgroups and
//! semi-decides membership, and [`verify`] turns the structural facts the
//! algorithms rely on into reproducible checks.

pub mod abelian;
pub mod automorphism;
pub mod chain;
pub mod error;
pub mod parse;
pub mod perm;
pub mod portrait;
pub mod preset;
pub mod quotient;
pub mod subgroup;
pub mod verify;
pub mod vertex;
pub mod word;

pub use abelian::{abelianization_image, in_derived_subgroup_image, AbelianImage};
pub use chain::StabChain;
pub use automorphism::{Engine, EngineConfig, WreathDecomposition, MAX_POINTS_ENV};
pub use error::{Error, Result};
pub use perm::{LeafPermutation, Perm};
pub use portrait::Portrait;
pub use preset::{builtin, grigorchuk, gupta_sidki, Family, GroupPreset};
pub use quotient::{
    coset_separated, derived_quotient, level_stabilizer_image, quotient, quotient_contains, quotient_order,
    subgroup_contained, QuotientGroup,
};
pub use subgroup::{
    classify, enumerate_elements, is_finite_grigorchuk, is_finite_gs3, is_finite_gs3_with, membership,
    replay_certificate, Certificate, Classification, DeciderConfig, FinitenessVerdict, GrigorchukCaps,
    MembershipVerdict, SubgroupSpec,
};
pub use verify::{b_decompose, solve_circulant_system, BDecomposition, CheckReport, VerifyOptions, VerifySummary};
pub use vertex::Vertex;
pub use word::{Letter, Word};
