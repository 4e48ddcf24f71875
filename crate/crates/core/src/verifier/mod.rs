//! Numeric checks of the residue identities, kernel expansions and linear closed forms.

pub mod crosscheck;
pub mod lemmas;
pub mod source;
pub mod theorems;

pub use crosscheck::{corollary_cases, corollary_crosscheck, determined_cases, CrosscheckReport};
pub use lemmas::{lemma_expansion, lemma_expansion_residual, sample_point, LemmaId, LemmaReport};
pub use theorems::{
    residue_identities, residue_identity, theorem_residual, verify_theorem, ResidueIdentity,
    TheoremInstance, TheoremReport,
};
