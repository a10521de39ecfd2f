//! Finite-field brute-force oracle: U(F_p) via the mod-p BCH law (class < p),
//! exact cyclotomic character theory, and exhaustive verification of the
//! finite analogues of every classification statement.

pub mod characters;
pub mod checks;
pub mod cyclotomic;
pub mod model;
pub mod modp;

pub use characters::{
    character_of_induced, check_character, hom_dim, inner_product, irreducibles, is_good,
    norm_of_induced, psi_phi, restricted_radical_fp, vergne_polarization_fp, CharError,
    ClassFunction, Irreducible,
};
pub use checks::{
    all_subspaces, canonicalize_fp, classify_finite, full_check, CheckError, CheckItem,
    FiniteClassification, FullReport, OracleOptions,
};
pub use cyclotomic::CycInt;
pub use model::{
    linear_orbits, reduce_mat, reduce_mod_p, reduce_rat, reduce_vec, FiniteModel, ModelError,
    OracleError, Partition, Subgroup,
};
pub use modp::{MatFp, SubspaceFp};
