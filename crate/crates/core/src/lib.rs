//! Computational laboratory for matrix subspaces of `L_1`.
//!
//! The crate builds finite-dimensional instances of the nested norms
//! `E(F)` and `(Σ⊕X)_E`, realizes 1-unconditional bases as step functions on
//! atomic measures, embeds `E(F)` into `L_1` through the tensor map
//! `A ↦ Σ_k e_k ⊗ Σ_l a_kl f_l`, and certifies the constants that control the
//! embedding: the concavity constant of `{e_k}`, the `L_r`/`L_1` equivalence
//! constant of the span of `{f_l}` (optionally after a change of density) and
//! the resulting distortion.
//!
//! Parallel loops go through [`par`], which reduces over fixed chunk
//! boundaries; with or without the `parallel` feature every result is
//! bit-identical for a given seed.

pub mod cli;
pub mod constants;
pub mod embeddings;
pub mod error;
pub mod matrix;
pub mod measure;
pub mod par;
pub mod realization;
pub mod rng;
pub mod sequence;

pub use constants::{
    certify_norm_equivalence, concavity_ratio, convexity_ratio, density_search, distortion, estimate_constant,
    ConstantMode, DensityResult, DistortionReport, EquivalenceCertificate, LinearMap,
};
pub use embeddings::{
    concavify_embed, gaussian_tensor_embed, rademacher_tensor_embed, realize_l1_disjoint, sample_gaussian,
    sample_rademacher, sample_stable, tensor_embed, verify_theorem_chain, ChainReport, ConcavifiedRealization,
    EmbeddingMap, StableSampleSpec, TensorFactor,
};
pub use error::{Error, Result};
pub use matrix::{ef_norm, sum_oplus_norm, EfNorm, Matrix};
pub use measure::{change_of_density, iterated_tensor_l1, iterated_tensor_ls, ls_norm, AtomicMeasure, StepVector};
pub use realization::{BasisRealization, LsView};
pub use sequence::{
    concavified_norm, convexified_norm, lp_norm, luxemburg_norm, orlicz_growth_check, orlicz_modular,
    power_transform, CoefficientVector, LatticeNorm, Monotone, OrliczFunction, OrliczKind, SequenceNorm,
};
