//! Normal forms `Σ P_n(U)∘D^n` of endomorphisms of `V`.
//!
//! A [`NormalSeries`] `Σ P_n(x) y^n` stands for the operator
//! `Σ P_n(U)∘D^n`; the sum is locally finite because `D^n` kills every
//! vector of degree below `n`. [`normalize`] goes the other way, recovering
//! the unique coefficients of any operator one index at a time. On top of
//! that sit the composition product [`star`], the coefficientwise
//! substitution product [`umbral`], rewriting of words in `x`, `y`, graded
//! word families, and matrices of series for endomorphisms of `V^k`.

mod family;
mod matrix;
mod series;
mod words;

pub use family::{
    family_check, family_operator, family_to_series, Affine, FamilyPattern, FamilyRejection,
    FamilyVerdict, GradedFamily,
};
pub use matrix::{matrix_normalize, BlockOperator, SeriesMatrix};
pub use series::{
    apply_series, eq_up_to, first_difference, normalize, series_coeff, star, umbral, NormalSeries,
};
pub use words::{reduce, word_apply, word_nf, word_operator, Letter, NormalWord, Strategy, Word};
