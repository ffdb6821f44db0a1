//! Exact operator calculus on the free module `V` with basis `e_0, e_1, ...`.
//!
//! - [`ring`]: coefficient rings, polynomials, one-variable power series.
//! - [`freemodule`]: vectors, lazily evaluated operators, `U`, `D`, `∂`, `∫`.
//! - [`normalform`]: normal forms `Σ P_n(U)∘D^n` and their products, words in
//!   `x` and `y`, summable word families, block matrices.
//! - [`recursion`]: multilinear maps and linear primitive recursion.
//! - [`sheffer`]: Sheffer sequences and their series.
//! - [`expr`]: the operator expression language used by the CLI.

pub mod expr;
pub mod freemodule;
pub mod normalform;
pub mod recursion;
pub mod ring;
pub mod sheffer;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/rings.md")]
    pub struct Rings;
    #[doc = include_str!("../../../book/src/free-module.md")]
    pub struct FreeModule;
    #[doc = include_str!("../../../book/src/normal-forms.md")]
    pub struct NormalForms;
    #[doc = include_str!("../../../book/src/products.md")]
    pub struct Products;
    #[doc = include_str!("../../../book/src/words.md")]
    pub struct Words;
    #[doc = include_str!("../../../book/src/recursion.md")]
    pub struct Recursion;
    #[doc = include_str!("../../../book/src/sheffer.md")]
    pub struct Sheffer;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
