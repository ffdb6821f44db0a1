//! The free module `V` on the natural numbers, its ladder operators and the
//! two bilinear products induced by addition and multiplication of indices.
//!
//! Vectors are finitely supported. Operators are lazy oracles on basis
//! images, so infinite-dimensional maps like `D` or `∂` are represented
//! exactly and only truncated when observed.

mod operator;
mod vector;

pub use operator::{induction_morphism, op_combine, Combine, NamedOperator, Operator};
pub use vector::{apply_poly, basis, mu, mu_prime, vec_arith, VecOp, VecOperand, Vector};
