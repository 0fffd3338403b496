//! Exact p-adic arithmetic and the translation-invariant p-adic Gibbs
//! measures of the q-state Potts model on a Cayley tree.
//!
//! * [`padic`]: canonical finite-precision expansions, `exp_p`/`log_p`, `E_p`.
//! * [`roots`]: solvability of `x^k = a` and Hensel lifting.
//! * [`potts`]: fixed points of the translation-invariant recursion and their classification.
//! * [`tree`]: finite Cayley-tree volumes, measures, compatibility and boundedness.

pub mod error;
pub mod padic;
pub mod potts;
pub mod rational;
pub mod roots;
pub mod tree;

pub use error::{Error, Result};
pub use padic::{exp_p, log_p, PadicContext, PadicNumber, PadicRepr};
pub use rational::ExactRational;
