//! Scalar backends. Every field here has characteristic 2, so negation is
//! the identity and subtraction is addition.
//!
//! * [`Gf2k`]: the finite field GF(2^k) for k in {8, 16, 32, 64, 128}, used as
//!   the specialization target for randomized identity testing.
//! * [`RationalFunction`]: sparse rational functions over GF(2), the exact
//!   backend for tiny instances.
//! * [`Dual`] and [`Jet`]: first-order (and iterated first-order) infinitesimal
//!   extensions used to evaluate derivations numerically.

use std::fmt::Debug;

use thiserror::Error;

mod dual;
mod gf2k;
mod poly;

pub use dual::{Dual, Jet, MAX_JET_LAYERS};
pub use gf2k::{FieldSpec, Gf2Poly, Gf2k, Gf2kField};
pub use poly::{Mono, RationalFunction, SparsePoly, Var, DEFAULT_TERM_BUDGET};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("inverting an infinitesimal with vanishing value part")]
    DerivativeAtPole,
    #[error("denominator vanishes at the specialization point")]
    PoleHit,
    #[error("rational function exceeded the term budget of {0}")]
    TermBudgetExceeded(usize),
    #[error("unsupported field size k = {0}")]
    UnsupportedDegree(u32),
    #[error("modulus is not an irreducible polynomial of degree {0}")]
    ReducibleModulus(u32),
    #[error("cannot parse field spec `{0}`")]
    BadFieldSpec(String),
}

/// Commutative ring operations of a characteristic-2 field (or a local ring
/// over one, for the infinitesimal backends).
///
/// Constants are produced from an existing value (`zero_like`, `one_like`)
/// because runtime-parameterized backends need their context.
pub trait Field: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn inv(&self) -> Result<Self, ScalarError>;

    /// Whether the value is invertible. For fields this is `!is_zero()`.
    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&rhs.inv()?))
    }

    fn square(&self) -> Self {
        self.mul(self)
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Surfaces deferred failures (the exact backend poisons values that
    /// outgrow their term budget instead of failing inside `add`/`mul`).
    fn check(&self) -> Result<(), ScalarError> {
        Ok(())
    }

    /// Stable textual encoding for certificates.
    fn encode(&self) -> String {
        format!("{self:?}")
    }
}

/// A ring that contains a copy of `F`; used to lift constants into
/// infinitesimal extensions.
pub trait Embed<F>: Field {
    fn embed(x: &F, like: &Self) -> Self;
}

impl<F: Field> Embed<F> for F {
    fn embed(x: &F, _like: &Self) -> Self {
        x.clone()
    }
}

pub fn sum<F: Field>(zero: &F, items: impl IntoIterator<Item = F>) -> F {
    items.into_iter().fold(zero.zero_like(), |acc, x| acc.add(&x))
}
