//! Exact symbolic exterior calculus on ℝⁿ.
//!
//! Every coefficient in this crate is a multivariate polynomial over the
//! rationals, so sign conventions and permutation factors can be checked as
//! structural equalities instead of approximations. The layers are:
//!
//! - [`polyring`]: sparse polynomials over ℚ, the shared coefficient ring;
//! - [`exterior`]: differential forms and multivector fields with wedge,
//!   contraction and the exterior derivative;
//! - [`hodge`]: constant metrics, the musical isomorphisms, the Hodge star
//!   and the induced inner products;
//! - [`schouten`]: the Schouten–Nijenhuis bracket and the Lie derivative of
//!   forms along multivector fields;
//! - [`msymp`]: multisymplectic structures, Hamiltonian pairs, the
//!   contraction-equation solver and the bracket on Hamiltonian forms;
//! - [`g2`]: the standard G₂ structure on ℝ⁷, the Ω²₇/Ω²₁₄ projections and
//!   Rochesterian/coRochesterian classification;
//! - [`verify`]: a deterministic, seeded suite replaying the defining
//!   identities and worked examples, with one pass/fail entry per check.
//!
//! ```
//! use g2calc::exterior::{contract, coordinate_vector};
//! use g2calc::g2::G2Context;
//!
//! let ctx = G2Context::standard();
//! let q = coordinate_vector(7, 6).wedge(&coordinate_vector(7, 7))?;
//! assert_eq!(contract(&q, ctx.star_phi())?.to_string(), "dx23 + dx45");
//! assert_eq!(contract(&q, ctx.phi())?.to_string(), "dx1");
//!
//! // the 2-form splits into its irreducible components and inverts back
//! let beta = contract(&q, ctx.star_phi())?;
//! let split = ctx.split2(&beta)?;
//! assert_eq!(&split.beta7 + &split.beta14, beta);
//! assert_eq!(ctx.invert_starphi2(&beta)?, q);
//! # Ok::<(), g2calc::CalcError>(())
//! ```

pub mod error;
pub mod exterior;
pub mod g2;
pub mod hodge;
pub mod linalg;
pub mod msymp;
pub mod polyring;
pub mod sample;
pub mod schouten;
pub mod verify;

pub(crate) mod util;

/// Exact rational scalar; every coefficient in the crate reduces to these.
pub type Rational = num_rational::BigRational;

pub use error::CalcError;
pub use exterior::{contract, Form, MultiIndex, MultiVector};
pub use hodge::Metric;
pub use msymp::{HamiltonianPair, MsympStructure, SolveResult, SolveStatus};
pub use polyring::Polynomial;

use num_bigint::BigInt;

/// Shorthand for a small rational constant.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}
