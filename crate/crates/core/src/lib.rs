//! Exact closed forms for hyperbolic series and Berndt-type integrals of
//! order three, together with the arbitrary-precision numerics needed to
//! verify every closed form independently.
//!
//! The crate is organised bottom-up:
//!
//! - [`exact`] — arbitrary-precision rationals, dense univariate polynomials
//!   over Q, rational functions, and the Möbius substitution
//!   `p(x) -> (x-1)^d p(x/(x-1))`.
//! - [`series`] — the Maclaurin coefficient polynomial tables `p`, `g`, `q`,
//!   `R` of the Jacobi elliptic functions `sd`, `sn`, `sn²` and the
//!   sign-changed `sn²`, plus their structural identities.
//! - [`diffalg`] — a small differential algebra over Q(x) in the symbols
//!   `z, z', z'', z⁽³⁾, z⁽⁴⁾` with a `√(x(1-x))` prefactor; builds symbolic
//!   expressions for all hyperbolic-sum families at generic `x`.
//! - [`closedform`] — finite sums `Σ c·Γ(1/4)^a·π^{h/2}` and the theorem- and
//!   pipeline-route evaluations of every sum/integral family at `x = 1/2`.
//! - [`numerics`] — MPFR-backed oracle: AGM, Γ(1/4), elliptic data, ₂F₁,
//!   Jacobi theta quotients, tail-bounded series summation, and panelled
//!   Gauss–Legendre quadrature for the Berndt-type integrals.
//! - [`verify`] — the verification suite that cross-checks symbolic results
//!   against the numeric oracle and emits structured reports.

pub mod closedform;
pub mod diffalg;
pub mod exact;
pub mod numerics;
pub mod series;
pub mod verify;

pub use rug::{Integer, Rational};
