//! Confluent second-order supersymmetric (degenerate double-Darboux)
//! transformations of one-dimensional Schrödinger Hamiltonians.
//!
//! Given a Hamiltonian `H = -d²/dx² + V(x)` and a real solution `u` of
//! `-u'' + V u = ε u`, the key function
//!
//! ```text
//! w(x) = w₀ - ∫_{x₀}^{x} u²(y) dy
//! ```
//!
//! produces the partner potential `Ṽ = V - 2 (w'/w)'`, which is regular
//! whenever `w` has no zeros. Depending on the seed and on the asymptotic
//! offset `ν` of `w`, the partner spectrum is the original one, the original
//! one with the level `ε` removed, or the original one with `ε` added.
//!
//! Modules:
//! - [`numgrid`]: uniform grids, Simpson quadrature, finite differences.
//! - [`specfun`]: Gamma, Hermite, ₁F₁ and ₂F₂.
//! - [`potentials`]: free particle, Pöschl-Teller, oscillator and sampled
//!   potentials together with their bound states and decaying seeds.
//! - [`confluent`]: the transformation itself.
//! - [`spectral`]: an independent finite-difference eigensolver.

pub mod confluent;
pub mod error;
pub mod numgrid;
pub mod potentials;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
