//! Metric Lie algebras, their left-invariant curvature, Ricci soliton
//! certificates and the one-dimensional Einstein / warped-product-Einstein
//! extensions built from them.
//!
//! Everything is dense `f64` linear algebra over a fixed basis `e_1..e_n`.
//! Structure constants follow `[e_i, e_j] = Σ_k c[i][j][k] e_k` and curvature
//! follows `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z`,
//! `Ric(Y,Z) = Σ_i ⟨R(e_i,Y)Z, e_i⟩`.

pub mod cli_io;
pub mod curvature;
pub mod error;
pub mod extension;
pub mod lie_core;
pub mod linalg;
pub mod soliton;
pub mod verify;

pub use error::{Error, Result};
pub use extension::{ExtensionMode, ExtensionResult};
pub use lie_core::{MetricLieAlgebra, ValidationReport};
pub use linalg::{LinearMap, Subspace};
pub use soliton::{SolitonCertificate, SolitonKind};
pub use verify::{Check, VerificationReport};

use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value cutoff for rank decisions.
    pub rank: f64,
    /// Relative least-squares residual accepted by soliton fits.
    pub fit: f64,
    /// Normalized residual accepted by verification checks.
    pub verify: f64,
    /// Jacobi residual after scaling the structure constants to `max|c| = 1`.
    pub jacobi: f64,
    /// Smallest admissible gram eigenvalue, relative to the largest one.
    pub spd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-9,
            fit: 1e-8,
            verify: 1e-8,
            jacobi: 1e-10,
            spd: 1e-12,
        }
    }
}
