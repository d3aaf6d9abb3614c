//! Left-invariant curvature computed directly from structure constants:
//! Levi-Civita connection via the Koszul formula, Riemann and Ricci tensors,
//! divergence of symmetric endomorphisms, `∇_ξ Ric` and shape operators.
//!
//! Work happens in a gram-orthonormal frame; results meant for callers are
//! converted back to the user basis.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::lie_core::{self, Frame, MetricLieAlgebra};
use crate::linalg::{self, LinearMap, Subspace};
use crate::{Error, Result, Tolerances};

/// Christoffel symbols `gamma[i][j][k] = ⟨∇_{e_i} e_j, e_k⟩` in an orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    n: usize,
    gamma: Vec<f64>,
}

impl Connection {
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[(i * self.n + j) * self.n + k]
    }

    /// `∇_{e_i}` as a matrix: column `j` is `∇_{e_i} e_j`.
    pub fn operator(&self, i: usize) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |k, j| self.gamma(i, j, k))
    }

    /// `∇_X` for a frame vector `X`.
    pub fn operator_along(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            if x[i] != 0.0 {
                m += self.operator(i) * x[i];
            }
        }
        m
    }

    /// `∇_X Y` for frame vectors.
    pub fn covariant(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.operator_along(x) * y
    }

    /// `max |gamma[i][j][k] + gamma[i][k][j]|`.
    pub fn metric_defect(&self) -> f64 {
        let n = self.n;
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    d = d.max((self.gamma(i, j, k) + self.gamma(i, k, j)).abs());
                }
            }
        }
        d
    }

    /// `max |gamma[i][j][k] − gamma[j][i][k] − c[i][j][k]|` against the frame algebra.
    pub fn torsion_defect(&self, frame_alg: &MetricLieAlgebra) -> f64 {
        let n = self.n;
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    d = d.max((self.gamma(i, j, k) - self.gamma(j, i, k) - frame_alg.c(i, j, k)).abs());
                }
            }
        }
        d
    }
}

fn koszul(alg: &MetricLieAlgebra) -> Connection {
    let n = alg.dim();
    let mut gamma = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                gamma[(i * n + j) * n + k] = 0.5 * (alg.c(i, j, k) - alg.c(j, k, i) + alg.c(k, i, j));
            }
        }
    }
    Connection { n, gamma }
}

/// Levi-Civita connection of the left-invariant metric, expressed in the
/// orthonormal frame returned by [`lie_core::orthonormalize`] (the user basis
/// itself when the gram is the identity).
pub fn levi_civita(alg: &MetricLieAlgebra, tol: &Tolerances) -> Result<Connection> {
    alg.require_valid(tol)?;
    let frame = Frame::new(alg)?;
    Ok(koszul(&frame.alg))
}

/// The curvature operators `R(e_i, e_j)` of an orthonormal-frame algebra;
/// entry `[(i * n + j)]` is the matrix whose column `k` is `R(e_i,e_j)e_k`.
fn curvature_operators(alg: &MetricLieAlgebra, conn: &Connection) -> Vec<DMatrix<f64>> {
    let n = alg.dim();
    let ops: Vec<DMatrix<f64>> = (0..n).map(|i| conn.operator(i)).collect();
    let mut out = vec![DMatrix::zeros(n, n); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let mut r = &ops[i] * &ops[j] - &ops[j] * &ops[i];
            for (l, op) in ops.iter().enumerate() {
                let c = alg.c(i, j, l);
                if c != 0.0 {
                    r -= op * c;
                }
            }
            out[j * n + i] = -&r;
            out[i * n + j] = r;
        }
    }
    out
}

/// `riemann[i][j][k][l] = ⟨R(e_i,e_j)e_k, e_l⟩` in an orthonormal frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiemannTensor {
    pub dim: usize,
    pub values: Vec<f64>,
}

impl RiemannTensor {
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.dim;
        self.values[((i * n + j) * n + k) * n + l]
    }

    /// `⟨R(X,Y)Y,X⟩ / (|X|²|Y|² − ⟨X,Y⟩²)` for frame vectors.
    pub fn sectional(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let n = self.dim;
        let mut num = 0.0;
        for i in 0..n {
            for j in 0..n {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        num += w * y[k] * x[l] * self.get(i, j, k, l);
                    }
                }
            }
        }
        let area = x.norm_squared() * y.norm_squared() - x.dot(y).powi(2);
        num / area
    }

    /// Largest violation of `R_ijkl = −R_jikl`, `R_ijkl = −R_ijlk`, `R_ijkl = R_klij`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.dim;
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        d = d
                            .max((r + self.get(j, i, k, l)).abs())
                            .max((r + self.get(i, j, l, k)).abs())
                            .max((r - self.get(k, l, i, j)).abs());
                    }
                }
            }
        }
        d
    }

    /// Largest violation of `R_ijkl + R_jkil + R_kijl = 0`.
    pub fn bianchi_defect(&self) -> f64 {
        let n = self.dim;
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s = self.get(i, j, k, l) + self.get(j, k, i, l) + self.get(k, i, j, l);
                        d = d.max(s.abs());
                    }
                }
            }
        }
        d
    }

    /// `Ric[j][k] = Σ_i R[i][j][k][i]`.
    pub fn ricci(&self) -> DMatrix<f64> {
        let n = self.dim;
        DMatrix::from_fn(n, n, |j, k| (0..n).map(|i| self.get(i, j, k, i)).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

fn riemann_in_frame(alg: &MetricLieAlgebra, conn: &Connection) -> RiemannTensor {
    let n = alg.dim();
    let ops = curvature_operators(alg, conn);
    let mut values = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            let r = &ops[i * n + j];
            for k in 0..n {
                for l in 0..n {
                    values[((i * n + j) * n + k) * n + l] = r[(l, k)];
                }
            }
        }
    }
    RiemannTensor { dim: n, values }
}

/// Frame Ricci tensor without materializing the full Riemann tensor.
fn ricci_in_frame(alg: &MetricLieAlgebra, conn: &Connection) -> DMatrix<f64> {
    let n = alg.dim();
    let ops = curvature_operators(alg, conn);
    let mut ric = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let r = &ops[i * n + j];
            for k in 0..n {
                ric[(j, k)] += r[(i, k)];
            }
        }
    }
    (&ric + ric.transpose()) * 0.5
}

/// Riemann tensor in the orthonormal frame of [`levi_civita`].
pub fn riemann(alg: &MetricLieAlgebra, tol: &Tolerances) -> Result<RiemannTensor> {
    alg.require_valid(tol)?;
    let frame = Frame::new(alg)?;
    let conn = koszul(&frame.alg);
    Ok(riemann_in_frame(&frame.alg, &conn))
}

/// Sectional curvature of the plane spanned by user-basis vectors `x`, `y`.
pub fn sectional_curvature(alg: &MetricLieAlgebra, x: &DVector<f64>, y: &DVector<f64>, tol: &Tolerances) -> Result<f64> {
    let frame = Frame::new(alg)?;
    let r = riemann(alg, tol)?;
    Ok(r.sectional(&frame.vector_to_frame(x), &frame.vector_to_frame(y)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    /// `Ric(e_i, e_j)` on the user basis.
    #[serde(with = "linalg::serde_rows")]
    pub ricci_tensor: DMatrix<f64>,
    /// The Ricci operator `G⁻¹ Ric` on the user basis.
    pub ricci_operator: LinearMap,
    pub eigenvalues: Vec<f64>,
    pub scal: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub riemann: Option<RiemannTensor>,
}

fn report_from_frame(frame: &Frame, ric_frame: DMatrix<f64>, riemann: Option<RiemannTensor>) -> CurvatureReport {
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(ric_frame.clone()).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    CurvatureReport {
        ricci_tensor: frame.form_to_user(&ric_frame),
        ricci_operator: LinearMap::new(frame.map_to_user(&ric_frame)),
        eigenvalues,
        scal: ric_frame.trace(),
        riemann,
    }
}

pub fn ricci(alg: &MetricLieAlgebra, tol: &Tolerances) -> Result<CurvatureReport> {
    alg.require_valid(tol)?;
    let frame = Frame::new(alg)?;
    let conn = koszul(&frame.alg);
    let ric = ricci_in_frame(&frame.alg, &conn);
    Ok(report_from_frame(&frame, ric, None))
}

/// Like [`ricci`] but also returns the frame Riemann tensor.
pub fn ricci_with_riemann(alg: &MetricLieAlgebra, tol: &Tolerances) -> Result<CurvatureReport> {
    alg.require_valid(tol)?;
    let frame = Frame::new(alg)?;
    let conn = koszul(&frame.alg);
    let r = riemann_in_frame(&frame.alg, &conn);
    let ric = r.ricci();
    let ric = (&ric + ric.transpose()) * 0.5;
    Ok(report_from_frame(&frame, ric, Some(r)))
}

/// Frame Ricci operator of an identity-gram algebra; skips validation.
pub(crate) fn ricci_frame_unchecked(alg: &MetricLieAlgebra) -> DMatrix<f64> {
    ricci_in_frame(alg, &koszul(alg))
}

pub(crate) fn connection_unchecked(alg: &MetricLieAlgebra) -> Connection {
    koszul(alg)
}

/// `div S = Σ_i (∇_{e_i} S)(e_i)` for a frame-symmetric `S` given in frame coordinates.
pub(crate) fn divergence_in_frame(conn: &Connection, s: &DMatrix<f64>) -> DVector<f64> {
    let n = conn.dim();
    let mut out = DVector::zeros(n);
    for i in 0..n {
        let ni = conn.operator(i);
        let d = &ni * s - s * &ni;
        out += d.column(i);
    }
    out
}

/// Covector `X ↦ Σ_i ⟨(∇_{e_i}S)(e_i), X⟩` on the user basis, for `S` a
/// user-basis endomorphism self-adjoint with respect to the gram.
pub fn divergence(alg: &MetricLieAlgebra, s: &LinearMap, tol: &Tolerances) -> Result<DVector<f64>> {
    alg.require_valid(tol)?;
    if s.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: s.dim(),
        });
    }
    let frame = Frame::new(alg)?;
    let sf = frame.map_to_frame(s.matrix());
    let defect = (&sf - sf.transpose()).norm();
    if defect > tol.verify * sf.norm().max(1.0) {
        return Err(Error::NotSymmetric { defect });
    }
    let conn = koszul(&frame.alg);
    let div = divergence_in_frame(&conn, &((&sf + sf.transpose()) * 0.5));
    Ok(frame.covector_to_user(&div))
}

/// `∇_ξ Ric` as a bilinear form on the user basis:
/// `(∇_ξRic)(X,Y) = −Ric(∇_ξX, Y) − Ric(X, ∇_ξY)`.
pub fn covariant_ricci_along(alg: &MetricLieAlgebra, xi: &DVector<f64>, tol: &Tolerances) -> Result<DMatrix<f64>> {
    alg.require_valid(tol)?;
    if xi.len() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: xi.len(),
        });
    }
    let frame = Frame::new(alg)?;
    let conn = koszul(&frame.alg);
    let ric = ricci_in_frame(&frame.alg, &conn);
    let nabla = conn.operator_along(&frame.vector_to_frame(xi));
    let d = -(nabla.transpose() * &ric + &ric * nabla);
    Ok(frame.form_to_user(&d))
}

/// An algebra presented with a distinguished unit vector `ξ` moved to the last
/// index, orthonormalized so that `ξ` stays the last frame vector, and with
/// `ξ^⊥` checked to be an ideal.
#[derive(Debug, Clone)]
pub struct SplitFrame {
    pub frame: Frame,
    /// User index of ξ in the original presentation.
    pub xi_index: usize,
    /// Order used to permute the user basis (`ξ` last).
    pub order: Vec<usize>,
}

impl SplitFrame {
    pub fn new(alg: &MetricLieAlgebra, xi_index: usize, tol: &Tolerances) -> Result<Self> {
        let n = alg.dim();
        if xi_index >= n {
            return Err(Error::InvalidParameter(format!("xi index {} out of range for dimension {n}", xi_index + 1)));
        }
        if n < 2 {
            return Err(Error::InvalidParameter("extension presentations need dimension ≥ 2".into()));
        }
        alg.require_valid(tol)?;
        let g = alg.gram();
        if (g[(xi_index, xi_index)] - 1.0).abs() > tol.verify {
            return Err(Error::InvalidParameter(format!(
                "e_{} is not a unit vector (norm² {})",
                xi_index + 1,
                g[(xi_index, xi_index)]
            )));
        }
        let cross = (0..n).filter(|&a| a != xi_index).fold(0.0_f64, |m, a| m.max(g[(a, xi_index)].abs()));
        if cross > tol.verify {
            return Err(Error::InvalidParameter(format!(
                "e_{} is not orthogonal to the remaining basis vectors",
                xi_index + 1
            )));
        }
        let order: Vec<usize> = (0..n).filter(|&i| i != xi_index).chain(std::iter::once(xi_index)).collect();
        let permuted = alg.permuted(&order);
        let frame = Frame::new(&permuted)?;
        let h = Subspace::coordinate(n, &(0..n - 1).collect::<Vec<_>>());
        if !lie_core::is_ideal(&frame.alg, &h, tol)? {
            return Err(Error::NotAnIdeal(format!("the orthogonal complement of e_{} is not an ideal", xi_index + 1)));
        }
        Ok(Self { frame, xi_index, order })
    }

    pub fn dim(&self) -> usize {
        self.frame.alg.dim()
    }

    /// Dimension of `ξ^⊥`.
    pub fn base_dim(&self) -> usize {
        self.dim() - 1
    }

    pub fn xi(&self) -> usize {
        self.dim() - 1
    }

    /// The frame `P` restricted to `ξ^⊥` (block-diagonal because `ξ ⊥ 𝔥`).
    pub fn base_p(&self) -> DMatrix<f64> {
        let k = self.base_dim();
        self.frame.p.view((0, 0), (k, k)).into_owned()
    }

    pub fn base_p_inv(&self) -> DMatrix<f64> {
        let k = self.base_dim();
        self.frame.p_inv.view((0, 0), (k, k)).into_owned()
    }

    /// Frame matrix on `ξ^⊥` re-expressed on the user basis of `ξ^⊥`
    /// (original order with ξ removed).
    pub fn base_map_to_user(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        self.base_p() * m * self.base_p_inv()
    }
}

/// Frame shape operator `T_{ba} = ⟨∇_{e_a} ξ, e_b⟩` on `ξ^⊥` (ξ last).
pub(crate) fn shape_operator_in_frame(conn: &Connection) -> DMatrix<f64> {
    let n = conn.dim();
    let xi = n - 1;
    DMatrix::from_fn(n - 1, n - 1, |b, a| conn.gamma(a, xi, b))
}

/// `T(X) = (∇_X ξ)^⊤` on `ξ^⊥`, with `ξ = e_{xi_index}`; returned on the
/// user basis of `ξ^⊥` (remaining basis vectors in their original order).
pub fn shape_operator(ext: &MetricLieAlgebra, xi_index: usize, tol: &Tolerances) -> Result<LinearMap> {
    let split = SplitFrame::new(ext, xi_index, tol)?;
    let conn = koszul(&split.frame.alg);
    let t = shape_operator_in_frame(&conn);
    Ok(LinearMap::new(split.base_map_to_user(&t)))
}
