//! Metric Lie algebras given by structure constants and an inner product,
//! together with the structural linear algebra built on them: brackets,
//! adjoint maps, lower central and derived series, ideals, the derivation
//! algebra and orthonormal re-presentation.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, LinearMap, Subspace};
use crate::{Error, Result, Tolerances};

/// A finite-dimensional real Lie algebra with an inner product.
///
/// `c[(i * n + j) * n + k]` holds the coefficient of `e_k` in `[e_i, e_j]`;
/// `gram[(i, j)] = ⟨e_i, e_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricLieAlgebra {
    name: String,
    dim: usize,
    c: Vec<f64>,
    gram: DMatrix<f64>,
    labels: Option<Vec<String>>,
}

impl MetricLieAlgebra {
    /// Builds an algebra from a dense `n³` array of structure constants.
    /// Only shapes and finiteness are checked here; see [`validate`].
    pub fn new(name: impl Into<String>, dim: usize, c: Vec<f64>, gram: DMatrix<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if c.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                got: c.len(),
            });
        }
        if gram.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: gram.nrows(),
            });
        }
        if c.iter().chain(gram.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite entry".into()));
        }
        Ok(Self {
            name: name.into(),
            dim,
            c,
            gram,
            labels: None,
        })
    }

    /// Builds an algebra with identity gram from a bracket table
    /// `(i, j, [(k, c_ijk), ...])`, 0-based; `[e_j, e_i]` is filled in by antisymmetry.
    pub fn from_brackets(name: impl Into<String>, dim: usize, brackets: &[(usize, usize, &[(usize, f64)])]) -> Self {
        let mut c = vec![0.0; dim * dim * dim];
        for &(i, j, coeffs) in brackets {
            for &(k, v) in coeffs {
                c[(i * dim + j) * dim + k] += v;
                c[(j * dim + i) * dim + k] -= v;
            }
        }
        Self::new(name, dim, c, DMatrix::identity(dim, dim)).expect("bracket table within bounds")
    }

    /// Abelian `ℝⁿ` with the standard inner product.
    pub fn abelian(dim: usize) -> Self {
        Self::from_brackets(format!("abelian_{dim}"), dim, &[])
    }

    pub fn with_gram(mut self, gram: DMatrix<f64>) -> Result<Self> {
        if gram.shape() != (self.dim, self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: gram.nrows(),
            });
        }
        self.gram = gram;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: l.len(),
                });
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure_constants(&self) -> &[f64] {
        &self.c
    }

    pub fn max_abs_constant(&self) -> f64 {
        self.c.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_abelian(&self) -> bool {
        self.max_abs_constant() == 0.0
    }

    /// True when the gram matrix is exactly the identity.
    pub fn has_identity_gram(&self) -> bool {
        self.gram == DMatrix::identity(self.dim, self.dim)
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> DVector<f64> {
        let n = self.dim;
        DVector::from_iterator(n, (0..n).map(|k| self.c(i, j, k)))
    }

    /// Rejects the algebra unless [`validate`] passes.
    pub fn require_valid(&self, tol: &Tolerances) -> Result<()> {
        let report = validate(self, tol);
        if report.valid {
            Ok(())
        } else {
            Err(Error::InvalidAlgebra(Box::new(report)))
        }
    }

    /// Reorders the basis so that `e_index` becomes the last vector.
    pub fn move_to_last(&self, index: usize) -> Self {
        let n = self.dim;
        let order: Vec<usize> = (0..n).filter(|&i| i != index).chain(std::iter::once(index)).collect();
        self.permuted(&order)
    }

    /// New algebra whose `a`-th basis vector is the old `e_{order[a]}`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let n = self.dim;
        let mut c = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    c[(a * n + b) * n + k] = self.c(order[a], order[b], order[k]);
                }
            }
        }
        let gram = DMatrix::from_fn(n, n, |a, b| self.gram[(order[a], order[b])]);
        let labels = self
            .labels
            .as_ref()
            .map(|l| order.iter().map(|&i| l[i].clone()).collect());
        Self {
            name: self.name.clone(),
            dim: n,
            c,
            gram,
            labels,
        }
    }
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// `max |c_ijk + c_jik|`, unscaled.
    pub antisymmetry_defect: f64,
    /// Largest cyclic-sum component with constants scaled to `max|c| = 1`.
    pub jacobi_residual: f64,
    pub gram_symmetry_defect: f64,
    pub min_gram_eigenvalue: f64,
    pub valid: bool,
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "antisymmetry defect {:.3e}, Jacobi residual {:.3e}, gram symmetry defect {:.3e}, min gram eigenvalue {:.6e}",
            self.antisymmetry_defect, self.jacobi_residual, self.gram_symmetry_defect, self.min_gram_eigenvalue
        )
    }
}

pub fn validate(alg: &MetricLieAlgebra, tol: &Tolerances) -> ValidationReport {
    let n = alg.dim();
    let mut antisym: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                antisym = antisym.max((alg.c(i, j, k) + alg.c(j, i, k)).abs());
            }
        }
    }

    let cmax = alg.max_abs_constant();
    let mut jacobi: f64 = 0.0;
    if cmax > 0.0 {
        let s = 1.0 / cmax;
        let c = |i, j, k| alg.c(i, j, k) * s;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut sum = 0.0;
                        for m in 0..n {
                            sum += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) + c(k, i, m) * c(m, j, l);
                        }
                        jacobi = jacobi.max(sum.abs());
                    }
                }
            }
        }
    }

    let g = alg.gram();
    let gram_sym = (g - g.transpose()).amax();
    let eig = SymmetricEigen::new((g + g.transpose()) * 0.5).eigenvalues;
    let min_eig = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let max_eig = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let antisym_ok = antisym <= tol.jacobi * cmax.max(1.0);
    let jacobi_ok = jacobi <= tol.jacobi;
    let gram_ok = gram_sym <= 1e-12 * g.amax().max(1.0) && min_eig > tol.spd * max_eig.max(0.0) && min_eig > 0.0;

    ValidationReport {
        antisymmetry_defect: antisym,
        jacobi_residual: jacobi,
        gram_symmetry_defect: gram_sym,
        min_gram_eigenvalue: min_eig,
        valid: antisym_ok && jacobi_ok && gram_ok,
    }
}

fn check_len(alg: &MetricLieAlgebra, v: &DVector<f64>) -> Result<()> {
    if v.len() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: v.len(),
        });
    }
    Ok(())
}

/// `[X, Y]` through the structure constants.
pub fn bracket(alg: &MetricLieAlgebra, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    check_len(alg, x)?;
    check_len(alg, y)?;
    Ok(bracket_unchecked(alg, x, y))
}

pub(crate) fn bracket_unchecked(alg: &MetricLieAlgebra, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let n = alg.dim();
    let mut out = DVector::zeros(n);
    for i in 0..n {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            let w = x[i] * y[j];
            if w == 0.0 {
                continue;
            }
            for k in 0..n {
                out[k] += w * alg.c(i, j, k);
            }
        }
    }
    out
}

/// `ad_X`, whose column `j` is `[X, e_j]`.
pub fn ad(alg: &MetricLieAlgebra, x: &DVector<f64>) -> Result<LinearMap> {
    check_len(alg, x)?;
    let n = alg.dim();
    let m = DMatrix::from_fn(n, n, |k, j| (0..n).map(|i| x[i] * alg.c(i, j, k)).sum());
    Ok(LinearMap::new(m))
}

/// `ad_{e_i}`.
pub fn ad_basis(alg: &MetricLieAlgebra, i: usize) -> LinearMap {
    let n = alg.dim();
    LinearMap::new(DMatrix::from_fn(n, n, |k, j| alg.c(i, j, k)))
}

fn bracket_span(alg: &MetricLieAlgebra, left: &[DVector<f64>], right: &[DVector<f64>], tol: &Tolerances) -> Subspace {
    let mut vs = Vec::with_capacity(left.len() * right.len());
    for x in left {
        for y in right {
            vs.push(bracket_unchecked(alg, x, y));
        }
    }
    Subspace::span(alg.dim(), &vs, tol.rank, alg.max_abs_constant())
}

fn series(alg: &MetricLieAlgebra, tol: &Tolerances, derived: bool) -> Result<Vec<Subspace>> {
    alg.require_valid(tol)?;
    let n = alg.dim();
    let whole: Vec<DVector<f64>> = (0..n).map(|i| linalg::unit(n, i)).collect();
    let mut terms = vec![Subspace::full(n)];
    loop {
        let last = terms.last().expect("non-empty");
        if last.dim() == 0 {
            break;
        }
        let cur = last.basis_vectors();
        let next = if derived {
            bracket_span(alg, &cur, &cur, tol)
        } else {
            bracket_span(alg, &whole, &cur, tol)
        };
        if next.dim() == last.dim() {
            break;
        }
        terms.push(next);
    }
    Ok(terms)
}

/// `𝔤 ⊃ [𝔤,𝔤] ⊃ [𝔤,[𝔤,𝔤]] ⊃ …`, reported until it reaches zero or stabilizes.
pub fn lower_central_series(alg: &MetricLieAlgebra, tol: &Tolerances) -> Result<Vec<Subspace>> {
    series(alg, tol, false)
}

/// `𝔤 ⊃ [𝔤,𝔤] ⊃ [𝔤¹,𝔤¹] ⊃ …`, reported until it reaches zero or stabilizes.
pub fn derived_series(alg: &MetricLieAlgebra, tol: &Tolerances) -> Result<Vec<Subspace>> {
    series(alg, tol, true)
}

pub fn is_nilpotent(alg: &MetricLieAlgebra, tol: &Tolerances) -> Result<bool> {
    Ok(lower_central_series(alg, tol)?.last().is_some_and(|s| s.dim() == 0))
}

pub fn is_solvable(alg: &MetricLieAlgebra, tol: &Tolerances) -> Result<bool> {
    Ok(derived_series(alg, tol)?.last().is_some_and(|s| s.dim() == 0))
}

/// Coefficient matrix of the linear system `D[e_i,e_j] − [De_i,e_j] − [e_i,De_j] = 0`
/// (rows indexed by `i < j` and output component, columns by `D_{lk}` at `l·n + k`).
fn derivation_system(alg: &MetricLieAlgebra) -> DMatrix<f64> {
    let n = alg.dim();
    let pairs = n * (n.saturating_sub(1)) / 2;
    let mut m = DMatrix::zeros(pairs * n, n * n);
    let mut row = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            for l in 0..n {
                for k in 0..n {
                    m[(row, l * n + k)] += alg.c(i, j, k);
                    m[(row, k * n + i)] -= alg.c(k, j, l);
                    m[(row, k * n + j)] -= alg.c(i, k, l);
                }
                row += 1;
            }
        }
    }
    m
}

fn map_to_vec(d: &LinearMap) -> DVector<f64> {
    let n = d.dim();
    DVector::from_fn(n * n, |idx, _| d.matrix()[(idx / n, idx % n)])
}

fn vec_to_map(v: &DVector<f64>, n: usize) -> LinearMap {
    LinearMap::new(DMatrix::from_fn(n, n, |l, k| v[l * n + k]))
}

/// Frobenius-orthonormal basis of `Der(𝔤)`.
pub fn derivation_space(alg: &MetricLieAlgebra, tol: &Tolerances) -> Result<Vec<LinearMap>> {
    alg.require_valid(tol)?;
    let n = alg.dim();
    let system = derivation_system(alg);
    Ok(linalg::null_space(&system, tol.rank, 0.0)
        .iter()
        .map(|v| vec_to_map(v, n))
        .collect())
}

/// Relative size of `D[X,Y] − [DX,Y] − [X,DY]` over all basis pairs:
/// `‖residual‖ / (max|c| · ‖D‖_F)`, zero for abelian algebras or `D = 0`.
pub fn derivation_defect(alg: &MetricLieAlgebra, d: &LinearMap) -> Result<f64> {
    if d.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: d.dim(),
        });
    }
    let scale = alg.max_abs_constant() * d.frobenius_norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let r = derivation_system(alg) * map_to_vec(d);
    Ok(r.norm() / scale)
}

/// Whether `[𝔤, sub] ⊂ sub`.
pub fn is_ideal(alg: &MetricLieAlgebra, sub: &Subspace, tol: &Tolerances) -> Result<bool> {
    if sub.ambient_dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: sub.ambient_dim(),
        });
    }
    let n = alg.dim();
    let scale = alg.max_abs_constant().max(f64::MIN_POSITIVE);
    for v in sub.basis_vectors() {
        for i in 0..n {
            let w = bracket_unchecked(alg, &linalg::unit(n, i), &v);
            if sub.distance(&w) > tol.rank * scale.max(w.norm()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Isomorphic presentation with identity gram. The returned map `P` has as
/// columns the new basis vectors in old coordinates, `P = L⁻ᵀ` for the
/// Cholesky factor `G = L Lᵀ`, so that new structure constants are
/// `c'_abc = Σ P_ia P_jb c_ijk (P⁻¹)_ck`.
pub fn orthonormalize(alg: &MetricLieAlgebra) -> Result<(MetricLieAlgebra, LinearMap)> {
    let f = Frame::new(alg)?;
    Ok((f.alg, LinearMap::new(f.p)))
}

/// An algebra re-expressed in a gram-orthonormal basis, with the change of
/// basis needed to carry maps, forms and vectors back and forth.
#[derive(Debug, Clone)]
pub struct Frame {
    pub alg: MetricLieAlgebra,
    /// Columns: orthonormal basis vectors in user coordinates.
    pub p: DMatrix<f64>,
    pub p_inv: DMatrix<f64>,
}

impl Frame {
    pub fn new(alg: &MetricLieAlgebra) -> Result<Self> {
        let n = alg.dim();
        if alg.has_identity_gram() {
            return Ok(Self {
                alg: alg.clone(),
                p: DMatrix::identity(n, n),
                p_inv: DMatrix::identity(n, n),
            });
        }
        let g = (alg.gram() + alg.gram().transpose()) * 0.5;
        let chol = g.cholesky().ok_or(Error::NotPositiveDefinite)?;
        let l = chol.l();
        // P⁻¹ = Lᵀ.
        let p_inv = l.transpose();
        let p = p_inv.clone().try_inverse().ok_or(Error::NotPositiveDefinite)?;

        // Stage the tensor transform one index at a time.
        let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
        let mut t1 = vec![0.0; n * n * n];
        for a in 0..n {
            for j in 0..n {
                for k in 0..n {
                    t1[idx(a, j, k)] = (0..n).map(|i| p[(i, a)] * alg.c(i, j, k)).sum();
                }
            }
        }
        let mut t2 = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    t2[idx(a, b, k)] = (0..n).map(|j| p[(j, b)] * t1[idx(a, j, k)]).sum();
                }
            }
        }
        // Fill a < b only and mirror, so antisymmetry survives rounding exactly.
        let mut c = vec![0.0; n * n * n];
        for a in 0..n {
            for b in (a + 1)..n {
                for cc in 0..n {
                    let v: f64 = (0..n).map(|k| p_inv[(cc, k)] * 0.5 * (t2[idx(a, b, k)] - t2[idx(b, a, k)])).sum();
                    c[idx(a, b, cc)] = v;
                    c[idx(b, a, cc)] = -v;
                }
            }
        }
        let mut out = MetricLieAlgebra::new(alg.name(), n, c, DMatrix::identity(n, n))?;
        out.labels = alg.labels.clone();
        Ok(Self { alg: out, p, p_inv })
    }

    /// A user-basis endomorphism written in the orthonormal frame.
    pub fn map_to_frame(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        &self.p_inv * m * &self.p
    }

    pub fn map_to_user(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        &self.p * m * &self.p_inv
    }

    /// A bilinear form given in frame coordinates, re-expressed on the user basis.
    pub fn form_to_user(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        self.p_inv.transpose() * b * &self.p_inv
    }

    pub fn vector_to_frame(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.p_inv * v
    }

    pub fn covector_to_user(&self, w: &DVector<f64>) -> DVector<f64> {
        self.p_inv.transpose() * w
    }
}

/// The subalgebra spanned by `sub`, presented in a gram-orthonormal basis of
/// `sub` (identity gram); fails when `sub` is not bracket-closed.
pub fn subalgebra(alg: &MetricLieAlgebra, sub: &Subspace, name: &str, tol: &Tolerances) -> Result<MetricLieAlgebra> {
    let g = alg.gram();
    // Gram–Schmidt in the metric.
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in sub.basis_vectors() {
        let mut w = v.clone();
        for b in &basis {
            let coef = (b.transpose() * g * &w)[0];
            w -= b * coef;
        }
        let norm = (w.transpose() * g * &w)[0].sqrt();
        if norm > 1e-12 {
            basis.push(w / norm);
        }
    }
    let r = basis.len();
    if r == 0 {
        return Err(Error::InvalidParameter("empty subspace".into()));
    }
    let mut c = vec![0.0; r * r * r];
    let mut residual: f64 = 0.0;
    for a in 0..r {
        for b in 0..r {
            let w = bracket_unchecked(alg, &basis[a], &basis[b]);
            let mut proj = DVector::zeros(alg.dim());
            for (k, bk) in basis.iter().enumerate() {
                let coef = (bk.transpose() * g * &w)[0];
                c[(a * r + b) * r + k] = coef;
                proj += bk * coef;
            }
            residual = residual.max((w - proj).norm());
        }
    }
    if residual > tol.rank * alg.max_abs_constant().max(1.0) * 10.0 {
        return Err(Error::NotASubalgebra { residual });
    }
    MetricLieAlgebra::new(name, r, c, DMatrix::identity(r, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn heisenberg3() -> MetricLieAlgebra {
        MetricLieAlgebra::from_brackets("heisenberg3", 3, &[(0, 1, &[(2, 1.0)])])
    }

    fn solv2() -> MetricLieAlgebra {
        MetricLieAlgebra::from_brackets("solv2", 2, &[(0, 1, &[(1, 1.0)])])
    }

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    #[test]
    fn validate_examples() {
        let r = validate(&MetricLieAlgebra::abelian(3), &tol());
        assert!(r.valid);
        assert_eq!(r.jacobi_residual, 0.0);

        assert!(validate(&heisenberg3(), &tol()).valid);

        let mut c = vec![0.0; 27];
        c[3 + 2] = 1.0; // [e1, e2] = e3 only, [e2, e1] left at 0
        let broken = MetricLieAlgebra::new("broken", 3, c, DMatrix::identity(3, 3)).unwrap();
        let r = validate(&broken, &tol());
        assert!(!r.valid);
        assert_eq!(r.antisymmetry_defect, 1.0);
    }

    #[test]
    fn jacobi_violation_is_detected() {
        // [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e1 fails Jacobi.
        let a = MetricLieAlgebra::from_brackets(
            "bad",
            3,
            &[(0, 1, &[(2, 1.0)]), (1, 2, &[(0, 1.0)]), (2, 0, &[(0, 1.0)])],
        );
        let r = validate(&a, &tol());
        assert!(r.jacobi_residual > 0.5);
        assert!(!r.valid);
    }

    #[test]
    fn indefinite_gram_is_invalid() {
        let a = MetricLieAlgebra::abelian(2)
            .with_gram(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]))
            .unwrap();
        assert!(!validate(&a, &tol()).valid);
        assert!(matches!(orthonormalize(&a), Err(Error::NotPositiveDefinite)));
    }

    #[test]
    fn bracket_examples() {
        let h = heisenberg3();
        assert_eq!(bracket(&h, &v(&[1., 0., 0.]), &v(&[0., 1., 0.])).unwrap(), v(&[0., 0., 1.]));
        let x = v(&[0.3, -1.2, 2.0]);
        assert_eq!(bracket(&h, &x, &x).unwrap().norm(), 0.0);
        assert_eq!(bracket(&h, &v(&[0., 0., 1.]), &v(&[1., 0., 0.])).unwrap().norm(), 0.0);
        assert!(matches!(
            bracket(&h, &v(&[1., 0.]), &x),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ad_examples() {
        let a = ad(&heisenberg3(), &v(&[1., 0., 0.])).unwrap();
        let mut expected = DMatrix::zeros(3, 3);
        expected[(2, 1)] = 1.0;
        assert_eq!(*a.matrix(), expected);

        let z = ad(&MetricLieAlgebra::abelian(3), &v(&[1., 2., 3.])).unwrap();
        assert_eq!(z.frobenius_norm(), 0.0);

        let s = ad(&solv2(), &v(&[1., 0.])).unwrap();
        assert_eq!(*s.matrix(), DMatrix::from_diagonal(&v(&[0., 1.])));
    }

    fn dims(s: &[Subspace]) -> Vec<usize> {
        s.iter().map(Subspace::dim).collect()
    }

    #[test]
    fn series_examples() {
        let h = heisenberg3();
        assert_eq!(dims(&lower_central_series(&h, &tol()).unwrap()), vec![3, 1, 0]);
        assert!(is_nilpotent(&h, &tol()).unwrap());

        let s = solv2();
        assert_eq!(dims(&derived_series(&s, &tol()).unwrap()), vec![2, 1, 0]);
        assert_eq!(dims(&lower_central_series(&s, &tol()).unwrap()), vec![2, 1]);
        assert!(is_solvable(&s, &tol()).unwrap());
        assert!(!is_nilpotent(&s, &tol()).unwrap());

        let a = MetricLieAlgebra::abelian(4);
        assert_eq!(dims(&lower_central_series(&a, &tol()).unwrap()), vec![4, 0]);
        assert!(is_nilpotent(&a, &tol()).unwrap() && is_solvable(&a, &tol()).unwrap());
    }

    #[test]
    fn derivation_space_dimensions() {
        assert_eq!(derivation_space(&MetricLieAlgebra::abelian(2), &tol()).unwrap().len(), 4);
        assert_eq!(derivation_space(&heisenberg3(), &tol()).unwrap().len(), 6);
        let der = derivation_space(&solv2(), &tol()).unwrap();
        assert_eq!(der.len(), 2);
        // Every solv2 derivation has the shape [[0,0],[b,d]].
        for d in &der {
            assert!(d.matrix()[(0, 0)].abs() < 1e-12 && d.matrix()[(0, 1)].abs() < 1e-12);
        }
    }

    #[test]
    fn derivation_basis_is_frobenius_orthonormal_and_exact() {
        let h = heisenberg3();
        let der = derivation_space(&h, &tol()).unwrap();
        for (a, da) in der.iter().enumerate() {
            assert!(derivation_defect(&h, da).unwrap() <= 10.0 * tol().rank);
            for (b, db) in der.iter().enumerate() {
                let ip = da.matrix().dot(db.matrix());
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn soliton_derivation_of_heisenberg_is_a_derivation() {
        let d = LinearMap::diagonal(&[1.0, 1.0, 2.0]);
        assert!(derivation_defect(&heisenberg3(), &d).unwrap() < 1e-15);
        let not = LinearMap::diagonal(&[1.0, 1.0, 1.0]);
        assert!(derivation_defect(&heisenberg3(), &not).unwrap() > 0.1);
    }

    #[test]
    fn ideal_examples() {
        let t = tol();
        assert!(is_ideal(&heisenberg3(), &Subspace::coordinate(3, &[2]), &t).unwrap());
        assert!(is_ideal(&solv2(), &Subspace::coordinate(2, &[1]), &t).unwrap());
        assert!(!is_ideal(&solv2(), &Subspace::coordinate(2, &[0]), &t).unwrap());
    }

    #[test]
    fn orthonormalize_examples() {
        let (a, p) = orthonormalize(&heisenberg3()).unwrap();
        assert_eq!(a, heisenberg3());
        assert_eq!(*p.matrix(), DMatrix::identity(3, 3));

        let ab = MetricLieAlgebra::abelian(2)
            .with_gram(DMatrix::from_diagonal(&v(&[4.0, 1.0])))
            .unwrap();
        let (a, p) = orthonormalize(&ab).unwrap();
        assert!(a.is_abelian());
        assert!((p.matrix() - DMatrix::from_diagonal(&v(&[0.5, 1.0]))).norm() < 1e-15);

        // ⟨e3,e3⟩ = 4: the unit vector is e3/2, so [e1,e2] = e3 = 2·(e3/2).
        let hg = heisenberg3()
            .with_gram(DMatrix::from_diagonal(&v(&[1.0, 1.0, 4.0])))
            .unwrap();
        let (a, _) = orthonormalize(&hg).unwrap();
        assert!((a.c(0, 1, 2) - 2.0).abs() < 1e-15);
        assert!((a.c(1, 0, 2) + 2.0).abs() < 1e-15);
    }

    #[test]
    fn orthonormalize_is_idempotent() {
        let g = DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 0.7]);
        let a = heisenberg3().with_gram(g).unwrap();
        let (once, _) = orthonormalize(&a).unwrap();
        let (twice, p2) = orthonormalize(&once).unwrap();
        assert_eq!(*once.gram(), DMatrix::identity(3, 3));
        assert_eq!(*p2.matrix(), DMatrix::identity(3, 3));
        for (x, y) in once.structure_constants().iter().zip(twice.structure_constants()) {
            assert!((x - y).abs() <= 1e-12);
        }
        assert!(validate(&once, &tol()).valid);
    }

    #[test]
    fn subalgebra_of_center_is_abelian() {
        let s = subalgebra(&heisenberg3(), &Subspace::coordinate(3, &[2]), "center", &tol()).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.is_abelian());
        let err = subalgebra(&heisenberg3(), &Subspace::coordinate(3, &[0, 1]), "x", &tol());
        assert!(matches!(err, Err(Error::NotASubalgebra { .. })));
    }
}
