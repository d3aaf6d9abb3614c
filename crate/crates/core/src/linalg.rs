//! Dense linear-algebra plumbing: endomorphisms, subspaces, SVD-based rank
//! decisions and minimum-norm least squares.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An endomorphism of an `n`-dimensional algebra; column `j` is the image of `e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap(DMatrix<f64>);

impl LinearMap {
    pub fn new(matrix: DMatrix<f64>) -> Self {
        assert!(matrix.is_square(), "linear maps are square");
        Self(matrix)
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    /// Builds a map from row-major entries; `rows[i][j]` is the `e_i` component of `L e_j`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.0 * v
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn symmetric_part(&self) -> Self {
        Self((&self.0 + self.0.transpose()) * 0.5)
    }

    pub fn antisymmetric_part(&self) -> Self {
        Self((&self.0 - self.0.transpose()) * 0.5)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        Self(commutator(&self.0, &other.0))
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * s)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        matrix_rows(&self.0)
    }
}

impl From<DMatrix<f64>> for LinearMap {
    fn from(m: DMatrix<f64>) -> Self {
        Self::new(m)
    }
}

impl Serialize for LinearMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("linear map must be a square array"));
        }
        Ok(Self::from_rows(&rows))
    }
}

pub fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn matrix_from_rows(rows: &[Vec<f64>], ncols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j])
}

/// Serde adapter writing a `DMatrix` as an array of rows.
pub mod serde_rows {
    use super::*;

    pub fn serialize<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
        matrix_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<f64>, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        Ok(matrix_from_rows(&rows, ncols))
    }
}

/// Singular values and right singular vectors of `m`, padding with zero rows
/// so that the full right basis (`ncols` vectors) is always available.
fn full_right_svd(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let (r, c) = m.shape();
    let padded = if r < c {
        let mut p = DMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    (svd.singular_values.iter().copied().collect(), v_t)
}

/// Orthonormal basis of the null space of `m`: right singular vectors whose
/// singular value is at most `rel_tol · max(σ_max, floor)`.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64, floor: f64) -> Vec<DVector<f64>> {
    let c = m.ncols();
    if c == 0 {
        return Vec::new();
    }
    if m.nrows() == 0 {
        return (0..c).map(|i| unit(c, i)).collect();
    }
    let (sv, v_t) = full_right_svd(m);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let cutoff = rel_tol * smax.max(floor);
    let mut out: Vec<(usize, DVector<f64>)> = sv
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(i, _)| (i, v_t.row(i).transpose()))
        .collect();
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, v)| canonical_sign(v)).collect()
}

/// Flips `v` so that its largest-magnitude entry is positive.
pub fn canonical_sign(mut v: DVector<f64>) -> DVector<f64> {
    if let Some((idx, _)) = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
    {
        if v[idx] < 0.0 {
            v.neg_mut();
        }
    }
    v
}

pub fn unit(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

/// Minimum-norm least-squares solution of `a x ≈ b`, discarding singular
/// values below `rel_tol · σ_max`.
pub fn lstsq_min_norm(a: &DMatrix<f64>, b: &DVector<f64>, rel_tol: f64) -> DVector<f64> {
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut x = DVector::zeros(a.ncols());
    if smax == 0.0 {
        return x;
    }
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > rel_tol * smax {
            let coef = u.column(i).dot(b) / s;
            x += v_t.row(i).transpose() * coef;
        }
    }
    x
}

/// A linear subspace of `ℝⁿ`, stored as a Euclidean-orthonormal spanning set.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: DMatrix<f64>,
}

impl Subspace {
    /// Span of `vectors`, keeping left singular directions with
    /// `σ > rel_tol · max(σ_max, floor)`.
    pub fn span(ambient: usize, vectors: &[DVector<f64>], rel_tol: f64, floor: f64) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = DMatrix::from_columns(vectors);
        let svd = m.svd(true, false);
        let u = svd.u.expect("u requested");
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let cutoff = rel_tol * smax.max(floor);
        let cols: Vec<DVector<f64>> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > cutoff && s > 0.0)
            .map(|(i, _)| u.column(i).into_owned())
            .collect();
        Self::from_orthonormal(ambient, cols)
    }

    fn from_orthonormal(ambient: usize, cols: Vec<DVector<f64>>) -> Self {
        let basis = if cols.is_empty() {
            DMatrix::zeros(ambient, 0)
        } else {
            DMatrix::from_columns(&cols)
        };
        Self { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: DMatrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: DMatrix::identity(ambient, ambient),
        }
    }

    /// Span of the coordinate vectors `e_i`, `i ∈ indices` (0-based).
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let cols: Vec<DVector<f64>> = indices.iter().map(|&i| unit(ambient, i)).collect();
        Self::span(ambient, &cols, 1e-12, 1.0)
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<DVector<f64>> {
        (0..self.dim()).map(|i| self.basis.column(i).into_owned()).collect()
    }

    /// Euclidean distance from `v` to the subspace.
    pub fn distance(&self, v: &DVector<f64>) -> f64 {
        if self.dim() == 0 {
            return v.norm();
        }
        let proj = &self.basis * (self.basis.transpose() * v);
        (v - proj).norm()
    }

    pub fn contains(&self, v: &DVector<f64>, tol: f64) -> bool {
        self.distance(v) <= tol * v.norm().max(1.0)
    }

    pub fn is_within(&self, other: &Subspace, tol: f64) -> bool {
        self.basis_vectors().iter().all(|v| other.contains(v, tol))
    }
}
