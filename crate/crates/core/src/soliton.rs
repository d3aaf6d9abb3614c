//! Algebraic and semi-algebraic Ricci soliton certificates.
//!
//! An algebraic soliton satisfies `Ric = λI + D` with `D ∈ Der(𝔤)`; a
//! semi-algebraic one satisfies `Ric = λI + ½(D + Dᵀ)`. Both are found by a
//! linear least-squares fit over `λ` and a Frobenius-orthonormal basis of
//! `Der(𝔤)`, taking the minimum-norm minimizer.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::curvature;
use crate::lie_core::{self, Frame, MetricLieAlgebra};
use crate::linalg::{self, LinearMap};
use crate::verify::{Check, VerificationReport};
use crate::{Error, Result, Tolerances};

/// Floor for relative residual denominators.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolitonKind {
    Algebraic,
    SemiAlgebraic,
    TrivialEinstein,
    DegenerateFlat,
}

impl std::fmt::Display for SolitonKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Algebraic => "algebraic",
            Self::SemiAlgebraic => "semi_algebraic",
            Self::TrivialEinstein => "trivial_einstein",
            Self::DegenerateFlat => "degenerate_flat",
        })
    }
}

/// Outcome of a soliton fit. `derivation`, `symmetric` and `antisymmetric`
/// are endomorphisms on the user basis; the symmetric/antisymmetric split is
/// taken with respect to the inner product (so it is the plain matrix split
/// when the gram is the identity).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolitonCertificate {
    pub lambda: f64,
    pub derivation: LinearMap,
    pub symmetric: LinearMap,
    pub antisymmetric: LinearMap,
    /// `‖Ric − λI − S‖_F / max(‖Ric‖_F, ε)`.
    pub residual: f64,
    /// The relative objective that was minimized: `‖Ric − λI − D‖` for the
    /// algebraic fit, the symmetric form for the semi-algebraic one.
    pub fit_residual: f64,
    /// `‖[S, A]‖_F` in an orthonormal frame.
    pub normal_defect: f64,
    pub kind: SolitonKind,
    pub accepted: bool,
    /// False when `Ric ≈ 0` and any `λ` works with `D = −λI`-type choices.
    pub lambda_determined: bool,
    pub user_supplied: bool,
}

impl SolitonCertificate {
    pub fn is_normal(&self, tol: f64) -> bool {
        self.normal_defect <= tol * self.symmetric.frobenius_norm().powi(2).max(1.0)
    }

    /// `(D, S, A)` in the orthonormal frame of `alg`.
    pub fn frame_parts(&self, alg: &MetricLieAlgebra) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
        if self.derivation.dim() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                got: self.derivation.dim(),
            });
        }
        let frame = Frame::new(alg)?;
        let d = frame.map_to_frame(self.derivation.matrix());
        let s = (&d + d.transpose()) * 0.5;
        let a = (&d - d.transpose()) * 0.5;
        Ok((d, s, a))
    }
}

/// `D = S + A` with `S = ½(D + Dᵀ)`, `A = ½(D − Dᵀ)`.
pub fn split(d: &LinearMap) -> (LinearMap, LinearMap) {
    (d.symmetric_part(), d.antisymmetric_part())
}

/// `‖SA − AS‖_F`.
pub fn normality_defect(s: &LinearMap, a: &LinearMap) -> Result<f64> {
    if s.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: a.dim(),
        });
    }
    Ok(s.commutator(a).frobenius_norm())
}

fn vec_of(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

struct FitInput {
    frame: Frame,
    ric: DMatrix<f64>,
    der: Vec<DMatrix<f64>>,
    flat: bool,
}

fn prepare(alg: &MetricLieAlgebra, tol: &Tolerances) -> Result<FitInput> {
    alg.require_valid(tol)?;
    let frame = Frame::new(alg)?;
    let ric = curvature::ricci_frame_unchecked(&frame.alg);
    let der = lie_core::derivation_space(&frame.alg, tol)?
        .into_iter()
        .map(LinearMap::into_matrix)
        .collect();
    let cmax = frame.alg.max_abs_constant();
    let flat = ric.norm() <= tol.fit * cmax * cmax;
    Ok(FitInput { frame, ric, der, flat })
}

fn relative(x: f64, ric_norm: f64) -> f64 {
    x / ric_norm.max(RESIDUAL_FLOOR)
}

fn build(input: &FitInput, lambda: f64, d_frame: DMatrix<f64>, kind_hint: SolitonKind, tol: &Tolerances) -> SolitonCertificate {
    let n = input.ric.nrows();
    let eye = DMatrix::<f64>::identity(n, n);
    let ric_norm = input.ric.norm();
    let s = (&d_frame + d_frame.transpose()) * 0.5;
    let a = (&d_frame - d_frame.transpose()) * 0.5;
    let residual = relative((&input.ric - &eye * lambda - &s).norm(), ric_norm);
    let algebraic_residual = relative((&input.ric - &eye * lambda - &d_frame).norm(), ric_norm);
    let fit_residual = match kind_hint {
        SolitonKind::SemiAlgebraic => residual,
        _ => algebraic_residual,
    };
    let accepted = fit_residual <= tol.fit;
    if accepted && !input.flat && d_frame.norm() > 0.0 && d_frame.norm() <= tol.fit * ric_norm {
        // Einstein: the fitted derivation is rounding noise.
        let mut c = build(input, lambda, DMatrix::zeros(n, n), kind_hint, tol);
        c.kind = SolitonKind::TrivialEinstein;
        return c;
    }
    let kind = if input.flat {
        SolitonKind::DegenerateFlat
    } else if accepted && d_frame.norm() == 0.0 {
        SolitonKind::TrivialEinstein
    } else {
        kind_hint
    };
    let f = &input.frame;
    SolitonCertificate {
        lambda,
        derivation: LinearMap::new(f.map_to_user(&d_frame)),
        symmetric: LinearMap::new(f.map_to_user(&s)),
        antisymmetric: LinearMap::new(f.map_to_user(&a)),
        residual,
        fit_residual,
        normal_defect: linalg::commutator(&s, &a).norm(),
        kind,
        accepted,
        lambda_determined: !input.flat,
        user_supplied: false,
    }
}

fn flat_certificate(input: &FitInput, tol: &Tolerances) -> SolitonCertificate {
    let n = input.ric.nrows();
    build(input, 0.0, DMatrix::zeros(n, n), SolitonKind::Algebraic, tol)
}

/// Least-squares `(λ, d)` minimizing `‖Ric − λI − Σ d_a M_a‖`.
fn solve(input: &FitInput, columns: &[DMatrix<f64>], tol: &Tolerances) -> (f64, DVector<f64>) {
    let n = input.ric.nrows();
    let mut cols = vec![vec_of(&DMatrix::identity(n, n))];
    cols.extend(columns.iter().map(vec_of));
    let a = DMatrix::from_columns(&cols);
    let x = linalg::lstsq_min_norm(&a, &vec_of(&input.ric), tol.rank);
    (x[0], x.rows(1, columns.len()).into_owned())
}

fn combine(der: &[DMatrix<f64>], coeffs: &DVector<f64>, n: usize) -> DMatrix<f64> {
    der.iter().zip(coeffs.iter()).fold(DMatrix::zeros(n, n), |acc, (d, &c)| acc + d * c)
}

/// Best algebraic fit `Ric ≈ λI + D`, returned whether or not it is accepted.
pub fn fit_algebraic(alg: &MetricLieAlgebra, tol: &Tolerances) -> Result<SolitonCertificate> {
    let input = prepare(alg, tol)?;
    Ok(fit_algebraic_prepared(&input, tol))
}

fn fit_algebraic_prepared(input: &FitInput, tol: &Tolerances) -> SolitonCertificate {
    if input.flat {
        return flat_certificate(input, tol);
    }
    let n = input.ric.nrows();
    let (lambda, d) = solve(input, &input.der, tol);
    build(input, lambda, combine(&input.der, &d, n), SolitonKind::Algebraic, tol)
}

/// Best semi-algebraic fit `Ric ≈ λI + ½(D + Dᵀ)`. When the algebraic fit is
/// accepted, that certificate is returned instead.
pub fn fit_semi_algebraic(alg: &MetricLieAlgebra, tol: &Tolerances) -> Result<SolitonCertificate> {
    let input = prepare(alg, tol)?;
    let algebraic = fit_algebraic_prepared(&input, tol);
    if algebraic.accepted {
        return Ok(algebraic);
    }
    let n = input.ric.nrows();
    let sym: Vec<DMatrix<f64>> = input.der.iter().map(|d| (d + d.transpose()) * 0.5).collect();
    let (lambda, coeffs) = solve(&input, &sym, tol);
    Ok(build(&input, lambda, combine(&input.der, &coeffs, n), SolitonKind::SemiAlgebraic, tol))
}

pub fn find_algebraic_soliton(alg: &MetricLieAlgebra, tol: &Tolerances) -> Result<Option<SolitonCertificate>> {
    let c = fit_algebraic(alg, tol)?;
    Ok(c.accepted.then_some(c))
}

pub fn find_semi_algebraic_soliton(alg: &MetricLieAlgebra, tol: &Tolerances) -> Result<Option<SolitonCertificate>> {
    let c = fit_semi_algebraic(alg, tol)?;
    Ok(c.accepted.then_some(c))
}

/// Checks `tr(S²) = −λ·tr(S)`, `div S = 0` and `‖Ric‖² = λ·scal`.
pub fn soliton_identities(alg: &MetricLieAlgebra, cert: &SolitonCertificate, tol: &Tolerances) -> Result<VerificationReport> {
    alg.require_valid(tol)?;
    let frame = Frame::new(alg)?;
    let (_, s, _) = cert.frame_parts(alg)?;
    let conn = curvature::connection_unchecked(&frame.alg);
    let ric = curvature::ricci_frame_unchecked(&frame.alg);
    let lambda = cert.lambda;

    let tr_s = s.trace();
    let tr_s2 = (&s * &s).trace();
    let trace = Check::new(
        "trace identity tr(S^2) = -lambda tr(S)",
        (tr_s2 + lambda * tr_s).abs(),
        tr_s2.abs().max((lambda * tr_s).abs()),
        tol.verify,
    )
    .with_detail(format!("tr(S^2) = {tr_s2}, -lambda tr(S) = {}", -lambda * tr_s));

    let div = curvature::divergence_in_frame(&conn, &s);
    let div_check = Check::new(
        "divergence-free symmetric part div(S) = 0",
        div.norm(),
        (s.norm() + lambda.abs()) * frame.alg.max_abs_constant(),
        tol.verify,
    );

    let ric2 = ric.norm_squared();
    let scal = ric.trace();
    let norm_check = Check::new(
        "Ricci norm identity |Ric|^2 = lambda scal",
        (ric2 - lambda * scal).abs(),
        ric2.max((lambda * scal).abs()),
        tol.verify,
    )
    .with_detail(format!("|Ric|^2 = {ric2}, lambda scal = {}", lambda * scal));

    Ok(VerificationReport::new(vec![trace, div_check, norm_check]))
}

/// Builds a certificate from a user-supplied `(λ, D)` (user basis), checking
/// that `D` is a derivation and that `Ric = λI + S`, `div S = 0` and
/// `tr(S²) = −λ tr(S)` hold. This is how flat algebras, whose fit leaves `λ`
/// undetermined, enter the extension constructions.
pub fn certificate_from_override(alg: &MetricLieAlgebra, lambda: f64, d: &LinearMap, tol: &Tolerances) -> Result<SolitonCertificate> {
    if !lambda.is_finite() {
        return Err(Error::InvalidParameter("lambda must be finite".into()));
    }
    let input = prepare(alg, tol)?;
    if d.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: d.dim(),
        });
    }
    let defect = lie_core::derivation_defect(alg, d)?;
    if defect > 10.0 * tol.rank {
        return Err(Error::NotADerivation { defect });
    }
    let d_frame = input.frame.map_to_frame(d.matrix());
    let mut cert = build(&input, lambda, d_frame, SolitonKind::SemiAlgebraic, tol);
    let n = alg.dim();
    let algebraic = relative(
        (&input.ric - DMatrix::<f64>::identity(n, n) * lambda - input.frame.map_to_frame(d.matrix())).norm(),
        input.ric.norm(),
    );
    cert.kind = if algebraic <= tol.fit {
        SolitonKind::Algebraic
    } else {
        SolitonKind::SemiAlgebraic
    };
    cert.user_supplied = true;
    cert.lambda_determined = true;
    if !cert.accepted {
        return Err(Error::NotAccepted { residual: cert.residual });
    }
    let report = soliton_identities(alg, &cert, tol)?;
    if !report.verdict {
        return Err(Error::VerificationFailed(format!(
            "override (lambda, D) violates the soliton identities: {}",
            report.failures().join("; ")
        )));
    }
    Ok(cert)
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

    #[test]
    fn split_examples() {
        let d = LinearMap::diagonal(&[1.0, 1.0, 2.0]);
        let (s, a) = split(&d);
        assert_eq!(s, d);
        assert_eq!(a.frobenius_norm(), 0.0);

        let skew = LinearMap::from_rows(&[vec![0.0, 2.0], vec![-2.0, 0.0]]);
        let (s, a) = split(&skew);
        assert_eq!(s.frobenius_norm(), 0.0);
        assert_eq!(a, skew);
    }

    #[test]
    fn normality_examples() {
        let s = LinearMap::diagonal(&[1.0, 2.0]);
        let a = LinearMap::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]);
        assert_eq!(normality_defect(&s, &LinearMap::zeros(2)).unwrap(), 0.0);
        assert_eq!(normality_defect(&LinearMap::identity(2), &a).unwrap(), 0.0);
        // [S,A] = [[0,-1],[-1,0]].
        assert!((normality_defect(&s, &a).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn heisenberg_nilsoliton() {
        let c = find_algebraic_soliton(&heisenberg3(), &tol()).unwrap().unwrap();
        assert_eq!(c.kind, SolitonKind::Algebraic);
        assert!((c.lambda + 1.5).abs() < 1e-12);
        let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 2.0]));
        assert!((c.derivation.matrix() - &expected).amax() < 1e-12);
        assert!(c.residual < 1e-12 && c.fit_residual < 1e-12);
        assert!(c.normal_defect < 1e-12);
        assert!(c.lambda_determined);
    }

    #[test]
    fn solv2_is_trivial_einstein() {
        let c = find_algebraic_soliton(&solv2(), &tol()).unwrap().unwrap();
        assert_eq!(c.kind, SolitonKind::TrivialEinstein);
        assert!((c.lambda + 1.0).abs() < 1e-12);
        assert!(c.derivation.frobenius_norm() < 1e-12);
    }

    #[test]
    fn abelian_is_degenerate_flat() {
        let c = find_algebraic_soliton(&MetricLieAlgebra::abelian(3), &tol()).unwrap().unwrap();
        assert_eq!(c.kind, SolitonKind::DegenerateFlat);
        assert_eq!(c.lambda, 0.0);
        assert!(!c.lambda_determined);
        let s = find_semi_algebraic_soliton(&MetricLieAlgebra::abelian(2), &tol()).unwrap().unwrap();
        assert_eq!(s.kind, SolitonKind::DegenerateFlat);
    }

    #[test]
    fn semi_algebraic_prefers_algebraic() {
        let c = find_semi_algebraic_soliton(&heisenberg3(), &tol()).unwrap().unwrap();
        assert_eq!(c.kind, SolitonKind::Algebraic);
        assert!((c.lambda + 1.5).abs() < 1e-12);
        assert!(c.antisymmetric.frobenius_norm() < 1e-12);
        let e = find_semi_algebraic_soliton(&solv2(), &tol()).unwrap().unwrap();
        assert_eq!(e.kind, SolitonKind::TrivialEinstein);
        assert!(e.symmetric.frobenius_norm() < 1e-12);
    }

    #[test]
    fn non_soliton_is_rejected() {
        // 𝔥3 ⊕ solv2 has no algebraic soliton: the two factors force different λ.
        let alg = MetricLieAlgebra::from_brackets("h3+solv2", 5, &[(0, 1, &[(2, 1.0)]), (3, 4, &[(4, 1.0)])]);
        assert!(find_algebraic_soliton(&alg, &tol()).unwrap().is_none());
        let c = fit_algebraic(&alg, &tol()).unwrap();
        assert!(!c.accepted && c.fit_residual > 1e-3);
    }

    #[test]
    fn identities_on_certificates() {
        let h = heisenberg3();
        let c = find_algebraic_soliton(&h, &tol()).unwrap().unwrap();
        let r = soliton_identities(&h, &c, &tol()).unwrap();
        assert!(r.verdict, "{r:?}");
        assert!(r.checks.iter().all(|c| c.residual <= 1e-9));

        let e = find_algebraic_soliton(&solv2(), &tol()).unwrap().unwrap();
        assert!(soliton_identities(&solv2(), &e, &tol()).unwrap().verdict);

        let mut bad = c.clone();
        bad.lambda += 0.1;
        let r = soliton_identities(&h, &bad, &tol()).unwrap();
        assert!(!r.verdict);
        assert!((r.checks[0].residual - 0.4).abs() < 1e-12);
    }

    #[test]
    fn override_on_abelian_gives_hyperbolic_data() {
        let a = MetricLieAlgebra::abelian(2);
        let c = certificate_from_override(&a, -1.0, &LinearMap::identity(2), &tol()).unwrap();
        assert!(c.user_supplied && c.accepted);
        assert_eq!(c.kind, SolitonKind::Algebraic);
        assert_eq!(c.lambda, -1.0);

        let err = certificate_from_override(&a, -1.0, &LinearMap::identity(2).scale(2.0), &tol());
        assert!(err.is_err());
        let err = certificate_from_override(&heisenberg3(), -1.5, &LinearMap::identity(3), &tol());
        assert!(matches!(err, Err(Error::NotADerivation { .. })));
    }

    #[test]
    fn gram_scaling_scales_lambda() {
        let g = DMatrix::identity(3, 3) * 4.0;
        let h = heisenberg3().with_gram(g).unwrap();
        let c = find_algebraic_soliton(&h, &tol()).unwrap().unwrap();
        assert!((c.lambda + 1.5 / 4.0).abs() < 1e-12);
        assert!((c.symmetric.matrix() - DMatrix::from_diagonal(&DVector::from_vec(vec![0.25, 0.25, 0.5]))).amax() < 1e-12);
    }
}
