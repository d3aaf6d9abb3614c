//! One-dimensional extensions `𝔤 = 𝔥 ⊕ ℝξ` with `ad_ξ|_𝔥 = αD`, the Einstein
//! and warped-product-Einstein (WPE) choices of `α`, and the flat abelian
//! ambient `𝔥 ⊕ ℝ^m ⊕ ℝξ` with `[ξ, U] = −L·U`.
//!
//! ξ is always the last basis vector of an extension; the original basis
//! keeps its indices.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::curvature;
use crate::lie_core::{self, Frame, MetricLieAlgebra};
use crate::linalg::{self, LinearMap};
use crate::soliton::{self, SolitonCertificate, SolitonKind};
use crate::verify;
use crate::{Error, Result, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionMode {
    Generic,
    Einstein,
    Wpe,
    Ambient,
}

impl std::fmt::Display for ExtensionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Generic => "generic",
            Self::Einstein => "einstein",
            Self::Wpe => "wpe",
            Self::Ambient => "ambient",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionResult {
    pub ext: MetricLieAlgebra,
    /// 0-based index of ξ in `ext` (always the last one).
    pub xi_index: usize,
    pub alpha: f64,
    /// Growth rate of the warping function `w = e^{L r}`; zero outside WPE/ambient modes.
    #[serde(rename = "L")]
    pub l: f64,
    /// Fiber dimension parameter; zero for generic and Einstein modes.
    pub m: f64,
    pub lambda: Option<f64>,
    pub mode: ExtensionMode,
    pub source: String,
    /// Dimension of the algebra that was extended.
    pub base_dim: usize,
    /// The derivation `D` on the user basis of the source algebra.
    pub derivation: LinearMap,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ExtensionResult {
    pub fn require_mode(&self, expected: ExtensionMode) -> Result<()> {
        if self.mode != expected {
            return Err(Error::ModeMismatch {
                expected: expected.to_string(),
                got: self.mode.to_string(),
            });
        }
        Ok(())
    }

    pub fn lambda_or_err(&self) -> Result<f64> {
        self.lambda
            .ok_or_else(|| Error::InvalidParameter("extension carries no soliton constant".into()))
    }
}

fn check_derivation(alg: &MetricLieAlgebra, d: &LinearMap, tol: &Tolerances) -> Result<()> {
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
    Ok(())
}

fn extended_labels(alg: &MetricLieAlgebra, extra: &[String]) -> Option<Vec<String>> {
    alg.labels().map(|l| l.iter().cloned().chain(extra.iter().cloned()).collect())
}

/// Structure constants and gram of `𝔥 ⊕ ℝξ` with `[ξ, e_j] = α·D e_j`.
fn extended_algebra(alg: &MetricLieAlgebra, d: &DMatrix<f64>, alpha: f64, name: String) -> Result<MetricLieAlgebra> {
    let n = alg.dim();
    let big = n + 1;
    let xi = n;
    let mut c = vec![0.0; big * big * big];
    let at = |i: usize, j: usize, k: usize| (i * big + j) * big + k;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                c[at(i, j, k)] = alg.c(i, j, k);
            }
        }
    }
    for j in 0..n {
        for k in 0..n {
            let v = alpha * d[(k, j)];
            c[at(xi, j, k)] = v;
            c[at(j, xi, k)] = -v;
        }
    }
    let mut gram = DMatrix::zeros(big, big);
    gram.view_mut((0, 0), (n, n)).copy_from(alg.gram());
    gram[(xi, xi)] = 1.0;
    MetricLieAlgebra::new(name, big, c, gram)?.with_labels(extended_labels(alg, &["xi".to_string()]))
}

/// `𝔥 ⊕ ℝξ` with `ad_ξ = α·D` on `𝔥`, `ξ` unit and orthogonal to `𝔥`.
pub fn one_dim_extension(alg: &MetricLieAlgebra, d: &LinearMap, alpha: f64, tol: &Tolerances) -> Result<ExtensionResult> {
    alg.require_valid(tol)?;
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter("alpha must be finite".into()));
    }
    check_derivation(alg, d, tol)?;
    let ext = extended_algebra(alg, d.matrix(), alpha, format!("{}_ext", alg.name()))?;
    Ok(ExtensionResult {
        xi_index: alg.dim(),
        ext,
        alpha,
        l: 0.0,
        m: 0.0,
        lambda: None,
        mode: ExtensionMode::Generic,
        source: alg.name().to_string(),
        base_dim: alg.dim(),
        derivation: d.clone(),
        notes: Vec::new(),
    })
}

/// Ricci tensor of `one_dim_extension(alg, D, α)` assembled from data on `𝔥`:
///
/// ```text
/// Ric(X,Y) = Ric^𝔥(X,Y) − α² tr(S) ⟨SX,Y⟩ − α² ⟨[S,A]X,Y⟩
/// Ric(X,ξ) = −α (div S)(X)
/// Ric(ξ,ξ) = −α² tr(S²)
/// ```
///
/// Returned as a bilinear form on the extension's user basis.
pub fn closed_form_extension_ricci(alg: &MetricLieAlgebra, d: &LinearMap, alpha: f64, tol: &Tolerances) -> Result<DMatrix<f64>> {
    alg.require_valid(tol)?;
    check_derivation(alg, d, tol)?;
    let frame = Frame::new(alg)?;
    let (rh, cross, xixi) = closed_form_blocks(&frame, d, alpha);
    let n = alg.dim();
    let mut out = DMatrix::zeros(n + 1, n + 1);
    out.view_mut((0, 0), (n, n)).copy_from(&frame.form_to_user(&rh));
    let cross_user = frame.covector_to_user(&cross);
    for a in 0..n {
        out[(a, n)] = cross_user[a];
        out[(n, a)] = cross_user[a];
    }
    out[(n, n)] = xixi;
    Ok(out)
}

/// Frame blocks `(Ric|_𝔥, Ric(·,ξ), Ric(ξ,ξ))` of the closed form.
pub(crate) fn closed_form_blocks(frame: &Frame, d: &LinearMap, alpha: f64) -> (DMatrix<f64>, DVector<f64>, f64) {
    let df = frame.map_to_frame(d.matrix());
    let s = (&df + df.transpose()) * 0.5;
    let a = (&df - df.transpose()) * 0.5;
    let conn = curvature::connection_unchecked(&frame.alg);
    let ric_n = curvature::ricci_frame_unchecked(&frame.alg);
    let a2 = alpha * alpha;
    let rh = ric_n - &s * (a2 * s.trace()) - linalg::commutator(&s, &a) * a2;
    let cross = curvature::divergence_in_frame(&conn, &s) * (-alpha);
    let xixi = -a2 * (&s * &s).trace();
    (rh, cross, xixi)
}

fn require_usable(cert: &SolitonCertificate, tol: &Tolerances) -> Result<f64> {
    if !cert.accepted {
        return Err(Error::NotAccepted { residual: cert.fit_residual });
    }
    if cert.kind == SolitonKind::DegenerateFlat && !cert.user_supplied {
        return Err(Error::DegenerateFlat);
    }
    if !cert.is_normal(tol.verify) {
        return Err(Error::NonNormal {
            defect: cert.normal_defect,
        });
    }
    let tr = cert.symmetric.trace();
    if tr <= 0.0 || cert.kind == SolitonKind::TrivialEinstein {
        return Err(Error::NonPositiveTrace { trace: tr });
    }
    Ok(tr)
}

/// The extension with `α² = 1/tr(S)`, which is λ-Einstein for a normal soliton.
pub fn einstein_extension(alg: &MetricLieAlgebra, cert: &SolitonCertificate, tol: &Tolerances) -> Result<ExtensionResult> {
    let tr = require_usable(cert, tol)?;
    let alpha = (1.0 / tr).sqrt();
    let mut r = one_dim_extension(alg, &cert.derivation, alpha, tol)?;
    r.ext = r.ext.with_name(format!("{}_einstein_ext", alg.name()));
    r.mode = ExtensionMode::Einstein;
    r.lambda = Some(cert.lambda);
    Ok(r)
}

fn wpe_alpha(tr_s: f64, lambda: f64, m: f64) -> Result<f64> {
    let denom = tr_s - lambda * m;
    if denom <= 0.0 || !denom.is_finite() {
        return Err(Error::InvalidParameter(format!("tr(S) - lambda m = {denom} must be positive")));
    }
    Ok((1.0 / denom).sqrt())
}

fn check_wpe_params(lambda: f64, m: f64) -> Result<()> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidParameter(format!("m must be positive, got {m}")));
    }
    if lambda.is_nan() || lambda >= 0.0 {
        return Err(Error::InvalidParameter(format!("WPE extensions need lambda < 0, got {lambda}")));
    }
    Ok(())
}

fn wpe_notes(m: f64) -> Vec<String> {
    if m.fract() != 0.0 {
        vec![format!("m = {m} is not an integer; no warped-product fiber of that dimension exists")]
    } else {
        Vec::new()
    }
}

/// The extension with `α² = 1/(tr(S) − λm)` and `L = λα`, a
/// `(λ, n+1+m)`-Einstein manifold with warping function `w = e^{L r}`.
pub fn wpe_extension(alg: &MetricLieAlgebra, cert: &SolitonCertificate, m: f64, tol: &Tolerances) -> Result<ExtensionResult> {
    check_wpe_params(cert.lambda, m)?;
    let tr = require_usable(cert, tol)?;
    let alpha = wpe_alpha(tr, cert.lambda, m)?;
    let mut r = one_dim_extension(alg, &cert.derivation, alpha, tol)?;
    r.ext = r.ext.with_name(format!("{}_wpe_ext_m{m}", alg.name()));
    r.mode = ExtensionMode::Wpe;
    r.lambda = Some(cert.lambda);
    r.m = m;
    r.l = cert.lambda * alpha;
    r.notes = wpe_notes(m);
    Ok(r)
}

/// WPE parameters `α² = 1/(tr(S) − λm)`, `L = λα` applied to an arbitrary
/// derivation, without requiring a soliton or normality. Used to probe how
/// the WPE identities break for non-normal `D`.
pub fn wpe_parameter_extension(alg: &MetricLieAlgebra, d: &LinearMap, lambda: f64, m: f64, tol: &Tolerances) -> Result<ExtensionResult> {
    check_wpe_params(lambda, m)?;
    let alpha = wpe_alpha(d.trace(), lambda, m)?;
    let mut r = one_dim_extension(alg, d, alpha, tol)?;
    r.mode = ExtensionMode::Wpe;
    r.lambda = Some(lambda);
    r.m = m;
    r.l = lambda * alpha;
    r.notes = wpe_notes(m);
    r.notes.push("built from unchecked (lambda, D); not certified as a soliton".into());
    Ok(r)
}

/// `𝔥 ⊕ ℝ^m ⊕ ℝξ` from a WPE extension: the original brackets, an orthonormal
/// abelian block `U_1..U_m` with `[ξ, U_a] = −L·U_a` and `[𝔥, U_a] = 0`.
/// This is the warped product `E = M ×_w ℝ^m` at the point where `w = 1`.
pub fn abelian_flat_extension(wpe: &ExtensionResult, m_int: usize, tol: &Tolerances) -> Result<ExtensionResult> {
    wpe.require_mode(ExtensionMode::Wpe)?;
    if m_int == 0 || (wpe.m - m_int as f64).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "fiber dimension {m_int} does not match the WPE parameter m = {}",
            wpe.m
        )));
    }
    let src = &wpe.ext;
    let n = wpe.base_dim;
    let big = n + m_int + 1;
    let xi_old = wpe.xi_index;
    let xi = big - 1;
    // Old index → new index: base keeps its slots, ξ moves to the end.
    let remap = |i: usize| if i == xi_old { xi } else { i };
    let mut c = vec![0.0; big * big * big];
    let at = |i: usize, j: usize, k: usize| (i * big + j) * big + k;
    for i in 0..src.dim() {
        for j in 0..src.dim() {
            for k in 0..src.dim() {
                c[at(remap(i), remap(j), remap(k))] = src.c(i, j, k);
            }
        }
    }
    for u in n..n + m_int {
        c[at(xi, u, u)] = -wpe.l;
        c[at(u, xi, u)] = wpe.l;
    }
    let mut gram = DMatrix::identity(big, big);
    gram.view_mut((0, 0), (n, n)).copy_from(&src.gram().view((0, 0), (n, n)));
    let labels = src.labels().map(|l| {
        l[..n]
            .iter()
            .cloned()
            .chain((1..=m_int).map(|a| format!("u{a}")))
            .chain(std::iter::once(l[xi_old].clone()))
            .collect()
    });
    let ext = MetricLieAlgebra::new(format!("{}_ambient_m{m_int}", wpe.source), big, c, gram)?.with_labels(labels)?;
    ext.require_valid(tol)?;
    Ok(ExtensionResult {
        ext,
        xi_index: xi,
        alpha: wpe.alpha,
        l: wpe.l,
        m: wpe.m,
        lambda: wpe.lambda,
        mode: ExtensionMode::Ambient,
        source: wpe.source.clone(),
        base_dim: n,
        derivation: wpe.derivation.clone(),
        notes: Vec::new(),
    })
}

/// Soliton certificate used by the pipeline: an explicit `(λ, D)` override,
/// or the best (semi-)algebraic fit.
pub fn pipeline_certificate(alg: &MetricLieAlgebra, overrides: Option<(f64, &LinearMap)>, tol: &Tolerances) -> Result<SolitonCertificate> {
    match overrides {
        Some((lambda, d)) => soliton::certificate_from_override(alg, lambda, d, tol),
        None => {
            let cert = soliton::fit_semi_algebraic(alg, tol)?;
            if cert.kind == SolitonKind::DegenerateFlat {
                return Err(Error::DegenerateFlat);
            }
            if !cert.accepted {
                return Err(Error::NotAccepted {
                    residual: cert.fit_residual,
                });
            }
            Ok(cert)
        }
    }
}

/// A homogeneous λ-Einstein space containing the soliton: the Einstein
/// extension for `m = 0`, otherwise the flat abelian ambient of the WPE
/// extension with fiber `ℝ^m`. The result is checked to be λ-Einstein.
pub fn einstein_ambient_pipeline(
    alg: &MetricLieAlgebra,
    m: usize,
    overrides: Option<(f64, &LinearMap)>,
    tol: &Tolerances,
) -> Result<ExtensionResult> {
    let cert = pipeline_certificate(alg, overrides, tol)?;
    let result = if m == 0 {
        einstein_extension(alg, &cert, tol)?
    } else {
        let wpe = wpe_extension(alg, &cert, m as f64, tol)?;
        abelian_flat_extension(&wpe, m, tol)?
    };
    let report = verify::einstein_residual(&result.ext, cert.lambda, tol)?;
    if !report.verdict {
        return Err(Error::VerificationFailed(format!(
            "constructed space is not Einstein: {}",
            report.failures().join("; ")
        )));
    }
    Ok(result)
}
