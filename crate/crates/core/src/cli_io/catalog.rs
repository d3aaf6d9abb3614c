//! Built-in example algebras, including extensions generated by the
//! library's own constructions.

use std::path::Path;

use crate::extension::{self, ExtensionResult};
use crate::lie_core::MetricLieAlgebra;
use crate::linalg::LinearMap;
use crate::soliton;
use crate::{Result, Tolerances};

use super::format;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub algebra: MetricLieAlgebra,
    pub description: String,
    /// Construction data for generated entries.
    pub extension: Option<ExtensionResult>,
}

impl CatalogEntry {
    pub fn name(&self) -> &str {
        self.algebra.name()
    }
}

pub fn heisenberg3() -> MetricLieAlgebra {
    MetricLieAlgebra::from_brackets("heisenberg3", 3, &[(0, 1, &[(2, 1.0)])])
}

pub fn heisenberg5() -> MetricLieAlgebra {
    MetricLieAlgebra::from_brackets("heisenberg5", 5, &[(0, 1, &[(4, 1.0)]), (2, 3, &[(4, 1.0)])])
}

pub fn solv2() -> MetricLieAlgebra {
    MetricLieAlgebra::from_brackets("solv2", 2, &[(0, 1, &[(1, 1.0)])])
}

fn plain(algebra: MetricLieAlgebra, description: &str) -> CatalogEntry {
    CatalogEntry {
        algebra,
        description: description.to_string(),
        extension: None,
    }
}

fn generated(mut ext: ExtensionResult, name: &str, description: String) -> CatalogEntry {
    ext.ext = ext.ext.with_name(name);
    CatalogEntry {
        algebra: ext.ext.clone(),
        description,
        extension: Some(ext),
    }
}

/// Hyperbolic space `Hⁿ` as the Einstein extension of `ℝ^{n−1}` with
/// `(λ, D) = (−1, I)`: `α² = 1/(n−1)`, constant curvature `−1/(n−1)`.
pub fn hyperbolic(n: usize, tol: &Tolerances) -> Result<ExtensionResult> {
    let base = MetricLieAlgebra::abelian(n - 1);
    let cert = soliton::certificate_from_override(&base, -1.0, &LinearMap::identity(n - 1), tol)?;
    extension::einstein_extension(&base, &cert, tol)
}

/// Every built-in entry, in a fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    build(&Tolerances::default()).expect("built-in catalog constructions succeed")
}

fn build(tol: &Tolerances) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(plain(MetricLieAlgebra::abelian(n), "abelian Lie algebra with the flat metric"));
    }
    out.push(plain(heisenberg3(), "three-dimensional Heisenberg algebra, [e1,e2] = e3"));
    out.push(plain(heisenberg5(), "five-dimensional Heisenberg algebra, [e1,e2] = [e3,e4] = e5"));
    out.push(plain(solv2(), "two-dimensional non-abelian algebra [e1,e2] = e2 (hyperbolic plane)"));

    let h = heisenberg3();
    let cert = soliton::find_algebraic_soliton(&h, tol)?.expect("heisenberg3 is a nilsoliton");
    out.push(generated(
        extension::einstein_extension(&h, &cert, tol)?,
        "einstein_ext_heis3",
        "Einstein extension of heisenberg3, alpha^2 = 1/4, lambda = -3/2".into(),
    ));
    for m in [1usize, 2] {
        let wpe = extension::wpe_extension(&h, &cert, m as f64, tol)?;
        out.push(generated(
            wpe,
            &format!("wpe_ext_heis3_m{m}"),
            format!("warped-product-Einstein extension of heisenberg3 with m = {m}"),
        ));
    }
    let amb = extension::einstein_ambient_pipeline(&h, 2, None, tol)?;
    out.push(generated(
        amb,
        "ambient_heis3_m2",
        "flat abelian Einstein ambient of heisenberg3 with fiber R^2, lambda = -3/2".into(),
    ));
    for n in 2..=4 {
        out.push(generated(
            hyperbolic(n, tol)?,
            &format!("hyperbolic_{n}"),
            format!("hyperbolic space H^{n} with Ric = -g"),
        ));
    }
    Ok(out)
}

pub fn find(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name() == name)
}

/// Writes `<name>.json` for every entry into `dir`, returning the paths.
pub fn emit(dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for e in catalog() {
        let p = dir.join(format!("{}.json", e.name()));
        format::save(&e.algebra, &p)?;
        paths.push(p);
    }
    Ok(paths)
}
