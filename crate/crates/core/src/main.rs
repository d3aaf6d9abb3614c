use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::Serialize;

use solitonforge::cli_io::{self, catalog, format, Provenance, RunReport};
use solitonforge::curvature;
use solitonforge::extension::{self, ExtensionResult};
use solitonforge::lie_core::{self, MetricLieAlgebra};
use solitonforge::soliton::{self, SolitonCertificate};
use solitonforge::verify::{self, Check, SolvDecomposition, VerificationReport};
use solitonforge::{Error, Result, Tolerances};

#[derive(Parser)]
#[command(name = "solitonforge", version, about = "Curvature, Ricci solitons and Einstein extensions of metric Lie algebras")]
struct Cli {
    #[command(flatten)]
    tol: TolFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolFlags {
    /// Relative residual accepted by soliton fits.
    #[arg(long, global = true)]
    tol_fit: Option<f64>,
    /// Normalized residual accepted by verification checks.
    #[arg(long, global = true)]
    tol_verify: Option<f64>,
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check antisymmetry, the Jacobi identity and the inner product.
    Validate { file: PathBuf },
    /// Ricci tensor, its eigenvalues and the scalar curvature.
    Curvature {
        file: PathBuf,
        /// Also print the nonzero Riemann components (orthonormal frame).
        #[arg(long)]
        riemann: bool,
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
    },
    /// Fit an algebraic (or semi-algebraic) Ricci soliton.
    Soliton {
        file: PathBuf,
        #[arg(long)]
        semi_algebraic: bool,
        /// Fit tolerance for this run.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
    },
    /// Build an Einstein, WPE or ambient extension and verify it.
    Extend {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: ExtendMode,
        /// Fiber dimension parameter (real for wpe, integer for ambient).
        #[arg(long)]
        m: Option<f64>,
        /// Soliton constant override; requires --derivation.
        #[arg(long, allow_hyphen_values = true, requires = "derivation")]
        lambda: Option<f64>,
        /// Derivation override file ({"matrix": [[...], ...]}); requires --lambda.
        #[arg(long, requires = "lambda")]
        derivation: Option<PathBuf>,
        /// Write the extended algebra here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
    },
    /// Run an Einstein, WPE or structure-recovery check on an algebra file.
    Verify(VerifyArgs),
    /// Check the solvmanifold conditions for a decomposition g = a + n.
    CheckSolv {
        file: PathBuf,
        /// Comma-separated 1-based indices spanning a.
        #[arg(long)]
        a: String,
        /// Comma-separated 1-based indices spanning n.
        #[arg(long)]
        n: String,
        #[arg(long)]
        xi: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long)]
        m: f64,
        #[arg(long = "L", allow_hyphen_values = true)]
        l: f64,
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
    },
    /// List the built-in algebras or write them as files.
    Catalog {
        #[arg(long, value_name = "DIR")]
        emit: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtendMode {
    Einstein,
    Wpe,
    Ambient,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("kind").required(true).args(["einstein", "wpe", "recover"])))]
struct VerifyArgs {
    file: PathBuf,
    /// Check Ric = lambda g for the given lambda.
    #[arg(long, allow_hyphen_values = true, value_name = "LAMBDA")]
    einstein: Option<f64>,
    /// Check the WPE equation with --lambda --m --L --xi.
    #[arg(long, requires_all = ["lambda", "m", "l", "xi"])]
    wpe: bool,
    /// Recover the extension structure with --lambda --m --xi.
    #[arg(long, requires_all = ["lambda", "m", "xi"])]
    recover: bool,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long = "L", allow_hyphen_values = true)]
    l: Option<f64>,
    /// 1-based index of the unit normal ξ.
    #[arg(long)]
    xi: Option<usize>,
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            if let Error::InvalidAlgebra(report) = &e {
                eprintln!("error: invalid Lie algebra");
                eprintln!("{report}");
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn tolerances(flags: &TolFlags) -> Result<Tolerances> {
    let mut t = Tolerances::default();
    if let Ok(spec) = std::env::var(cli_io::TOLERANCE_ENV) {
        t = cli_io::parse_tolerance_spec(&spec, t)?;
    }
    for (v, name) in [(flags.tol_fit, "--tol-fit"), (flags.tol_verify, "--tol-verify"), (flags.tol_rank, "--tol-rank")] {
        if let Some(x) = v {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
    }
    t.fit = flags.tol_fit.unwrap_or(t.fit);
    t.verify = flags.tol_verify.unwrap_or(t.verify);
    t.rank = flags.tol_rank.unwrap_or(t.rank);
    Ok(t)
}

/// Reads an algebra file; returns it with the raw bytes for provenance.
fn read_algebra(path: &Path, tol: &Tolerances) -> Result<(MetricLieAlgebra, Vec<u8>)> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Schema("file is not UTF-8".into()))?;
    let alg = format::parse(&text)?;
    alg.require_valid(tol)?;
    Ok((alg, bytes))
}

fn write_json<T: Serialize>(out: Option<&PathBuf>, command: &str, input: &[u8], tol: Tolerances, value: &T) -> Result<()> {
    if let Some(path) = out {
        RunReport::new(Provenance::new(command, Some(input), tol), value)?.write(path)?;
    }
    Ok(())
}

fn one_based(i: usize, dim: usize, what: &str) -> Result<usize> {
    if i == 0 || i > dim {
        return Err(Error::InvalidParameter(format!("{what} index {i} out of range 1..={dim}")));
    }
    Ok(i - 1)
}

fn parse_indices(s: &str, dim: usize, what: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let i: usize = p
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("{what}: {p:?} is not an index")))?;
            one_based(i, dim, what)
        })
        .collect()
}

fn fmt_num(x: f64) -> String {
    let x = if x.abs() < 5e-11 { 0.0 } else { x };
    format!("{x:.10}")
}

fn print_matrix(label: &str, m: &DMatrix<f64>) {
    println!("{label}:");
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:>16}", fmt_num(m[(i, j)]))).collect();
        println!("  [{}]", row.join(" "));
    }
}

fn print_report(title: &str, report: &VerificationReport) {
    println!("{title}:");
    for c in &report.checks {
        print_check(c);
    }
    for n in &report.notes {
        println!("  note: {n}");
    }
    println!("verdict: {}", if report.verdict { "PASS" } else { "FAIL" });
}

fn print_check(c: &Check) {
    println!(
        "  [{}] {}: residual {:.3e}, normalized {:.3e} (tol {:.1e})",
        if c.pass { "pass" } else { "FAIL" },
        c.name,
        c.residual,
        c.normalized,
        c.tolerance
    );
    if !c.detail.is_empty() {
        println!("         {}", c.detail);
    }
}

fn print_certificate(c: &SolitonCertificate) {
    println!("kind: {}", c.kind);
    println!("accepted: {}", c.accepted);
    if c.lambda_determined {
        println!("lambda: {}", fmt_num(c.lambda));
    } else {
        println!("lambda: undetermined (flat; any lambda with D = -lambda I fits)");
    }
    print_matrix("D", c.derivation.matrix());
    print_matrix("S", c.symmetric.matrix());
    print_matrix("A", c.antisymmetric.matrix());
    println!("residual: {:.3e}", c.residual);
    println!("fit residual: {:.3e}", c.fit_residual);
    println!("normal defect: {:.3e}", c.normal_defect);
}

fn run(cli: Cli) -> Result<bool> {
    let tol = tolerances(&cli.tol)?;
    match cli.command {
        Command::Validate { file } => {
            let alg = format::load_unvalidated(&file)?;
            let report = lie_core::validate(&alg, &tol);
            println!("{} (dim {}): {}", alg.name(), alg.dim(), if report.valid { "valid" } else { "invalid" });
            println!("  {report}");
            Ok(report.valid)
        }
        Command::Curvature { file, riemann, json } => {
            let (alg, bytes) = read_algebra(&file, &tol)?;
            let report = if riemann {
                curvature::ricci_with_riemann(&alg, &tol)?
            } else {
                curvature::ricci(&alg, &tol)?
            };
            println!("{} (dim {})", alg.name(), alg.dim());
            print_matrix("Ricci tensor", &report.ricci_tensor);
            let ev: Vec<String> = report.eigenvalues.iter().map(|&x| fmt_num(x)).collect();
            println!("Ricci eigenvalues: [{}]", ev.join(", "));
            println!("scalar curvature: {}", fmt_num(report.scal));
            if let Some(r) = &report.riemann {
                println!("Riemann <R(e_i,e_j)e_k,e_l> (orthonormal frame, i<j, k<l, nonzero):");
                let n = r.dim;
                let eps = 1e-14 * r.max_abs().max(1.0);
                for i in 0..n {
                    for j in (i + 1)..n {
                        for k in 0..n {
                            for l in (k + 1)..n {
                                let v = r.get(i, j, k, l);
                                if v.abs() > eps {
                                    println!("  R[{}][{}][{}][{}] = {}", i + 1, j + 1, k + 1, l + 1, fmt_num(v));
                                }
                            }
                        }
                    }
                }
            }
            write_json(json.as_ref(), "curvature", &bytes, tol, &report)?;
            Ok(true)
        }
        Command::Soliton {
            file,
            semi_algebraic,
            tol: fit_tol,
            json,
        } => {
            let mut tol = tol;
            if let Some(t) = fit_tol {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::InvalidParameter("--tol must be positive".into()));
                }
                tol.fit = t;
            }
            let (alg, bytes) = read_algebra(&file, &tol)?;
            let cert = if semi_algebraic {
                soliton::fit_semi_algebraic(&alg, &tol)?
            } else {
                soliton::fit_algebraic(&alg, &tol)?
            };
            println!("{} (dim {})", alg.name(), alg.dim());
            print_certificate(&cert);
            let mut out = serde_json::json!({ "certificate": cert });
            if cert.accepted {
                let ids = soliton::soliton_identities(&alg, &cert, &tol)?;
                print_report("soliton identities", &ids);
                out["identities"] = serde_json::to_value(&ids)?;
            }
            write_json(json.as_ref(), "soliton", &bytes, tol, &out)?;
            Ok(cert.accepted)
        }
        Command::Extend {
            file,
            mode,
            m,
            lambda,
            derivation,
            out,
            json,
        } => {
            let (alg, bytes) = read_algebra(&file, &tol)?;
            let d = match &derivation {
                Some(p) => Some(cli_io::parse_derivation(&std::fs::read_to_string(p)?)?),
                None => None,
            };
            let overrides = lambda.zip(d.as_ref());
            let cert = extension::pipeline_certificate(&alg, overrides, &tol)?;
            let result = match mode {
                ExtendMode::Einstein => extension::einstein_extension(&alg, &cert, &tol)?,
                ExtendMode::Wpe => {
                    let m = m.ok_or_else(|| Error::InvalidParameter("--mode wpe needs --m".into()))?;
                    extension::wpe_extension(&alg, &cert, m, &tol)?
                }
                ExtendMode::Ambient => {
                    let m = m.ok_or_else(|| Error::InvalidParameter("--mode ambient needs --m".into()))?;
                    if m < 0.0 || m.fract() != 0.0 {
                        return Err(Error::InvalidParameter(format!("--mode ambient needs an integer m >= 0, got {m}")));
                    }
                    extension::einstein_ambient_pipeline(&alg, m as usize, overrides, &tol)?
                }
            };
            let report = verify_extension(&result, &tol)?;
            print_extension(&result);
            for n in &result.notes {
                println!("note: {n}");
            }
            print_report("verification", &report);
            if let Some(p) = &out {
                format::save(&result.ext, p)?;
                println!("wrote {}", p.display());
            }
            let payload = serde_json::json!({ "extension": result, "verification": report });
            write_json(json.as_ref(), "extend", &bytes, tol, &payload)?;
            Ok(report.verdict)
        }
        Command::Verify(args) => run_verify(args, tol),
        Command::CheckSolv {
            file,
            a,
            n,
            xi,
            lambda,
            m,
            l,
            json,
        } => {
            let (alg, bytes) = read_algebra(&file, &tol)?;
            let dim = alg.dim();
            let dec = SolvDecomposition::from_indices(
                dim,
                &parse_indices(&a, dim, "--a")?,
                &parse_indices(&n, dim, "--n")?,
                one_based(xi, dim, "--xi")?,
            )?;
            let report = verify::solvmanifold_conditions(&alg, &dec, lambda, m, l, &tol)?;
            print_report("solvmanifold conditions", &report);
            write_json(json.as_ref(), "check-solv", &bytes, tol, &report)?;
            Ok(report.verdict)
        }
        Command::Catalog { emit } => {
            match emit {
                Some(dir) => {
                    for p in catalog::emit(&dir)? {
                        println!("wrote {}", p.display());
                    }
                }
                None => {
                    for e in catalog::catalog() {
                        println!("{:<20} dim {:>2}  {}", e.name(), e.algebra.dim(), e.description);
                    }
                }
            }
            Ok(true)
        }
    }
}

fn print_extension(r: &ExtensionResult) {
    println!("{} extension of {} (dim {} -> {})", r.mode, r.source, r.base_dim, r.ext.dim());
    println!("xi index: {}", r.xi_index + 1);
    println!("alpha: {}", fmt_num(r.alpha));
    if let Some(l) = r.lambda {
        println!("lambda: {}", fmt_num(l));
    }
    if r.m != 0.0 {
        println!("m: {}", r.m);
        println!("L: {}", fmt_num(r.l));
    }
}

/// Checks appropriate to the construction mode.
fn verify_extension(r: &ExtensionResult, tol: &Tolerances) -> Result<VerificationReport> {
    use solitonforge::ExtensionMode as M;
    let lambda = r.lambda_or_err()?;
    match r.mode {
        M::Einstein | M::Ambient | M::Generic => verify::einstein_residual(&r.ext, lambda, tol),
        M::Wpe => {
            let mut checks = verify::wpe_residual(r, tol)?.checks;
            let mu = verify::mu_value(r, tol)?;
            checks.push(Check::new("fiber curvature mu(w)/w^2 = 0", mu.abs(), lambda.abs(), tol.verify));
            checks.extend(verify::structure_recovery(&r.ext, r.xi_index, lambda, r.m, tol)?.checks);
            Ok(VerificationReport::new(checks))
        }
    }
}

fn run_verify(args: VerifyArgs, tol: Tolerances) -> Result<bool> {
    let (alg, bytes) = read_algebra(&args.file, &tol)?;
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::InvalidParameter(format!("missing {name}")));
    let report = if let Some(lambda) = args.einstein {
        verify::einstein_residual(&alg, lambda, &tol)?
    } else {
        let lambda = need(args.lambda, "--lambda")?;
        let m = need(args.m, "--m")?;
        let xi = one_based(args.xi.ok_or_else(|| Error::InvalidParameter("missing --xi".into()))?, alg.dim(), "--xi")?;
        if args.wpe {
            let l = need(args.l, "--L")?;
            let mut checks = verify::wpe_residual_params(&alg, xi, lambda, m, l, &tol)?.checks;
            let mu = verify::mu_value_params(&alg, xi, lambda, m, l, &tol)?;
            checks.push(Check::new("fiber curvature mu(w)/w^2 = 0", mu.abs(), lambda.abs(), tol.verify));
            VerificationReport::new(checks)
        } else {
            verify::structure_recovery(&alg, xi, lambda, m, &tol)?
        }
    };
    print_report("verification", &report);
    write_json(args.json.as_ref(), "verify", &bytes, tol, &report)?;
    Ok(report.verdict)
}
