//! Command-line driver for the `gauss-spectral` library.
//!
//! Every subcommand resolves one [`config::RunConfig`] (defaults → config
//! file → flags), runs its computation, and emits one result document
//! (see [`output::Document`]) as JSON or CSV to stdout or `--out`.
//!
//! Exit codes: 0 success, 1 at least one verification check failed,
//! 2 usage or configuration error, 3 solver failure.

mod config;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use config::{Overrides, RunConfig};
use gauss_spectral::bounds::{h_bound, k_bound, lemma_chain, rbar, regime_of};
use gauss_spectral::grid2d::counterexample_run;
use gauss_spectral::measure::{b_of_a, Interval1D};
use gauss_spectral::radial::{
    mu1_ball, nu1, radial_eigs_opts, shape_derivative_radial, tau1, RadialProblem,
};
use gauss_spectral::shooting::Bc;
use gauss_spectral::special::phi_inverse;
use gauss_spectral::sturm1d::{eig1d_opts, mu1, shape_derivative_1d, EigenResult};
use gauss_spectral::weinberger::{named_domain, szego_weinberger_check};
use gauss_spectral::{verify, Check, Error};
use output::{row, Document};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gauss-spectral",
    version,
    about = "Eigenvalues and sharp inequalities for the Gaussian-weighted Laplacian",
    after_help = "Configuration is read from the file named by GAUSS_SPECTRAL_CONFIG \
                  (else ./gauss-spectral.config.json if present); flags override it."
)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[clap(rename_all = "lowercase")]
enum BcArg {
    Neumann,
    Dirichlet,
}

impl From<BcArg> for Bc {
    fn from(b: BcArg) -> Bc {
        match b {
            BcArg::Neumann => Bc::Neumann,
            BcArg::Dirichlet => Bc::Dirichlet,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of -u'' + x u' on an interval (use -inf/inf for rays).
    Eig1d {
        /// Left endpoint.
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Right endpoint.
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        /// Boundary condition at both finite endpoints.
        #[arg(long, value_enum, default_value = "neumann")]
        bc: BcArg,
        /// Number of eigenvalues, from the bottom of the spectrum.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// First Neumann eigenvalue along the fixed-measure interval slide.
    Slide {
        /// Gaussian measure shared by every interval of the sweep.
        #[arg(long)]
        measure: f64,
        /// Number of left endpoints sampled.
        #[arg(long, default_value_t = 41)]
        points: usize,
        /// Fraction of the slide range swept on each side of the
        /// symmetric interval (1 reaches the half-line endpoint).
        #[arg(long, default_value_t = 0.95)]
        span: f64,
    },
    /// Eigenvalues of one spherical-harmonic branch on a ball.
    Radial {
        /// Ambient dimension.
        #[arg(long = "N")]
        n: usize,
        /// Spherical-harmonic degree.
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Ball radius (inf for the whole space).
        #[arg(long = "R")]
        r: f64,
        /// Boundary condition at the outer radius.
        #[arg(long, value_enum, default_value = "neumann")]
        bc: BcArg,
        /// Number of eigenvalues along the branch.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// First nontrivial Neumann eigenvalue of a ball and its two branches.
    Ball {
        /// Ambient dimension.
        #[arg(long = "N")]
        n: usize,
        /// Ball radius (inf for the whole space).
        #[arg(long = "R")]
        r: f64,
    },
    /// The comparison functions k(R) and h(R) and the radius regime.
    Bounds {
        /// Ambient dimension (at least 2).
        #[arg(long = "N")]
        n: usize,
        /// Ball radius.
        #[arg(long = "R")]
        r: f64,
    },
    /// The full eigenvalue comparison chain at one (N, R).
    Lemma {
        /// Ambient dimension (at least 2).
        #[arg(long = "N")]
        n: usize,
        /// Ball radius.
        #[arg(long = "R")]
        r: f64,
    },
    /// Norm and comparison properties of the decreasing rearrangement.
    RearrangeCheck,
    /// Ball-maximality bound for an origin-symmetric planar domain.
    Weinberger {
        /// Domain family: ball, circle, square, star2, star4, mix,
        /// ellipse, rect, or annulus.
        #[arg(long, default_value = "ball")]
        shape: String,
        /// Gaussian measure of the domain, in (0, 1).
        #[arg(long, default_value_t = 0.5)]
        measure: f64,
    },
    /// Rounded-corner squares: eigenvalue stays near 5, far above the
    /// half-space value 1.
    Counterexample {
        /// Corner radii, strictly descending.
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.15")]
        deltas: Vec<f64>,
        /// Grid levels in cells per side, strictly ascending.
        #[arg(long, value_delimiter = ',', default_value = "32,64")]
        levels: Vec<usize>,
    },
    /// Boundary shape-derivative formulas against finite differences.
    ShapeDeriv {
        /// Left endpoint of an interval (with --b).
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        /// Right endpoint of an interval (with --a).
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        /// Ambient dimension of a ball (with --R).
        #[arg(long = "N")]
        n: Option<usize>,
        /// Ball radius (with --N).
        #[arg(long = "R")]
        r: Option<f64>,
        /// Index of the radial eigenvalue (1 is the first nontrivial).
        #[arg(long, default_value_t = 1)]
        index: usize,
    },
    /// Run the complete verification checklist.
    VerifyAll,
}

enum Failure {
    Usage(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InvalidDomain(_) | Error::Precondition(_) => Failure::Usage(e.to_string()),
            Error::NoConvergence(_) | Error::QuadBudget { .. } => Failure::Solver(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::load(&cli.overrides) {
        Ok(c) => c,
        Err(msg) => return usage_exit(&msg),
    };
    match execute(&cli.command, &cfg) {
        Ok(doc) => {
            if let Err(msg) = doc.emit() {
                return usage_exit(&msg);
            }
            if doc.all_checks_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => usage_exit(&msg),
        Err(Failure::Solver(msg)) => {
            eprintln!("gauss-spectral: solver failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn usage_exit(msg: &str) -> ExitCode {
    eprintln!("gauss-spectral: {msg}");
    ExitCode::from(2)
}

/// Thread pool sized by the run configuration; sweep subcommands run
/// their independent solves on it and reassemble results in input order.
fn pool(cfg: &RunConfig) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| Failure::Solver(format!("worker pool: {e}")))
}

fn eigen_rows(eigs: &[EigenResult]) -> Vec<Value> {
    eigs.iter()
        .enumerate()
        .map(|(i, e)| {
            row(&[
                ("index", json!(i)),
                ("value", json!(e.value)),
                ("nodes", json!(e.nodes)),
                ("node_locations", json!(e.node_locations)),
                ("bracket", json!(e.bracket)),
            ])
        })
        .collect()
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Document, Failure> {
    match cmd {
        Command::Eig1d { a, b, bc, count } => {
            let mut doc = Document::new("eig1d", cfg);
            let iv = Interval1D::new(*a, *b)?;
            let eigs = eig1d_opts(&iv, (*bc).into(), *count, cfg.tol, cfg.trunc_weight, cfg.samples)?;
            doc.results = eigen_rows(&eigs);
            Ok(doc)
        }
        Command::Slide { measure, points, span } => {
            let mut doc = Document::new("slide", cfg);
            if !(*measure > 0.0 && *measure < 1.0) {
                return Err(Failure::Usage(format!(
                    "measure must lie in (0, 1), got {measure}"
                )));
            }
            if !(*span > 0.0 && *span <= 1.0) {
                return Err(Failure::Usage(format!("span must lie in (0, 1], got {span}")));
            }
            if *points < 2 {
                return Err(Failure::Usage("points must be at least 2".into()));
            }
            // The symmetric interval (-c, c) has measure 1 - 2Φ(c); the
            // slide degenerates to a half-line when a reaches Φ⁻¹(measure).
            let a_sym = -phi_inverse((1.0 - measure) / 2.0)?;
            let a_max = phi_inverse(*measure)?;
            let w = span * (a_max - a_sym);
            let grid: Vec<f64> = (0..*points)
                .map(|i| {
                    let t = i as f64 / (*points - 1) as f64;
                    a_sym - w + 2.0 * w * t
                })
                .collect();
            let tol = cfg.tol;
            let l = *measure;
            let values: Vec<(f64, f64)> = pool(cfg)?
                .install(|| {
                    grid.par_iter()
                        .map(|&a| {
                            let b = b_of_a(a, l)?;
                            Ok((b, mu1(&Interval1D::new(a, b)?, tol)?))
                        })
                        .collect::<Result<Vec<_>, Error>>()
                })
                .map_err(Failure::from)?;
            doc.results = grid
                .iter()
                .zip(&values)
                .map(|(&a, &(b, m))| row(&[("a", json!(a)), ("b", json!(b)), ("mu1", json!(m))]))
                .collect();
            Ok(doc)
        }
        Command::Radial { n, k, r, bc, count } => {
            let mut doc = Document::new("radial", cfg);
            let p = RadialProblem { n: *n, k: *k, r: *r, bc: (*bc).into() };
            let eigs = radial_eigs_opts(&p, *count, cfg.tol, None, cfg.samples)?;
            doc.results = eigen_rows(&eigs);
            Ok(doc)
        }
        Command::Ball { n, r } => {
            let mut doc = Document::new("ball", cfg);
            let nu = nu1(*n, *r, cfg.tol)?;
            let tau = tau1(*n, *r, cfg.tol)?;
            let (mu, _) = mu1_ball(*n, *r, cfg.tol)?;
            doc.results = vec![row(&[
                ("N", json!(n)),
                ("R", json!(r)),
                ("nu1", json!(nu)),
                ("tau1", json!(tau)),
                ("mu1", json!(mu)),
            ])];
            doc.checks = vec![
                Check::close("mu1 is the smaller branch value", mu, nu.min(tau), 1e-12),
                Check::le("angular branch at or below radial branch", nu, tau, 1e-9),
            ];
            Ok(doc)
        }
        Command::Bounds { n, r } => {
            let mut doc = Document::new("bounds", cfg);
            let k = k_bound(*n, *r)?;
            let root = ((*n - 1) as f64).sqrt();
            let h = if *r > root { Some(h_bound(*n, *r)?) } else { None };
            let regime = regime_of(*n, *r);
            doc.results = vec![row(&[
                ("N", json!(n)),
                ("R", json!(r)),
                ("k", json!(k)),
                ("h", json!(h)),
                ("regime", json!(regime)),
                ("rbar", if *n == 2 { json!(rbar()) } else { Value::Null }),
            ])];
            Ok(doc)
        }
        Command::Lemma { n, r } => {
            let mut doc = Document::new("lemma", cfg);
            let nu = nu1(*n, *r, cfg.tol)?;
            let p = RadialProblem { n: *n, k: 0, r: *r, bc: Bc::Neumann };
            let eigs = radial_eigs_opts(&p, 2, cfg.tol, None, cfg.samples.min(601))?;
            let tau = eigs[1].value;
            let tau_node = eigs[1].node_locations.first().copied();
            let rep = lemma_chain(*n, *r, nu, tau, tau_node)?;
            doc.results = vec![row(&[
                ("N", json!(n)),
                ("R", json!(r)),
                ("regime", json!(rep.regime)),
                ("k", json!(rep.k_val)),
                ("h", json!(rep.h_val)),
                ("nu1", json!(nu)),
                ("tau1", json!(tau)),
                ("tau1_node", json!(tau_node)),
                ("chain_ok", json!(rep.chain_ok)),
            ])];
            doc.checks = rep.links;
            Ok(doc)
        }
        Command::RearrangeCheck => {
            let mut doc = Document::new("rearrange-check", cfg);
            doc.checks = verify::rearrangement_checks(cfg.seed)?;
            Ok(doc)
        }
        Command::Weinberger { shape, measure } => {
            let mut doc = Document::new("weinberger", cfg);
            let omega = named_domain(shape, *measure)?;
            let rep = szego_weinberger_check(&omega, cfg.tol)?;
            doc.results = vec![row(&[
                ("shape", json!(shape)),
                ("measure", json!(rep.measure)),
                ("r_ball", json!(rep.r_ball)),
                ("mu1_omega", json!(rep.mu1_omega)),
                ("bound", json!(rep.bound)),
                ("mu1_ball_quadrature", json!(rep.mu1_ball_quadrature)),
                ("mu1_ball_eigen", json!(rep.mu1_ball_eigen)),
                ("p_mean_x", json!(rep.p_mean_x)),
                ("p_mean_y", json!(rep.p_mean_y)),
                ("equality_with_ball", json!(rep.equality_with_ball)),
            ])];
            doc.checks = rep.checks;
            Ok(doc)
        }
        Command::Counterexample { deltas, levels } => {
            let mut doc = Document::new("counterexample", cfg);
            let rep = counterexample_run(deltas, levels, cfg.tol)?;
            doc.results = rep
                .rows
                .iter()
                .map(|cr| {
                    let mut pairs: Vec<(String, Value)> = vec![
                        ("delta".into(), json!(cr.delta)),
                        ("extrapolated".into(), json!(cr.extrapolated)),
                    ];
                    for (i, (h, m)) in cr.values.iter().enumerate() {
                        pairs.push((format!("h_{i}"), json!(h)));
                        pairs.push((format!("mu1_{i}"), json!(m)));
                    }
                    let borrowed: Vec<(&str, Value)> =
                        pairs.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
                    row(&borrowed)
                })
                .collect();
            doc.checks = rep.checks;
            Ok(doc)
        }
        Command::ShapeDeriv { a, b, n, r, index } => {
            let mut doc = Document::new("shape-deriv", cfg);
            match (a, b, n, r) {
                (Some(a), Some(b), None, None) => {
                    let iv = Interval1D::new(*a, *b)?;
                    let sd = shape_derivative_1d(&iv, cfg.tol)?;
                    doc.results = vec![row(&[
                        ("a", json!(a)),
                        ("b", json!(b)),
                        ("formula", json!(sd.formula)),
                        ("finite_difference", json!(sd.fd)),
                    ])];
                    let rel = (sd.formula - sd.fd).abs() / sd.fd.abs().max(1e-8);
                    doc.checks =
                        vec![Check::le("formula matches finite difference", rel, 1e-4, 0.0)];
                }
                (None, None, Some(n), Some(r)) => {
                    let sd = shape_derivative_radial(*n, *r, *index, cfg.tol)?;
                    doc.results = vec![row(&[
                        ("N", json!(n)),
                        ("R", json!(r)),
                        ("index", json!(index)),
                        ("formula", json!(sd.formula)),
                        ("finite_difference", json!(sd.fd)),
                    ])];
                    let rel = (sd.formula - sd.fd).abs() / sd.fd.abs().max(1e-8);
                    doc.checks = vec![
                        Check::le("formula matches finite difference", rel, 1e-4, 0.0),
                        Check::lt("derivative strictly negative", sd.formula, 0.0, 0.0),
                    ];
                }
                (None, None, None, None) => {
                    doc.checks = verify::shape_derivative_checks(cfg.tol, cfg.seed)?;
                }
                _ => {
                    return Err(Failure::Usage(
                        "pass --a with --b (interval), or --N with --R (ball), or neither \
                         for the randomized sweep"
                            .into(),
                    ));
                }
            }
            Ok(doc)
        }
        Command::VerifyAll => {
            let mut doc = Document::new("verify-all", cfg);
            let table = verify::criterion_table(cfg.tol, cfg.seed);
            let results: Vec<verify::CriterionResult> = pool(cfg)?.install(|| {
                table
                    .into_par_iter()
                    .map(|(index, name, job)| {
                        let res = verify::finish_criterion(index, name, job());
                        eprintln!(
                            "criterion {:>2} [{}] {}",
                            res.index,
                            if res.pass { "PASS" } else { "FAIL" },
                            res.name
                        );
                        res
                    })
                    .collect()
            });
            for cr in &results {
                doc.results.push(row(&[
                    ("index", json!(cr.index)),
                    ("name", json!(cr.name)),
                    ("pass", json!(cr.pass)),
                    ("checks_passed", json!(cr.checks.iter().filter(|c| c.pass).count())),
                    ("checks_total", json!(cr.checks.len())),
                ]));
                for c in &cr.checks {
                    let mut c = c.clone();
                    c.name = format!("[{:02}] {}", cr.index, c.name);
                    doc.checks.push(c);
                }
            }
            Ok(doc)
        }
    }
}
