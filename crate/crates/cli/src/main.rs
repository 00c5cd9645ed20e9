//! Command-line surface for the exact jet engine.
//!
//! Invariants owned here:
//!
//! - exit codes: 0 on success, 1 when a mathematical invariant fails, 2 on
//!   bad input (malformed files, impossible requests, usage errors),
//! - anything machine-readable goes to stdout and is byte-stable across
//!   runs; human commentary goes to stderr,
//! - input files are read and validated before any computation starts,
//! - `FLATJET_JOBS` caps the worker pool used for the per-degree solves.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use flatjet::{
    build_certificate, classify, dbar_apply, default_boundary, from_wirtinger, io, separable_sum,
    solve_boundary_problem, to_wirtinger, CertificateError, DiffOperator, EllipticityVerdict, Jet,
    MultiIndex, Scalar, SolutionClass, SolverConfig, SolverError,
};
use flatjet_demos::{cauchy_transform, support_demo, AnnulusDatum, Complex64};

#[derive(Parser)]
#[command(name = "flatjet", version, about = "Exact jet engine for elliptic boundary problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report ellipticity and the canonical form of an operator file.
    Check {
        operator: PathBuf,
        /// Sample density per axis for the symbol screen.
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Solve one boundary problem and print the solution jet.
    Uk {
        operator: PathBuf,
        /// Boundary degree; with the default boundary this solves for x1^k.
        #[arg(long)]
        k: usize,
        /// Truncation degree to work at.
        #[arg(long = "N")]
        trunc: usize,
        /// Boundary polynomial: "default" or a path to a jet JSON file.
        #[arg(long, default_value = "default")]
        pk: String,
        /// Print the whole iteration trace instead of just the solution.
        #[arg(long)]
        trace: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a divergence certificate and emit it as JSON.
    Certify {
        operator: PathBuf,
        /// Highest boundary degree to include.
        #[arg(long = "K")]
        k_max: usize,
        /// Truncation degree to work at.
        #[arg(long = "N")]
        trunc: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the Cauchy-Riemann certificate, classify its series, and build
    /// the separable two-variable counterpart.
    DbarDemo {
        #[arg(long = "K", default_value_t = 6)]
        k_max: usize,
        #[arg(long = "N", default_value_t = 8)]
        trunc: usize,
    },
    /// Solve a one-variable problem file and print the solution jet.
    Ode1d { problem: PathBuf },
    /// Sample the Cauchy transform of the annulus datum and report where
    /// the solution lives.
    CauchyDemo {
        #[arg(long, default_value_t = 32)]
        resolution: usize,
        /// Largest acceptable disagreement under grid refinement.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Also write the sampled grid as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Time dense jet multiplication.
    Bench {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long = "N", default_value_t = 10)]
        trunc: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

enum CliError {
    /// Bad file, malformed content, or an impossible request. Exit 2.
    Input(String),
    /// A mathematical invariant failed to hold. Exit 1.
    Invariant(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Invariant(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::Invariant(msg) => write!(f, "invariant failed: {msg}"),
        }
    }
}

fn input(msg: impl ToString) -> CliError {
    CliError::Input(msg.to_string())
}

fn invariant(msg: impl ToString) -> CliError {
    CliError::Invariant(msg.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_jobs().and_then(|()| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn configure_jobs() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("FLATJET_JOBS") else {
        return Ok(());
    };
    let jobs: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| input(format!("FLATJET_JOBS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|err| input(format!("worker pool: {err}")))
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Check { operator, samples } => check(&operator, samples),
        Command::Uk {
            operator,
            k,
            trunc,
            pk,
            trace,
            output,
        } => uk(&operator, k, trunc, &pk, trace, output.as_deref()),
        Command::Certify {
            operator,
            k_max,
            trunc,
            output,
        } => certify(&operator, k_max, trunc, output.as_deref()),
        Command::DbarDemo { k_max, trunc } => dbar_demo(k_max, trunc),
        Command::Ode1d { problem } => ode1d(&problem),
        Command::CauchyDemo {
            resolution,
            tol,
            csv,
        } => cauchy_demo(resolution, tol, csv.as_deref()),
        Command::Bench { dim, trunc, reps } => bench(dim, trunc, reps),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|err| input(format!("{}: {err}", path.display())))
}

fn load_operator(path: &Path) -> Result<DiffOperator, CliError> {
    io::operator_from_json(&read_file(path)?)
        .map_err(|err| input(format!("{}: {err}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text)
            .map_err(|err| input(format!("{}: {err}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Renders a jet as a readable polynomial, variables named by `var`.
fn pretty_jet(jet: &Jet, var: &dyn Fn(usize) -> String) -> String {
    if jet.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (gamma, coeff) in jet.terms() {
        let mono = gamma
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| {
                if e == 1 {
                    var(j)
                } else {
                    format!("{}^{e}", var(j))
                }
            })
            .collect::<Vec<_>>()
            .join(" ");
        let cs = coeff.to_string();
        let piece = if mono.is_empty() {
            cs
        } else if cs == "1" {
            mono
        } else if cs == "-1" {
            format!("-{mono}")
        } else if cs[1..].contains(['+', '-']) {
            format!("({cs}) {mono}")
        } else {
            format!("{cs} {mono}")
        };
        if out.is_empty() {
            out = piece;
        } else if let Some(rest) = piece.strip_prefix('-') {
            let _ = write!(out, " - {rest}");
        } else {
            let _ = write!(out, " + {piece}");
        }
    }
    out
}

fn real_var(j: usize) -> String {
    format!("x{}", j + 1)
}

fn paired_var(j: usize) -> String {
    if j % 2 == 0 {
        format!("z{}", j / 2 + 1)
    } else {
        format!("zb{}", j / 2 + 1)
    }
}

fn check(path: &Path, samples: usize) -> Result<(), CliError> {
    let op = load_operator(path)?;
    println!(
        "operator: dim {}, order {}, trunc degree {}, {} terms",
        op.dim(),
        op.order(),
        op.trunc_degree(),
        op.terms().count()
    );
    println!("digest: {}", io::operator_digest(&op));
    if samples < 2 {
        return Err(input("--samples must be at least 2"));
    }
    let report = op.ellipticity_check(samples);
    match &report.verdict {
        EllipticityVerdict::Passed => println!(
            "ellipticity: passed on {} sampled directions (sampled only, not a proof)",
            report.directions.len()
        ),
        EllipticityVerdict::Failed { direction } => {
            println!(
                "ellipticity: FAILED, symbol vanishes along {}",
                flatjet::format_direction(direction)
            );
            return Err(invariant("operator is not elliptic on the sampled grid"));
        }
    }
    let canon = op
        .canonical_form()
        .map_err(|err| invariant(format!("canonical form: {err}")))?;
    println!("canonical form: D^{} - remainder, remainder terms:", canon.beta());
    if canon.remainder().count() == 0 {
        println!("  (none; operator is a pure last-variable derivative)");
    }
    for (alpha, coeff) in canon.remainder() {
        println!("  D^{alpha}: {}", pretty_jet(coeff, &real_var));
    }
    Ok(())
}

fn map_solver_error(err: SolverError) -> CliError {
    match err {
        SolverError::NotStabilized { .. } => invariant(err),
        _ => input(err),
    }
}

fn uk(
    path: &Path,
    k: usize,
    trunc: usize,
    pk: &str,
    trace: bool,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let op = load_operator(path)?;
    let boundary = if pk == "default" {
        if op.dim() < 2 {
            return Err(input(
                "the default boundary needs dimension >= 2; supply --pk <file>",
            ));
        }
        default_boundary(k, op.dim())
    } else {
        let jet = io::jet_from_json(&read_file(Path::new(pk))?)
            .map_err(|err| input(format!("{pk}: {err}")))?;
        if jet.dim() != op.dim() {
            return Err(input(format!(
                "boundary dimension {} does not match operator dimension {}",
                jet.dim(),
                op.dim()
            )));
        }
        jet
    };
    let cfg = SolverConfig::new(trunc);
    let solution = solve_boundary_problem(&op, &boundary, &cfg).map_err(map_solver_error)?;
    eprintln!(
        "stabilized after {} iteration(s); u = {}",
        solution.trace.stabilized_at,
        pretty_jet(&solution.u, &real_var)
    );
    let text = if trace {
        io::trace_to_json(&solution.trace)
    } else {
        io::jet_to_json(&solution.u)
    };
    write_output(output, &text)
}

fn map_certificate_error(err: CertificateError) -> CliError {
    match err {
        CertificateError::DegreeBudget { .. }
        | CertificateError::NoBoundaries
        | CertificateError::ZeroBoundary { .. }
        | CertificateError::BoundaryDegree { .. } => input(err),
        _ => invariant(err),
    }
}

fn certify(
    path: &Path,
    k_max: usize,
    trunc: usize,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let op = load_operator(path)?;
    let cert = build_certificate(&op, k_max, &SolverConfig::new(trunc))
        .map_err(map_certificate_error)?;
    cert.verify(&op)
        .map_err(|err| invariant(format!("emission refused: {err}")))?;
    let text = io::certificate_to_json(&cert).map_err(invariant)?;
    eprintln!(
        "certificate: K={}, N={}, flat through degree {}, baire point ({})",
        cert.k_max,
        cert.trunc_degree,
        cert.flatness_through_degree,
        cert.baire
            .coords
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    write_output(output, &text)
}

fn cauchy_riemann_operator(trunc: usize) -> DiffOperator {
    DiffOperator::new(
        2,
        1,
        [
            (MultiIndex::new(vec![1, 0]), Jet::one(2, trunc)),
            (
                MultiIndex::new(vec![0, 1]),
                Jet::constant(2, trunc, Scalar::i()),
            ),
        ],
    )
    .expect("fixed well-formed operator")
}

fn dbar_demo(k_max: usize, trunc: usize) -> Result<(), CliError> {
    let op = cauchy_riemann_operator(trunc);
    let cert = build_certificate(&op, k_max, &SolverConfig::new(trunc))
        .map_err(map_certificate_error)?;
    println!(
        "certificate: K={}, N={}, digest {}",
        cert.k_max,
        cert.trunc_degree,
        &cert.operator_digest[..12]
    );
    let series = to_wirtinger(&cert.series).map_err(invariant)?;
    let class = classify(&cert.series).map_err(invariant)?;
    println!("series in complex coordinates: {}", pretty_jet(series.jet(), &paired_var));
    match class {
        SolutionClass::FormallyHolomorphic => println!("classification: formally holomorphic"),
        SolutionClass::Flat => return Err(invariant("series collapsed to the zero jet")),
        SolutionClass::Mixed { order } => {
            return Err(invariant(format!(
                "series has a barred monomial at degree {order}"
            )))
        }
    }
    let spread = separable_sum(&series, 2).map_err(invariant)?;
    println!(
        "separable two-variable series: {}",
        pretty_jet(spread.jet(), &paired_var)
    );
    let form = dbar_apply(&from_wirtinger(&spread)).map_err(invariant)?;
    if !form.is_zero() {
        return Err(invariant("spread series has a nonzero d-bar component"));
    }
    println!(
        "d-bar components: all zero through reliable degree (both variables)"
    );
    Ok(())
}

fn ode1d(path: &Path) -> Result<(), CliError> {
    let problem = io::ode_problem_from_json(&read_file(path)?)
        .map_err(|err| input(format!("{}: {err}", path.display())))?;
    let solution = problem.solve();
    eprintln!("f = {}", pretty_jet(&solution, &|_| "x".into()));
    print!("{}", io::jet_to_json(&solution));
    Ok(())
}

fn cauchy_demo(resolution: usize, tol: f64, csv: Option<&Path>) -> Result<(), CliError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(input(format!("--tol must be positive and finite, got {tol}")));
    }
    let datum = AnnulusDatum::new(1.0, resolution).map_err(input)?;
    let report = support_demo(&datum);
    println!("{report}");
    println!();
    println!("{:>6} {:>6} {:>14} {:>14} {:>12}", "x", "y", "re u", "im u", "|u|");
    let mut csv_text = String::from("x,y,re,im,abs\n");
    for &(x, y) in &[
        (0.0, 0.0),
        (0.5, 0.0),
        (0.0, 0.7),
        (1.0, 0.0),
        (1.2, 0.1),
        (1.4, 0.0),
        (2.0, 0.0),
        (0.0, 3.0),
    ] {
        let u = cauchy_transform(&datum, Complex64::new(x, y), resolution);
        println!(
            "{x:>6.2} {y:>6.2} {:>14.6e} {:>14.6e} {:>12.6e}",
            u.re,
            u.im,
            u.norm()
        );
        let _ = writeln!(csv_text, "{x},{y},{:e},{:e},{:e}", u.re, u.im, u.norm());
    }
    if let Some(path) = csv {
        std::fs::write(path, csv_text)
            .map_err(|err| input(format!("{}: {err}", path.display())))?;
    }
    if !report.hole_nonzero {
        return Err(invariant(
            "transform vanished inside the hole; it must not",
        ));
    }
    if let Some(&last) = report.refinement_deltas.last() {
        if last > tol {
            return Err(invariant(format!(
                "refinement disagreement {last:.3e} exceeds tolerance {tol:.3e}; raise --resolution"
            )));
        }
    }
    Ok(())
}

/// Dense jet with every monomial of degree <= trunc populated by a small
/// deterministic Gaussian rational; exercises the same big-rational paths
/// as real workloads without a randomness dependency.
fn dense_jet(dim: usize, trunc: usize, salt: u64) -> Jet {
    let mut exponents = vec![0usize; dim];
    let mut terms = Vec::new();
    loop {
        let mut h = salt;
        for &e in &exponents {
            h = h.wrapping_mul(6364136223846793005).wrapping_add(e as u64 + 1442695040888963407);
        }
        let re_num = (h % 13) as i64 - 6;
        let im_num = ((h >> 17) % 11) as i64 - 5;
        let den = (1 + (h >> 31) % 7) as i64;
        let coeff =
            Scalar::from_ratio(re_num, den) + Scalar::from_ratio(im_num, den) * Scalar::i();
        terms.push((MultiIndex::new(exponents.clone()), coeff));
        // Odometer over exponent vectors with total degree <= trunc.
        let mut pos = 0;
        loop {
            if pos == dim {
                let jet = Jet::from_terms(dim, trunc, terms).expect("in-budget terms");
                assert!(!jet.is_zero(), "salt produced the zero jet");
                return jet;
            }
            exponents[pos] += 1;
            if exponents.iter().sum::<usize>() <= trunc {
                break;
            }
            exponents[pos] = 0;
            pos += 1;
        }
    }
}

fn bench(dim: usize, trunc: usize, reps: usize) -> Result<(), CliError> {
    if dim == 0 || reps == 0 {
        return Err(input("--dim and --reps must be positive"));
    }
    let a = dense_jet(dim, trunc, 0x5eed);
    let b = dense_jet(dim, trunc, 0xfeed);
    eprintln!(
        "multiplying dense jets: dim {dim}, trunc degree {trunc}, {} x {} terms, {reps} reps",
        a.num_terms(),
        b.num_terms()
    );
    let start = std::time::Instant::now();
    let mut product_terms = 0;
    for _ in 0..reps {
        let product = a.mul(&b).expect("matching dimensions");
        product_terms = product.num_terms();
    }
    let elapsed = start.elapsed();
    println!(
        "product terms: {product_terms}; total {:.3} ms; per multiply {:.3} ms",
        elapsed.as_secs_f64() * 1e3,
        elapsed.as_secs_f64() * 1e3 / reps as f64
    );
    Ok(())
}
