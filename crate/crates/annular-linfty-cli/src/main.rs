//! Command-line front end: compute the transferred operations on annular
//! Khovanov homology, run the identity suites on a diagram, compare two
//! diagrams, and self-test the combinatorial kernels against independent
//! oracles. Exit codes are fixed for scripting: 0 success, 1 input error,
//! 2 capacity exceeded, 3 mismatch (a violated identity or an unequal
//! comparison).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use annular_linfty::akh::{compute_akh, dg_algebra_ops, invariance_report, verify_diagram};
use annular_linfty::diagram::AnnularDiagram;
use annular_linfty::homology::{check_side_conditions, PivotStrategy};
use annular_linfty::lie::{builtin_algebra, dg_contraction, BuiltinAlgebra};
use annular_linfty::linfty::{compositions, sorted_compositions, transfer_module, unshuffles};
use annular_linfty::testing::{random_contraction, random_strict_module, TestRng};
use annular_linfty::Error;

#[derive(Parser)]
#[command(name = "annular-linfty", version, about = "Annular Khovanov homology as an L-infinity module over sl2-wedge, over GF(2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest operation arity computed and checked.
    #[arg(long = "n-max", global = true, default_value_t = 4)]
    n_max: usize,

    /// Generator-slot budget for cube enumeration.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    budget: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads; falls back to ANNULAR_LINFTY_JOBS, then all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Pivot order used when contracting the complex onto homology.
    #[arg(long, global = true, value_enum, default_value_t = Pivot::Canonical)]
    pivot: Pivot,

    /// Allow an arity beyond the built-in cap of 6.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the transferred module structure for one diagram.
    Compute {
        /// APD diagram file.
        file: PathBuf,
    },
    /// Run every operator identity and relation check on one diagram.
    Verify {
        /// APD diagram file.
        file: PathBuf,
    },
    /// Compare the transferred structures of two diagrams.
    Compare {
        /// First APD diagram file.
        a: PathBuf,
        /// Second APD diagram file.
        b: PathBuf,
    },
    /// Check the Lie tables, unshuffle enumeration, and module transfer
    /// against independently coded oracles.
    Selftest {
        /// Emit the bracket tables of the built-in algebras as JSON and exit.
        #[arg(long)]
        dump_tables: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pivot {
    Canonical,
    Reverse,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::MalformedInput(_)
            | Error::InvalidDiagram(_)
            | Error::AxisThroughCrossing { .. } => 1,
            Error::CapacityExceeded { .. } => 2,
            Error::GradingLeak(_)
            | Error::ContractionInvalid(_)
            | Error::NotADifferential(_) => 3,
        };
        Failure { code, message: err.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if cli.n_max < 2 {
        return Err(Failure::input("--n-max must be at least 2"));
    }
    if cli.n_max > 6 && !cli.force {
        return Err(Failure::input(format!(
            "--n-max {} exceeds the cap of 6; pass --force to go higher",
            cli.n_max
        )));
    }
    if cli.budget == 0 {
        return Err(Failure::input("--budget must be positive"));
    }
    configure_jobs(cli.jobs)?;
    let pivot = match cli.pivot {
        Pivot::Canonical => PivotStrategy::Canonical,
        Pivot::Reverse => PivotStrategy::Reverse,
    };
    match &cli.command {
        Command::Compute { file } => {
            let diagram = load(file)?;
            let result = compute_akh(&diagram, cli.n_max, cli.budget, pivot)?;
            emit(cli.format, || result.to_json(), || result.to_text());
            Ok(0)
        }
        Command::Verify { file } => {
            let diagram = load(file)?;
            let report = verify_diagram(&diagram, cli.n_max, cli.budget)?;
            emit(cli.format, || report.to_json(), || report.to_text());
            Ok(if report.all_pass() { 0 } else { 3 })
        }
        Command::Compare { a, b } => {
            let first = load(a)?;
            let second = load(b)?;
            let report = invariance_report(&first, &second, cli.n_max, cli.budget)?;
            emit(cli.format, || report.to_json(), || report.to_text());
            Ok(if report.agree { 0 } else { 3 })
        }
        Command::Selftest { dump_tables } => {
            if *dump_tables {
                put(&format!("{}\n", bracket_tables_json()));
                Ok(0)
            } else {
                selftest(cli.n_max, cli.format)
            }
        }
    }
}

fn load(path: &PathBuf) -> Result<AnnularDiagram, Failure> {
    Ok(AnnularDiagram::from_path(path)?)
}

/// Write to stdout, exiting quietly if the reader closed the pipe.
fn put(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).is_err() || out.flush().is_err() {
        std::process::exit(0);
    }
}

fn emit(format: Format, json: impl FnOnce() -> String, text: impl FnOnce() -> String) {
    match format {
        Format::Json => put(&format!("{}\n", json())),
        Format::Text => put(&text()),
    }
}

fn configure_jobs(flag: Option<usize>) -> Result<(), Failure> {
    let jobs = match flag {
        Some(j) => Some(j),
        None => match std::env::var("ANNULAR_LINFTY_JOBS") {
            Ok(text) => Some(text.parse::<usize>().map_err(|_| {
                Failure::input(format!("ANNULAR_LINFTY_JOBS is not a thread count: {text:?}"))
            })?),
            Err(_) => None,
        },
    };
    if let Some(jobs) = jobs {
        if jobs == 0 {
            return Err(Failure::input("--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::input(format!("thread pool: {e}")))?;
    }
    Ok(())
}

const BUILTINS: [BuiltinAlgebra; 4] = [
    BuiltinAlgebra::Sl2,
    BuiltinAlgebra::Sl2Wedge,
    BuiltinAlgebra::Sl2WedgeDg,
    BuiltinAlgebra::Sl2WedgeDgHomology,
];

fn bracket_tables_json() -> String {
    let tables: Vec<serde_json::Value> =
        BUILTINS.iter().map(|&which| builtin_algebra(which).bracket_table()).collect();
    serde_json::to_string_pretty(&serde_json::json!({ "algebras": tables }))
        .expect("tables serialize")
}

struct Check {
    name: &'static str,
    identities: usize,
    pass: bool,
}

fn selftest(n_max: usize, format: Format) -> Result<u8, Failure> {
    let mut checks = Vec::new();

    // Jacobi identity on every built-in bracket table, all basis triples.
    let mut identities = 0;
    let mut pass = true;
    for &which in &BUILTINS {
        let alg = builtin_algebra(which);
        let d = alg.dim();
        identities += d * (d + 1) * (d + 2) / 6;
        pass &= alg.jacobi_violations().is_empty();
    }
    checks.push(Check { name: "jacobi identity on built-in algebras", identities, pass });

    // The packaged contraction of the dg algebra onto its homology.
    let c = dg_contraction();
    let pass = c.differential.mul(&c.differential).is_zero()
        && check_side_conditions(&c.differential, &c.inclusion, &c.projection, &c.homotopy)
            .is_ok()
        && c.projection.mul(&c.differential).is_zero()
        && c.differential.mul(&c.inclusion).is_zero();
    checks.push(Check { name: "dg contraction side conditions", identities: 8, pass });

    // The bracket induced on homology agrees with the built-in table.
    let mut identities = 0;
    let mut pass = true;
    for i in 0..c.small.dim() {
        for j in i..c.small.dim() {
            let upstairs = c.big.bracket_vec(&c.inclusion.column(i), &c.inclusion.column(j));
            pass &= c.projection.mul_vec(&upstairs) == *c.small.bracket_basis(i, j);
            identities += 1;
        }
    }
    checks.push(Check { name: "induced bracket on homology", identities, pass });

    // Unshuffle enumeration against factorial arithmetic.
    let mut identities = 0;
    let mut pass = true;
    for a in 0..=4usize {
        for b in 0..=4usize {
            pass &= unshuffles(&[a, b]).len() as u128 == binomial(a + b, a);
            identities += 1;
        }
    }
    for a in 0..=3usize {
        for b in 0..=3usize {
            for c in 0..=3usize {
                let expect = binomial(a + b + c, a) * binomial(b + c, b);
                pass &= unshuffles(&[a, b, c]).len() as u128 == expect;
                identities += 1;
            }
        }
    }
    for n in 1..=10usize {
        pass &= compositions(n).len() == 1 << (n - 1);
        identities += 1;
    }
    // partition numbers p(1)..p(10)
    for (n, expect) in [1usize, 2, 3, 5, 7, 11, 15, 22, 30, 42].into_iter().enumerate() {
        pass &= sorted_compositions(n + 1).len() == expect;
        identities += 1;
    }
    checks.push(Check { name: "unshuffle and composition counts", identities, pass });

    // Module transfer at micro scale against the arity-3 closed form
    // q k2(a, T k2(b, i -)) + q k2(b, T k2(a, i -)).
    let algebra = dg_algebra_ops();
    let basis = algebra.dim();
    let mut rng = TestRng::new(0x5e1f_7e57);
    let mut identities = 0;
    let mut pass = true;
    for _ in 0..20 {
        let dim = 2 + rng.below(5);
        let contraction = random_contraction(&mut rng, dim);
        let module =
            random_strict_module(&mut rng, algebra.clone(), contraction.differential.clone());
        let (small, _) = transfer_module(&module, &contraction, n_max)?;
        for a in 0..basis as u8 {
            for b in a..basis as u8 {
                let one_way = |x: u8, y: u8| {
                    contraction
                        .projection
                        .mul(&module.k(&[x]))
                        .mul(&contraction.homotopy)
                        .mul(&module.k(&[y]))
                        .mul(&contraction.inclusion)
                };
                pass &= small.k(&[a, b]) == one_way(a, b).add(&one_way(b, a));
                identities += 1;
            }
        }
    }
    checks.push(Check { name: "module transfer closed form at arity 3", identities, pass });

    let all_pass = checks.iter().all(|c| c.pass);
    let total: usize = checks.iter().map(|c| c.identities).sum();
    match format {
        Format::Json => {
            let items: Vec<serde_json::Value> = checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "name": c.name, "identities": c.identities, "pass": c.pass,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "checks": items,
                "identities_checked": total,
                "all_pass": all_pass,
            });
            put(&format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("report serializes")
            ));
        }
        Format::Text => {
            let mut out = String::new();
            for c in &checks {
                let mark = if c.pass { "ok " } else { "FAIL" };
                out.push_str(&format!("{mark} {} ({} identities)\n", c.name, c.identities));
            }
            out.push_str(&format!(
                "{} checks, {} identities, {}\n",
                checks.len(),
                total,
                if all_pass { "all passed" } else { "FAILURES above" }
            ));
            put(&out);
        }
    }
    Ok(if all_pass { 0 } else { 3 })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut out: u128 = 1;
    for i in 0..k.min(n - k) {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out
}
