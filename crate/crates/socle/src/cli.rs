//! Command-line front end.
//!
//! Every subcommand reads elements and forms in the wire formats from
//! [`crate::json`], emits one JSON report (CSV for grid scans) on
//! stdout, and maps error classes to distinct exit codes:
//!
//! * 0 success
//! * 1 suite failure
//! * 2 schema or input problems (bad JSON, invalid form, mismatched algebras)
//! * 3 numerical failure (non-finite data, no witness, ill conditioning)
//! * 4 separation inputs equal within tolerance
//! * 5 reconstruction failure
//! * 6 counterexample found by a check
//!
//! Flags mirror environment variables with the SOCLE_ prefix; a flag on
//! the command line wins over its variable. The same seed and inputs
//! always produce byte-identical output.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{AlgebraElement, BlockAlgebra, Tolerances};
use crate::checks::{builtin_map, pencil_condition_check, CheckReport, BUILTIN_FAMILIES};
use crate::error::{Error, Result};
use crate::json::{self, ElementJson, SCHEMA_VERSION};
use crate::mat::C64;
use crate::pencil::pencil_roots;
use crate::preserver::{reconstruct_pair, BlackBoxMap};
use crate::rank::{classical_rank_oracle, spectral_rank, trace};
use crate::separation::{separate_any, separate_invertible, separate_rank_one, SeparationWitness};
use crate::spectrum::{spectrum, Spectrum};
use crate::suite::{run_suites, CORRUPT_HOOK_ENV};

#[derive(Parser)]
#[command(
    name = "socle",
    version,
    about = "Spectral rank, linear pencils, separation witnesses, and preserver reconstruction \
             over direct sums of complex matrix blocks"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every randomized procedure.
    #[arg(long, global = true, env = "SOCLE_SEED", default_value_t = 0)]
    seed: u64,

    /// Trial budget for randomized checks and suites.
    #[arg(long, global = true, env = "SOCLE_TRIALS", default_value_t = 256)]
    trials: usize,

    /// Relative smallest-singular-value threshold for the singular verdict.
    #[arg(long, global = true, env = "SOCLE_SINGULAR_TOL")]
    singular_tol: Option<f64>,

    /// Relative width of the ambiguous verdict band.
    #[arg(long, global = true, env = "SOCLE_AMBIGUITY_BAND")]
    ambiguity_band: Option<f64>,

    /// Radius for merging nearby eigenvalues into one spectrum entry.
    #[arg(long, global = true, env = "SOCLE_CLUSTER_TOL")]
    cluster_tol: Option<f64>,

    /// Block dimensions for synthesized data, comma separated (e.g. "2,3,2").
    /// Inputs read from files carry their own dimensions.
    #[arg(long, global = true, env = "SOCLE_ALGEBRA", default_value = "2,3")]
    algebra: String,
}

#[derive(Subcommand)]
enum Command {
    /// Rank of an element, with the elimination oracle alongside.
    Rank { element: PathBuf },
    /// Trace as the multiplicity-weighted sum of the spectrum.
    Trace { element: PathBuf },
    /// Clustered eigenvalue multiset of an element.
    Spectrum { element: PathBuf },
    /// The pencil lambda*x + y: root set or singular-value grid.
    Pencil {
        x: PathBuf,
        y: PathBuf,
        /// Report the finite set of lambda where the pencil is singular.
        #[arg(long)]
        roots: bool,
        /// Emit a CSV scan of sigma_min(lambda*x + y) over a square window.
        #[arg(long)]
        grid: bool,
        /// Half-width of the grid window, centered on the origin.
        #[arg(long, default_value_t = 2.0)]
        grid_radius: f64,
        /// Grid points per axis.
        #[arg(long, default_value_t = 41)]
        grid_steps: usize,
    },
    /// Produce an element whose verdict splits two given elements.
    Separate {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Any)]
        mode: ModeArg,
    },
    /// Synthesize, check, or reconstruct invertibility preservers.
    Preserver {
        /// Validate a form file and emit its canonical JSON.
        #[arg(long, value_name = "FORM_FILE")]
        synth: Option<PathBuf>,
        /// Probe a pair of maps against the two-sided pencil condition.
        /// Each spec is a built-in family name or a form file path.
        #[arg(long, num_args = 2, value_names = ["PHI", "PSI"])]
        check: Option<Vec<String>>,
        /// Recover the canonical form of a pair of maps.
        #[arg(long, num_args = 2, value_names = ["PHI", "PSI"])]
        reconstruct: Option<Vec<String>>,
    },
    /// Run seeded invariant suites and summarize pass/fail per case.
    Suite {
        #[arg(long, value_parser = ["core", "rank", "separation", "preserver", "all"],
              default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Any,
    Invertible,
    Rank1,
}

/// Exit code for an error, one code per error class.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Schema(_)
        | Error::Json(_)
        | Error::Io(_)
        | Error::InvalidForm(_)
        | Error::AlgebraMismatch(..) => 2,
        Error::NonFinite { .. }
        | Error::NotInvertible { .. }
        | Error::ConvergenceFailure { .. }
        | Error::GenerationFailure { .. }
        | Error::DegenerateTrial { .. }
        | Error::WitnessNotFound { .. }
        | Error::NotMaximalFiniteRank { .. }
        | Error::IllConditioned { .. } => 3,
        Error::InputsEqual { .. } => 4,
        Error::NotUnital { .. }
        | Error::PermutationAmbiguous(_)
        | Error::NeitherMultiplicativeNorAnti { .. }
        | Error::SimilarityInconsistent { .. }
        | Error::SecondMapDisagrees { .. }
        | Error::ReassemblyMismatch { .. } => 5,
    }
}

pub fn run() -> u8 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

struct Ctx {
    tol: Tolerances,
    seed: u64,
    trials: usize,
    algebra: BlockAlgebra,
}

fn dispatch(cli: &Cli) -> Result<u8> {
    if cli.trials == 0 {
        return Err(Error::Schema("trials must be at least 1".into()));
    }
    let mut tol = Tolerances::default();
    if let Some(v) = cli.singular_tol {
        tol.singular_tol = v;
    }
    if let Some(v) = cli.ambiguity_band {
        tol.ambiguity_band = v;
    }
    if let Some(v) = cli.cluster_tol {
        tol.cluster_tol = v;
    }
    if !(tol.singular_tol > 0.0 && tol.ambiguity_band >= tol.singular_tol && tol.cluster_tol > 0.0)
    {
        return Err(Error::Schema(format!(
            "tolerances must satisfy 0 < singular_tol <= ambiguity_band and cluster_tol > 0 \
             (got {:.3e}, {:.3e}, {:.3e})",
            tol.singular_tol, tol.ambiguity_band, tol.cluster_tol
        )));
    }
    let ctx = Ctx {
        tol,
        seed: cli.seed,
        trials: cli.trials,
        algebra: parse_algebra(&cli.algebra)?,
    };
    match &cli.command {
        Command::Rank { element } => cmd_rank(&ctx, element),
        Command::Trace { element } => cmd_trace(&ctx, element),
        Command::Spectrum { element } => cmd_spectrum(&ctx, element),
        Command::Pencil { x, y, roots, grid, grid_radius, grid_steps } => {
            cmd_pencil(&ctx, x, y, *roots, *grid, *grid_radius, *grid_steps)
        }
        Command::Separate { a, b, mode } => cmd_separate(&ctx, a, b, *mode),
        Command::Preserver { synth, check, reconstruct } => {
            cmd_preserver(&ctx, synth.as_deref(), check.as_deref(), reconstruct.as_deref())
        }
        Command::Suite { suite } => cmd_suite(&ctx, suite),
    }
}

fn parse_algebra(s: &str) -> Result<BlockAlgebra> {
    let dims = s
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::Schema(format!("bad block dimension '{part}' in '{s}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    BlockAlgebra::new(dims)
}

fn load_element(path: &Path) -> Result<AlgebraElement> {
    json::element_from_str(&std::fs::read_to_string(path)?)
}

fn emit<T: Serialize>(report: &T) {
    println!("{}", serde_json::to_string(report).expect("report serialization cannot fail"));
}

fn complex_pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Serialize)]
struct SpectrumEntryOut {
    value: [f64; 2],
    multiplicity: usize,
}

fn spectrum_entries(s: &Spectrum) -> Vec<SpectrumEntryOut> {
    s.entries()
        .iter()
        .map(|&(z, m)| SpectrumEntryOut { value: complex_pair(z), multiplicity: m })
        .collect()
}

fn cmd_rank(ctx: &Ctx, path: &Path) -> Result<u8> {
    let x = load_element(path)?;
    let report = spectral_rank(&x, &ctx.tol, 8, ctx.seed)?;
    #[derive(Serialize)]
    struct Out {
        schema: u32,
        block_dims: Vec<usize>,
        rank: usize,
        classical_rank: usize,
        per_trial: Vec<usize>,
        resamples: usize,
    }
    emit(&Out {
        schema: SCHEMA_VERSION,
        block_dims: x.algebra().block_dims().to_vec(),
        rank: report.rank,
        classical_rank: classical_rank_oracle(&x, &ctx.tol),
        per_trial: report.per_trial,
        resamples: report.resamples,
    });
    Ok(0)
}

fn cmd_trace(ctx: &Ctx, path: &Path) -> Result<u8> {
    let x = load_element(path)?;
    let tr = trace(&x, &ctx.tol)?;
    #[derive(Serialize)]
    struct Out {
        schema: u32,
        block_dims: Vec<usize>,
        trace: [f64; 2],
        diagonal_sum: [f64; 2],
    }
    emit(&Out {
        schema: SCHEMA_VERSION,
        block_dims: x.algebra().block_dims().to_vec(),
        trace: complex_pair(tr),
        diagonal_sum: complex_pair(x.diagonal_sum()),
    });
    Ok(0)
}

fn cmd_spectrum(ctx: &Ctx, path: &Path) -> Result<u8> {
    let x = load_element(path)?;
    let s = spectrum(&x, &ctx.tol)?;
    #[derive(Serialize)]
    struct Out {
        schema: u32,
        block_dims: Vec<usize>,
        entries: Vec<SpectrumEntryOut>,
        spectral_radius: f64,
    }
    emit(&Out {
        schema: SCHEMA_VERSION,
        block_dims: x.algebra().block_dims().to_vec(),
        entries: spectrum_entries(&s),
        spectral_radius: s.spectral_radius(),
    });
    Ok(0)
}

fn cmd_pencil(
    ctx: &Ctx,
    x_path: &Path,
    y_path: &Path,
    roots: bool,
    grid: bool,
    grid_radius: f64,
    grid_steps: usize,
) -> Result<u8> {
    if roots == grid {
        return Err(Error::Schema("pass exactly one of --roots or --grid".into()));
    }
    let x = load_element(x_path)?;
    let y = load_element(y_path)?;
    if x.algebra().block_dims() != y.algebra().block_dims() {
        return Err(Error::AlgebraMismatch(x.algebra().describe(), y.algebra().describe()));
    }
    if roots {
        let r = pencil_roots(&x, &y, &ctx.tol)?;
        #[derive(Serialize)]
        struct Out {
            schema: u32,
            block_dims: Vec<usize>,
            identically_singular: bool,
            degree: usize,
            roots: Vec<SpectrumEntryOut>,
        }
        emit(&Out {
            schema: SCHEMA_VERSION,
            block_dims: x.algebra().block_dims().to_vec(),
            identically_singular: r.identically_singular,
            degree: r.degree,
            roots: spectrum_entries(&r.roots),
        });
        return Ok(0);
    }
    if !(grid_radius > 0.0) || grid_steps < 2 {
        return Err(Error::Schema("grid needs a positive radius and at least 2 steps".into()));
    }
    x.check_finite()?;
    y.check_finite()?;
    let mut out = String::from("lambda_re,lambda_im,sigma_min\n");
    for i in 0..grid_steps {
        let re = -grid_radius + 2.0 * grid_radius * i as f64 / (grid_steps - 1) as f64;
        for j in 0..grid_steps {
            let im = -grid_radius + 2.0 * grid_radius * j as f64 / (grid_steps - 1) as f64;
            let z = x.scale(C64::new(re, im)).add(&y);
            let sigma_min = z
                .blocks()
                .iter()
                .map(|b| *b.singular_values().last().expect("blocks are nonempty"))
                .fold(f64::INFINITY, f64::min);
            out.push_str(&format!("{re},{im},{sigma_min}\n"));
        }
    }
    print!("{out}");
    Ok(0)
}

fn cmd_separate(ctx: &Ctx, a_path: &Path, b_path: &Path, mode: ModeArg) -> Result<u8> {
    let a = load_element(a_path)?;
    let b = load_element(b_path)?;
    if a.algebra().block_dims() != b.algebra().block_dims() {
        return Err(Error::AlgebraMismatch(a.algebra().describe(), b.algebra().describe()));
    }
    let w: SeparationWitness = match mode {
        ModeArg::Any => separate_any(&a, &b, &ctx.tol, ctx.seed)?,
        ModeArg::Invertible => separate_invertible(&a, &b, &ctx.tol, ctx.seed)?,
        ModeArg::Rank1 => separate_rank_one(&a, &b, &ctx.tol, ctx.seed)?,
    };
    #[derive(Serialize)]
    struct Out {
        schema: u32,
        mode: String,
        witness: ElementJson,
        verdict_a: String,
        verdict_b: String,
        search_iterations: usize,
    }
    emit(&Out {
        schema: SCHEMA_VERSION,
        mode: w.mode.to_string(),
        witness: json::element_to_json(&w.witness),
        verdict_a: w.verdict_a.to_string(),
        verdict_b: w.verdict_b.to_string(),
        search_iterations: w.search_iterations,
    });
    Ok(0)
}

/// A map spec is a built-in family name or a path to a form file.
/// Family names resolve against the --algebra dimensions; form files
/// carry their own.
fn resolve_map(spec: &str, ctx: &Ctx) -> Result<BlackBoxMap> {
    if BUILTIN_FAMILIES.contains(&spec) {
        return builtin_map(spec, &ctx.algebra, ctx.seed, &ctx.tol);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::Schema(format!(
            "map spec '{spec}' is neither a built-in family ({}) nor an existing form file",
            BUILTIN_FAMILIES.join(", ")
        )));
    }
    let form = json::form_from_str(&std::fs::read_to_string(path)?, &ctx.tol)?;
    Ok(BlackBoxMap::from_form(&form))
}

fn resolve_pair(specs: &[String], ctx: &Ctx) -> Result<(BlackBoxMap, BlackBoxMap)> {
    let phi = resolve_map(&specs[0], ctx)?;
    let psi = resolve_map(&specs[1], ctx)?;
    if phi.algebra().block_dims() != psi.algebra().block_dims() {
        return Err(Error::AlgebraMismatch(phi.algebra().describe(), psi.algebra().describe()));
    }
    Ok((phi, psi))
}

#[derive(Serialize)]
struct CounterexampleOut {
    x: ElementJson,
    y: ElementJson,
    lambda: [f64; 2],
    source_verdict: String,
    image_verdict: String,
    probe: String,
}

#[derive(Serialize)]
struct CheckOut {
    schema: u32,
    block_dims: Vec<usize>,
    deterministic_probes: usize,
    random_trials: usize,
    agreements: usize,
    ambiguous_skipped: usize,
    seed: u64,
    counterexample: Option<CounterexampleOut>,
}

fn check_out(report: &CheckReport, alg: &BlockAlgebra) -> CheckOut {
    CheckOut {
        schema: SCHEMA_VERSION,
        block_dims: alg.block_dims().to_vec(),
        deterministic_probes: report.deterministic_probes,
        random_trials: report.random_trials,
        agreements: report.agreements,
        ambiguous_skipped: report.ambiguous_skipped,
        seed: report.seed,
        counterexample: report.counterexample.as_ref().map(|ce| CounterexampleOut {
            x: json::element_to_json(&ce.x),
            y: json::element_to_json(&ce.y),
            lambda: complex_pair(ce.lambda),
            source_verdict: ce.source_verdict.to_string(),
            image_verdict: ce.image_verdict.to_string(),
            probe: ce.probe.clone(),
        }),
    }
}

fn cmd_preserver(
    ctx: &Ctx,
    synth: Option<&Path>,
    check: Option<&[String]>,
    reconstruct: Option<&[String]>,
) -> Result<u8> {
    let selected = usize::from(synth.is_some())
        + usize::from(check.is_some())
        + usize::from(reconstruct.is_some());
    if selected != 1 {
        return Err(Error::Schema(
            "pass exactly one of --synth, --check, or --reconstruct".into(),
        ));
    }
    if let Some(path) = synth {
        let form = json::form_from_str(&std::fs::read_to_string(path)?, &ctx.tol)?;
        println!("{}", json::form_to_string(&form));
        return Ok(0);
    }
    if let Some(specs) = check {
        let (phi, psi) = resolve_pair(specs, ctx)?;
        let report = pencil_condition_check(&phi, &psi, &ctx.tol, ctx.trials, ctx.seed)?;
        let found = report.counterexample.is_some();
        emit(&check_out(&report, phi.algebra()));
        return Ok(if found { 6 } else { 0 });
    }
    let specs = reconstruct.expect("one option is selected");
    let (phi, psi) = resolve_pair(specs, ctx)?;
    let form = reconstruct_pair(&phi, &psi, &ctx.tol, ctx.seed)?;
    println!("{}", json::form_to_string(&form));
    Ok(0)
}

fn cmd_suite(ctx: &Ctx, which: &str) -> Result<u8> {
    // Hidden failure-path hook: a corrupted family name in this
    // variable is injected into the preserver suite as if it were a
    // reference map, which must make the run fail.
    let inject = std::env::var(CORRUPT_HOOK_ENV).ok();
    let outcomes =
        run_suites(which, &ctx.algebra, &ctx.tol, ctx.trials, ctx.seed, inject.as_deref())?;
    #[derive(Serialize)]
    struct Out<'a> {
        schema: u32,
        algebra: String,
        seed: u64,
        trials: usize,
        suites: &'a [crate::suite::SuiteOutcome],
        passed: usize,
        failed: usize,
    }
    let passed = outcomes.iter().flat_map(|o| &o.cases).filter(|c| c.passed).count();
    let failed = outcomes.iter().flat_map(|o| &o.cases).filter(|c| !c.passed).count();
    emit(&Out {
        schema: SCHEMA_VERSION,
        algebra: ctx.algebra.describe(),
        seed: ctx.seed,
        trials: ctx.trials,
        suites: &outcomes,
        passed,
        failed,
    });
    if failed > 0 {
        eprintln!(
            "replay: socle suite --suite {which} --seed {} --trials {} --algebra {}",
            ctx.seed,
            ctx.trials,
            ctx.algebra.describe()
        );
        return Ok(1);
    }
    Ok(0)
}
