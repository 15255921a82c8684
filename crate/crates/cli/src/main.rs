//! Command-line front end: evaluate individual quantities or run whole
//! verification suites and stream the report rows.
//!
//! Exit codes: 0 when everything requested passed, 1 when any report row
//! failed or an evaluation errored, 2 for unusable arguments (including an
//! unknown suite name).

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use kforge_core::archimedean::{
    standard_test_function, w4_transform, w6_transform, weight_v, weight_w, weights_offset,
    QuadratureSpec, SpectralParameter,
};
use kforge_core::cache::{env_cache_dir, SumCache};
use kforge_core::config::Config;
use kforge_core::geometric::{
    enumerate_s4_terms, enumerate_s5_terms, enumerate_s6_terms, s4_pairs, s5_pairs, s6_pairs,
    GeometricTermSpec,
};
use kforge_core::hecke::{CoefficientSource, SatakeTriple};
use kforge_core::kloosterman::{gl3_twisted_sum, KloostermanQuery};
use kforge_core::oldform::{gram_matrix, gram_schmidt};
use kforge_core::suites::{run_all, run_suite, Suite};
use kforge_core::symsq::{lambda2_table, root_number, symsq_coefficients, SymsqLocalFactor};
use kforge_core::{C, F};

use output::{Format, ValueRow};

#[derive(Parser)]
#[command(name = "kforge", version, about = "Identity checks for a family of exponential sums, Fourier-coefficient relations, and integral transforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Comparison tolerance for checks that are not formula-bound.
    #[arg(long, global = true)]
    tolerance: Option<F>,

    /// Enumeration cutoff for modulus or index sweeps.
    #[arg(long, global = true)]
    cutoff: Option<i64>,

    /// Seed for all randomized inputs.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Height of the quadrature contour lines.
    #[arg(long, global = true)]
    quad_height: Option<F>,

    /// Output format for values and report rows.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Directory holding the exponential-sum cache (also via KFORGE_CACHE).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// JSON config file; explicit flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exponential-sum evaluations and identity checks.
    Kloosterman {
        #[command(subcommand)]
        action: KloostermanCmd,
    },
    /// Fourier-coefficient evaluations and multiplicativity checks.
    Hecke {
        #[command(subcommand)]
        action: HeckeCmd,
    },
    /// Degree-six L-series local data.
    Symsq {
        #[command(subcommand)]
        action: SymsqCmd,
    },
    /// Inner-product matrices of the three level-raising shifts.
    Gram {
        #[command(subcommand)]
        action: GramCmd,
    },
    /// Integral transforms of the spectral test function.
    Transform {
        #[command(subcommand)]
        action: TransformCmd,
    },
    /// Term families on the arithmetic side of the trace formula.
    Geometric {
        #[command(subcommand)]
        action: GeometricCmd,
    },
    /// Amplifier product-expansion combinatorics.
    Resonator {
        #[command(subcommand)]
        action: ResonatorCmd,
    },
    /// Run one verification suite by name, or all of them.
    Verify {
        /// Suite name, or "all".
        target: String,
    },
}

#[derive(Subcommand)]
enum KloostermanCmd {
    /// Evaluate one twisted sum, consulting the on-disk cache if configured.
    Eval(KloostermanArgs),
    /// Run the exponential-sum identity suite.
    Check,
}

#[derive(Args)]
struct KloostermanArgs {
    #[arg(long, default_value_t = 1)]
    n1: i64,
    #[arg(long, default_value_t = 1)]
    n2: i64,
    #[arg(long, default_value_t = 1)]
    m1: i64,
    #[arg(long, default_value_t = 1)]
    m2: i64,
    #[arg(long, default_value_t = 6)]
    d1: i64,
    #[arg(long, default_value_t = 10)]
    d2: i64,
    /// Multiplier of the second character argument.
    #[arg(long, default_value_t = 1)]
    twist: i64,
}

#[derive(Subcommand)]
enum HeckeCmd {
    /// Evaluate a coefficient of a seeded random tempered source.
    Eval {
        #[arg(long, default_value_t = 4)]
        m: u64,
        #[arg(long, default_value_t = 9)]
        n: u64,
    },
    /// Run the coefficient-relation suite.
    Check,
}

#[derive(Subcommand)]
enum SymsqCmd {
    /// Evaluate the local Euler factor at a prime for a seeded triple.
    Factor {
        #[arg(long, default_value_t = 3)]
        p: u64,
        /// Real part of the series variable.
        #[arg(long, default_value_t = 1.0)]
        s_re: F,
        /// Imaginary part of the series variable.
        #[arg(long, default_value_t = 0.0)]
        s_im: F,
    },
    /// Evaluate the functional-equation constant for given local twists.
    Rootnumber {
        /// Level primes with twist, as p or p=rho_im (repeatable).
        #[arg(long = "level", default_value = "3=0")]
        levels: Vec<String>,
    },
    /// List series coefficients of a seeded source up to the cutoff.
    Coeffs,
}

#[derive(Subcommand)]
enum GramCmd {
    /// Print the 3x3 inner-product matrix at a prime for a seeded triple.
    Compute {
        #[arg(long, default_value_t = 3)]
        p: u64,
    },
    /// Print the triangular change of basis and its unitarity residual.
    Orthonormalize {
        #[arg(long, default_value_t = 3)]
        p: u64,
    },
}

#[derive(Subcommand)]
enum TransformCmd {
    /// One-variable kernel transform at y.
    Phi4 {
        #[arg(long, default_value_t = 3.0)]
        y: F,
    },
    /// Two-variable kernel transform at (y1, y2).
    Phi6 {
        #[arg(long, default_value_t = -1.5)]
        y1: F,
        #[arg(long, default_value_t = 4.0)]
        y2: F,
    },
    /// Both smooth-cutoff weights at x for a spectral parameter.
    Weights {
        #[arg(long, default_value_t = 0.7)]
        x: F,
        /// First coordinate of the tempered spectral parameter.
        #[arg(long, default_value_t = 0.8)]
        t1: F,
        /// Second coordinate of the tempered spectral parameter.
        #[arg(long, default_value_t = -0.3)]
        t2: F,
    },
}

#[derive(Subcommand)]
enum GeometricCmd {
    /// List the admissible modulus pairs (and values) of one term family.
    Enumerate(GeometricArgs),
}

#[derive(Args)]
struct GeometricArgs {
    #[arg(long, default_value_t = 3)]
    p: i64,
    #[arg(long, default_value_t = 1)]
    m1: i64,
    #[arg(long, default_value_t = 1)]
    m2: i64,
    #[arg(long, default_value_t = 1)]
    n1: i64,
    #[arg(long, default_value_t = 1)]
    n2: i64,
    /// Term family: s4, s5, s6, or pairs (modulus pairs of all three).
    #[arg(long, default_value = "s4")]
    family: String,
}

#[derive(Subcommand)]
enum ResonatorCmd {
    /// Run the amplifier expansion suite.
    Check,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match load_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("kforge: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cli, &config) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("kforge: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("kforge: {msg}");
            ExitCode::from(1)
        }
    }
}

enum CliError {
    /// Arguments that cannot be acted on (exit 2).
    Usage(String),
    /// A computation that was attempted and did not produce a value (exit 1).
    Failed(String),
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

/// Output-path error adapter: a closed read end (e.g. piping into `head`)
/// is not a failure of the requested computation.
fn emit_result(r: std::io::Result<()>) -> Result<(), CliError> {
    match r {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(failed(e)),
    }
}

trait PipeDone {
    fn pipe_done(self) -> Result<(), CliError>;
}

impl PipeDone for std::io::Result<()> {
    fn pipe_done(self) -> Result<(), CliError> {
        emit_result(self)
    }
}

fn load_config(cli: &Cli) -> Result<Config, String> {
    let mut config = match &cli.config {
        Some(path) => Config::load(path).map_err(|e| format!("config {}: {e}", path.display()))?,
        None => Config::default(),
    };
    if let Some(t) = cli.tolerance {
        config.default_tolerance = t;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(h) = cli.quad_height {
        if !(h >= 20.0) {
            return Err(format!("quadrature height must be at least 20, got {h}"));
        }
        config.quad.height = h;
    }
    Ok(config)
}

fn run(cli: &Cli, config: &Config) -> Result<bool, CliError> {
    match &cli.command {
        Command::Kloosterman { action } => match action {
            KloostermanCmd::Eval(args) => kloosterman_eval(cli, args),
            KloostermanCmd::Check => suite_stream(cli, config, &[Suite::Kloosterman]),
        },
        Command::Hecke { action } => match action {
            HeckeCmd::Eval { m, n } => hecke_eval(cli, config, *m, *n),
            HeckeCmd::Check => suite_stream(cli, config, &[Suite::Hecke]),
        },
        Command::Symsq { action } => match action {
            SymsqCmd::Factor { p, s_re, s_im } => symsq_factor(cli, config, *p, C::new(*s_re, *s_im)),
            SymsqCmd::Rootnumber { levels } => symsq_rootnumber(cli, levels),
            SymsqCmd::Coeffs => symsq_coeffs(cli, config),
        },
        Command::Gram { action } => match action {
            GramCmd::Compute { p } => gram_compute(cli, config, *p),
            GramCmd::Orthonormalize { p } => gram_orthonormalize(cli, config, *p),
        },
        Command::Transform { action } => match action {
            TransformCmd::Phi4 { y } => transform_phi4(cli, config, *y),
            TransformCmd::Phi6 { y1, y2 } => transform_phi6(cli, config, *y1, *y2),
            TransformCmd::Weights { x, t1, t2 } => transform_weights(cli, config, *x, *t1, *t2),
        },
        Command::Geometric { action } => match action {
            GeometricCmd::Enumerate(args) => geometric_enumerate(cli, args),
        },
        Command::Resonator { action } => match action {
            ResonatorCmd::Check => suite_stream(cli, config, &[Suite::Resonator]),
        },
        Command::Verify { target } => verify(cli, config, target),
    }
}

/// Runs suites and streams their report rows; true iff every row passed.
fn suite_stream(cli: &Cli, config: &Config, suites: &[Suite]) -> Result<bool, CliError> {
    let mut writer = output::report_writer(cli.format);
    let mut all = true;
    for &suite in suites {
        let rows = run_suite(suite, config);
        let passed = rows.iter().filter(|r| r.pass).count();
        if passed < rows.len() {
            all = false;
        }
        emit_result(writer.rows(&rows))?;
        eprintln!(
            "{}: {passed}/{} passed",
            suite.name(),
            rows.len()
        );
    }
    Ok(all)
}

fn verify(cli: &Cli, config: &Config, target: &str) -> Result<bool, CliError> {
    if target == "all" {
        let mut writer = output::report_writer(cli.format);
        let mut all = true;
        for (suite, rows) in run_all(config) {
            let passed = rows.iter().filter(|r| r.pass).count();
            if passed < rows.len() {
                all = false;
            }
            emit_result(writer.rows(&rows))?;
            eprintln!("{}: {passed}/{} passed", suite.name(), rows.len());
        }
        return Ok(all);
    }
    let suite = Suite::from_str(target).map_err(|e| CliError::Usage(e.to_string()))?;
    suite_stream(cli, config, &[suite])
}

fn kloosterman_eval(cli: &Cli, args: &KloostermanArgs) -> Result<bool, CliError> {
    let q = KloostermanQuery::new(
        args.n1, args.n2, args.m1, args.m2, args.d1, args.d2, args.twist,
    );
    let dir = cli.cache_dir.clone().or_else(env_cache_dir);
    let store = dir.as_ref().map(|d| d.join("kloosterman.jsonl"));
    let cache = match &store {
        Some(path) if path.exists() => {
            let (cache, skipped) = SumCache::load(path).map_err(failed)?;
            if skipped > 0 {
                eprintln!("cache: skipped {skipped} corrupt records");
            }
            cache
        }
        _ => SumCache::new(),
    };
    let cached_before = cache.get(&q).is_some();
    let value = cache.get_or_compute(&q, gl3_twisted_sum).map_err(failed)?;
    if let Some(path) = &store {
        cache.save(path).map_err(failed)?;
    }
    ValueRow::new("kloosterman-eval", value)
        .with(
            "inputs",
            json!({
                "n1": q.n1, "n2": q.n2, "m1": q.m1, "m2": q.m2,
                "d1": q.d1, "d2": q.d2, "twist": q.n_twist
            }),
        )
        .with("cached", json!(cached_before))
        .emit(cli.format)
        .pipe_done()?;
    Ok(true)
}

fn seeded_source(config: &Config) -> CoefficientSource {
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    CoefficientSource::random_tempered(&primes, &mut ChaCha8Rng::seed_from_u64(config.seed))
}

fn hecke_eval(cli: &Cli, config: &Config, m: u64, n: u64) -> Result<bool, CliError> {
    let src = seeded_source(config);
    let value = src.coefficient(m, n).map_err(failed)?;
    ValueRow::new("hecke-eval", value)
        .with("inputs", json!({ "m": m, "n": n, "seed": config.seed }))
        .emit(cli.format)
        .pipe_done()?;
    Ok(true)
}

fn seeded_triple(config: &Config) -> SatakeTriple {
    SatakeTriple::random_tempered(&mut ChaCha8Rng::seed_from_u64(config.seed))
}

fn symsq_factor(cli: &Cli, config: &Config, p: u64, s: C) -> Result<bool, CliError> {
    let t = seeded_triple(config);
    let value = SymsqLocalFactor::finite(p, &t).evaluate(s);
    ValueRow::new("symsq-local-factor", value)
        .with(
            "inputs",
            json!({ "p": p, "s": [s.re, s.im], "seed": config.seed }),
        )
        .emit(cli.format)
        .pipe_done()?;
    Ok(true)
}

fn symsq_rootnumber(cli: &Cli, levels: &[String]) -> Result<bool, CliError> {
    let mut parsed: Vec<(u64, C)> = Vec::new();
    for spec in levels {
        let (p_str, rho_str) = spec.split_once('=').unwrap_or((spec.as_str(), "0"));
        let p: u64 = p_str
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad level '{spec}': expected p or p=rho_im")))?;
        let rho_im: F = rho_str
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad twist in '{spec}'")))?;
        parsed.push((p, C::new(0.0, rho_im)));
    }
    let value = root_number(&parsed).map_err(failed)?;
    ValueRow::new("symsq-root-number", value)
        .with("inputs", json!({ "levels": levels }))
        .emit(cli.format)
        .pipe_done()?;
    Ok(true)
}

fn symsq_coeffs(cli: &Cli, config: &Config) -> Result<bool, CliError> {
    let cutoff = cli.cutoff.unwrap_or(30).max(1) as u64;
    if cutoff > 100_000 {
        return Err(CliError::Usage(format!(
            "coefficient cutoff {cutoff} too large (max 100000)"
        )));
    }
    let src = seeded_source(config);
    let coeffs = symsq_coefficients(&src, 1, cutoff).map_err(failed)?;
    // Also show the seven shifted coefficients entering the local factor at
    // the smallest prime of the support.
    let table = lambda2_table(src.triple(2).expect("seeded source covers 2"));
    let mut rows = Vec::new();
    for (i, c) in coeffs.iter().enumerate().skip(1) {
        if c.norm() > 1e-14 {
            rows.push(ValueRow::new("symsq-coefficient", *c).with("inputs", json!({ "n": i })));
        }
    }
    for (j, l) in table.lambda.iter().enumerate() {
        rows.push(
            ValueRow::new("shifted-coefficient", *l).with("inputs", json!({ "index": j, "p": 2 })),
        );
    }
    emit_result(output::emit_values(cli.format, &rows))?;
    Ok(true)
}

fn gram_inputs(config: &Config) -> (C, C) {
    let t = seeded_triple(config);
    (
        kforge_core::hecke::schur_coefficient(&t, 0, 1),
        kforge_core::hecke::schur_coefficient(&t, 1, 0),
    )
}

fn gram_compute(cli: &Cli, config: &Config, p: u64) -> Result<bool, CliError> {
    let (a1p, ap1) = gram_inputs(config);
    let g = gram_matrix(p, a1p, ap1, 1.0);
    let mut rows = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            rows.push(
                ValueRow::new("gram-entry", g.entry(i, j))
                    .with("inputs", json!({ "p": p, "i": i, "j": j, "seed": config.seed })),
            );
        }
    }
    emit_result(output::emit_values(cli.format, &rows))?;
    Ok(true)
}

fn gram_orthonormalize(cli: &Cli, config: &Config, p: u64) -> Result<bool, CliError> {
    let (a1p, ap1) = gram_inputs(config);
    let g = gram_matrix(p, a1p, ap1, 1.0);
    let constants = gram_schmidt(&g).map_err(failed)?;
    let t_mat = constants.transform();
    let g_norm = g.normalized();
    let mut residual: F = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let mut entry = C::new(0.0, 0.0);
            for a in 0..3 {
                for b in 0..3 {
                    entry += t_mat[i][a] * g_norm[a][b] * t_mat[j][b].conj();
                }
            }
            let expected = if i == j { 1.0 } else { 0.0 };
            residual = residual.max((entry - expected).norm());
        }
    }
    let named = [
        ("c10", constants.c10),
        ("c11", constants.c11),
        ("c20", constants.c20),
        ("c21", constants.c21),
        ("c22", constants.c22),
    ];
    let mut rows: Vec<ValueRow> = named
        .iter()
        .map(|(name, v)| {
            ValueRow::new("orthonormalization-constant", *v)
                .with("inputs", json!({ "p": p, "name": name }))
        })
        .collect();
    rows.push(
        ValueRow::new("unitarity-residual", C::new(residual, 0.0))
            .with("inputs", json!({ "p": p })),
    );
    emit_result(output::emit_values(cli.format, &rows))?;
    Ok(residual <= 1e-9)
}

fn one_line_quad(config: &Config) -> QuadratureSpec {
    let mut q = config.line_quad(0.25);
    q.nodes_per_line = q.nodes_per_line.max(641);
    q.mu_radius = 9.0;
    q
}

fn two_line_quad(config: &Config) -> QuadratureSpec {
    let mut q = config.line_quad(0.25);
    q.nodes_per_line = q.nodes_per_line.max(641);
    q.offsets = vec![0.25, 0.25];
    q.mu_radius = 3.0;
    q
}

fn transform_phi4(cli: &Cli, config: &Config, y: F) -> Result<bool, CliError> {
    let h = standard_test_function(config.a0);
    let value = w4_transform(&h, &one_line_quad(config))
        .eval(y)
        .map_err(failed)?;
    ValueRow::new("one-variable-transform", value)
        .with("inputs", json!({ "y": y, "a0": config.a0 }))
        .emit(cli.format)
        .pipe_done()?;
    Ok(true)
}

fn transform_phi6(cli: &Cli, config: &Config, y1: F, y2: F) -> Result<bool, CliError> {
    let h = standard_test_function(config.a0);
    let value = w6_transform(&h, &two_line_quad(config))
        .eval(y1, y2)
        .map_err(failed)?;
    ValueRow::new("two-variable-transform", value)
        .with("inputs", json!({ "y1": y1, "y2": y2, "a0": config.a0 }))
        .emit(cli.format)
        .pipe_done()?;
    Ok(true)
}

fn transform_weights(cli: &Cli, config: &Config, x: F, t1: F, t2: F) -> Result<bool, CliError> {
    let mu = SpectralParameter::tempered(t1, t2);
    let quad = QuadratureSpec::weights();
    // The first weight is evaluated on its stationary contour for the given
    // argument; the second must stay right of the origin.
    let v_offset = weights_offset(x).max(0.25);
    let v = weight_v(x, &mu, config.a0, &quad.with_offset(v_offset)).map_err(failed)?;
    let w = weight_w(x, &mu, config.a0, &quad).map_err(failed)?;
    let rows = vec![
        ValueRow::new("plain-cutoff-weight", v)
            .with("inputs", json!({ "x": x, "mu": [t1, t2], "offset": v_offset })),
        ValueRow::new("dual-cutoff-weight", w)
            .with("inputs", json!({ "x": x, "mu": [t1, t2], "offset": 2.0 })),
    ];
    emit_result(output::emit_values(cli.format, &rows))?;
    Ok(true)
}

fn geometric_enumerate(cli: &Cli, args: &GeometricArgs) -> Result<bool, CliError> {
    let cutoff = cli.cutoff.unwrap_or(81);
    let spec = GeometricTermSpec::new(args.p, args.m1, args.m2, args.n1, args.n2, cutoff);
    let mut rows = Vec::new();
    match args.family.as_str() {
        "s4" | "s5" | "s6" => {
            let (name, terms) = match args.family.as_str() {
                "s4" => ("first-reflected-family", enumerate_s4_terms(&spec).map_err(failed)?),
                "s5" => ("second-reflected-family", enumerate_s5_terms(&spec).map_err(failed)?),
                _ => {
                    let terms = enumerate_s6_terms(&spec).map_err(failed)?;
                    let rows: Vec<ValueRow> = terms
                        .iter()
                        .map(|t| {
                            ValueRow::new("long-element-family", t.value).with(
                                "inputs",
                                json!({
                                    "eps1": t.eps1, "eps2": t.eps2, "d1": t.d1, "d2": t.d2,
                                    "arg1": t.arg1, "arg2": t.arg2
                                }),
                            )
                        })
                        .collect();
                    emit_result(output::emit_values(cli.format, &rows))?;
                    return Ok(true);
                }
            };
            for t in &terms {
                rows.push(ValueRow::new(name, t.value).with(
                    "inputs",
                    json!({ "eps": t.eps, "d1": t.d1, "d2": t.d2, "arg": t.arg }),
                ));
            }
        }
        "pairs" => {
            for (name, pairs) in [
                ("first-reflected-family", s4_pairs(&spec).map_err(failed)?),
                ("second-reflected-family", s5_pairs(&spec).map_err(failed)?),
                ("long-element-family", s6_pairs(&spec).map_err(failed)?),
            ] {
                for (d1, d2) in pairs {
                    rows.push(
                        ValueRow::new(name, C::new(0.0, 0.0))
                            .with("inputs", json!({ "d1": d1, "d2": d2 })),
                    );
                }
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown term family '{other}'; expected s4, s5, s6, or pairs"
            )))
        }
    }
    emit_result(output::emit_values(cli.format, &rows))?;
    Ok(true)
}
