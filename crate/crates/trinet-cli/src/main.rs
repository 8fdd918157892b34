//! Command-line interface for triangle-network state analysis.
//!
//! Every subcommand writes a JSON report to stdout and a short summary to
//! stderr (suppressed by `--json`). Exit codes: 0 on success with no
//! criterion violated, 2 when a criterion flags the input (or a table row
//! deviates), 1 on errors. `TRINET_THREADS` caps internal parallelism.

mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::Report;
use trinet::bounds::{BoundConfig, overlap_upper_bound};
use trinet::criteria::{
    MuProvenance, Verdict, build_witness, evaluate_witness, gme_qubit_check, obs1_check,
    obs2_pure_check, rank_feasibility, rank_profile_of,
};
use trinet::io;
use trinet::linalg::PureState;
use trinet::seesaw::{SeesawConfig, optimize_overlap};
use trinet::states;
use trinet::tensorrank::{matmul_tensor, verify_decomposition};

#[derive(Parser)]
#[command(
    name = "trinet",
    version,
    about = "Decide which tripartite states the triangle network can prepare"
)]
struct Cli {
    /// RNG seed, echoed into every report
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Emit only the JSON report (suppress the stderr summary)
    #[arg(long, global = true)]
    json: bool,

    /// Override the default comparison tolerance where one applies
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StateKind {
    Ghz,
    W,
    Ame,
    As3,
    Smolin,
    Classical,
    NoisyGhz,
    RingCluster,
    Matmul,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MuSource {
    Seesaw,
    Bound,
}

#[derive(Subcommand)]
enum Command {
    /// Write a catalog state to a JSON state file
    MakeState {
        #[arg(long, value_enum)]
        kind: StateKind,
        /// Local dimension for ghz / classical / noisy-ghz
        #[arg(long = "D", default_value_t = 4)]
        local_dim: usize,
        /// Number of correlated terms for the classical state
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Visibility for the noisy GHZ state
        #[arg(long = "V", default_value_t = 0.5)]
        visibility: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run the preparability criteria battery on a state file
    Analyze {
        path: PathBuf,
        /// Source local dimension override for the rank criterion
        #[arg(long)]
        d: Option<usize>,
    },
    /// See-saw maximization of the overlap with a target state
    Seesaw {
        /// ghz2 | ghz3 | ghz4 | w | ame | as3 | path to a pure-state file
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long, default_value_t = 1000)]
        max_iterations: usize,
        /// Write the best preparation to this JSON file
        #[arg(long)]
        dump_decomposition: Option<PathBuf>,
    },
    /// Reproduce the six-target overlap table at d = 2
    Table1 {
        #[arg(long, default_value_t = 100)]
        restarts: usize,
    },
    /// Analytical overlap upper bound for pure qubit sources
    Bound {
        /// ghz2 | ghz3 | ghz4 | w | ame | as3 | path to a pure-state file
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Restrict the angle search to a >= b >= c (symmetric targets)
        #[arg(long)]
        symmetric: bool,
    },
    /// Build an overlap witness and evaluate it on a state file
    Witness {
        #[arg(long)]
        target: String,
        #[arg(long, value_enum)]
        mu_source: MuSource,
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
    /// Matrix-multiplication tensor utilities
    Tensor {
        /// Verify a product-term file against the tensor
        #[arg(long)]
        verify: Option<PathBuf>,
        /// Tensor file to verify against (defaults to the built-in tensor)
        #[arg(long)]
        against: Option<PathBuf>,
        /// Write the matrix-multiplication tensor to a JSON file
        #[arg(long)]
        emit_matmul: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Six named targets plus state files; returns the state and a display name.
fn resolve_target(spec: &str) -> trinet::Result<(PureState, String)> {
    let state = match spec {
        "ghz2" => states::ghz(2)?,
        "ghz3" => states::ghz(3)?,
        "ghz4" => states::ghz(4)?,
        "w" => states::w_state(),
        "ame" => states::ame_six_qubits(),
        "as3" => states::antisymmetric_qutrit(),
        path => {
            let loaded = io::load_state(Path::new(path))?;
            match loaded.as_pure() {
                Some(p) => p.clone(),
                None => {
                    return Err(trinet::Error::StateFile {
                        field: "kind".into(),
                        reason: "overlap targets must be pure states".into(),
                    });
                }
            }
        }
    };
    Ok((state, spec.to_string()))
}

/// Embeds a target into `[d^2; 3]` when its parties are smaller.
fn embed_for_network(target: &PureState, d: usize) -> trinet::Result<PureState> {
    let d2 = d * d;
    if target.dims().iter().all(|&dim| dim == d2) {
        return Ok(target.clone());
    }
    states::embed(target, &vec![d2; target.dims().len()])
}

fn cmd_make_state(
    kind: StateKind,
    local_dim: usize,
    k: usize,
    visibility: f64,
    output: &Path,
    report: &mut Report,
) -> trinet::Result<()> {
    match kind {
        StateKind::Ghz => io::save_pure(&states::ghz(local_dim)?, output)?,
        StateKind::W => io::save_pure(&states::w_state(), output)?,
        StateKind::Ame => io::save_pure(&states::ame_six_qubits(), output)?,
        StateKind::As3 => io::save_pure(&states::antisymmetric_qutrit(), output)?,
        StateKind::Smolin => io::save_density(&states::smolin(), output)?,
        StateKind::Classical => io::save_density(&states::classical_corr(k, local_dim)?, output)?,
        StateKind::NoisyGhz => {
            io::save_density(&states::noisy_ghz(visibility, local_dim)?, output)?
        }
        StateKind::RingCluster => io::save_pure(&states::ring_cluster(), output)?,
        StateKind::Matmul => io::save_pure(
            &trinet::tensorrank::as_network_state(&matmul_tensor())?,
            output,
        )?,
    }
    report
        .notes
        .push(format!("wrote {kind:?} state to {}", output.display()));
    Ok(())
}

fn cmd_analyze(path: &Path, d_override: Option<usize>, report: &mut Report) -> trinet::Result<()> {
    let loaded = io::load_state(path)?;
    let rho = loaded.to_density();

    report.push_verdict("obs1-tmi", obs1_check(&rho)?);

    let mut profile = rank_profile_of(&rho)?;
    if let Some(d) = d_override {
        if d * d < rho.dims()[0] {
            return Err(trinet::Error::InvalidConfig {
                detail: format!(
                    "--d {d} gives node dimension {} below the party dimension {}",
                    d * d,
                    rho.dims()[0]
                ),
            });
        }
        profile.d = d;
    }
    for (name, value) in [
        ("rank_global", profile.global_rank),
        ("rank_bc", profile.rank_bc),
        ("rank_ac", profile.rank_ac),
        ("rank_ab", profile.rank_ab),
        ("rank_a", profile.rank_a),
        ("rank_b", profile.rank_b),
        ("rank_c", profile.rank_c),
        ("rank_d", profile.d),
    ] {
        report.insert_number(name, value as f64);
    }
    let (verdict, assignment) = rank_feasibility(&profile)?;
    report.push_verdict("obs3-ranks", verdict);
    if let Some(a) = assignment {
        report.notes.push(format!(
            "rank assignment: alpha {}, beta {}, gamma {}, marginals ({}, {}, {}, {}, {}, {})",
            a.r_alpha,
            a.r_beta,
            a.r_gamma,
            a.r_gamma_a,
            a.r_gamma_b,
            a.r_alpha_b,
            a.r_alpha_c,
            a.r_beta_c,
            a.r_beta_a
        ));
    }

    if let Some(pure) = loaded.as_pure() {
        report.push_verdict("obs2-monogamy", obs2_pure_check(pure)?);
        report.push_verdict("obs4-gme-qubits", gme_qubit_check(pure)?);
    } else {
        report
            .notes
            .push("pure-state criteria skipped for a mixed input".into());
    }
    Ok(())
}

fn cmd_seesaw(
    target_spec: &str,
    cfg: &SeesawConfig,
    dump: Option<&Path>,
    report: &mut Report,
) -> trinet::Result<()> {
    let (target, name) = resolve_target(target_spec)?;
    let embedded = embed_for_network(&target, cfg.d)?;
    let result = optimize_overlap(&embedded, cfg)?;
    report.input = name;
    report.insert_number("mu_squared", result.mu_squared);
    report.insert_number("iterations", result.iterations as f64);
    report.insert_number("best_restart", result.best_restart as f64);
    report.insert_number(
        "converged_restarts",
        result.restarts.iter().filter(|r| r.converged).count() as f64,
    );
    report.insert_number("restarts", result.restarts.len() as f64);
    if let Some(path) = dump {
        io::save_decomposition(&result.best, Some(result.mu_squared), path)?;
        report
            .notes
            .push(format!("best preparation written to {}", path.display()));
    }
    report.notes.push(format!(
        "putative squared overlap {} (see-saw lower bound)",
        result.mu_squared
    ));
    Ok(())
}

/// Reference values and tolerances for the six-target table.
const TABLE1: [(&str, f64, f64); 6] = [
    ("ghz2", 0.5, 1e-6),
    ("ghz3", 4.0 / 9.0, 1e-6),
    ("ghz4", 0.5, 1e-6),
    ("w", 2.0 / 3.0, 1e-6),
    ("ame", 0.5, 1e-6),
    ("as3", 0.5362, 5e-4),
];

fn cmd_table1(
    restarts: usize,
    seed: u64,
    tolerance_override: Option<f64>,
    report: &mut Report,
) -> trinet::Result<()> {
    eprintln!("target    found        reference    |deviation|  status");
    for (name, reference, default_tol) in TABLE1 {
        let tol = tolerance_override.unwrap_or(default_tol);
        let (target, _) = resolve_target(name)?;
        let cfg = SeesawConfig {
            restarts,
            seed,
            ..SeesawConfig::default()
        };
        let embedded = embed_for_network(&target, cfg.d)?;
        let result = optimize_overlap(&embedded, &cfg)?;
        let deviation = (result.mu_squared - reference).abs();
        report.insert_number(&format!("{name}_mu_squared"), result.mu_squared);
        report.insert_number(&format!("{name}_reference"), reference);
        let mut numbers = BTreeMap::new();
        numbers.insert("mu_squared".into(), result.mu_squared);
        numbers.insert("reference".into(), reference);
        numbers.insert("deviation".into(), deviation);
        let verdict = if deviation <= tol {
            Verdict::consistent(
                format!("found {:.9}, reference {reference:.9}", result.mu_squared),
                numbers,
            )
        } else {
            Verdict::violated(
                format!(
                    "found {:.9}, reference {reference:.9}, deviation {deviation:.2e} beyond {tol:.0e}",
                    result.mu_squared
                ),
                numbers,
            )
        };
        eprintln!(
            "{name:<9} {:<12.9} {reference:<12.9} {deviation:<12.3e} {}",
            result.mu_squared,
            if verdict.is_violated() { "DEVIATES" } else { "ok" }
        );
        report.push_verdict(&format!("table1-{name}"), verdict);
    }
    Ok(())
}

fn cmd_bound(
    target_spec: &str,
    grid: usize,
    symmetric: bool,
    report: &mut Report,
) -> trinet::Result<()> {
    let (target, name) = resolve_target(target_spec)?;
    let cfg = BoundConfig {
        grid,
        symmetric,
        ..BoundConfig::default()
    };
    let result = overlap_upper_bound(&target, &cfg)?;
    report.input = name;
    report.insert_number("bound", result.bound);
    report.insert_number("angle_a", result.angles.a);
    report.insert_number("angle_b", result.angles.b);
    report.insert_number("angle_c", result.angles.c);
    for (i, value) in result.cut_values.iter().enumerate() {
        report.insert_number(&format!("cut_{}", ["a_bc", "b_ac", "c_ab"][i]), *value);
    }
    report.notes.push(format!(
        "certified upper bound {} at angles ({}, {}, {})",
        result.bound, result.angles.a, result.angles.b, result.angles.c
    ));
    Ok(())
}

fn cmd_witness(
    target_spec: &str,
    mu_source: MuSource,
    state_path: &Path,
    restarts: usize,
    grid: usize,
    seed: u64,
    report: &mut Report,
) -> trinet::Result<()> {
    let (target, name) = resolve_target(target_spec)?;
    let state = io::load_state(state_path)?.to_density();

    let (mu_squared, provenance) = match mu_source {
        MuSource::Seesaw => {
            let cfg = SeesawConfig {
                restarts,
                seed,
                ..SeesawConfig::default()
            };
            let embedded = embed_for_network(&target, cfg.d)?;
            let result = optimize_overlap(&embedded, &cfg)?;
            (result.mu_squared, MuProvenance::SeesawLowerBound)
        }
        MuSource::Bound => {
            let cfg = BoundConfig {
                grid,
                ..BoundConfig::default()
            };
            let result = overlap_upper_bound(&target, &cfg)?;
            (result.bound.min(1.0), MuProvenance::AnalyticalUpperBound)
        }
    };

    let witness = build_witness(target, mu_squared, provenance)?;
    let value = evaluate_witness(&witness, &state)?;
    report.input = format!("{name} vs {}", state_path.display());
    report.insert_number("mu_squared", mu_squared);
    report.insert_number("witness_value", value);

    let mut numbers = BTreeMap::new();
    numbers.insert("witness_value".into(), value);
    numbers.insert("mu_squared".into(), mu_squared);
    let verdict = match (provenance, value < 0.0) {
        (MuProvenance::AnalyticalUpperBound, true) => Verdict::violated(
            format!(
                "tr(W rho) = {value:.6} < 0 with a certified overlap bound: the state \
                 cannot be prepared even with classically correlated sources"
            ),
            numbers,
        ),
        (MuProvenance::SeesawLowerBound, true) => Verdict::inconclusive(
            format!(
                "tr(W rho) = {value:.6} < 0, but the see-saw overlap is only a lower \
                 bound, so the exclusion stays putative"
            ),
            numbers,
        ),
        (_, false) => Verdict::consistent(
            format!("tr(W rho) = {value:.6} >= 0: the witness does not flag this state"),
            numbers,
        ),
    };
    report.push_verdict("witness", verdict);
    Ok(())
}

fn cmd_tensor(
    verify: Option<&Path>,
    against: Option<&Path>,
    emit: bool,
    output: Option<&Path>,
    report: &mut Report,
) -> trinet::Result<()> {
    if emit {
        let path = output.ok_or_else(|| trinet::Error::StateFile {
            field: "output".into(),
            reason: "--emit-matmul needs -o <file>".into(),
        })?;
        io::save_tensor(&matmul_tensor(), path)?;
        report.notes.push(format!(
            "matrix-multiplication tensor written to {}",
            path.display()
        ));
    }
    if let Some(terms_path) = verify {
        let tensor = match against {
            Some(p) => io::load_tensor(p)?,
            None => matmul_tensor(),
        };
        let terms = io::load_terms(terms_path)?;
        let ok = verify_decomposition(&tensor, &terms)?;
        report.insert_number("terms", terms.len() as f64);
        let mut numbers = BTreeMap::new();
        numbers.insert("terms".into(), terms.len() as f64);
        let verdict = if ok {
            Verdict::consistent(
                format!(
                    "{} product terms reconstruct the tensor entrywise",
                    terms.len()
                ),
                numbers,
            )
        } else {
            Verdict::violated(
                format!(
                    "{} product terms do not reconstruct the tensor entrywise",
                    terms.len()
                ),
                numbers,
            )
        };
        report.push_verdict("decomposition", verdict);
    }
    Ok(())
}

fn summarize(report: &Report) {
    eprintln!("trinet {} :: {}", report.tool_version, report.command);
    if !report.input.is_empty() {
        eprintln!("input: {}", report.input);
    }
    for result in &report.results {
        let status = match result.verdict.status {
            trinet::criteria::VerdictStatus::Consistent => "consistent",
            trinet::criteria::VerdictStatus::Violated => "VIOLATED",
            trinet::criteria::VerdictStatus::Inconclusive => "inconclusive",
        };
        eprintln!(
            "  {:<18} {status:<12} {}",
            result.criterion, result.verdict.detail
        );
    }
    for note in &report.notes {
        eprintln!("  note: {note}");
    }
}

fn run(cli: &Cli) -> trinet::Result<Report> {
    match &cli.command {
        Command::MakeState {
            kind,
            local_dim,
            k,
            visibility,
            output,
        } => {
            let mut report = Report::new("make-state", format!("{kind:?}"), cli.seed);
            cmd_make_state(*kind, *local_dim, *k, *visibility, output, &mut report)?;
            Ok(report)
        }
        Command::Analyze { path, d } => {
            let mut report = Report::new("analyze", path.display().to_string(), cli.seed);
            cmd_analyze(path, *d, &mut report)?;
            Ok(report)
        }
        Command::Seesaw {
            target,
            d,
            restarts,
            max_iterations,
            dump_decomposition,
        } => {
            let mut report = Report::new("seesaw", target.clone(), cli.seed);
            let cfg = SeesawConfig {
                d: *d,
                restarts: *restarts,
                max_iterations: *max_iterations,
                convergence_tol: cli.tolerance.unwrap_or(1e-10),
                seed: cli.seed,
            };
            cmd_seesaw(target, &cfg, dump_decomposition.as_deref(), &mut report)?;
            Ok(report)
        }
        Command::Table1 { restarts } => {
            let mut report = Report::new("table1", "six reference targets", cli.seed);
            cmd_table1(*restarts, cli.seed, cli.tolerance, &mut report)?;
            Ok(report)
        }
        Command::Bound {
            target,
            grid,
            symmetric,
        } => {
            let mut report = Report::new("bound", target.clone(), cli.seed);
            cmd_bound(target, *grid, *symmetric, &mut report)?;
            Ok(report)
        }
        Command::Witness {
            target,
            mu_source,
            state,
            restarts,
            grid,
        } => {
            let mut report = Report::new("witness", target.clone(), cli.seed);
            cmd_witness(
                target,
                *mu_source,
                state,
                *restarts,
                *grid,
                cli.seed,
                &mut report,
            )?;
            Ok(report)
        }
        Command::Tensor {
            verify,
            against,
            emit_matmul,
            output,
        } => {
            let mut report = Report::new("tensor", "", cli.seed);
            cmd_tensor(
                verify.as_deref(),
                against.as_deref(),
                *emit_matmul,
                output.as_deref(),
                &mut report,
            )?;
            Ok(report)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Ok(threads) = std::env::var("TRINET_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }

    match run(&cli) {
        Ok(report) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("reports serialize")
            );
            if !cli.json {
                summarize(&report);
            }
            if report.any_violated() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
