//! Command-line interface for the caplab library.
//!
//! Every subcommand loads a channel (a JSON file path or a fixture spec such
//! as `fig1:0.1` or `bec:0.5`), computes one family of quantities, and emits
//! a deterministic report: same configuration and seed, same bytes, apart
//! from the one-line timestamp header that `--no-header` suppresses. All
//! rate-valued rows are in nats unless `--bits` is given. Exit status is 0 on
//! success, 2 on a validation or configuration error, and 3 when an
//! iterative solver failed to converge, in which case the emitted report
//! carries the final residual.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use caplab::bounds::{
    bound_comparison_report, feedback_lower_bound, n_letter_forney, r_star, NLetterMode,
};
use caplab::capacity::{feedback_capacity_report, pi0, shannon_capacity};
use caplab::channel::{
    check_factorization, fixtures, load_channel, merge_equivalent_outputs, Dmc,
};
use caplab::gallager::maximize_e0;
use caplab::listsim::{
    binomial_gamma, binomial_moment_bound, binomial_moment_oracle, simulate_three_phase_scheme,
    simulate_type_scheme, BinomialVariant, ThreePhaseConfig, TypeSchemeConfig,
};
use caplab::SolveError;

use report::{Format, Report};

/// Iteration budget for the iterative solvers behind single commands.
const SOLVER_ITER: u64 = 500_000;

/// Channel dimensions cycled through by `compare random`.
const RANDOM_DIMS: [(usize, usize); 4] = [(3, 3), (3, 4), (4, 3), (4, 4)];

#[derive(Parser)]
#[command(
    name = "caplab",
    version,
    about = "Capacity, cutoff, and list-decoding bounds for discrete memoryless channels",
    after_help = "CHANNEL is a JSON file path or a fixture spec: fig1:EPS, fig2:EPS,DELTA, \
bsc:P, bec:DELTA, z:Q, noiseless:K, eps3:EPS. `caplab compare random --seeds N` checks \
bound orderings on N seeded random channels."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Clone)]
struct Common {
    /// Moment order rho.
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    /// Convergence tolerance for iterative solvers.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Base RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report layout.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Convert rate-valued rows from nats to bits.
    #[arg(long)]
    bits: bool,
    /// Suppress the `# caplab <version> <timestamp>` header line.
    #[arg(long)]
    no_header: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum CliNLetterMode {
    /// Scan all uniform-on-a-support sequence distributions.
    Exhaustive,
    /// Product of one single-letter distribution.
    Product,
}

#[derive(Subcommand)]
enum Command {
    /// Shannon capacity via Blahut-Arimoto, with the optimality gap.
    Capacity {
        channel: String,
        #[command(flatten)]
        common: Common,
    },
    /// Gallager exponent max_P E0(rho, P) with KKT certificate.
    E0 {
        channel: String,
        #[command(flatten)]
        common: Common,
    },
    /// Cutoff-style rate max_P E0(rho, P)/rho.
    Cutoff {
        channel: String,
        #[command(flatten)]
        common: Common,
    },
    /// Min-max reach probability pi0 with its dual certificate.
    Pi0 {
        channel: String,
        #[command(flatten)]
        common: Common,
    },
    /// Full report: capacities, zero-error quantities, and feedback bounds.
    Report {
        channel: String,
        #[command(flatten)]
        common: Common,
    },
    /// Lower/upper bound table for one channel.
    Bounds {
        channel: String,
        #[command(flatten)]
        common: Common,
    },
    /// Merge equivalent outputs and test likelihood factorizability.
    Reduce {
        channel: String,
        #[command(flatten)]
        common: Common,
    },
    /// n-letter evaluation of the list-size lower bound.
    Nletter {
        channel: String,
        /// Number of channel uses per super-letter.
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, value_enum, default_value_t = CliNLetterMode::Exhaustive)]
        mode: CliNLetterMode,
        #[command(flatten)]
        common: Common,
    },
    /// Feedback rate bound R*(rho) from the slope scan.
    Rstar {
        channel: String,
        /// Upper end of the slope-parameter scan.
        #[arg(long, default_value_t = 1e3)]
        xi_max: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Monte-Carlo simulation of the list-decoding schemes.
    ///
    /// With --alpha the type partition scheme runs (requires --rate); without
    /// it the three-phase feedback scheme runs (requires --rate, --ell, --k,
    /// --nprime).
    Simulate {
        channel: String,
        /// Phase-1 block length.
        #[arg(long)]
        n: usize,
        /// Number of trials.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Target rate in nats per channel use.
        #[arg(long)]
        rate: Option<f64>,
        /// Phase-1 list size (three-phase scheme).
        #[arg(long)]
        ell: Option<usize>,
        /// Position-block length (three-phase scheme).
        #[arg(long)]
        k: Option<usize>,
        /// Confirmation block length (three-phase scheme).
        #[arg(long)]
        nprime: Option<usize>,
        /// Sublist-count exponent (type partition scheme).
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Binomial moment bound against the exact moment oracle.
    Binomial {
        /// Exponent scale: the binomial has exp(n*alpha) trials.
        #[arg(long)]
        n: u32,
        /// Trial-count exponent.
        #[arg(long)]
        alpha: f64,
        /// Success-probability exponent: p = exp(-n*beta).
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Validate bound orderings; CHANNEL may be the literal `random`.
    Compare {
        channel: String,
        /// Number of random channels when CHANNEL is `random`.
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Capacity { common, .. }
            | Command::E0 { common, .. }
            | Command::Cutoff { common, .. }
            | Command::Pi0 { common, .. }
            | Command::Report { common, .. }
            | Command::Bounds { common, .. }
            | Command::Reduce { common, .. }
            | Command::Nletter { common, .. }
            | Command::Rstar { common, .. }
            | Command::Simulate { common, .. }
            | Command::Binomial { common, .. }
            | Command::Compare { common, .. } => common,
        }
    }
}

/// Failure modes with distinct exit codes. A non-convergent solve still
/// produces a report (carrying the residual) on the normal output path.
enum Failure {
    Validation(String),
    NonConvergence(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_threads() {
        eprintln!("caplab: {msg}");
        return ExitCode::from(2);
    }
    let common = cli.command.common().clone();
    let (body, code) = match run(&cli.command, &common) {
        Ok(body) => (body, 0),
        Err(Failure::Validation(msg)) => {
            eprintln!("caplab: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::NonConvergence(body)) => (body, 3),
    };
    if let Err(e) = emit(&common, &body) {
        eprintln!("caplab: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}

/// Applies a `CAPLAB_THREADS` cap to the global rayon pool before any
/// parallel work runs.
fn init_threads() -> Result<(), String> {
    let raw = match std::env::var("CAPLAB_THREADS") {
        Ok(v) => v,
        Err(std::env::VarError::NotPresent) => return Ok(()),
        Err(e) => return Err(format!("CAPLAB_THREADS: {e}")),
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("CAPLAB_THREADS must be a positive integer, got '{raw}'"))?;
    if n == 0 {
        return Err("CAPLAB_THREADS must be at least 1".to_string());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn emit(common: &Common, body: &str) -> std::io::Result<()> {
    let mut out = String::new();
    if !common.no_header {
        let ts = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        out.push_str(&format!("# caplab {} {ts}\n", env!("CARGO_PKG_VERSION")));
    }
    out.push_str(body);
    match &common.output {
        Some(path) => std::fs::write(path, out),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(out.as_bytes())
        }
    }
}

fn run(cmd: &Command, common: &Common) -> Result<String, Failure> {
    if !(common.rho > 0.0) || !common.rho.is_finite() {
        return Err(Failure::Validation(format!(
            "--rho must be positive and finite, got {}",
            common.rho
        )));
    }
    if !(common.tol > 0.0) || !common.tol.is_finite() {
        return Err(Failure::Validation(format!(
            "--tol must be positive and finite, got {}",
            common.tol
        )));
    }
    match cmd {
        Command::Capacity { channel, .. } => cmd_capacity(channel, common),
        Command::E0 { channel, .. } => cmd_e0(channel, common, "e0"),
        Command::Cutoff { channel, .. } => cmd_e0(channel, common, "cutoff"),
        Command::Pi0 { channel, .. } => cmd_pi0(channel, common),
        Command::Report { channel, .. } => cmd_report(channel, common),
        Command::Bounds { channel, .. } => cmd_bounds(channel, common),
        Command::Reduce { channel, .. } => cmd_reduce(channel, common),
        Command::Nletter {
            channel, n, mode, ..
        } => cmd_nletter(channel, *n, *mode, common),
        Command::Rstar {
            channel, xi_max, ..
        } => cmd_rstar(channel, *xi_max, common),
        Command::Simulate {
            channel,
            n,
            trials,
            rate,
            ell,
            k,
            nprime,
            alpha,
            ..
        } => cmd_simulate(channel, *n, *trials, *rate, *ell, *k, *nprime, *alpha, common),
        Command::Binomial { n, alpha, beta, .. } => cmd_binomial(*n, *alpha, *beta, common),
        Command::Compare {
            channel, seeds, ..
        } => cmd_compare(channel, *seeds, common),
    }
}

/// Resolves CHANNEL as an existing file first, then as a fixture spec.
fn resolve_channel(spec: &str) -> Result<Dmc, Failure> {
    if Path::new(spec).is_file() {
        load_channel(spec)
            .map_err(|e| Failure::Validation(format!("channel file '{spec}': {e}")))
    } else {
        fixtures::from_spec(spec).map_err(|e| {
            Failure::Validation(format!(
                "channel '{spec}' is neither an existing file nor a fixture spec: {e}"
            ))
        })
    }
}

/// Maps a solver error to an exit-code-bearing failure. Non-convergence
/// renders a report with the residual; everything else is a validation
/// failure.
fn solve_failure(tag: &str, e: SolveError, common: &Common) -> Failure {
    match e {
        SolveError::NonConvergence {
            residual,
            tol,
            iterations,
        } => {
            let mut r = Report::new();
            r.raw("command", tag);
            r.raw("status", "non_converged");
            r.raw("residual", format!("{residual:e}"));
            r.raw("tol", format!("{tol:e}"));
            r.raw("iterations", iterations);
            Failure::NonConvergence(r.render(common.format, common.bits))
        }
        other => Failure::Validation(other.to_string()),
    }
}

/// The fixed-column CSV tables document their unit in the column name, so
/// `--bits` cannot apply to them.
fn reject_bits_for_fixed_csv(common: &Common) -> Result<(), Failure> {
    if common.format == Format::Csv && common.bits {
        return Err(Failure::Validation(
            "--bits cannot combine with --format csv here: this table's columns are fixed in nats"
                .to_string(),
        ));
    }
    Ok(())
}

fn cmd_capacity(channel: &str, common: &Common) -> Result<String, Failure> {
    let w = resolve_channel(channel)?;
    let sc = shannon_capacity(&w, common.tol, SOLVER_ITER)
        .map_err(|e| solve_failure("capacity", e, common))?;
    let mut r = Report::new();
    r.raw("command", "capacity");
    r.nats("shannon_c", sc.capacity);
    r.nats("certificate_gap", sc.gap);
    r.raw("iterations", sc.iterations);
    r.vector("p_star", &sc.p_star);
    Ok(r.render(common.format, common.bits))
}

fn cmd_e0(channel: &str, common: &Common, tag: &str) -> Result<String, Failure> {
    let w = resolve_channel(channel)?;
    let res = maximize_e0(common.rho, &w, common.tol, SOLVER_ITER)
        .map_err(|e| solve_failure(tag, e, common))?;
    let mut r = Report::new();
    r.raw("command", tag);
    r.raw("rho", common.rho);
    r.nats("e0", res.e0_value);
    r.nats("cutoff", res.cutoff_rate);
    r.raw("kkt_residual", res.kkt_residual);
    r.raw("iterations", res.iterations);
    r.vector("p_star", &res.p_star);
    Ok(r.render(common.format, common.bits))
}

fn cmd_pi0(channel: &str, common: &Common) -> Result<String, Failure> {
    let w = resolve_channel(channel)?;
    let res = pi0(&w).map_err(|e| solve_failure("pi0", e, common))?;
    let mut r = Report::new();
    r.raw("command", "pi0");
    r.raw("pi0", res.pi0);
    r.nats("neg_log_pi0", -res.pi0.ln());
    r.raw("duality_gap", res.duality_gap);
    r.vector("p_star", &res.p_star);
    r.vector("duals", &res.duals);
    Ok(r.render(common.format, common.bits))
}

fn cmd_report(channel: &str, common: &Common) -> Result<String, Failure> {
    let w = resolve_channel(channel)?;
    let rep = feedback_capacity_report(&w, common.rho, common.tol)
        .map_err(|e| solve_failure("report", e, common))?;
    let mut r = Report::new();
    r.raw("command", "report");
    r.raw("rho", rep.rho);
    r.nats("shannon_c", rep.shannon_c);
    r.raw("pi0", rep.pi0);
    r.nats("neg_log_pi0", rep.neg_log_pi0);
    r.raw("czero_positive", rep.czero_positive);
    r.nats("czero_feedback", rep.czero_feedback);
    r.raw("ceo_positive", rep.ceo_positive);
    r.nats("ceo_feedback", rep.ceo_feedback);
    r.nats("cutoff", rep.cutoff);
    r.nats("ambiguous_upper", rep.ambiguous_upper);
    r.nats("calf_upper", rep.calf_upper);
    match rep.calf_exact {
        Some(v) => r.nats("calf_exact", v),
        None => r.raw("calf_exact", "-"),
    };
    r.nats("calf_lower", rep.calf_lower);
    r.raw("q_star", rep.q_star);
    r.nats("feedback_lower_bound", rep.feedback_lower_bound);
    Ok(r.render(common.format, common.bits))
}

fn cmd_bounds(channel: &str, common: &Common) -> Result<String, Failure> {
    let w = resolve_channel(channel)?;
    let rep = bound_comparison_report(&w, common.rho, common.tol)
        .map_err(|e| solve_failure("bounds", e, common))?;
    if common.format == Format::Csv {
        reject_bits_for_fixed_csv(common)?;
        return Ok(rep.to_csv());
    }
    let mut r = Report::new();
    r.raw("command", "bounds");
    r.raw("rho", rep.rho);
    for b in &rep.bounds {
        r.nats(&b.name, b.value);
    }
    for (i, oc) in rep.orderings.iter().enumerate() {
        let status = if oc.holds { "pass" } else { "fail" };
        r.raw(
            &format!("check_{i}"),
            format!("{status} slack={} ({})", oc.slack, oc.description),
        );
    }
    for (i, note) in rep.notes.iter().enumerate() {
        r.raw(&format!("note_{i}"), note);
    }
    Ok(r.render(common.format, common.bits))
}

fn cmd_reduce(channel: &str, common: &Common) -> Result<String, Failure> {
    let w = resolve_channel(channel)?;
    let merged = merge_equivalent_outputs(&w);
    let mut r = Report::new();
    r.raw("command", "reduce");
    r.raw("inputs", w.num_inputs());
    r.raw("outputs", w.num_outputs());
    r.raw("merged_outputs", merged.channel.num_outputs());
    let groups = merged
        .groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|y| y.to_string())
                .collect::<Vec<_>>()
                .join("|")
        })
        .collect::<Vec<_>>()
        .join(";");
    r.raw("groups", groups);
    for x in 0..merged.channel.num_inputs() {
        r.vector(&format!("merged_row_{x}"), merged.channel.row(x));
    }
    match check_factorization(&w) {
        Some(f) => {
            r.raw("factorizable", true);
            r.vector("factor_a", &f.a);
            r.vector("factor_b", &f.b);
        }
        None => {
            r.raw("factorizable", false);
        }
    }
    Ok(r.render(common.format, common.bits))
}

fn cmd_nletter(
    channel: &str,
    n: u32,
    mode: CliNLetterMode,
    common: &Common,
) -> Result<String, Failure> {
    let w = resolve_channel(channel)?;
    let lib_mode = match mode {
        CliNLetterMode::Exhaustive => NLetterMode::ExhaustiveUniform,
        CliNLetterMode::Product => NLetterMode::Product,
    };
    let b = n_letter_forney(common.rho, &w, n, lib_mode, None)
        .map_err(|e| solve_failure("nletter", e, common))?;
    let mut r = Report::new();
    r.raw("command", "nletter");
    r.raw("rho", common.rho);
    r.raw("n", n);
    r.raw(
        "mode",
        match mode {
            CliNLetterMode::Exhaustive => "exhaustive",
            CliNLetterMode::Product => "product",
        },
    );
    r.nats(&b.name, b.value);
    if let Some(p) = &b.p_used {
        r.vector("p_used", p);
    }
    Ok(r.render(common.format, common.bits))
}

fn cmd_rstar(channel: &str, xi_max: f64, common: &Common) -> Result<String, Failure> {
    let w = resolve_channel(channel)?;
    let res = r_star(common.rho, &w, xi_max)
        .map_err(|e| solve_failure("rstar", e, common))?;
    let flb = feedback_lower_bound(common.rho, &w, xi_max)
        .map_err(|e| solve_failure("rstar", e, common))?;
    let mut r = Report::new();
    r.raw("command", "rstar");
    r.raw("rho", common.rho);
    r.raw("xi_max", xi_max);
    r.nats("r_star", res.value);
    r.raw("xi_star", res.xi_star);
    r.vector("p_star", &res.p_star);
    r.nats("feedback_lower_bound", flb.value);
    Ok(r.render(common.format, common.bits))
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    channel: &str,
    n: usize,
    trials: u64,
    rate: Option<f64>,
    ell: Option<usize>,
    k: Option<usize>,
    nprime: Option<usize>,
    alpha: Option<f64>,
    common: &Common,
) -> Result<String, Failure> {
    let w = resolve_channel(channel)?;
    let rate = rate.ok_or_else(|| {
        Failure::Validation("simulate requires --rate (nats per channel use)".to_string())
    })?;
    if let Some(alpha) = alpha {
        reject_bits_for_fixed_csv(common)?;
        let cfg = TypeSchemeConfig {
            rho: common.rho,
            rate,
            n,
            alpha,
            trials,
            seed: common.seed,
        };
        let rep = simulate_type_scheme(&w, &cfg)
            .map_err(|e| solve_failure("simulate", e, common))?;
        if common.format == Format::Csv {
            let se = rep
                .std_error
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".to_string());
            return Ok(format!(
                "n,rate,rho,alpha,moment,se,shell_moment,analytic_bound,seed\n\
                 {},{},{},{},{},{},{},{},{}\n",
                rep.n,
                rep.rate_raw,
                rep.rho,
                rep.alpha,
                rep.moment,
                se,
                rep.shell_moment,
                rep.analytic_bound,
                rep.seed
            ));
        }
        let mut r = Report::new();
        r.raw("command", "simulate");
        r.raw("scheme", "type_partition");
        r.raw("n", rep.n);
        r.raw("alpha", rep.alpha);
        r.raw("trials", rep.trials);
        r.raw("seed", rep.seed);
        r.raw("rho", rep.rho);
        r.raw("num_messages", rep.num_messages);
        r.raw("num_sublists", rep.num_sublists);
        r.raw("pair", format!("{}|{}", rep.pair.0, rep.pair.1));
        let counts = rep
            .data_counts
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(";");
        r.raw("data_counts", counts);
        r.raw("overhead_uses", rep.overhead_uses);
        r.nats("rate_raw", rep.rate_raw);
        r.raw("moment", rep.moment);
        r.opt("std_error", rep.std_error);
        r.raw("shell_moment", rep.shell_moment);
        r.raw("shell_moment_exact", rep.shell_moment_exact);
        r.raw("analytic_bound", rep.analytic_bound);
        Ok(r.render(common.format, common.bits))
    } else {
        let (ell, k, nprime) = match (ell, k, nprime) {
            (Some(ell), Some(k), Some(nprime)) => (ell, k, nprime),
            _ => {
                return Err(Failure::Validation(
                    "the three-phase scheme requires --ell, --k, and --nprime \
                     (pass --alpha for the type partition scheme instead)"
                        .to_string(),
                ))
            }
        };
        reject_bits_for_fixed_csv(common)?;
        let cfg = ThreePhaseConfig {
            rho: common.rho,
            rate,
            n,
            ell,
            k,
            nprime,
            trials,
            seed: common.seed,
            p: None,
            codebook: None,
        };
        let rep = simulate_three_phase_scheme(&w, &cfg)
            .map_err(|e| solve_failure("simulate", e, common))?;
        if common.format == Format::Csv {
            let se = rep
                .std_error
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".to_string());
            return Ok(format!(
                "n,R_eff,rho,moment,se,E1_freq,E2_freq,E3_freq,seed\n{},{},{},{},{},{},{},{},{}\n",
                rep.n,
                rep.rate_effective,
                rep.rho,
                rep.moment,
                se,
                rep.e1_freq,
                rep.e2_freq,
                rep.e3_freq,
                rep.seed
            ));
        }
        let mut r = Report::new();
        r.raw("command", "simulate");
        r.raw("scheme", "three_phase");
        r.raw("n", rep.n);
        r.raw("ell", rep.ell);
        r.raw("k", rep.k);
        r.raw("nprime", rep.nprime);
        r.raw("trials", rep.trials);
        r.raw("seed", rep.seed);
        r.raw("rho", rep.rho);
        r.raw("num_messages", rep.num_messages);
        r.nats("rate_raw", rep.rate_raw);
        r.nats("rate_effective", rep.rate_effective);
        r.raw("q_star", rep.q_star);
        r.raw("moment", rep.moment);
        r.opt("std_error", rep.std_error);
        r.raw("e1_freq", rep.e1_freq);
        r.raw("e2_freq", rep.e2_freq);
        r.raw("e3_freq", rep.e3_freq);
        r.raw("reached", rep.reached);
        r.raw("e3_conditional", rep.e3_conditional);
        Ok(r.render(common.format, common.bits))
    }
}

fn cmd_binomial(n: u32, alpha: f64, beta: f64, common: &Common) -> Result<String, Failure> {
    let shifted = binomial_moment_bound(n, alpha, beta, common.rho, BinomialVariant::Shifted)
        .map_err(|e| solve_failure("binomial", e, common))?;
    let raw_bound = binomial_moment_bound(n, alpha, beta, common.rho, BinomialVariant::Raw)
        .map_err(|e| solve_failure("binomial", e, common))?;
    let mut r = Report::new();
    r.raw("command", "binomial");
    r.raw("n", n);
    r.raw("alpha", alpha);
    r.raw("beta", beta);
    r.raw("rho", common.rho);
    r.raw("gamma", binomial_gamma(common.rho));
    r.raw("bound_shifted", shifted);
    r.raw("bound_raw", raw_bound);
    // The exact oracle only exists at desk scale; a trial count beyond the
    // cap degrades to bound-only output rather than failing.
    let n_trials = (f64::from(n) * alpha).exp().round() as u64;
    let p = (-f64::from(n) * beta).exp();
    match (
        binomial_moment_oracle(n_trials, p, common.rho, BinomialVariant::Shifted),
        binomial_moment_oracle(n_trials, p, common.rho, BinomialVariant::Raw),
    ) {
        (Ok(os), Ok(or)) => {
            r.raw("oracle_trials", n_trials);
            r.raw("oracle_p", p);
            r.raw("oracle_shifted", os);
            r.raw("oracle_raw", or);
        }
        _ => {
            r.raw("oracle", "skipped: trial count exceeds the exact-enumeration cap");
        }
    }
    Ok(r.render(common.format, common.bits))
}

fn cmd_compare(channel: &str, seeds: u64, common: &Common) -> Result<String, Failure> {
    if channel != "random" {
        let w = resolve_channel(channel)?;
        let rep = bound_comparison_report(&w, common.rho, common.tol)
            .map_err(|e| solve_failure("compare", e, common))?;
        return Ok(render_compare(common, 1, &rep.orderings));
    }
    if seeds == 0 {
        return Err(Failure::Validation("--seeds must be at least 1".to_string()));
    }
    let mut orderings = Vec::new();
    for s in 0..seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
        rng.set_stream(s);
        let (nx, ny) = RANDOM_DIMS[(s % 4) as usize];
        let w = fixtures::random_dense(&mut rng, nx, ny, 0.01);
        let rep = bound_comparison_report(&w, common.rho, common.tol)
            .map_err(|e| solve_failure("compare", e, common))?;
        for mut oc in rep.orderings {
            oc.description = format!("seed {s}: {}", oc.description);
            orderings.push(oc);
        }
    }
    Ok(render_compare(common, seeds, &orderings))
}

fn render_compare(
    common: &Common,
    channels: u64,
    orderings: &[caplab::bounds::OrderingCheck],
) -> String {
    let violations: Vec<_> = orderings.iter().filter(|o| !o.holds).collect();
    let min_slack = orderings
        .iter()
        .filter(|o| o.holds)
        .map(|o| o.slack)
        .fold(f64::INFINITY, f64::min);
    let mut r = Report::new();
    r.raw("command", "compare");
    r.raw("rho", common.rho);
    r.raw("channels", channels);
    r.raw("checks", orderings.len());
    r.raw("violations", violations.len());
    r.raw("min_slack", min_slack);
    for (i, oc) in violations.iter().enumerate() {
        r.raw(
            &format!("violation_{i}"),
            format!("slack={} ({})", oc.slack, oc.description),
        );
    }
    r.render(common.format, common.bits)
}
