//! Command-line interface.
//!
//! Exit codes: 0 success or `OK`, 1 verification or protocol failure, 2
//! invalid input or a refused enumeration budget.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use permsel_core::build::{build_verified, grow_verified, minimal_m_search, BuildConfig};
use permsel_core::coupon::{
    p_bound, p_bruteforce, p_exact, p_jump_bound, p_jump_bruteforce, p_jump_exact, p_monte_carlo,
    ExactProb, DEFAULT_ENUMERATION_BUDGET,
};
use permsel_core::params::SizeParams;
use permsel_core::radio::{
    choose_kappa, feasible_kappa, gossip, measure_broadcast_rounds, random_strongly_connected,
    selection_surcharge, Network, ProtocolConfig, RoundRobin, DEFAULT_PATH_BUDGET,
};
use permsel_core::tail::{chernoff_tail, instance_failure_bound, union_bound_value};
use permsel_core::verify::verify;
use permsel_core::{Budget, Error, Selector, SizeMode, Target};

use crate::format::{self, sweep_row, SWEEP_HEADER};

/// Environment variable overriding every enumeration budget.
pub const BUDGET_ENV: &str = "PERMSEL_BUDGET";

#[derive(Parser, Debug)]
#[command(
    name = "permsel",
    version,
    about = "Permutation selectors and radio-network gossip simulation"
)]
pub struct Cli {
    /// Seed for every random draw of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a verified selector (random generation + exhaustive check).
    Gen(GenArgs),
    /// Verify a selector file.
    Verify(VerifyArgs),
    /// Exact, bound and Monte-Carlo coupon-subsequence probabilities.
    Prob(ProbArgs),
    /// Size constants, Chernoff tail and union-bound certificate.
    Bound(BoundArgs),
    /// Smallest selector length found by seeded random search.
    Minsize(MinsizeArgs),
    /// Run gossiping on a network and audit the result.
    Simulate(SimulateArgs),
    /// CSV grid of exact probabilities and bounds.
    ///
    /// Columns: ell,k,q,exact_num,exact_den,bound (q empty without -q).
    Sweep(SweepArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetArg {
    Strong,
    Permutation,
    Kq,
    KqPermutation,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Exact,
    #[value(name = "up_to", alias = "up-to")]
    UpTo,
}

impl From<ModeArg> for SizeMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => SizeMode::Exact,
            ModeArg::UpTo => SizeMode::UpTo,
        }
    }
}

#[derive(Args, Debug)]
pub struct TargetOpts {
    #[arg(long, value_enum, default_value = "permutation")]
    pub target: TargetArg,
    #[arg(long, value_enum, default_value = "up_to")]
    pub mode: ModeArg,
    /// Required for the kq and kq-permutation targets.
    #[arg(short = 'q')]
    pub q: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(short = 'k')]
    pub k: usize,
    #[arg(short = 'N')]
    pub n: usize,
    /// Selector length (default: the size formula).
    #[arg(short = 'm')]
    pub m: Option<usize>,
    #[command(flatten)]
    pub target: TargetOpts,
    #[arg(long, default_value_t = 50)]
    pub max_attempts: usize,
    /// Output selector file (default: stdout, report on stderr).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub selector: PathBuf,
    /// Defaults to the k in the file header.
    #[arg(short = 'k')]
    pub k: Option<usize>,
    #[command(flatten)]
    pub target: TargetOpts,
}

#[derive(Args, Debug)]
pub struct ProbArgs {
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(short = 'k')]
    pub k: usize,
    /// Jump-subsequence block count.
    #[arg(short = 'q')]
    pub q: Option<usize>,
    /// Also estimate by Monte Carlo with this many trials.
    #[arg(long)]
    pub mc: Option<u64>,
    /// Also compute the enumeration oracle.
    #[arg(long)]
    pub brute: bool,
    /// Emit the CSV grid for ell = max(k or q) ..= ell-max instead.
    #[arg(long)]
    pub sweep: bool,
    #[arg(long, default_value_t = 40)]
    pub ell_max: usize,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(short = 'k')]
    pub k: usize,
    #[arg(short = 'N')]
    pub n: usize,
    #[arg(short = 'q')]
    pub q: Option<usize>,
    /// Length for the tail and per-instance bounds (default: the formula length).
    #[arg(short = 'm')]
    pub m: Option<usize>,
}

#[derive(Args, Debug)]
pub struct MinsizeArgs {
    #[arg(short = 'k')]
    pub k: usize,
    #[arg(short = 'N')]
    pub n: usize,
    #[command(flatten)]
    pub target: TargetOpts,
    #[arg(long, default_value_t = 16)]
    pub trials: usize,
    /// Scan ceiling (default: the formula length, or k·N for k = 1).
    #[arg(long)]
    pub max_m: Option<usize>,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("net").required(true).args(["network", "random"])))]
#[command(group(clap::ArgGroup::new("sel").required(true).args(["selector", "auto"])))]
pub struct SimulateArgs {
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// Random strongly connected network: node count, extra-edge probability, seed.
    #[arg(long, num_args = 3, value_names = ["N", "P", "SEED"])]
    pub random: Option<Vec<String>>,
    #[arg(long)]
    pub kappa: Option<usize>,
    #[arg(long)]
    pub selector: Option<PathBuf>,
    /// Build a verified (kappa, n)-permutation selector.
    #[arg(long)]
    pub auto: bool,
    /// B(n) for kappa and the selection surcharge (default: measured).
    #[arg(long)]
    pub broadcast_rounds: Option<u64>,
    /// Record active-path diagnostics after every iteration.
    #[arg(long)]
    pub track_ell: bool,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Also write the network file used.
    #[arg(long)]
    pub network_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(short = 'k')]
    pub k: usize,
    #[arg(short = 'q')]
    pub q: Option<usize>,
    #[arg(long, default_value_t = 40)]
    pub ell_max: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn failed(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        invalid(format!("i/o error: {e}"))
    }
}

impl From<format::FormatError> for Failure {
    fn from(e: format::FormatError) -> Self {
        invalid(e.to_string())
    }
}

/// Parameter problems and budget refusals are invalid input.
fn input_error(e: Error) -> Failure {
    invalid(e.to_string())
}

type CmdResult = Result<i32, Failure>;

struct Env {
    budget: Option<u128>,
}

impl Env {
    fn from_process() -> Result<Self, Failure> {
        let budget = match std::env::var(BUDGET_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<u128>()
                    .map_err(|_| invalid(format!("{BUDGET_ENV} must be an integer")))?,
            ),
            Err(_) => None,
        };
        Ok(Self { budget })
    }

    fn verify_budget(&self) -> Budget {
        self.budget.map(Budget).unwrap_or_default()
    }

    fn enumeration_budget(&self) -> u128 {
        self.budget.unwrap_or(DEFAULT_ENUMERATION_BUDGET)
    }
}

fn resolve_target(opts: &TargetOpts, k: usize) -> Result<Target, Failure> {
    let need_q = || opts.q.ok_or_else(|| invalid("this target needs -q"));
    let target = match opts.target {
        TargetArg::Strong => Target::Strong,
        TargetArg::Permutation => Target::Permutation,
        TargetArg::Kq => Target::Kq { q: need_q()? },
        TargetArg::KqPermutation => Target::KqPermutation { q: need_q()? },
    };
    if let Some(q) = target.q() {
        if q == 0 || q > k {
            return Err(invalid(format!("q = {q} must satisfy 1 <= q <= k = {k}")));
        }
    }
    Ok(target)
}

fn check_k(k: usize, n: usize) -> Result<(), Failure> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    if k > n {
        return Err(invalid(format!("k = {k} exceeds N = {n}")));
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn cmd_gen(
    a: &GenArgs,
    seed: u64,
    env: &Env,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    check_k(a.k, a.n)?;
    let target = resolve_target(&a.target, a.k)?;
    let q = match target {
        Target::KqPermutation { q } => Some(q),
        _ => None,
    };
    let params = if a.k >= 2 {
        Some(SizeParams::derive(a.k, a.n, q).map_err(input_error)?)
    } else {
        None
    };
    if params.is_none() && a.m.is_none() {
        return Err(invalid("k = 1 has no size formula; pass -m"));
    }
    let config = BuildConfig {
        seed,
        max_attempts: a.max_attempts.max(1),
        m_override: a.m,
        size_mode: a.target.mode.into(),
        target,
        budget: env.verify_budget(),
    };
    let built = match build_verified(a.k, a.n, &config) {
        Ok(b) => b,
        Err(e @ (Error::AttemptsExhausted { .. } | Error::BudgetExceeded { .. })) => {
            return Err(failed(e.to_string()))
        }
        Err(e) => return Err(input_error(e)),
    };
    let text = format::write_selector(a.k, &built.selector);
    let report = format!(
        "{}attempts={} m={}\n",
        params.map(|p| format!("{p}\n")).unwrap_or_default(),
        built.attempts,
        built.selector.len()
    );
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            out.write_all(report.as_bytes())?;
        }
        None => {
            out.write_all(text.as_bytes())?;
            err.write_all(report.as_bytes())?;
        }
    }
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs, env: &Env, out: &mut dyn Write) -> CmdResult {
    let file = format::parse_selector(&read_file(&a.selector)?)?;
    let k = a.k.unwrap_or(file.k);
    check_k(k, file.selector.universe_size())?;
    let target = resolve_target(&a.target, k)?;
    let verdict = verify(
        &file.selector,
        k,
        target,
        a.target.mode.into(),
        env.verify_budget(),
    )
    .map_err(input_error)?;
    writeln!(out, "{verdict}")?;
    Ok(if verdict.is_ok() { 0 } else { 1 })
}

fn exact_and_bound(
    ell: usize,
    k: usize,
    q: Option<usize>,
) -> Result<(ExactProb, Option<f64>), Failure> {
    match q {
        None => {
            let exact = p_exact(ell, k).map_err(input_error)?;
            Ok((exact, p_bound(ell, k).ok()))
        }
        Some(q) => {
            let exact = p_jump_exact(ell, k, q).map_err(input_error)?;
            Ok((exact, p_jump_bound(ell, k, q).ok()))
        }
    }
}

fn sweep_csv(k: usize, q: Option<usize>, ell_max: usize) -> Result<String, Failure> {
    let mut csv = format!("{SWEEP_HEADER}\n");
    for ell in q.unwrap_or(k).max(1)..=ell_max {
        let (exact, bound) = exact_and_bound(ell, k, q)?;
        let bound = bound.ok_or_else(|| invalid("bound undefined"))?;
        csv.push_str(&sweep_row(ell, k, q, &exact, bound));
        csv.push('\n');
    }
    Ok(csv)
}

fn cmd_prob(a: &ProbArgs, seed: u64, env: &Env, out: &mut dyn Write) -> CmdResult {
    if a.sweep {
        out.write_all(sweep_csv(a.k, a.q, a.ell_max)?.as_bytes())?;
        return Ok(0);
    }
    let ell = a
        .ell
        .ok_or_else(|| invalid("--ell is required without --sweep"))?;
    if ell == 0 {
        return Err(invalid("--ell must be at least 1"));
    }
    let (exact, bound) = exact_and_bound(ell, a.k, a.q)?;
    let mut line = format!("p_exact={exact}");
    match bound {
        Some(b) => line.push_str(&format!(" p_bound={b} ratio={}", exact.to_f64() / b)),
        None => line.push_str(" p_bound=NA ratio=NA"),
    }
    if a.brute {
        let budget = env.enumeration_budget();
        let brute = match a.q {
            None => p_bruteforce(ell, a.k, budget),
            Some(q) => p_jump_bruteforce(ell, a.k, q, budget),
        }
        .map_err(input_error)?;
        line.push_str(&format!(" p_bruteforce={brute}"));
    }
    if let Some(trials) = a.mc {
        let est = p_monte_carlo(ell, a.k, a.q, trials, seed).map_err(input_error)?;
        line.push_str(&format!(
            " mc_estimate={} mc_std_error={}",
            est.estimate, est.std_error
        ));
    }
    writeln!(out, "{line}")?;
    Ok(0)
}

fn cmd_bound(a: &BoundArgs, out: &mut dyn Write) -> CmdResult {
    let params = SizeParams::derive(a.k, a.n, a.q).map_err(input_error)?;
    let m = a.m.unwrap_or(params.m);
    let union = union_bound_value(a.k, a.n, params.c).map_err(input_error)?;
    writeln!(out, "{params}")?;
    writeln!(
        out,
        "m_eval={m} chernoff_tail={:e} instance_failure_bound={:e} union_bound_ln={} existence_certified={}",
        chernoff_tail(m, a.k).map_err(input_error)?,
        instance_failure_bound(a.k, m.max(1)).map_err(input_error)?,
        union.ln_value,
        union.existence_certified
    )?;
    Ok(0)
}

fn cmd_minsize(a: &MinsizeArgs, seed: u64, env: &Env, out: &mut dyn Write) -> CmdResult {
    check_k(a.k, a.n)?;
    let target = resolve_target(&a.target, a.k)?;
    let config = BuildConfig {
        seed,
        m_override: a.max_m,
        size_mode: a.target.mode.into(),
        target,
        budget: env.verify_budget(),
        ..Default::default()
    };
    match minimal_m_search(a.k, a.n, &config, a.trials.max(1)) {
        Ok(m) => {
            writeln!(out, "m={m}")?;
            Ok(0)
        }
        Err(e @ Error::AttemptsExhausted { .. }) => Err(failed(e.to_string())),
        Err(e) => Err(input_error(e)),
    }
}

fn load_network(a: &SimulateArgs) -> Result<Network, Failure> {
    if let Some(path) = &a.network {
        return Ok(format::parse_network(&read_file(path)?)?);
    }
    let vals = a.random.as_ref().expect("clap enforces the group");
    let n: usize = vals[0]
        .parse()
        .map_err(|_| invalid("--random: node count must be an integer"))?;
    let p: f64 = vals[1]
        .parse()
        .map_err(|_| invalid("--random: probability must be a number"))?;
    let s: u64 = vals[2]
        .parse()
        .map_err(|_| invalid("--random: seed must be an integer"))?;
    if n == 0 || !(0.0..=1.0).contains(&p) {
        return Err(invalid("--random needs n >= 1 and 0 <= p <= 1"));
    }
    Ok(random_strongly_connected(n, p, s))
}

fn cmd_simulate(a: &SimulateArgs, seed: u64, env: &Env, out: &mut dyn Write) -> CmdResult {
    let net = load_network(a)?;
    if let Some(v) = net.strong_connectivity_witness() {
        return Err(invalid(Error::NotStronglyConnected(v).to_string()));
    }
    if let Some(path) = &a.network_out {
        write_file(path, &format::write_network(&net))?;
    }
    let n = net.n();
    let budget = env.verify_budget();
    let b = match a.broadcast_rounds {
        Some(b) => b,
        None => measure_broadcast_rounds(&net, &RoundRobin).map_err(input_error)?,
    };

    let (kappa, selector): (usize, Selector) = if let Some(path) = &a.selector {
        let file = format::parse_selector(&read_file(path)?)?;
        let kappa = a.kappa.unwrap_or(file.k);
        if kappa != file.k || file.selector.universe_size() != n {
            return Err(invalid(format!(
                "selector file is a ({}, {})-selector, need ({kappa}, {n})",
                file.k,
                file.selector.universe_size()
            )));
        }
        check_k(kappa, n)?;
        match verify(
            &file.selector,
            kappa,
            Target::Permutation,
            SizeMode::UpTo,
            budget,
        ) {
            Ok(v) if !v.is_ok() => {
                return Err(invalid(format!(
                    "selector is not a permutation selector: {v}"
                )))
            }
            Ok(_) => writeln!(out, "selector_check=OK")?,
            Err(Error::BudgetExceeded { .. }) => writeln!(out, "selector_check=skipped")?,
            Err(e) => return Err(input_error(e)),
        }
        (kappa, file.selector)
    } else {
        let kappa = a
            .kappa
            .unwrap_or_else(|| feasible_kappa(n, choose_kappa(n.max(2), b), budget));
        check_k(kappa, n)?;
        let built = grow_verified(kappa, n, seed, 4, budget).map_err(input_error)?;
        (kappa, built.selector)
    };

    let config = ProtocolConfig {
        kappa,
        surcharge_per_selection: selection_surcharge(b, n),
        ell_budget: a.track_ell.then_some(DEFAULT_PATH_BUDGET),
    };
    let mut provider = |_k: usize, _n: usize| Ok(selector.clone());
    let outcome = match gossip(&net, &mut provider, &RoundRobin, &config) {
        Ok(o) => o,
        Err(e @ (Error::GossipIncomplete { .. } | Error::InvariantViolated(_))) => {
            writeln!(out, "audit=fail")?;
            return Err(failed(e.to_string()));
        }
        Err(e) => return Err(input_error(e)),
    };
    if let Some(path) = &a.trace {
        write_file(path, &format::write_trace(&outcome.trace))?;
    }
    writeln!(
        out,
        "n={n} kappa={kappa} broadcast_rounds={b} selector_len={} iterations={}",
        selector.len(),
        outcome.report.iterations
    )?;
    if a.track_ell {
        let ell: Vec<String> = outcome.report.ell.iter().map(ToString::to_string).collect();
        writeln!(out, "ell=[{}]", ell.join(","))?;
    }
    writeln!(out, "{}", format::write_summary(&outcome.trace))?;
    writeln!(out, "audit=pass")?;
    Ok(0)
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> CmdResult {
    let csv = sweep_csv(a.k, a.q, a.ell_max)?;
    match &a.out {
        Some(path) => write_file(path, &csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(0)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    let result = Env::from_process().and_then(|env| match &cli.command {
        Command::Gen(a) => cmd_gen(a, cli.seed, &env, out, err),
        Command::Verify(a) => cmd_verify(a, &env, out),
        Command::Prob(a) => cmd_prob(a, cli.seed, &env, out),
        Command::Bound(a) => cmd_bound(a, out),
        Command::Minsize(a) => cmd_minsize(a, cli.seed, &env, out),
        Command::Simulate(a) => cmd_simulate(a, cli.seed, &env, out),
        Command::Sweep(a) => cmd_sweep(a, out),
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
