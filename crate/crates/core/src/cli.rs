//! Command-line front end. All logic lives here so it can be driven from
//! tests; the binary only forwards `std::env::args`, stdin and stdout.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::delivery::{
    account_plan, build_centralized_plan, build_decentralized_plan, parse_plans, plans_to_text, verify_completeness,
    DeliveryPlan, PlanLedger, PlanMode,
};
use crate::error::{Error, Result};
use crate::metrics::{
    dof_report, ndt_centralized, ndt_monte_carlo, ndt_oracle, ndt_oracle_finite, ndt_theorem2_terms, sweep_csv,
    sweep_figure, worked_example_check, CentralizedScheme, Figure, OracleNdt, SweepAxis,
};
use crate::model::{DemandVector, NetworkConfig};
use crate::phy::{verify_plans_phy, PhyReport, CHANNEL_DISTRIBUTION, ZF_TOLERANCE};
use crate::placement::{place_centralized, DecentralizedLayout, SubfileUniverse, RNG_ALGORITHM};
use crate::rational::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

const IA_NOTE: &str =
    "# note: interference alignment is accounted by signal-dimension counting; no alignment precoders are constructed";
const CENTRALIZED_NDT_NOTE: &str =
    "centralized NDT = K_R(1-M_R/N)/sDoF, a load-over-rate conversion used for comparison only";

#[derive(Debug, Parser)]
#[command(name = "cachenet", version, about = "DoF and delivery-time tools for cache-aided interference networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Achievable sDoF of the ZF+IA+IC scheme and the ZF+IC baseline.
    Sdof(CommonArgs),
    /// Decentralized NDT: closed form, scheme oracle and optional Monte-Carlo.
    Ndt(CommonArgs),
    /// Build a delivery plan and print it with its dimension ledger.
    Plan(PlanArgs),
    /// Verify a plan file (or stdin) against a configuration.
    Verify(VerifyArgs),
    /// Write the data behind the 1/sDoF or NDT comparison curves.
    Sweep(SweepArgs),
    /// Per-tier breakdown of the scheme-derived NDT.
    OracleNdt(CommonArgs),
}

#[derive(Debug, Clone, Args, Default)]
pub struct CommonArgs {
    /// key=value configuration file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub kt: Option<usize>,
    #[arg(long)]
    pub kr: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Transmitter cache size in files (p/q or decimal).
    #[arg(long)]
    pub mt: Option<String>,
    /// Receiver cache size in files (p/q or decimal).
    #[arg(long)]
    pub mr: Option<String>,
    #[arg(long)]
    pub file_bits: Option<u64>,
    /// Base seed for placement sampling and channel draws.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of Monte-Carlo placements (seeds seed, seed+1, ...).
    #[arg(long)]
    pub seeds: Option<u64>,
    /// Comma-separated 1-based file requested by each receiver.
    #[arg(long)]
    pub demand: Option<String>,
    /// Relative zero-forcing tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Centralized,
    Decentralized,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Print the cache contents as well.
    #[arg(long)]
    pub show: bool,
    /// Check completeness and zero-forcing over sampled channels.
    #[arg(long)]
    pub verify: bool,
    /// Number of channel draws for --verify.
    #[arg(long)]
    pub channel_seeds: Option<u64>,
    /// Write the plan here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Plan file; reads stdin when omitted or `-`.
    pub plan: Option<PathBuf>,
    #[arg(long)]
    pub channel_seeds: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureArg {
    Fig2,
    Fig4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Mr,
    Mt,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub figure: FigureArg,
    #[arg(long, value_enum, default_value = "mr")]
    pub axis: AxisArg,
    /// Comma-separated cache sizes; defaults to the figure's grid.
    #[arg(long)]
    pub values: Option<String>,
    /// CSV path; the exact values go to `<stem>.exact.csv` next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub network: NetworkConfig,
    pub mode: Mode,
    pub seed: u64,
    pub seeds: Option<u64>,
    pub demand: DemandVector,
    pub tol: f64,
    pub channel_seeds: u64,
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) =
            line.split_once('=').ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", i + 1)))?;
        out.insert(k.trim().replace('-', "_").to_lowercase(), v.trim().to_string());
    }
    Ok(out)
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Parse(format!("bad value for {key}: {v:?}")))
}

struct Defaults {
    k_t: Option<usize>,
    k_r: Option<usize>,
    n: Option<usize>,
    m_t: Option<&'static str>,
    m_r: Option<&'static str>,
}

const NO_DEFAULTS: Defaults = Defaults { k_t: None, k_r: None, n: None, m_t: None, m_r: None };

impl CommonArgs {
    /// Merges the config file (if any) with flags and validates the result.
    fn resolve(&self, channel_seeds: Option<u64>, defaults: &Defaults) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => parse_config_text(&std::fs::read_to_string(p)?)?,
            None => BTreeMap::new(),
        };
        if let Some(bad) = file.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
            return Err(Error::Parse(format!("unknown config key {bad:?}")));
        }
        let pick = |flag: Option<String>, key: &str| flag.or_else(|| file.get(key).cloned());
        let need = |v: Option<String>, key: &str, dflt: Option<String>| {
            v.or(dflt).ok_or_else(|| Error::InvalidConfig(format!("missing required parameter --{key}")))
        };
        let k_t: usize =
            num("kt", &need(pick(self.kt.map(|v| v.to_string()), "kt"), "kt", defaults.k_t.map(|v| v.to_string()))?)?;
        let k_r: usize =
            num("kr", &need(pick(self.kr.map(|v| v.to_string()), "kr"), "kr", defaults.k_r.map(|v| v.to_string()))?)?;
        let n: usize =
            num("n", &need(pick(self.n.map(|v| v.to_string()), "n"), "n", defaults.n.map(|v| v.to_string()))?)?;
        let m_t: Rational = num("mt", &need(pick(self.mt.clone(), "mt"), "mt", defaults.m_t.map(String::from))?)?;
        let m_r: Rational = num("mr", &need(pick(self.mr.clone(), "mr"), "mr", defaults.m_r.map(String::from))?)?;
        let mut network = NetworkConfig::new(k_t, k_r, n, m_t, m_r)?;
        if let Some(bits) = pick(self.file_bits.map(|v| v.to_string()), "file_bits") {
            network = network.with_file_bits(num("file_bits", &bits)?)?;
        }
        let mode = match pick(None, "mode").as_deref() {
            _ if self.mode.is_some() => self.mode.unwrap_or(Mode::Centralized),
            None | Some("centralized") => Mode::Centralized,
            Some("decentralized") => Mode::Decentralized,
            Some(other) => return Err(Error::Parse(format!("unknown mode {other:?}"))),
        };
        let seed = pick(self.seed.map(|v| v.to_string()), "seed").map_or(Ok(0), |v| num("seed", &v))?;
        let seeds = pick(self.seeds.map(|v| v.to_string()), "seeds").map(|v| num("seeds", &v)).transpose()?;
        let demand = match pick(self.demand.clone(), "demand") {
            Some(d) => DemandVector::parse(&d, &network)?,
            None => DemandVector::default_for(&network),
        };
        let tol = pick(self.tol.map(|v| v.to_string()), "tol").map_or(Ok(ZF_TOLERANCE), |v| num("tol", &v))?;
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidConfig("tol must be a positive number".into()));
        }
        let channel_seeds =
            pick(channel_seeds.map(|v| v.to_string()), "channel_seeds").map_or(Ok(10), |v| num("channel_seeds", &v))?;
        Ok(RunConfig { network, mode, seed, seeds, demand, tol, channel_seeds })
    }
}

const CONFIG_KEYS: &[&str] =
    &["kt", "kr", "n", "mt", "mr", "file_bits", "seed", "seeds", "demand", "tol", "mode", "channel_seeds"];

/// `p/q (d.dddddddddddd)`.
pub fn show(r: Rational) -> String {
    format!("{r} ({})", r.to_decimal(12))
}

/// Outcome of a command: exit status plus the text for stdout.
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
}

/// Runs the CLI. `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, stdin) {
        Ok(out) => {
            let _ = stdout.write_all(out.stdout.as_bytes());
            out.status
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::MalformedPlan(_) | Error::NonGeneric(_) => EXIT_VERIFICATION,
                _ => EXIT_CONFIG,
            }
        }
    }
}

fn dispatch(cmd: Command, stdin: &mut dyn Read) -> Result<Outcome> {
    match cmd {
        Command::Sdof(a) => cmd_sdof(&a.resolve(None, &NO_DEFAULTS)?),
        Command::Ndt(a) => cmd_ndt(&a.resolve(None, &NO_DEFAULTS)?),
        Command::OracleNdt(a) => cmd_oracle_ndt(&a.resolve(None, &NO_DEFAULTS)?),
        Command::Plan(a) => {
            let run = a.common.resolve(a.channel_seeds, &NO_DEFAULTS)?;
            let out = cmd_plan(&run, a.show, a.verify)?;
            match &a.out {
                Some(path) => {
                    std::fs::write(path, &out.stdout)?;
                    Ok(Outcome { status: out.status, stdout: format!("wrote {}\n", path.display()) })
                }
                None => Ok(out),
            }
        }
        Command::Verify(a) => {
            let run = a.common.resolve(a.channel_seeds, &NO_DEFAULTS)?;
            let text = match &a.plan {
                Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)?,
                _ => {
                    let mut s = String::new();
                    stdin.read_to_string(&mut s)?;
                    s
                }
            };
            cmd_verify(&run, &text)
        }
        Command::Sweep(a) => {
            let defaults = match a.figure {
                FigureArg::Fig2 => Defaults { k_t: Some(4), k_r: Some(4), n: Some(4), m_t: Some("2"), m_r: Some("0") },
                FigureArg::Fig4 => Defaults { k_t: Some(3), k_r: Some(3), n: Some(3), m_t: Some("2"), m_r: Some("0") },
            };
            let run = a.common.resolve(None, &defaults)?;
            cmd_sweep(&run, a.figure, a.axis, a.values.as_deref(), a.out.as_deref())
        }
    }
}

fn ok(stdout: String) -> Result<Outcome> {
    Ok(Outcome { status: EXIT_OK, stdout })
}

pub fn cmd_sdof(run: &RunConfig) -> Result<Outcome> {
    let cfg = &run.network;
    let r = dof_report(cfg)?;
    let mut out = String::new();
    let _ = writeln!(out, "proposed={} baseline={}", r.proposed, r.baseline);
    let _ = writeln!(out, "config: {cfg}");
    let t = cfg.t_params();
    let _ = writeln!(out, "t_T={} t_R={}", t.t_t, t.t_r);
    let _ = writeln!(out, "sdof_proposed={}", show(r.proposed));
    let _ = writeln!(out, "sdof_baseline={}", show(r.baseline));
    let _ = writeln!(out, "per_user_dof={}", show(r.per_user));
    let _ = writeln!(out, "capped={}", r.capped);
    ok(out)
}

fn write_oracle_tiers(out: &mut String, o: &OracleNdt) {
    for t in &o.tiers {
        let _ = writeln!(out, "tier t={} load={} sdof={} ndt={}", t.t, t.load, t.sdof, show(t.ndt));
    }
}

pub fn cmd_ndt(run: &RunConfig) -> Result<Outcome> {
    let cfg = &run.network;
    let terms = ndt_theorem2_terms(cfg)?;
    let formula = terms.total();
    let layout = DecentralizedLayout::new(cfg)?;
    let plans = build_decentralized_plan(&layout, &run.demand)?;
    let oracle = ndt_oracle(cfg, &plans, &layout, &run.demand)?;
    let mut out = String::new();
    let mut head = format!("formula={formula} oracle={}", oracle.total);
    if let Some(w) = worked_example_check(cfg)? {
        let _ = write!(
            head,
            " reference_example={} (flagged: inconsistent with its inline expression {} and with the closed form {})",
            w.stated, w.inline_expression, w.closed_form
        );
    }
    let _ = writeln!(out, "{head}");
    let _ = writeln!(out, "config: {cfg} demand={}", run.demand);
    let _ = writeln!(out, "ndt_formula={}", show(formula));
    let _ = writeln!(out, "ndt_oracle={}", show(oracle.total));
    let _ = writeln!(out, "agree={}", formula == oracle.total);
    for (t, v) in &terms.per_t {
        let _ = writeln!(out, "formula_term t={t} value={v}");
    }
    let _ = writeln!(out, "formula_correction={}", terms.correction);
    write_oracle_tiers(&mut out, &oracle);
    if cfg.file_bits().is_some() {
        let count = run.seeds.unwrap_or(1).max(1);
        let seeds: Vec<u64> = (0..count).map(|i| run.seed.wrapping_add(i)).collect();
        let mc = ndt_monte_carlo(cfg, &run.demand, &seeds)?;
        let _ = writeln!(
            out,
            "monte_carlo F={} seeds={} mean={:.12} stderr={:.12}",
            mc.file_bits,
            seeds.len(),
            mc.mean,
            mc.stderr
        );
        let z = if mc.stderr > 0.0 { (mc.mean - oracle.total.to_f64()).abs() / mc.stderr } else { 0.0 };
        let _ = writeln!(out, "monte_carlo_vs_oracle z={z:.3}");
        let _ = writeln!(out, "# rng={RNG_ALGORITHM} seeds={}..{}", seeds[0], seeds[seeds.len() - 1]);
    }
    let _ = writeln!(out, "{IA_NOTE}");
    ok(out)
}

pub fn cmd_oracle_ndt(run: &RunConfig) -> Result<Outcome> {
    let cfg = &run.network;
    let layout = DecentralizedLayout::new(cfg)?;
    let plans = build_decentralized_plan(&layout, &run.demand)?;
    let oracle = ndt_oracle(cfg, &plans, &layout, &run.demand)?;
    let mut out = String::new();
    let _ = writeln!(out, "oracle={}", oracle.total);
    let _ = writeln!(out, "config: {cfg} demand={}", run.demand);
    write_oracle_tiers(&mut out, &oracle);
    if cfg.file_bits().is_some() {
        let finite = ndt_oracle_finite(cfg, run.seed, &run.demand)?;
        let _ = writeln!(out, "finite seed={} ndt={}", run.seed, show(finite.total));
        write_oracle_tiers(&mut out, &finite);
    }
    let _ = writeln!(out, "{IA_NOTE}");
    ok(out)
}

fn write_ledger(out: &mut String, ledger: &PlanLedger) {
    for (i, b) in ledger.blocks.iter().enumerate() {
        let dofs: Vec<String> = b.receivers.iter().map(|r| r.dof().to_string()).collect();
        let _ = writeln!(
            out,
            "# ledger {} block={} transmissions={} duration={} sdof={} per_user_dof={} conserved={}",
            ledger.mode,
            i + 1,
            b.transmissions,
            b.duration(),
            b.sdof(),
            dofs.join(","),
            b.is_conserved()
        );
        for (r, rl) in b.receivers.iter().enumerate() {
            let _ = writeln!(
                out,
                "#   rx={} desired={} zf={} ic={} interfering={} aligned_dims={}",
                r + 1,
                rl.desired_dims,
                rl.zf_removed,
                rl.ic_removed,
                rl.interfering,
                rl.aligned_dims
            );
        }
    }
    if let Some(s) = ledger.sdof() {
        let _ = writeln!(out, "# ledger {} total_sdof={}", ledger.mode, show(s));
    }
}

/// Builds the plans for `run.mode`, then checks them like `verify` would.
pub fn cmd_plan(run: &RunConfig, show_caches: bool, verify: bool) -> Result<Outcome> {
    let cfg = &run.network;
    let mut out = String::new();
    let _ = writeln!(out, "# config: {cfg} demand={}", run.demand);
    match run.mode {
        Mode::Centralized => {
            let placement = place_centralized(cfg)?;
            if show_caches {
                for line in placement.export().lines() {
                    let _ = writeln!(out, "# {}", line.trim_start_matches("# "));
                }
            }
            let plan = build_centralized_plan(&placement, &run.demand)?;
            finish_plan(&mut out, run, &[plan], &placement, verify)
        }
        Mode::Decentralized => {
            let layout = DecentralizedLayout::new(cfg)?;
            if show_caches {
                let _ = writeln!(
                    out,
                    "# placement=decentralized t_T={} partitions={}",
                    layout.t_t(),
                    layout.tx_sets().len()
                );
                for (i, x) in layout.tx_sets().iter().enumerate() {
                    let _ = writeln!(out, "# partition {}: tx={}", i + 1, x.braced());
                }
            }
            let plans = build_decentralized_plan(&layout, &run.demand)?;
            finish_plan(&mut out, run, &plans, &layout, verify)
        }
    }
}

fn finish_plan<U: SubfileUniverse + Sync>(
    out: &mut String,
    run: &RunConfig,
    plans: &[DeliveryPlan],
    universe: &U,
    verify: bool,
) -> Result<Outcome> {
    out.push_str(&plans_to_text(plans));
    for plan in plans {
        write_ledger(out, &account_plan(plan, universe, &run.demand)?);
    }
    let _ = writeln!(out, "{IA_NOTE}");
    let status = if verify { check_plans(out, run, plans, universe)? } else { EXIT_OK };
    Ok(Outcome { status, stdout: std::mem::take(out) })
}

/// Completeness, ledger conservation and zero-forcing checks. Returns the
/// exit status and appends a report to `out`.
fn check_plans<U: SubfileUniverse + Sync>(
    out: &mut String,
    run: &RunConfig,
    plans: &[DeliveryPlan],
    universe: &U,
) -> Result<i32> {
    let mut violations = 0usize;
    let completeness = verify_completeness(plans, universe, &run.demand);
    for (r, s) in &completeness.missing {
        let _ = writeln!(out, "violation: missing {s} for Rx{}", r + 1);
    }
    for (r, s, n) in &completeness.duplicates {
        let _ = writeln!(out, "violation: {s} scheduled {n} times for Rx{}", r + 1);
    }
    for s in &completeness.unneeded {
        let _ = writeln!(out, "violation: unneeded {} -> Rx{}", s.subfile, s.dest + 1);
    }
    violations += completeness.missing.len() + completeness.duplicates.len() + completeness.unneeded.len();
    for plan in plans {
        let ledger = match account_plan(plan, universe, &run.demand) {
            Ok(l) => l,
            Err(e) => {
                let _ = writeln!(out, "violation: {e}");
                violations += 1;
                continue;
            }
        };
        for (i, b) in ledger.blocks.iter().enumerate() {
            if !b.is_conserved() {
                let _ = writeln!(out, "violation: {} block {} ledger is not conserved", plan.mode, i + 1);
                violations += 1;
            }
        }
    }
    let seeds: Vec<u64> = (0..run.channel_seeds).map(|i| run.seed.wrapping_add(i)).collect();
    let phy = if violations == 0 {
        verify_plans_phy(plans, universe, &run.demand, &seeds, run.tol)?
    } else {
        PhyReport::default()
    };
    for v in &phy.violations {
        let _ = writeln!(out, "violation: {v}");
    }
    violations += phy.violations.len();
    let _ = writeln!(
        out,
        "verify: complete={} channels={} zf_checks={} max_zf_residual={:.3e} tol={:e} ic_flagged={} aligned_dims_assumed={} violations={}",
        completeness.is_complete(),
        phy.channels,
        phy.zf_checks,
        phy.max_zf_residual,
        run.tol,
        phy.ic_flagged,
        phy.alignment_groups_assumed,
        violations
    );
    if !seeds.is_empty() {
        let _ = writeln!(out, "# channel={CHANNEL_DISTRIBUTION} seeds={}..{}", seeds[0], seeds[seeds.len() - 1]);
    }
    Ok(if violations == 0 { EXIT_OK } else { EXIT_VERIFICATION })
}

pub fn cmd_verify(run: &RunConfig, text: &str) -> Result<Outcome> {
    let plans = parse_plans(text).map_err(|e| Error::MalformedPlan(e.to_string()))?;
    if plans.is_empty() {
        return Err(Error::MalformedPlan("no plan found in input".into()));
    }
    let centralized = plans.iter().all(|p| p.mode == PlanMode::Centralized);
    let decentralized = plans.iter().all(|p| matches!(p.mode, PlanMode::DecentralizedTier(_)));
    let mut out = String::new();
    let _ = writeln!(out, "# config: {} demand={}", run.network, run.demand);
    let status = if centralized {
        let placement = place_centralized(&run.network)?;
        check_plans(&mut out, run, &plans, &placement)?
    } else if decentralized {
        let layout = DecentralizedLayout::new(&run.network)?;
        check_plans(&mut out, run, &plans, &layout)?
    } else {
        return Err(Error::MalformedPlan("centralized and decentralized plans are mixed".into()));
    };
    Ok(Outcome { status, stdout: out })
}

fn parse_values(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(|t| num("values", t)).collect()
}

/// Path of the exact-value sidecar for a CSV path.
pub fn exact_sidecar(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.exact.csv"))
}

pub fn cmd_sweep(
    run: &RunConfig,
    figure: FigureArg,
    axis: AxisArg,
    values: Option<&str>,
    out_path: Option<&Path>,
) -> Result<Outcome> {
    let template = &run.network;
    let (fig, ax) = (
        match figure {
            FigureArg::Fig2 => Figure::InverseSdof,
            FigureArg::Fig4 => Figure::Ndt,
        },
        match axis {
            AxisArg::Mr => SweepAxis::ReceiverCache,
            AxisArg::Mt => SweepAxis::TransmitterCache,
        },
    );
    let values = match values {
        Some(v) => parse_values(v)?,
        None => {
            let n = template.n_files() as i128;
            let step = match figure {
                FigureArg::Fig2 => 1,
                FigureArg::Fig4 => 2,
            };
            let lo = match ax {
                SweepAxis::ReceiverCache => 0,
                // Smallest M_T that still serves the library without receiver caches.
                SweepAxis::TransmitterCache => (n + template.k_t() as i128 - 1) / template.k_t() as i128,
            };
            (lo * step..=n * step).map(|k| Rational::new(k, step)).collect()
        }
    };
    let rows = sweep_figure(template, fig, ax, &values)?;
    let (decimal, exact) = sweep_csv(&rows, fig, ax);
    match out_path {
        Some(p) => {
            std::fs::write(p, &decimal)?;
            let side = exact_sidecar(p);
            std::fs::write(&side, &exact)?;
            let mut msg = format!("wrote {} and {}\n", p.display(), side.display());
            if fig == Figure::Ndt {
                let _ = writeln!(msg, "# {CENTRALIZED_NDT_NOTE}");
            }
            ok(msg)
        }
        None => {
            let mut s = decimal;
            if fig == Figure::Ndt {
                let _ = writeln!(s, "# {CENTRALIZED_NDT_NOTE}");
            }
            ok(s)
        }
    }
}

/// Centralized NDT of `cfg` for both schemes, for reports.
pub fn centralized_ndt_pair(cfg: &NetworkConfig) -> Result<(Rational, Rational)> {
    Ok((ndt_centralized(cfg, CentralizedScheme::Proposed)?, ndt_centralized(cfg, CentralizedScheme::Baseline)?))
}
