//! Batch entry point: one subcommand per pipeline stage, CSV or text on
//! stdout (or `--out`), exit code 0 ok, 1 failure evidence, 2 usage or
//! infeasibility.
//!
//! A `--config` file holds `key = value` lines named like the long flags;
//! flags given on the command line win.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::complex::{Complex, PointRef, Symbolic};
use crate::expansion::lambda0_estimate;
use crate::metric::certify_constants;
use crate::orbit::{enumerate_orbits, orbit_csv, prime_orbit_table, solve_s0, table_csv, weighted_length, PressureModel};
use crate::orbit::pressure as pressure_at;
use crate::potential::{parse_potential_expr, Potential, PotentialExpr};
use crate::rulespec::{parse_rule, validate as validate_rule, SubdivisionRuleSpec};
use crate::sni::{check_sni, construct_perturbation, openness_radius, CheckConfig, Perturbation, PerturbationPlan, PlanConfig};

/// Search depth for distance powers.
const DISTPOW_DEPTH: usize = 48;

#[derive(Parser, Debug)]
#[command(name = "thurston", about = "Expanding Thurston maps from two-tile subdivision rules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Check a rule's invariants; prints one line per violation.
    Validate {
        /// Rule file or bundled rule name.
        path: Option<String>,
    },
    /// Cell counts per level as CSV; `--out` also exports the top level.
    Build,
    /// Finite-scale metric constants as a text report.
    MetricCert,
    /// `D_n` and `D_n^{1/n}` as CSV.
    Dn,
    /// Primitive periodic orbits up to `--pmax` as CSV.
    Orbits,
    /// `s₀` brackets and `P(0)` per level as CSV.
    Pressure,
    /// Prime orbit counts against the logarithmic integral as CSV.
    PotTable,
    /// Builds a perturbation plan for the base `--potential`.
    SniConstruct,
    /// Non-integrability evidence of `--potential` as CSV; exit 1 unless all pass.
    SniCheck,
    /// The openness radius for `--eps`.
    SniRadius,
}

/// Every option is global and optional; unset ones fall back to `--config`,
/// then to the subcommand's default.
#[derive(Args, Debug, Clone, Default)]
pub struct Opts {
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Rule file, or a bundled rule name with or without `.rule`.
    #[arg(long, global = true)]
    pub rule: Option<String>,
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    #[arg(long, global = true)]
    pub pmax: Option<usize>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Potential expression, e.g. `const 1` or `perturbed(const 1, plan.txt)`.
    #[arg(long, global = true)]
    pub potential: Option<String>,
    /// Perturbation plan file.
    #[arg(long, global = true)]
    pub plan: Option<PathBuf>,
    /// Visual-metric constant `C`; certified when unset.
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Distortion constant `C₀`; certified when unset.
    #[arg(long, global = true)]
    pub c0: Option<f64>,
    #[arg(long, global = true)]
    pub ncap: Option<usize>,
    #[arg(long, global = true)]
    pub jcap: Option<usize>,
    #[arg(long, global = true)]
    pub gcap: Option<usize>,
    /// Merge on-skeleton orbits agreeing to separation level `k·p`.
    #[arg(long, global = true)]
    pub dedup: Option<usize>,
    /// Bisection width for `s₀` and tolerance of the logarithmic integral.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Grid step of the prime orbit table.
    #[arg(long, global = true)]
    pub step: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Validation evidence of failure: exit 1.
    #[error("{0}")]
    Failed(String),
    /// Usage, input or infeasibility: exit 2.
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Output of a subcommand: the document and whether it is failure evidence.
#[derive(Debug, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub failed: bool,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { text, failed: false }
    }
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| usage(format!("config line {}: expected key = value", i + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn fill<T: std::str::FromStr>(slot: &mut Option<T>, cfg: &BTreeMap<String, String>, key: &str) -> Result<(), CliError> {
    if slot.is_none() {
        if let Some(v) = cfg.get(key) {
            *slot = Some(v.parse().map_err(|_| usage(format!("config {key}: bad value {v:?}")))?);
        }
    }
    Ok(())
}

impl Opts {
    /// Fills unset options from the config file, if any.
    pub fn merged(mut self) -> Result<Opts, CliError> {
        let Some(path) = &self.config else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let cfg = parse_config(&text)?;
        const KEYS: [&str; 17] = [
            "rule", "lambda", "alpha", "eps", "nmax", "pmax", "out", "potential", "plan", "c", "c0", "ncap", "jcap", "gcap",
            "dedup", "tol", "step",
        ];
        if let Some(k) = cfg.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(usage(format!("config: unknown key {k:?}")));
        }
        fill(&mut self.rule, &cfg, "rule")?;
        fill(&mut self.lambda, &cfg, "lambda")?;
        fill(&mut self.alpha, &cfg, "alpha")?;
        fill(&mut self.eps, &cfg, "eps")?;
        fill(&mut self.nmax, &cfg, "nmax")?;
        fill(&mut self.pmax, &cfg, "pmax")?;
        fill(&mut self.out, &cfg, "out")?;
        fill(&mut self.potential, &cfg, "potential")?;
        fill(&mut self.plan, &cfg, "plan")?;
        fill(&mut self.c, &cfg, "c")?;
        fill(&mut self.c0, &cfg, "c0")?;
        fill(&mut self.ncap, &cfg, "ncap")?;
        fill(&mut self.jcap, &cfg, "jcap")?;
        fill(&mut self.gcap, &cfg, "gcap")?;
        fill(&mut self.dedup, &cfg, "dedup")?;
        fill(&mut self.tol, &cfg, "tol")?;
        fill(&mut self.step, &cfg, "step")?;
        Ok(self)
    }

    fn lambda(&self) -> Result<f64, CliError> {
        let l = self.lambda.unwrap_or(2.0);
        if l > 1.0 {
            Ok(l)
        } else {
            Err(usage(format!("--lambda must exceed 1, got {l}")))
        }
    }

    fn alpha(&self, default: f64) -> Result<f64, CliError> {
        let a = self.alpha.unwrap_or(default);
        if a > 0.0 && a <= 1.0 {
            Ok(a)
        } else {
            Err(usage(format!("--alpha must lie in (0, 1], got {a}")))
        }
    }

    fn positive(name: &str, v: Option<usize>, default: usize) -> Result<usize, CliError> {
        match v.unwrap_or(default) {
            0 => Err(usage(format!("--{name} must be positive"))),
            k => Ok(k),
        }
    }
}

/// Rule text from a path, or from a bundled rule when no such file exists.
pub fn load_rule_text(name: &str) -> Result<String, CliError> {
    let path = Path::new(name);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| usage(format!("{name}: {e}")));
    }
    let stem = path.file_name().and_then(|s| s.to_str()).unwrap_or(name);
    let stem = stem.strip_suffix(".rule").unwrap_or(stem);
    crate::rules::by_name(stem).map(str::to_string).ok_or_else(|| usage(format!("no rule file or bundled rule {name:?}")))
}

/// A parsed and valid rule; parse errors and violations are failure evidence.
fn load_rule(opts: &Opts) -> Result<SubdivisionRuleSpec, CliError> {
    let name = opts.rule.as_deref().ok_or_else(|| usage("--rule is required"))?;
    let spec = parse_rule(&load_rule_text(name)?).map_err(|e| CliError::Failed(e.to_string()))?;
    let report = validate_rule(&spec);
    if !report.is_valid() {
        return Err(CliError::Failed(report.to_string()));
    }
    Ok(spec)
}

fn complex(opts: &Opts) -> Result<(Complex, Symbolic), CliError> {
    let cx = Complex::new(&load_rule(opts)?).map_err(usage)?;
    let sym = Symbolic::new(&cx.pattern);
    Ok((cx, sym))
}

/// Resolves an expression; plan files are read relative to the working directory.
pub fn build_potential(expr: &PotentialExpr, cx: &mut Complex, sym: &Symbolic, lambda: f64) -> Result<Potential, CliError> {
    Ok(match expr {
        PotentialExpr::Const(c) => Potential::Const(*c),
        PotentialExpr::DistPow { level, vertex, alpha, weight } => {
            cx.build_to((*level).max(1)).map_err(usage)?;
            if *vertex as usize >= cx.level(*level).num_vertices() {
                return Err(usage(format!("distpow: level {level} has no vertex {vertex}")));
            }
            let center = PointRef::Vertex { level: *level, id: *vertex }.to_addr(cx, sym);
            Potential::DistPow { center, alpha: *alpha, weight: *weight, lambda, depth: DISTPOW_DEPTH }
        }
        PotentialExpr::Sum(es) => {
            Potential::Sum(es.iter().map(|e| build_potential(e, cx, sym, lambda)).collect::<Result<_, _>>()?)
        }
        PotentialExpr::Perturbed { base, plan } => {
            let base = build_potential(base, cx, sym, lambda)?;
            let upsilon = Perturbation::new(sym, read_plan(Path::new(plan))?).map_err(usage)?;
            Potential::Sum(vec![base, Potential::Perturbation(Arc::new(upsilon))])
        }
    })
}

fn read_plan(path: &Path) -> Result<PerturbationPlan, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    PerturbationPlan::from_text(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn potential(opts: &Opts, cx: &mut Complex, sym: &Symbolic, lambda: f64) -> Result<(Potential, PotentialExpr), CliError> {
    let text = opts.potential.as_deref().unwrap_or("const 1");
    let expr = parse_potential_expr(text).map_err(usage)?;
    Ok((build_potential(&expr, cx, sym, lambda)?, expr))
}

/// `C` and `C₀` from the flags, or certified at levels up to 3.
fn metric_constants(opts: &Opts, cx: &mut Complex, lambda: f64) -> Result<(f64, f64), CliError> {
    if let (Some(c), Some(c0)) = (opts.c, opts.c0) {
        return Ok((c, c0));
    }
    let p = certify_constants(cx, lambda, 3, 3).map_err(usage)?;
    Ok((opts.c.unwrap_or(p.c_fit), opts.c0.unwrap_or(p.c0_fit)))
}

/// Runs one parsed invocation.
pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let opts = cli.opts.merged()?;
    match cli.command {
        Command::Validate { path } => validate_cmd(path.or(opts.rule)),
        Command::Build => build(&opts),
        Command::MetricCert => metric_cert(&opts),
        Command::Dn => dn(&opts),
        Command::Orbits => orbits(&opts),
        Command::Pressure => pressure(&opts),
        Command::PotTable => pot_table(&opts),
        Command::SniConstruct => sni_construct(&opts),
        Command::SniCheck => sni_check(&opts),
        Command::SniRadius => sni_radius(&opts),
    }
}

/// Parses `args` (program name first), runs, and writes the document to
/// `--out` or returns it for stdout.
pub fn main_with<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, if code == 0 { e.to_string() } else { String::new() }, if code == 0 { String::new() } else { e.to_string() });
        }
    };
    let out = cli.opts.out.clone();
    let command = cli.command.clone();
    match run(cli) {
        Ok(o) => {
            let code = i32::from(o.failed);
            match out {
                Some(path) if !matches!(command, Command::Build) => match std::fs::write(&path, &o.text) {
                    Ok(()) => (code, String::new(), String::new()),
                    Err(e) => (2, String::new(), format!("{}: {e}\n", path.display())),
                },
                _ => (code, o.text, String::new()),
            }
        }
        Err(e) => {
            let mut msg = e.to_string();
            if !msg.ends_with('\n') {
                msg.push('\n');
            }
            (e.code(), String::new(), msg)
        }
    }
}

fn validate_cmd(path: Option<String>) -> Result<Outcome, CliError> {
    let name = path.ok_or_else(|| usage("validate needs a rule path"))?;
    let spec = match parse_rule(&load_rule_text(&name)?) {
        Ok(s) => s,
        Err(e) => return Ok(Outcome { text: format!("{e}\n"), failed: true }),
    };
    let report = validate_rule(&spec);
    Ok(Outcome { text: report.to_string(), failed: !report.is_valid() })
}

/// Per-level counts; with `--out`, the top level is exported as
/// `VERTICES k` (`id label`), `EDGES k` (`id a b`) and `TILES k`
/// (`id color parent corner…`) sections under a `LEVEL n` header.
fn build(opts: &Opts) -> Result<Outcome, CliError> {
    let (mut cx, _) = complex(opts)?;
    let n_max = opts.nmax.unwrap_or(3);
    cx.build_to(n_max).map_err(usage)?;
    let mut s = String::from("n,vertices,edges,tiles,euler\n");
    for n in 0..=n_max {
        let lv = cx.level(n);
        let _ = writeln!(s, "{n},{},{},{},{}", lv.num_vertices(), lv.num_edges(), lv.num_tiles(), lv.euler());
    }
    if let Some(path) = &opts.out {
        let lv = cx.level(n_max);
        let mut e = format!("LEVEL {n_max}\nVERTICES {}\n", lv.num_vertices());
        for v in 0..lv.num_vertices() {
            let _ = writeln!(e, "{v} {}", lv.vertex_label[v]);
        }
        let _ = writeln!(e, "EDGES {}", lv.num_edges());
        for (i, [a, b]) in lv.edge_ends.iter().enumerate() {
            let _ = writeln!(e, "{i} {a} {b}");
        }
        let _ = writeln!(e, "TILES {}", lv.num_tiles());
        for t in 0..lv.num_tiles() as u32 {
            let parent = lv.tile_parent[t as usize];
            let parent = if parent == crate::complex::NONE { "-".to_string() } else { parent.to_string() };
            let corners: Vec<String> = lv.corners(t).iter().map(u32::to_string).collect();
            let _ = writeln!(e, "{t} {} {parent} {}", lv.tile_color[t as usize], corners.join(" "));
        }
        std::fs::write(path, e).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    Ok(Outcome::ok(s))
}

fn metric_cert(opts: &Opts) -> Result<Outcome, CliError> {
    let (mut cx, _) = complex(opts)?;
    let lambda = opts.lambda()?;
    let l = opts.nmax.unwrap_or(3);
    let p = certify_constants(&mut cx, lambda, l, l).map_err(usage)?;
    let mut s = String::new();
    let _ = writeln!(s, "lambda = {}", p.lambda);
    let _ = writeln!(s, "C = {}", p.c_fit);
    let _ = writeln!(s, "K = {}", p.k_fit);
    let _ = writeln!(s, "C0 = {}", p.c0_fit);
    let _ = writeln!(s, "max_disjoint_excess = {}", p.max_disjoint_excess);
    let _ = writeln!(s, "max_diameter_excess = {}", p.max_diameter_excess);
    let _ = writeln!(s, "max_distortion_shift = {}", p.max_distortion_shift);
    let _ = writeln!(s, "L_cert = {}", p.l_cert);
    Ok(Outcome::ok(s))
}

fn dn(opts: &Opts) -> Result<Outcome, CliError> {
    let (mut cx, _) = complex(opts)?;
    let n_max = Opts::positive("nmax", opts.nmax, 4)?;
    let rows = lambda0_estimate(&mut cx, n_max).map_err(usage)?;
    let mut s = String::from("n,Dn,Dn_nthroot\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{}", r.n, r.dn, r.root);
    }
    Ok(Outcome::ok(s))
}

const ORBIT_LIMIT: u64 = 1 << 22;

fn orbits(opts: &Opts) -> Result<Outcome, CliError> {
    let (mut cx, sym) = complex(opts)?;
    let lambda = opts.lambda()?;
    let (phi, _) = potential(opts, &mut cx, &sym, lambda)?;
    let p_max = Opts::positive("pmax", opts.pmax, 4)?;
    let orbits = enumerate_orbits(&sym, p_max, opts.dedup, ORBIT_LIMIT).map_err(usage)?;
    let lengths: Vec<_> = orbits.iter().map(|o| weighted_length(&phi, &sym, o)).collect();
    Ok(Outcome::ok(orbit_csv(&orbits, &lengths)))
}

fn pressure_model(opts: &Opts) -> Result<PressureModel, CliError> {
    Ok(PressureModel { lambda: opts.lambda()?, alpha: opts.alpha(0.5)?, c0: opts.c0.unwrap_or(1.0) })
}

fn pressure(opts: &Opts) -> Result<Outcome, CliError> {
    let (mut cx, sym) = complex(opts)?;
    let model = pressure_model(opts)?;
    let (phi, _) = potential(opts, &mut cx, &sym, model.lambda)?;
    let n_max = Opts::positive("nmax", opts.nmax, 4)?;
    let tol = opts.tol.unwrap_or(1e-9);
    let mut s = String::from("n,s0_lo,s0_hi,P0_lo,P0_hi\n");
    for n in 1..=n_max {
        let s0 = solve_s0(&phi, &sym, &model, n, tol).map_err(usage)?;
        let p0 = pressure_at(&phi, &sym, &model, 0.0, n).map_err(usage)?;
        let _ = writeln!(s, "{n},{:.15e},{:.15e},{:.15e},{:.15e}", s0.lo, s0.hi, p0.lo, p0.hi);
    }
    Ok(Outcome::ok(s))
}

fn pot_table(opts: &Opts) -> Result<Outcome, CliError> {
    let (mut cx, sym) = complex(opts)?;
    let model = pressure_model(opts)?;
    let (phi, _) = potential(opts, &mut cx, &sym, model.lambda)?;
    let inf = phi.inf_bound();
    if inf <= 0.0 {
        return Err(usage(format!("the table needs a positive lower bound on the potential, got {inf}")));
    }
    let p_max = Opts::positive("pmax", opts.pmax, 6)?;
    let n = Opts::positive("nmax", opts.nmax, 4)?;
    let tol = opts.tol.unwrap_or(1e-9);
    let orbits = enumerate_orbits(&sym, p_max, opts.dedup, ORBIT_LIMIT).map_err(usage)?;
    let lengths: Vec<_> = orbits.iter().map(|o| weighted_length(&phi, &sym, o)).collect();
    let s0 = solve_s0(&phi, &sym, &model, n, tol).map_err(usage)?;
    let step = opts.step.unwrap_or(inf);
    if step <= 0.0 {
        return Err(usage("--step must be positive"));
    }
    Ok(Outcome::ok(table_csv(&prime_orbit_table(&lengths, p_max, inf, s0, step, tol))))
}

fn plan_config(opts: &Opts, cx: &mut Complex) -> Result<PlanConfig, CliError> {
    let lambda = opts.lambda()?;
    let alpha = opts.alpha(0.99)?;
    let (c, c0) = metric_constants(opts, cx, lambda)?;
    let mut cfg = PlanConfig::new(lambda, alpha, c, c0);
    cfg.eps = opts.eps;
    cfg.n_cap = opts.ncap.unwrap_or(cfg.n_cap);
    cfg.j_cap = opts.jcap;
    cfg.g_cap = opts.gcap.unwrap_or(cfg.g_cap);
    Ok(cfg)
}

/// Writes the plan document; a non-constant base is limited to one generation.
fn sni_construct(opts: &Opts) -> Result<Outcome, CliError> {
    let (mut cx, sym) = complex(opts)?;
    let mut cfg = plan_config(opts, &mut cx)?;
    let (base, _) = potential(opts, &mut cx, &sym, cfg.lambda)?;
    if base.constant_value().is_none() && opts.gcap.is_none() {
        cfg.g_cap = 1;
    }
    let (_, upsilon) = construct_perturbation(&mut cx, &sym, &base, &cfg).map_err(usage)?;
    Ok(Outcome::ok(upsilon.plan.to_text()))
}

/// The plan giving the evidence geometry: `--plan`, else the plan inside a
/// `perturbed(...)` expression, else one built for the constant 1.
fn evidence_plan(opts: &Opts, expr: &PotentialExpr, cx: &mut Complex, sym: &Symbolic) -> Result<PerturbationPlan, CliError> {
    if let Some(path) = &opts.plan {
        return read_plan(path);
    }
    if let PotentialExpr::Perturbed { plan, .. } = expr {
        return read_plan(Path::new(plan));
    }
    let cfg = plan_config(opts, cx)?;
    let (_, upsilon) = construct_perturbation(cx, sym, &Potential::Const(1.0), &cfg).map_err(usage)?;
    Ok(upsilon.plan.clone())
}

fn sni_check(opts: &Opts) -> Result<Outcome, CliError> {
    let (mut cx, sym) = complex(opts)?;
    let lambda = opts.lambda()?;
    let (phi, expr) = potential(opts, &mut cx, &sym, lambda)?;
    let plan = evidence_plan(opts, &expr, &mut cx, &sym)?;
    let cfg = CheckConfig {
        eps: opts.eps.unwrap_or(plan.eps),
        m_max: plan.m_max(),
        n_list: vec![plan.n0, plan.n0 + 1],
        tile_limit: 1 << 22,
    };
    let report = check_sni(&phi, &sym, &plan, &cfg).map_err(usage)?;
    Ok(Outcome { failed: !report.all_pass(), text: report.to_csv() })
}

fn sni_radius(opts: &Opts) -> Result<Outcome, CliError> {
    let plan = opts.plan.as_deref().map(read_plan).transpose()?;
    let eps = opts.eps.or(plan.as_ref().map(|p| p.eps)).ok_or_else(|| usage("--eps or --plan is required"))?;
    let lambda = opts.lambda.or(plan.as_ref().map(|p| p.lambda)).unwrap_or(2.0);
    let alpha = opts.alpha.or(plan.as_ref().map(|p| p.alpha)).unwrap_or(0.99);
    let c0 = opts.c0.or(plan.as_ref().map(|p| p.c0)).ok_or_else(|| usage("--c0 or --plan is required"))?;
    if !(lambda > 1.0 && alpha > 0.0 && alpha <= 1.0 && eps > 0.0 && c0 > 0.0) {
        return Err(usage("need Λ > 1, α in (0, 1], ε > 0 and C₀ > 0"));
    }
    let r = openness_radius(eps, alpha, lambda, c0);
    Ok(Outcome::ok(format!("eps,alpha,lambda,c0,radius\n{eps},{alpha},{lambda},{c0},{r:e}\n")))
}
