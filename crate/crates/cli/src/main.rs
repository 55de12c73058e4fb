mod literal;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use funceq::beck::{beck_closed_form, beck_iterate, delta_gap_bound, jump_index, BeckSequence, GapBound, JumpIndex};
use funceq::extract::{
    classify, extract_kappa, fit_exponential_rho, slope_at_zero, ExponentialFit, KappaEstimate,
    SlopeEstimate,
};
use funceq::residuals::{
    equation_residual, exact_residual, DEFAULT_MAX_PAIRS, DEFAULT_TOL_CLOSED_FORM,
    DEFAULT_TOL_TABULATED,
};
use funceq::verify::{self, DichotomyOptions};
use funceq::{DomainSpec, EquationKind, Evaluable, ExactAdditiveOnZSqrt2, ResidualOptions};

use literal::{parse_grid, parse_literal, parse_subgroup, read_table, FuncArg};

#[derive(Parser)]
#[command(name = "funceq", version, about = "Residuals, classification and theorem checks for Goldie/Beurling-type functional equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
enum Command {
    /// Residual of an equation for closed-form or tabulated functions.
    Residual(ResidualArgs),
    /// Fit a tabulated function to the solution families of an equation.
    Classify(ClassifyArgs),
    /// Beck sequence t_{m+1} = t_m + u phi(t_m).
    Beck(BeckArgs),
    /// Parameter extraction: rho from g, kappa from (K, g), slope at zero of phi.
    Fit(FitArgs),
    /// Theorem-level checks.
    Verify(VerifyArgs),
}

#[derive(Args, Serialize)]
struct Common {
    /// Pass/fail tolerance (default 1e-9 for closed forms, 1e-6 with tables).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Above this many pairs, pairs are sampled from the seed.
    #[arg(long, default_value_t = DEFAULT_MAX_PAIRS)]
    max_pairs: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct Funcs {
    #[arg(long = "K", value_name = "LITERAL")]
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    big_k: Option<String>,
    #[arg(long, value_name = "LITERAL")]
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<String>,
    #[arg(long, value_name = "LITERAL")]
    #[serde(skip_serializing_if = "Option::is_none")]
    g: Option<String>,
    #[arg(long, value_name = "LITERAL")]
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<String>,
    #[arg(long, value_name = "LITERAL")]
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<String>,
    #[arg(long, value_name = "LITERAL")]
    #[serde(skip_serializing_if = "Option::is_none")]
    f: Option<String>,
}

impl Funcs {
    fn role(&self, role: &str) -> Option<&String> {
        match role {
            "K" => self.big_k.as_ref(),
            "k" => self.k.as_ref(),
            "g" => self.g.as_ref(),
            "h" => self.h.as_ref(),
            "phi" => self.phi.as_ref(),
            "f" => self.f.as_ref(),
            _ => None,
        }
    }

    fn given(&self) -> Vec<&'static str> {
        ["K", "k", "g", "h", "phi", "f"]
            .into_iter()
            .filter(|r| self.role(r).is_some())
            .collect()
    }
}

#[derive(Args, Serialize)]
struct DomainArgs {
    /// Uniform grid min:max:count.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<String>,
    /// Dense subgroup dyadic:L=..,X=.. or zsqrt2:N=..,X=.. (with --grid: u over the
    /// subgroup, v over the grid).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    subgroup: Option<String>,
}

impl DomainArgs {
    fn domain(&self) -> Result<Option<DomainSpec>, String> {
        Ok(match (&self.grid, &self.subgroup) {
            (None, None) => None,
            (Some(g), None) => Some(DomainSpec::grid(parse_grid(g)?)),
            (None, Some(s)) => Some(DomainSpec::subgroup(parse_subgroup(s)?)),
            (Some(g), Some(s)) => Some(DomainSpec::Mixed {
                u_domain: parse_subgroup(s)?,
                v_grid: parse_grid(g)?,
            }),
        })
    }

    fn grid_or(&self, fallback: Option<&FuncArg>) -> Result<Vec<f64>, String> {
        if self.subgroup.is_some() {
            return Err("--subgroup is not used by this command; give --grid".into());
        }
        match (&self.grid, fallback.and_then(|f| f.table.as_ref())) {
            (Some(g), _) => parse_grid(g),
            (None, Some(t)) => Ok(t.xs().to_vec()),
            (None, None) => Err("--grid is required".into()),
        }
    }
}

#[derive(Args, Serialize)]
struct ResidualArgs {
    #[arg(long)]
    equation: EquationKind,
    #[command(flatten)]
    #[serde(flatten)]
    funcs: Funcs,
    #[command(flatten)]
    #[serde(flatten)]
    domain: DomainArgs,
    /// Exact mode for cfe/mik: K = alpha a + beta b on a + b sqrt 2 (needs --subgroup zsqrt2).
    #[arg(long, requires = "beta", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<i64>,
    #[arg(long, requires = "alpha", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<i64>,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Serialize)]
struct ClassifyArgs {
    /// CSV with header x,value.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    equation: EquationKind,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Serialize)]
struct BeckArgs {
    #[arg(long, value_name = "LITERAL")]
    phi: String,
    #[arg(long)]
    u: f64,
    /// Number of steps.
    #[arg(long, default_value_t = 20)]
    n: usize,
    /// Stop once a term exceeds this.
    #[arg(long, default_value_t = f64::INFINITY)]
    t_cap: f64,
    /// Also report the jump index of t and the gap bound there.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Serialize)]
struct FitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    funcs: Funcs,
    /// Tabulated g (CSV with header x,value), as an alternative to --g.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    domain: DomainArgs,
    /// Terms u0 2^-i, i < slope_terms, for the slope of --phi at zero.
    #[arg(long, default_value_t = 8)]
    slope_terms: usize,
    #[arg(long, default_value_t = 1.0)]
    u0: f64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
enum Suite {
    Theorem5,
    TheoremB,
    LemmaB,
    Bm,
    Monotonicity,
    Dichotomy,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    suite: Suite,
    #[command(flatten)]
    #[serde(flatten)]
    funcs: Funcs,
    #[command(flatten)]
    #[serde(flatten)]
    domain: DomainArgs,
    /// Point with f(a) = 1 for lemma_b.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    /// Dichotomy: K(a + b sqrt 2) = alpha a + beta b.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    alpha: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    beta: i64,
    /// Dichotomy: final coefficient bound N.
    #[arg(long = "N", default_value_t = 2048)]
    #[serde(rename = "N")]
    big_n: u64,
    /// Dichotomy: interval (0, X].
    #[arg(long = "X", default_value_t = 1.0)]
    #[serde(rename = "X")]
    big_x: f64,
    #[arg(long, default_value_t = 1e3)]
    threshold: f64,
    #[arg(long, default_value_t = 0.5)]
    spread_min: f64,
    #[arg(long, default_value_t = 10_000)]
    pairs: usize,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

type CmdResult = Result<(Vec<u8>, bool), String>;

fn load(lit: &str) -> Result<FuncArg, String> {
    log::debug!("parsing function literal {lit}");
    parse_literal(lit)
}

fn default_tol(tol: Option<f64>, funcs: &[&FuncArg]) -> f64 {
    tol.unwrap_or(if funcs.iter().any(|f| f.table.is_some()) {
        DEFAULT_TOL_TABULATED
    } else {
        DEFAULT_TOL_CLOSED_FORM
    })
}

fn emit<C: Serialize, R: Serialize>(cmd: &C, results: &R, start: Instant) -> Result<Vec<u8>, String> {
    let rep = report::JsonReport {
        schema_version: report::SCHEMA_VERSION,
        command: cmd,
        results,
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    report::to_bytes(&rep).map_err(|e| e.to_string())
}

fn run_residual(cmd: &Command, a: &ResidualArgs, start: Instant) -> CmdResult {
    let domain = a
        .domain
        .domain()?
        .ok_or("give --grid and/or --subgroup")?;
    let roles = a.equation.roles();
    if let (Some(alpha), Some(beta)) = (a.alpha, a.beta) {
        if let Some(r) = a.funcs.given().first() {
            return Err(format!("--{r} cannot be combined with --alpha/--beta"));
        }
        let k = ExactAdditiveOnZSqrt2::from_ints(alpha, beta).map_err(|e| e.to_string())?;
        let opts = ResidualOptions {
            tol: a.common.tol.unwrap_or(DEFAULT_TOL_CLOSED_FORM),
            max_pairs: a.common.max_pairs,
            seed: a.common.seed,
        };
        let rep = exact_residual(a.equation, &k, &domain, &opts).map_err(|e| e.to_string())?;
        return Ok((emit(cmd, &rep, start)?, rep.pass));
    }
    if let Some(extra) = a.funcs.given().into_iter().find(|r| !roles.contains(r)) {
        return Err(format!(
            "--{extra} is not a role of {} (roles: {})",
            a.equation,
            roles.join(", ")
        ));
    }
    let funcs = roles
        .iter()
        .map(|r| {
            let lit = a
                .funcs
                .role(r)
                .ok_or_else(|| format!("{} needs --{r}", a.equation))?;
            load(lit)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&dyn Evaluable> = funcs.iter().map(FuncArg::as_dyn).collect();
    let opts = ResidualOptions {
        tol: default_tol(a.common.tol, &funcs.iter().collect::<Vec<_>>()),
        max_pairs: a.common.max_pairs,
        seed: a.common.seed,
    };
    log::info!("residual {} over {}", a.equation, domain.summary());
    let rep = equation_residual(a.equation, &refs, &domain, &opts).map_err(|e| e.to_string())?;
    Ok((emit(cmd, &rep, start)?, rep.pass))
}

fn run_classify(cmd: &Command, a: &ClassifyArgs, start: Instant) -> CmdResult {
    let data = read_table(&a.input)?;
    let tol = a.common.tol.unwrap_or(DEFAULT_TOL_TABULATED);
    log::info!("classifying {} points for {}", data.len(), a.equation);
    let rep = classify(&data, a.equation, tol).map_err(|e| e.to_string())?;
    for t in &rep.trace {
        log::debug!("candidate {}: fit_rms {:?}, residual {:?}", t.candidate, t.fit_rms, t.equation_residual);
    }
    let pass = rep.family.is_some();
    Ok((emit(cmd, &rep, start)?, pass))
}

#[derive(Serialize)]
struct BeckResult {
    sequence: BeckSequence,
    /// Largest relative deviation of the terms from the geometric closed form.
    closed_form_max_rel: f64,
    recursion_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    jump: Option<JumpIndex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gap: Option<GapBound>,
    tol: f64,
    pass: bool,
}

fn run_beck(cmd: &Command, a: &BeckArgs, start: Instant) -> CmdResult {
    let phi = load(&a.phi)?;
    let tol = default_tol(a.common.tol, &[&phi]);
    let seq = beck_iterate(phi.as_dyn(), a.u, a.n, a.t_cap).map_err(|e| e.to_string())?;
    let mut closed_form_max_rel = 0.0f64;
    for (m, &t) in seq.terms.iter().enumerate() {
        let cf = beck_closed_form(seq.phi_u, a.u, m as u32).map_err(|e| e.to_string())?;
        closed_form_max_rel = closed_form_max_rel.max((t - cf).abs() / (1.0 + t.abs()));
    }
    let recursion_defect = seq.recursion_defect(phi.as_dyn()).map_err(|e| e.to_string())?;
    let (jump, gap) = match a.t {
        Some(t) => (
            Some(jump_index(phi.as_dyn(), a.u, t).map_err(|e| e.to_string())?),
            if t > 0.0 {
                Some(delta_gap_bound(phi.as_dyn(), a.u, t).map_err(|e| e.to_string())?)
            } else {
                None
            },
        ),
        None => (None, None),
    };
    let pass = recursion_defect <= tol && gap.is_none_or(|g| g.ok);
    let res = BeckResult {
        sequence: seq,
        closed_form_max_rel,
        recursion_defect,
        jump,
        gap,
        tol,
        pass,
    };
    Ok((emit(cmd, &res, start)?, pass))
}

#[derive(Serialize)]
struct FitResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    exponential: Option<ExponentialFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<KappaEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    slope: Option<SlopeEstimate>,
    tol: f64,
    pass: bool,
}

fn run_fit(cmd: &Command, a: &FitArgs, start: Instant) -> CmdResult {
    if a.funcs.k.is_some() || a.funcs.h.is_some() || a.funcs.f.is_some() {
        return Err("fit uses --g (or --input), --K and --phi only".into());
    }
    let g = match (&a.funcs.g, &a.input) {
        (Some(_), Some(_)) => return Err("give either --g or --input, not both".into()),
        (Some(lit), None) => Some(load(lit)?),
        (None, Some(p)) => {
            let t = read_table(p)?;
            Some(FuncArg { func: std::sync::Arc::new(t.clone()), table: Some(t) })
        }
        (None, None) => None,
    };
    let big_k = a.funcs.big_k.as_deref().map(load).transpose()?;
    let phi = a.funcs.phi.as_deref().map(load).transpose()?;
    if g.is_none() && phi.is_none() {
        return Err("fit needs --g/--input (rho, kappa with --K) or --phi (slope at zero)".into());
    }
    if big_k.is_some() && g.is_none() {
        return Err("--K needs --g or --input".into());
    }
    let all: Vec<&FuncArg> = [&g, &big_k, &phi].into_iter().flatten().collect();
    let tol = default_tol(a.common.tol, &all);

    let mut pass = true;
    let mut res = FitResult { exponential: None, kappa: None, slope: None, tol, pass };
    if let Some(g) = &g {
        let grid = a.domain.grid_or(Some(g))?;
        let pts: Vec<f64> = grid.into_iter().filter(|&x| x > 0.0).collect();
        let e = fit_exponential_rho(g.as_dyn(), &pts).map_err(|e| e.to_string())?;
        pass &= e.rms <= tol;
        res.exponential = Some(e);
        if let Some(k) = &big_k {
            let domain = DomainSpec::grid(pts);
            let est = extract_kappa(k.as_dyn(), g.as_dyn(), &domain, tol).map_err(|e| e.to_string())?;
            pass &= est.spread <= tol * (1.0 + est.kappa.abs());
            res.kappa = Some(est);
        }
    }
    if let Some(phi) = &phi {
        if !(a.u0.is_finite() && a.u0 > 0.0) {
            return Err("--u0 must be positive".into());
        }
        let us: Vec<f64> = (0..a.slope_terms).map(|i| a.u0 * 0.5f64.powi(i as i32)).collect();
        res.slope = Some(slope_at_zero(phi.as_dyn(), &us).map_err(|e| e.to_string())?);
    }
    res.pass = pass;
    Ok((emit(cmd, &res, start)?, pass))
}

fn run_verify(cmd: &Command, a: &VerifyArgs, start: Instant) -> CmdResult {
    let rep = if let Suite::Dichotomy = a.suite {
        if !a.funcs.given().is_empty() || a.domain.grid.is_some() || a.domain.subgroup.is_some() {
            return Err("dichotomy takes --alpha, --beta, --N and --X, not functions or grids".into());
        }
        let k = ExactAdditiveOnZSqrt2::from_ints(a.alpha, a.beta).map_err(|e| e.to_string())?;
        let opts = DichotomyOptions {
            spread_min: a.spread_min,
            threshold: a.threshold,
            additivity_pairs: a.pairs,
            seed: a.common.seed,
        };
        verify::dichotomy_demo_with(&k, a.big_n, a.big_x, &opts)
    } else {
        let lit = match (a.funcs.phi.as_ref(), a.funcs.f.as_ref()) {
            (Some(l), None) | (None, Some(l)) => l,
            _ => return Err("give exactly one of --phi or --f".into()),
        };
        if a.funcs.given().len() != 1 {
            return Err("this suite takes a single function (--phi or --f)".into());
        }
        let f = load(lit)?;
        let tol = default_tol(a.common.tol, &[&f]);
        let grid = a.domain.grid_or(Some(&f))?;
        log::info!("verify suite over {} grid points", grid.len());
        match a.suite {
            Suite::Theorem5 => verify::theorem5_suite(f.as_dyn(), &grid, tol),
            Suite::TheoremB => verify::one_implies_constant(f.as_dyn(), &grid, tol),
            Suite::LemmaB => {
                let at = a.a.ok_or("lemma_b needs --a")?;
                verify::range_group_check(f.as_dyn(), at, &grid, tol)
            }
            Suite::Bm => verify::bm_constancy_check(f.as_dyn(), &grid, tol),
            Suite::Monotonicity => verify::monotonicity_check(f.as_dyn(), &grid),
            Suite::Dichotomy => unreachable!(),
        }
    }
    .map_err(|e| e.to_string())?;
    let pass = rep.pass;
    Ok((emit(cmd, &rep, start)?, pass))
}

fn run(cmd: &Command) -> CmdResult {
    let start = Instant::now();
    let common = match cmd {
        Command::Residual(a) => &a.common,
        Command::Classify(a) => &a.common,
        Command::Beck(a) => &a.common,
        Command::Fit(a) => &a.common,
        Command::Verify(a) => &a.common,
    };
    if let Some(t) = common.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(format!("--tol must be positive, got {t}"));
        }
    }
    match cmd {
        Command::Residual(a) => run_residual(cmd, a, start),
        Command::Classify(a) => run_classify(cmd, a, start),
        Command::Beck(a) => run_beck(cmd, a, start),
        Command::Fit(a) => run_fit(cmd, a, start),
        Command::Verify(a) => run_verify(cmd, a, start),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FUNCEQ_LOG", "error"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    let output = match &cli.command {
        Command::Residual(a) => &a.common.output,
        Command::Classify(a) => &a.common.output,
        Command::Beck(a) => &a.common.output,
        Command::Fit(a) => &a.common.output,
        Command::Verify(a) => &a.common.output,
    };
    match run(&cli.command) {
        Ok((bytes, pass)) => {
            let written = match output {
                Some(p) => std::fs::write(p, &bytes).map_err(|e| format!("{}: {e}", p.display())),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(&bytes).map_err(|e| e.to_string())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            log::info!("done: {}", if pass { "pass" } else { "fail" });
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
