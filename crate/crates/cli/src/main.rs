use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use xi_core::pseudocover::verify::{verify_bundle, verify_transversal_certificate};
use xi_core::pseudocover::{
    build_h, transversal_eta, verify_f_properties, AffineSubspace, BaseMap, BuildConfig, TransversalConfig,
};
use xi_core::rational::format_q;
use xi_core::report::{Check, Report};
use xi_core::riesz::{
    ideal_from_compact, ideal_to_xi_open, riesz_interpolate, search_interpolant, CoefficientGroup, ElementData,
    Gamma, InterpolationProblem, SearchBound,
};
use xi_core::suite;
use xi_core::topology::action::{is_effective, minimality_probe};
use xi_core::topology::{ActionSpec, Point, XiWindow};

#[derive(Parser, Debug, Serialize)]
#[command(name = "xi-workbench", version, about = "Finite-window checks for Ξ(P), Riesz groups and pseudocoverings")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
enum Format {
    Json,
    /// One line per check.
    Text,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "command")]
enum Command {
    /// Window models of Ξ(P) and group actions on P.
    #[command(subcommand)]
    Xi(XiCmd),
    /// The ordered group Γ: interpolation, exhaustive search, ideals.
    #[command(subcommand)]
    Riesz(RieszCmd),
    /// The tree map f and the piecewise affine map h.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Sampling of transversal points.
    #[command(subcommand)]
    Transversal(TransversalCmd),
    /// A named check battery.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Serialize)]
struct WindowArg {
    /// Integer window `LO..HI`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
    window: (i64, i64),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "op")]
enum XiCmd {
    /// Axioms, open count, primeness and point-completeness of a window.
    Check(WindowArg),
    /// Semi-decides minimality of an action on a window.
    Minimality(ActionArgs),
    /// Looks for a point moved by a group word.
    Effective {
        #[command(flatten)]
        action: ActionArgs,
        /// Word in generator indices, `-k` for the inverse of generator `k`.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
        word: Vec<i64>,
    },
}

#[derive(Args, Debug, Serialize)]
struct ActionArgs {
    #[command(flatten)]
    window: WindowArg,
    /// Action description (JSON); defaults to translation by `--shift`.
    #[arg(long, value_parser = existing_path)]
    action: Option<PathBuf>,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    shift: i64,
    /// Orbit length budget.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "op")]
enum RieszCmd {
    /// Max-then-average interpolant of a quadruple (JSON input).
    Interpolate(ProblemArgs),
    /// Exhaustive search over a support window and value grid.
    Search {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        window: WindowArg,
        #[arg(long, default_value_t = 1)]
        denominator: u64,
    },
    /// The quadruple with no integer-valued interpolant.
    Counterexample {
        #[arg(long, default_value = "Z", value_parser = parse_delta)]
        delta: String,
        /// Search windows `[-r, r]` for `r` up to this value.
        #[arg(long, default_value_t = 5)]
        max_r: i64,
    },
    /// `N_F` and its open set; without `--compact`, the whole lattice of the window.
    Ideal {
        #[command(flatten)]
        window: WindowArg,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        compact: Option<Vec<i64>>,
    },
}

#[derive(Args, Debug, Serialize)]
struct ProblemArgs {
    /// `{"rho": [e, e], "sigma": [e, e]}` with elements as `{"constant", "dev"}`.
    #[arg(long, value_parser = existing_path)]
    input: PathBuf,
    #[arg(long, default_value = "Q", value_parser = parse_delta)]
    delta: String,
}

#[derive(Args, Debug, Serialize)]
struct BuildArgs {
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long, default_value_t = 1024)]
    denominator: u64,
    #[arg(long, default_value_t = 64)]
    budget: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "op")]
enum TreeCmd {
    /// Builds h and reports its certificates.
    Build {
        #[command(flatten)]
        build: BuildArgs,
        /// Also write the bundle here.
        #[arg(long)]
        bundle: Option<PathBuf>,
    },
    /// Norm, grid and density claims on f for levels up to `--depth`.
    Verify {
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Independent re-verification of a serialized bundle.
    VerifyBundle {
        #[arg(long, value_parser = existing_path)]
        bundle: PathBuf,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "op")]
enum TransversalCmd {
    /// Samples η for `{"base", "subspaces", "config"?}`.
    Sample {
        #[arg(long, value_parser = existing_path)]
        input: PathBuf,
    },
    /// Re-checks a transversality certificate (or a report containing one).
    Verify {
        #[arg(long, value_parser = existing_path)]
        input: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SuiteName {
    XiWindows,
    TopologySmall,
    PseudoMaps,
    Rigidity,
    RieszOracle,
    RieszCounterexample,
    IdealLattice,
    FClaims,
    Transversal,
    PcCertify,
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    #[arg(value_enum)]
    suite: SuiteName,
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long)]
    oracle_cases: Option<usize>,
    #[arg(long)]
    max_points: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    pairs: Option<usize>,
}

#[derive(Deserialize)]
struct ProblemFile {
    rho: [ElementData; 2],
    sigma: [ElementData; 2],
}

#[derive(Deserialize)]
struct TransversalInput {
    base: BaseMap,
    subspaces: Vec<AffineSubspace>,
    #[serde(default)]
    config: Option<TransversalConfig>,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    if lo > hi {
        return Err(format!("empty window {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn parse_delta(s: &str) -> Result<String, String> {
    CoefficientGroup::parse(s).map(|_| s.to_string()).ok_or_else(|| format!("unknown coefficient group {s:?}"))
}

fn existing_path(s: &str) -> Result<PathBuf, String> {
    let p = PathBuf::from(s);
    if p.exists() {
        Ok(p)
    } else {
        Err(format!("{s} does not exist"))
    }
}

fn delta(s: &str) -> CoefficientGroup {
    CoefficientGroup::parse(s).expect("validated at parse time")
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn window_of(w: &WindowArg) -> anyhow::Result<XiWindow> {
    if w.window.1 - w.window.0 >= 63 {
        bail!("window {}..{} has more than 63 points", w.window.0, w.window.1);
    }
    Ok(XiWindow::integer_range(w.window.0, w.window.1)?)
}

fn points(w: &WindowArg) -> Vec<Point> {
    (w.window.0..=w.window.1).map(Point::Int).collect()
}

fn action_of(a: &ActionArgs) -> anyhow::Result<ActionSpec> {
    match &a.action {
        Some(p) => read_json(p),
        None => Ok(ActionSpec::translation_on_integers(a.shift)),
    }
}

fn problem_of(p: &ProblemArgs) -> anyhow::Result<InterpolationProblem> {
    let file: ProblemFile = read_json(&p.input)?;
    let gamma = Gamma::on_integers(delta(&p.delta));
    let [r1, r2] = file.rho;
    let [s1, s2] = file.sigma;
    Ok(InterpolationProblem::from_data(&gamma, &[r1, r2, s1, s2])?)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| anyhow!("writing {}: {}", path.display(), e.error))?;
    Ok(())
}

/// The embedded bundle when `v` is a report from `tree build`.
fn bundle_in(v: Value) -> Value {
    let embedded = v["checks"].as_array().and_then(|cs| cs.iter().find_map(|c| c["detail"].get("bundle").cloned()));
    embedded.unwrap_or(v)
}

/// Certificates in a file that is either a certificate, a report from
/// `transversal sample`, or a list of either.
fn certificates_in(v: &Value) -> Vec<Value> {
    if let Some(arr) = v.as_array() {
        return arr.iter().flat_map(certificates_in).collect();
    }
    if let Some(cs) = v["checks"].as_array() {
        return cs.iter().filter_map(|c| c["detail"].get("certificate").cloned()).collect();
    }
    vec![v.clone()]
}

fn run_xi(cmd: &XiCmd) -> anyhow::Result<Vec<Check>> {
    Ok(match cmd {
        XiCmd::Check(w) => suite::xi_window_checks(&window_of(w)?)?,
        XiCmd::Minimality(a) => {
            let v = minimality_probe(&action_of(a)?, &points(&a.window), a.budget)?;
            vec![Check::new("minimality probe", !v.is_refuted(), json!(v))]
        }
        XiCmd::Effective { action, word } => {
            let v = is_effective(&action_of(action)?, &points(&action.window), word)?;
            vec![Check::new("word moves a window point", v.is_refuted(), json!(v))]
        }
    })
}

fn run_riesz(cmd: &RieszCmd) -> anyhow::Result<Vec<Check>> {
    Ok(match cmd {
        RieszCmd::Interpolate(p) => {
            let problem = problem_of(p)?;
            match riesz_interpolate(&problem) {
                Ok(r) => {
                    let ok = problem.is_interpolant(&r.eta)?;
                    vec![Check::new("interpolant", ok, json!(r))]
                }
                Err(e) => vec![Check::new("interpolant", false, json!({"error": e.to_string()}))],
            }
        }
        RieszCmd::Search {
            problem,
            window,
            denominator,
        } => {
            let p = problem_of(problem)?;
            let bound = SearchBound::integer_window(window.window.0, window.window.1, *denominator);
            let s = search_interpolant(&p, &bound)?;
            vec![Check::new("exhaustive search", true, json!(s))]
        }
        RieszCmd::Counterexample { delta: d, max_r } => suite::riesz_counterexample(delta(d), *max_r)?,
        RieszCmd::Ideal { window, compact } => match compact {
            None => suite::ideal_lattice(window.window.0, window.window.1)?,
            Some(f) => {
                let w = window_of(window)?;
                let gamma = Gamma::rationals_on_integers();
                let ideal = ideal_from_compact(&gamma, f.iter().map(|&x| Point::Int(x)))?;
                let open = ideal_to_xi_open(&ideal, &w)?;
                vec![Check::new(
                    "open set of N_F",
                    true,
                    json!({"ideal": ideal, "open": w.space().labels_of(open)}),
                )]
            }
        },
    })
}

fn build_config(b: &BuildArgs, seed: u64) -> BuildConfig {
    BuildConfig {
        n: b.n,
        depth: b.depth,
        seed,
        denominator: b.denominator,
        budget: b.budget,
    }
}

fn run_tree(cmd: &TreeCmd, seed: u64) -> anyhow::Result<Vec<Check>> {
    Ok(match cmd {
        TreeCmd::Build { build, bundle } => {
            let b = build_h(&build_config(build, seed))?;
            let failed: Vec<&_> = b.certificates.iter().filter(|c| !c.pass).collect();
            let mut checks = vec![Check::new(
                "construction certificates",
                failed.is_empty(),
                json!({"pieces": b.pieces.len(), "certificates": b.certificates.len(), "failed": failed}),
            )];
            let value = serde_json::to_value(&b)?;
            match bundle {
                Some(path) => {
                    write_atomic(path, serde_json::to_string_pretty(&value)?.as_bytes())?;
                    checks.push(Check::new("bundle written", true, json!({"path": path})));
                }
                None => checks.push(Check::new("bundle", true, json!({"bundle": value}))),
            }
            checks
        }
        TreeCmd::Verify { n, depth } => verify_f_properties(*n, *depth)?
            .into_iter()
            .map(|c| Check::new(format!("{} {}", c.kind, c.subject), c.pass, json!(c.witness)))
            .collect(),
        TreeCmd::VerifyBundle { bundle } => {
            let v = bundle_in(read_json(bundle)?);
            if v.get("pieces").is_none() {
                bail!("{} holds no bundle", bundle.display());
            }
            let rep = verify_bundle(&v);
            vec![Check::new(
                "independent verification",
                rep.pass(),
                json!({"pieces": rep.pieces, "checks": rep.checks, "failures": rep.failures}),
            )]
        }
    })
}

fn run_transversal(cmd: &TransversalCmd, seed: u64) -> anyhow::Result<Vec<Check>> {
    Ok(match cmd {
        TransversalCmd::Sample { input } => {
            let inp: TransversalInput = read_json(input)?;
            let cfg = inp.config.unwrap_or_default();
            match transversal_eta(&inp.base, &inp.subspaces, &cfg, seed) {
                Ok(o) => vec![Check::new(
                    "transversal sample",
                    o.certificate.pass,
                    json!({"eta": o.eta.iter().map(|v| v.iter().map(format_q).collect::<Vec<_>>()).collect::<Vec<_>>(),
                           "attempts": o.attempts, "certificate": o.certificate}),
                )],
                Err(e) => vec![Check::new("transversal sample", false, json!({"error": e.to_string()}))],
            }
        }
        TransversalCmd::Verify { input } => {
            let v: Value = read_json(input)?;
            let certs = certificates_in(&v);
            if certs.is_empty() {
                bail!("{} holds no certificate", input.display());
            }
            certs
                .iter()
                .enumerate()
                .map(|(i, c)| match verify_transversal_certificate(c) {
                    Ok(ok) => Check::new(format!("certificate {i}"), ok, json!({"recorded_pass": c["pass"]})),
                    Err(e) => Check::new(format!("certificate {i}"), false, json!({"error": e})),
                })
                .collect()
        }
    })
}

fn run_sweep(a: &SweepArgs, seed: u64) -> anyhow::Result<Vec<Check>> {
    Ok(match a.suite {
        SuiteName::XiWindows => suite::xi_sizes(a.max_points.unwrap_or(10))?,
        SuiteName::TopologySmall => suite::topology_small(a.max_points.unwrap_or(4)),
        SuiteName::PseudoMaps => vec![suite::pseudo_maps(seed, a.cases.unwrap_or(500), a.max_points.unwrap_or(6))],
        SuiteName::Rigidity => vec![suite::rigidity(a.max_points.unwrap_or(5))],
        SuiteName::RieszOracle => suite::riesz_battery(seed, a.cases.unwrap_or(1000), a.oracle_cases.unwrap_or(200))?,
        SuiteName::RieszCounterexample => {
            let mut c = suite::riesz_counterexample(CoefficientGroup::Integers, 5)?;
            c.extend(suite::riesz_counterexample(CoefficientGroup::Rationals, 1)?);
            c
        }
        SuiteName::IdealLattice => suite::ideal_lattice(0, a.max_points.unwrap_or(8) as i64 - 1)?,
        SuiteName::FClaims => suite::f_claims(a.n.unwrap_or(0), a.depth.unwrap_or(4))?,
        SuiteName::Transversal => suite::transversal_battery(seed, a.cases.unwrap_or(200)),
        SuiteName::PcCertify => {
            let cfg = BuildConfig {
                n: a.n.unwrap_or(0),
                depth: a.depth.unwrap_or(2),
                seed,
                ..Default::default()
            };
            suite::pc_certify(&cfg, a.pairs.unwrap_or(10_000))?.1
        }
    })
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let start = Instant::now();
    let checks = match &cli.command {
        Command::Xi(c) => run_xi(c)?,
        Command::Riesz(c) => run_riesz(c)?,
        Command::Tree(c) => run_tree(c, cli.seed)?,
        Command::Transversal(c) => run_transversal(c, cli.seed)?,
        Command::Sweep(a) => run_sweep(a, cli.seed)?,
    };
    let config = json!({"seed": cli.seed, "command": cli.command});
    Ok(Report::new(config, checks, start.elapsed().as_millis() as u64))
}

fn render(report: &Report, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Text => {
            let mut s = String::new();
            for c in &report.checks {
                s += &format!("{} {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name);
            }
            s
        }
    })
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("XI_WORKBENCH_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("XI_WORKBENCH_THREADS={v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|_| run(&cli)).and_then(|report| {
        let text = render(&report, cli.format)?;
        match &cli.out {
            Some(path) => write_atomic(path, text.as_bytes())?,
            None => print!("{text}"),
        }
        Ok(report.passed())
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
