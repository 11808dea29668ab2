//! Command-line front end. Every command prints one JSON report (or its text
//! rendering) on stdout and exits with
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | input error: parse, validation, precondition, bad flag or spec |
//! | 3 | budget: path or profile explosion, search budget, overflow |
//! | 4 | internal invariant violation or a failed verifier verdict |

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arith::harmonic;
use crate::bounds::{check_instance, lemma1_factor, lemma2_bound, ratios_of, theorem_bound, Verifier};
use crate::equilibria::{analyze, best_response_dynamics, canonical_start, is_nash, random_start, Schedule};
use crate::error::Error;
use crate::families::{
    directed_hk_instance, fig_b_floor, fig_b_target, reconstruct_fig_a, reconstruct_fig_b, FigBConfig,
};
use crate::game::ensure_valid;
use crate::instance::{parse_instance, serialize_instance, InstanceFile};
use crate::kernel::Limits;
use crate::path::DEFAULT_PATH_CAP;
use crate::profile::{potential, social_cost, usage_histogram, StrategyProfile};
use crate::report::{self, exact, exact_rational, profile, Report};
use crate::search::{parse_search_spec, search_costs};

/// Nash equilibria listed in full by `analyze`; the count is always exact.
const LISTED_EQUILIBRIA: usize = 100;

#[derive(Parser, Debug)]
#[command(name = "ndgame", version, about = "Exact analyzer for Shapley network design games")]
struct Cli {
    /// Output format of the report.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Add wall-clock timing to the report (makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Start {
    Canonical,
    Random,
    /// The first social optimum in enumeration order.
    Optimum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScheduleArg {
    RoundRobin,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Lemma {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Hk1,
    Theorem,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    DirectedHk,
    FigA,
    FigB,
}

#[derive(clap::Args, Debug)]
struct LimitArgs {
    /// Per-player cap on simple paths.
    #[arg(long, default_value_t = DEFAULT_PATH_CAP)]
    max_paths: usize,
    /// Cap on the number of strategy profiles.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u128,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits { max_paths: self.max_paths, max_profiles: self.budget, ..Limits::default() }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Equilibria, optima, potential minima and the four inefficiency ratios.
    Analyze {
        /// Instance file in the line-oriented text format.
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Closed-form bounds for k players.
    Bounds {
        /// Number of players, at least 2.
        #[arg(long)]
        k: usize,
    },
    /// Best-response dynamics to a Nash equilibrium.
    Dynamics {
        /// Instance file in the line-oriented text format.
        #[arg(long)]
        instance: PathBuf,
        /// Starting profile.
        #[arg(long, value_enum, default_value_t = Start::Canonical)]
        start: Start,
        /// Seed of the random start and the random schedule.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Order in which improving players move.
        #[arg(long, value_enum, default_value_t = ScheduleArg::RoundRobin)]
        schedule: ScheduleArg,
        /// Improving moves allowed before giving up.
        #[arg(long, default_value_t = 100_000)]
        max_steps: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Evaluates a lemma or the theorem bound on an instance.
    Check {
        /// Instance file in the line-oriented text format.
        #[arg(long)]
        instance: PathBuf,
        /// Which statement to check; `all` adds every per-instance check.
        #[arg(long, value_enum)]
        lemma: Lemma,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Writes a bundled or reconstructed instance.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        /// Number of players of the directed family.
        #[arg(long)]
        k: Option<usize>,
        /// Instance file to write; otherwise the text is embedded in the report.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed of the fig-b search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exact evaluations allowed to the fig-b search.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Hill-climbing cost search described by a TOML spec.
    Search {
        /// TOML search spec.
        #[arg(long)]
        spec: PathBuf,
        /// Overrides the spec's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the spec's evaluation budget.
        #[arg(long)]
        budget: Option<u64>,
        /// Instance file for the best point; otherwise the text is embedded in the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Bounds { .. } => "bounds",
            Command::Dynamics { .. } => "dynamics",
            Command::Check { .. } => "check",
            Command::Generate { .. } => "generate",
            Command::Search { .. } => "search",
        }
    }
}

/// A command failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
    detail: Value,
}

impl Failure {
    fn input(message: String) -> Self {
        Failure { code: 2, kind: "input", message, detail: Value::Null }
    }
}

fn big(n: u128) -> Value {
    u64::try_from(n).map(Value::from).unwrap_or_else(|_| Value::from(n.to_string()))
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (code, kind, detail) = match &e {
            Error::Parse { line, column, reason } => {
                (2, "parse", json!({ "line": line, "column": column, "reason": reason }))
            }
            Error::InvalidGame(v) => {
                (2, "invalid-game", Value::from(v.iter().map(|v| v.to_string()).collect::<Vec<_>>()))
            }
            Error::InvalidProfile(_) => (2, "invalid-profile", Value::Null),
            Error::NoPath { .. } => (2, "no-path", Value::Null),
            Error::Precondition(_) => (2, "precondition", Value::Null),
            Error::Structure(_) => (2, "structure", Value::Null),
            Error::Degenerate(_) => (2, "degenerate", Value::Null),
            Error::SearchSpec(_) => (2, "search-spec", Value::Null),
            Error::Explosion { what, limit, count } => {
                (3, "explosion", json!({ "what": what, "limit": big(*limit), "count_at_least": big(*count) }))
            }
            Error::Budget { steps, .. } => (3, "budget", json!({ "steps": steps })),
            Error::Overflow(_) => (3, "overflow", Value::Null),
            Error::Reconstruction(_) => (3, "reconstruction", Value::Null),
            Error::Invariant(_) => (4, "invariant", Value::Null),
        };
        Failure { code, kind, message, detail }
    }
}

type Outcome = std::result::Result<(Value, i32), Failure>;

fn load(path: &PathBuf) -> std::result::Result<InstanceFile, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let file = parse_instance(&text)?;
    ensure_valid(&file.game)?;
    Ok(file)
}

fn write_file(path: &PathBuf, text: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn metadata(file: &InstanceFile) -> Value {
    json!({ "name": file.name, "provenance": file.provenance })
}

fn verdict(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "fails"
    }
}

fn cmd_analyze(file: &InstanceFile, limits: &Limits) -> Outcome {
    let game = &file.game;
    let analysis = analyze(game, limits)?;
    let ratios = ratios_of(&analysis)?;
    let nash: Vec<Value> = analysis
        .nash
        .profiles
        .iter()
        .zip(&analysis.nash.costs)
        .zip(&analysis.nash.potentials)
        .take(LISTED_EQUILIBRIA)
        .map(|((p, c), phi)| json!({ "profile": profile(p), "cost": exact(c), "potential": exact(phi) }))
        .collect();
    let optima_acyclic =
        game.directed || analysis.optima.profiles.iter().all(|p| crate::equilibria::is_forest(game, &p.used_edges()));
    let results = json!({
        "instance": metadata(file),
        "game": report::game_summary(game),
        "profiles": big(analysis.profile_count),
        "optimum": {
            "cost": exact(analysis.optimum_cost()),
            "count": analysis.optima.len(),
            "witness": profile(&ratios.optimum),
            "is_nash": is_nash(game, &ratios.optimum),
            "acyclic": optima_acyclic,
        },
        "nash": {
            "count": analysis.nash.len(),
            "cheapest": exact(&ratios.pos.ratio.num),
            "costliest": exact(&ratios.poa.ratio.num),
            "listed": nash,
            "truncated": analysis.nash.len() > LISTED_EQUILIBRIA,
        },
        "potential_minima": {
            "count": analysis.potential_minima.len(),
            "potential": exact(analysis.min_potential()),
            "profiles": analysis.potential_minima.profiles.iter().map(profile).collect::<Vec<_>>(),
            "costs": analysis.potential_minima.costs.iter().map(exact).collect::<Vec<_>>(),
        },
        "ratios": report::ratios(&ratios),
    });
    Ok((results, 0))
}

fn cmd_bounds(k: usize) -> Outcome {
    let t = theorem_bound(k)?;
    let beta = lemma1_factor(k);
    let k4 = crate::arith::int((k as i64).pow(4));
    let results = json!({
        "k": k,
        "theorem_bound": exact_rational(&t.value),
        "harmonic": exact_rational(&t.harmonic),
        "gap": exact_rational(&t.gap),
        "gap_times_k4": exact_rational(&(&t.gap * &k4)),
        "below_harmonic": t.value < t.harmonic,
        "lemma1_factor": exact_rational(&beta),
        "lemma2_bound": exact_rational(&lemma2_bound(&beta, k)?),
    });
    Ok((results, 0))
}

fn cmd_dynamics(
    file: &InstanceFile,
    start: Start,
    seed: u64,
    schedule: ScheduleArg,
    max_steps: usize,
    limits: &Limits,
) -> Outcome {
    let game = &file.game;
    let start_profile = match start {
        Start::Canonical => canonical_start(game, limits)?,
        Start::Random => random_start(game, limits, seed)?,
        Start::Optimum => analyze(game, limits)?.optima.profiles[0].clone(),
    };
    let schedule = match schedule {
        ScheduleArg::RoundRobin => Schedule::RoundRobin,
        ScheduleArg::Random => Schedule::Random(seed),
    };
    let trace = best_response_dynamics(game, &start_profile, schedule, max_steps)?;
    let mut previous = trace.start_potential.clone();
    let mut decreasing = true;
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            decreasing &= s.potential_after < previous;
            previous = s.potential_after.clone();
            json!({
                "player": s.player,
                "from": s.old_path.edges(),
                "to": s.new_path.edges(),
                "delta_cost": exact(&s.delta_cost),
                "potential_after": exact(&s.potential_after),
            })
        })
        .collect();
    let terminal_nash = is_nash(game, &trace.terminal);
    if !decreasing || !terminal_nash {
        return Err(Failure {
            code: 4,
            kind: "invariant",
            message: "best-response dynamics broke the potential contract".into(),
            detail: json!({ "potential_decreasing": decreasing, "terminal_is_nash": terminal_nash, "steps": steps }),
        });
    }
    let results = json!({
        "instance": metadata(file),
        "start": profile(&start_profile),
        "start_potential": exact(&trace.start_potential),
        "steps": steps,
        "step_count": trace.steps.len(),
        "terminal": profile(&trace.terminal),
        "terminal_cost": exact(&social_cost(game, &trace.terminal)),
        "terminal_potential": exact(&potential(game, &trace.terminal)),
        "terminal_is_nash": terminal_nash,
        "potential_decreasing": decreasing,
    });
    Ok((results, 0))
}

fn lemma1_section(verifier: &Verifier, o: &StrategyProfile) -> Result<(Value, bool), Error> {
    let k = verifier.game.k();
    if k < 2 {
        return Ok((json!({ "verdict": "not applicable: fewer than two players" }), true));
    }
    if usage_histogram(verifier.game, o).entry(k).is_zero() {
        return Ok((json!({ "verdict": "not applicable: O^k empty", "optimum": profile(o) }), true));
    }
    let mut all = true;
    let mut cases = Vec::new();
    for n in &verifier.analysis.nash.profiles {
        let r = verifier.lemma1(n, o)?;
        all &= r.holds;
        cases.push(json!({
            "nash": profile(n),
            "lhs": exact(&r.lhs),
            "rhs": exact(&r.rhs),
            "holds": r.holds,
        }));
    }
    let section = json!({
        "verdict": verdict(all),
        "optimum": profile(o),
        "factor": exact_rational(&lemma1_factor(k)),
        "cases": cases,
    });
    Ok((section, all))
}

fn lemma2_section(verifier: &Verifier, o: &StrategyProfile) -> Result<(Value, bool), Error> {
    if verifier.game.k() < 2 {
        return Ok((json!({ "verdict": "not applicable: fewer than two players" }), true));
    }
    let mut all = true;
    let mut cases = Vec::new();
    let mut beta = None;
    for n in &verifier.analysis.potential_minima.profiles {
        let r = verifier.lemma2(n, o)?;
        all &= r.holds();
        beta = Some((r.beta.clone(), r.bound.clone()));
        cases.push(json!({
            "potential_minimum": profile(n),
            "potential_premise": r.potential_ok,
            "share_premise": r.share_ok,
            "conclusion": r.conclusion,
            "holds": r.holds(),
        }));
    }
    let (beta, bound) = beta.expect("every game has a potential minimum");
    let section = json!({
        "verdict": verdict(all),
        "optimum": profile(o),
        "beta": exact_rational(&beta),
        "bound": exact_rational(&bound),
        "cases": cases,
    });
    Ok((section, all))
}

fn hk1_section(verifier: &Verifier, o: &StrategyProfile) -> Result<(Value, bool), Error> {
    let k = verifier.game.k();
    if !usage_histogram(verifier.game, o).entry(k).is_zero() {
        return Ok((json!({ "verdict": "not applicable: O^k non-empty", "optimum": profile(o) }), true));
    }
    let mut all = true;
    let mut cases = Vec::new();
    for n in &verifier.analysis.potential_minima.profiles {
        let r = verifier.hk_minus1(n, o)?;
        all &= r.holds;
        cases.push(json!({
            "potential_minimum": profile(n),
            "cost": exact(&r.cost_n),
            "bound": exact(&r.cost_o.scale(&r.coefficient)),
            "holds": r.holds,
        }));
    }
    let section = json!({
        "verdict": verdict(all),
        "optimum": profile(o),
        "coefficient": exact_rational(&harmonic(k.saturating_sub(1))),
        "cases": cases,
    });
    Ok((section, all))
}

fn theorem_section(verifier: &Verifier) -> Result<(Value, bool), Error> {
    let k = verifier.game.k();
    if k < 2 {
        return Ok((json!({ "verdict": "not applicable: fewer than two players" }), true));
    }
    let f = theorem_bound(k)?.value;
    let ratios = ratios_of(verifier.analysis)?;
    let bound = verifier.analysis.optimum_cost().scale(&f);
    let mut all = ratios.popoa.ratio.cmp_rational(&f).is_le();
    let mut cases = Vec::new();
    for (n, cost) in verifier.analysis.potential_minima.profiles.iter().zip(&verifier.analysis.potential_minima.costs) {
        let holds = cost <= &bound;
        all &= holds;
        cases.push(json!({ "potential_minimum": profile(n), "cost": exact(cost), "holds": holds }));
    }
    let section = json!({
        "verdict": verdict(all),
        "bound": exact_rational(&f),
        "popoa": exact_rational(&ratios.popoa.limit),
        "optimum_cost": exact(verifier.analysis.optimum_cost()),
        "cost_bound": exact(&bound),
        "cases": cases,
    });
    Ok((section, all))
}

fn cmd_check(file: &InstanceFile, lemma: Lemma, limits: &Limits) -> Outcome {
    let game = &file.game;
    let analysis = analyze(game, limits)?;
    let verifier = Verifier::new(game, &analysis);
    let o = &analysis.optima.profiles[0];
    let mut sections = serde_json::Map::new();
    let mut all = true;
    let mut run = |name: &str, r: Result<(Value, bool), Error>| -> std::result::Result<(), Failure> {
        let (v, ok) = if game.directed && name != "instance" {
            (json!({ "verdict": "not applicable: directed game" }), true)
        } else {
            r?
        };
        all &= ok;
        sections.insert(name.to_string(), v);
        Ok(())
    };
    match lemma {
        Lemma::One => run("lemma1", lemma1_section(&verifier, o))?,
        Lemma::Two => run("lemma2", lemma2_section(&verifier, o))?,
        Lemma::Hk1 => run("hk1", hk1_section(&verifier, o))?,
        Lemma::Theorem => run("theorem", theorem_section(&verifier))?,
        Lemma::All => {
            run("lemma1", lemma1_section(&verifier, o))?;
            run("lemma2", lemma2_section(&verifier, o))?;
            run("hk1", hk1_section(&verifier, o))?;
            run("theorem", theorem_section(&verifier))?;
            let checks = check_instance(game, &analysis)?;
            run(
                "instance",
                Ok((
                    json!({
                        "verdict": verdict(checks.all_hold()),
                        "ratio_chain": checks.chain_ok,
                        "potential_minima_nash": checks.potential_minima_nash,
                        "harmonic_bound": checks.harmonic_ok,
                        "theorem_bound": checks.theorem_ok,
                        "optima_acyclic": checks.optima_acyclic,
                        "deviation_certificates": checks.deviation_certificates,
                        "deviation_ok": checks.deviation_ok,
                        "failures": checks.failures,
                    }),
                    checks.all_hold(),
                )),
            )?;
        }
    }
    let results = json!({
        "instance": metadata(file),
        "verdict": verdict(all),
        "checks": sections,
    });
    Ok((results, if all { 0 } else { 4 }))
}

fn emit_instance(file: &InstanceFile, out: &Option<PathBuf>) -> std::result::Result<Value, Failure> {
    let text = serialize_instance(file);
    match out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(json!({ "written": path.display().to_string() }))
        }
        None => Ok(json!({ "text": text })),
    }
}

fn cmd_generate(family: Family, k: Option<usize>, out: &Option<PathBuf>, seed: u64, budget: Option<u64>) -> Outcome {
    let (file, details) = match family {
        Family::DirectedHk => {
            let k = k.ok_or_else(|| Failure::input("directed-hk needs --k".into()))?;
            let file = directed_hk_instance(k)?;
            let expected = crate::families::directed_hk_expected(k);
            (file, json!({ "k": k, "expected_pos_limit": exact_rational(&expected) }))
        }
        Family::FigA => {
            let r = reconstruct_fig_a()?;
            let claims: Vec<Value> =
                r.claims.iter().map(|c| json!({ "claim": c.name, "holds": c.holds, "detail": c.detail })).collect();
            let all = r.claims.iter().all(|c| c.holds);
            (
                r.instance,
                json!({ "claims": claims, "all_claims_hold": all, "examined": r.examined, "analyzed": r.analyzed }),
            )
        }
        Family::FigB => {
            let mut config = FigBConfig { seed, ..FigBConfig::default() };
            if let Some(b) = budget {
                config.budget = b;
            }
            let r = reconstruct_fig_b(&config)?;
            let phases: Vec<Value> = r
                .phases
                .iter()
                .map(|p| {
                    json!({
                        "phase": p.phase,
                        "topology": p.topology,
                        "evaluations": p.evaluations,
                        "costs": p.costs,
                        "pos": p.pos.as_ref().map(exact_rational),
                    })
                })
                .collect();
            let details = json!({
                "seed": seed,
                "budget": config.budget,
                "evaluations": r.evaluations,
                "topologies": r.topologies,
                "tree": r.topology.tree,
                "pos": exact_rational(&r.pos),
                "target": exact_rational(&fig_b_target()),
                "floor": exact_rational(&fig_b_floor()),
                "exact_match": r.exact_match,
                "floor_met": r.floor_met,
                "nash_count": r.nash_count,
                "optimum_cost": exact(&r.optimum_cost),
                "nash_cost": exact(&r.nash_cost),
                "phases": phases,
            });
            (r.instance, details)
        }
    };
    let results = json!({
        "instance": metadata(&file),
        "digest": report::digest(&file.game),
        "output": emit_instance(&file, out)?,
        "details": details,
    });
    Ok((results, 0))
}

fn cmd_search(spec_path: &PathBuf, seed: Option<u64>, budget: Option<u64>, out: &Option<PathBuf>) -> Outcome {
    let text = std::fs::read_to_string(spec_path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", spec_path.display())))?;
    let mut spec = parse_search_spec(&text)?;
    if let Some(s) = seed {
        spec.seed = s;
    }
    if let Some(b) = budget {
        spec.budget = b;
    }
    let outcome = search_costs(&spec)?;
    let best = &outcome.best;
    let provenance = format!(
        "searched: objective {}, seed {}, budget {}, {} evaluations",
        spec.objective, spec.seed, spec.budget, outcome.evaluations
    );
    let file = InstanceFile::named(outcome.game.clone(), "search", &provenance);
    let trace: Vec<Value> = outcome
        .trace
        .iter()
        .map(|t| {
            json!({
                "evaluation": t.evaluation,
                "restart": t.restart,
                "feasible": t.score.feasible,
                "score": exact_rational(&t.score.value),
                "costs": t.costs,
            })
        })
        .collect();
    let results = json!({
        "objective": spec.objective.to_string(),
        "seed": spec.seed,
        "budget": spec.budget,
        "evaluations": outcome.evaluations,
        "restarts": outcome.restarts,
        "exact_match": outcome.exact_match,
        "best": {
            "costs": best.costs,
            "feasible": best.score.feasible,
            "score": exact_rational(&best.score.value),
            "nash_count": best.nash_count,
            "pos": best.pos.as_ref().map(exact_rational),
            "popos": best.popos.as_ref().map(exact_rational),
            "optimum_cost": best.optimum_cost.as_ref().map(exact),
            "nash_cost": best.nash_cost.as_ref().map(exact),
        },
        "digest": report::digest(&file.game),
        "output": emit_instance(&file, out)?,
        "trace": trace,
    });
    Ok((results, 0))
}

fn dispatch(command: &Command, report: &mut Report) -> Outcome {
    match command {
        Command::Analyze { instance, limits } => {
            let file = load(instance)?;
            report.digest = Some(report::digest(&file.game));
            cmd_analyze(&file, &limits.limits())
        }
        Command::Bounds { k } => cmd_bounds(*k),
        Command::Dynamics { instance, start, seed, schedule, max_steps, limits } => {
            let file = load(instance)?;
            report.digest = Some(report::digest(&file.game));
            cmd_dynamics(&file, *start, *seed, *schedule, *max_steps, &limits.limits())
        }
        Command::Check { instance, lemma, limits } => {
            let file = load(instance)?;
            report.digest = Some(report::digest(&file.game));
            cmd_check(&file, *lemma, &limits.limits())
        }
        Command::Generate { family, k, out, seed, budget } => cmd_generate(*family, *k, out, *seed, *budget),
        Command::Search { spec, seed, budget, out } => cmd_search(spec, *seed, *budget, out),
    }
}

/// Runs one command line (program name first) and returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let started = Instant::now();
    let mut report = Report::new(cli.command.name(), args.get(1..).unwrap_or_default());
    let code = match dispatch(&cli.command, &mut report) {
        Ok((results, code)) => {
            report.results = results;
            code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            report.error =
                Some(json!({ "kind": f.kind, "message": f.message, "exit_code": f.code, "detail": f.detail }));
            f.code
        }
    };
    if cli.timing {
        report.timing_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    let _ = stdout.write_all(text.as_bytes());
    code
}
