//! Seeded hill climbing over integer edge costs of a fixed topology, scored
//! by the exact analyzer.

use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::arith::{int, parse_rational, EpsCost, Rational};
use crate::bounds::ratios_of;
use crate::equilibria::analyze;
use crate::error::{Error, Result};
use crate::game::Game;
use crate::kernel::Limits;

/// A quantity of an analyzed game that a target can pin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    Pos,
    Poa,
    Popos,
    Popoa,
    /// ε-free part of the optimum cost.
    OptimumCost,
    /// ε-free part of the cheapest Nash equilibrium's cost.
    NashCost,
}

impl Quantity {
    pub fn parse(name: &str) -> Option<Quantity> {
        Some(match name {
            "pos" => Quantity::Pos,
            "poa" => Quantity::Poa,
            "popos" => Quantity::Popos,
            "popoa" => Quantity::Popoa,
            "optimum-cost" => Quantity::OptimumCost,
            "nash-cost" => Quantity::NashCost,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Pos => "pos",
            Quantity::Poa => "poa",
            Quantity::Popos => "popos",
            Quantity::Popoa => "popoa",
            Quantity::OptimumCost => "optimum-cost",
            Quantity::NashCost => "nash-cost",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Target {
    pub quantity: Quantity,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    MaximizePos,
    MaximizePopos,
    /// Minimize the summed relative distance to every target.
    MatchTargets(Vec<Target>),
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::MaximizePos => f.write_str("maximize-pos"),
            Objective::MaximizePopos => f.write_str("maximize-popos"),
            Objective::MatchTargets(_) => f.write_str("match-targets"),
        }
    }
}

/// An edge whose integer cost constant the search may change.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub edge: usize,
    pub min: i64,
    pub max: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    /// Topology and starting costs. Slot edges take their starting constant
    /// from here; their ε-coefficient stays fixed.
    pub skeleton: Game,
    pub slots: Vec<Slot>,
    pub objective: Objective,
    /// Treat assignments with more than one Nash equilibrium as infeasible.
    pub require_unique_nash: bool,
    /// Treat assignments where this profile (edge ids per player) is not a
    /// Nash equilibrium as infeasible.
    pub required_nash: Option<Vec<Vec<usize>>>,
    /// Exact evaluations allowed.
    pub budget: u64,
    pub seed: u64,
    /// Non-improving evaluations before a restart.
    pub patience: u64,
    pub limits: Limits,
}

impl SearchSpec {
    pub fn new(skeleton: Game, slots: Vec<Slot>, objective: Objective) -> Self {
        SearchSpec {
            skeleton,
            slots,
            objective,
            require_unique_nash: false,
            required_nash: None,
            budget: 10_000,
            seed: 0,
            patience: 400,
            limits: Limits::default().sequential(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.slots.is_empty() {
            return Err(Error::SearchSpec("no cost slots".into()));
        }
        for s in &self.slots {
            let edge = self
                .skeleton
                .edges
                .get(s.edge)
                .ok_or_else(|| Error::SearchSpec(format!("slot edge {} does not exist", s.edge)))?;
            let floor = if edge.cost.b.is_positive() { 0 } else { 1 };
            if s.min < floor || s.max < s.min {
                return Err(Error::SearchSpec(format!(
                    "slot on edge {} has bounds [{}, {}]; costs must stay positive",
                    s.edge, s.min, s.max
                )));
            }
        }
        let mut seen: Vec<usize> = self.slots.iter().map(|s| s.edge).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::SearchSpec("an edge has two slots".into()));
        }
        crate::game::ensure_valid(&self.skeleton)?;
        if let Some(required) = &self.required_nash {
            let paths = required
                .iter()
                .zip(&self.skeleton.players)
                .map(|(edges, p)| crate::path::Path::from_edges(&self.skeleton, p.source, edges.clone()))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::SearchSpec(format!("required_nash: {e}")))?;
            crate::profile::StrategyProfile::new(paths)
                .check(&self.skeleton)
                .map_err(|e| Error::SearchSpec(format!("required_nash: {e}")))?;
        }
        if let Objective::MatchTargets(t) = &self.objective {
            if t.is_empty() {
                return Err(Error::SearchSpec("match-targets needs at least one target".into()));
            }
            if t.iter().any(|t| t.value <= Rational::zero()) {
                return Err(Error::SearchSpec("targets must be positive".into()));
            }
        }
        Ok(())
    }

    /// The skeleton with slot constants replaced by `costs`.
    pub fn instantiate(&self, costs: &[i64]) -> Game {
        let mut g = self.skeleton.clone();
        for (slot, &c) in self.slots.iter().zip(costs) {
            let b = g.edges[slot.edge].cost.b.clone();
            g.edges[slot.edge].cost = EpsCost::new(int(c), b);
        }
        g
    }

    fn initial(&self) -> Vec<i64> {
        self.slots
            .iter()
            .map(|s| {
                let c = &self.skeleton.edges[s.edge].cost.a;
                let c = if c.is_integer() { c.to_integer().try_into().unwrap_or(s.min) } else { s.min };
                c.clamp(s.min, s.max)
            })
            .collect()
    }
}

/// Totally ordered search score: feasible beats infeasible, then larger
/// values win.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Score {
    pub feasible: bool,
    pub value: Rational,
}

/// What one exact evaluation found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub costs: Vec<i64>,
    pub score: Score,
    pub nash_count: usize,
    pub pos: Option<Rational>,
    pub popos: Option<Rational>,
    pub optimum_cost: Option<EpsCost>,
    pub nash_cost: Option<EpsCost>,
}

impl Evaluation {
    /// Every target hit exactly.
    pub fn exact_match(&self, objective: &Objective) -> bool {
        matches!(objective, Objective::MatchTargets(_)) && self.score.feasible && self.score.value.is_zero()
    }
}

fn evaluate(spec: &SearchSpec, costs: &[i64]) -> Result<Evaluation> {
    let game = spec.instantiate(costs);
    let mut eval = Evaluation {
        costs: costs.to_vec(),
        score: Score { feasible: false, value: int(i64::MIN) },
        nash_count: 0,
        pos: None,
        popos: None,
        optimum_cost: None,
        nash_cost: None,
    };
    let analysis = match analyze(&game, &spec.limits) {
        Ok(a) => a,
        Err(Error::Explosion { .. } | Error::Overflow(_)) => return Ok(eval),
        Err(e) => return Err(e),
    };
    let ratios = ratios_of(&analysis)?;
    eval.nash_count = analysis.nash.len();
    eval.pos = Some(ratios.pos.limit.clone());
    eval.popos = Some(ratios.popos.limit.clone());
    eval.optimum_cost = Some(analysis.optimum_cost().clone());
    let cheapest = analysis.nash.cheapest().expect("potential games have an equilibrium");
    eval.nash_cost = Some(analysis.nash.costs[cheapest].clone());
    let mut violations = 0;
    if spec.require_unique_nash {
        violations += eval.nash_count - 1;
    }
    if let Some(required) = &spec.required_nash {
        if !analysis.nash.profiles.iter().any(|p| &p.edge_ids() == required) {
            violations += 1 + eval.nash_count;
        }
    }
    if violations > 0 {
        eval.score = Score { feasible: false, value: -int(violations as i64) };
        return Ok(eval);
    }
    let value = match &spec.objective {
        Objective::MaximizePos => ratios.pos.limit.clone(),
        Objective::MaximizePopos => ratios.popos.limit.clone(),
        Objective::MatchTargets(targets) => {
            let mut distance = Rational::zero();
            for t in targets {
                let actual = match t.quantity {
                    Quantity::Pos => ratios.pos.limit.clone(),
                    Quantity::Poa => ratios.poa.limit.clone(),
                    Quantity::Popos => ratios.popos.limit.clone(),
                    Quantity::Popoa => ratios.popoa.limit.clone(),
                    Quantity::OptimumCost => ratios.optimum_cost.a.clone(),
                    Quantity::NashCost => eval.nash_cost.as_ref().unwrap().a.clone(),
                };
                distance += ((actual - &t.value) / &t.value).abs();
            }
            -distance
        }
    };
    eval.score = Score { feasible: true, value };
    Ok(eval)
}

/// A new best, recorded when it happened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub evaluation: u64,
    pub restart: u64,
    pub score: Score,
    pub costs: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub game: Game,
    pub best: Evaluation,
    pub evaluations: u64,
    pub restarts: u64,
    pub trace: Vec<TraceEntry>,
    pub exact_match: bool,
}

fn mutate(rng: &mut ChaCha8Rng, slots: &[Slot], costs: &[i64]) -> Vec<i64> {
    let mut next = costs.to_vec();
    let i = rng.random_range(0..slots.len());
    let other = |rng: &mut ChaCha8Rng| {
        let mut j = rng.random_range(0..slots.len() - 1);
        if j >= i {
            j += 1;
        }
        j
    };
    let c = next[i];
    let moved = match rng.random_range(0..10) {
        0 => c + 1,
        1 => c - 1,
        2 => c * 2,
        3 => c / 2,
        4 => c * 3 / 2,
        5 => c * 2 / 3,
        6 => c + rng.random_range(-10..=10),
        7 if slots.len() > 1 => {
            // shift cost between two slots, keeping their sum
            let j = other(rng);
            let d = rng.random_range(1..=10);
            next[j] = (next[j] - d).clamp(slots[j].min, slots[j].max);
            c + d
        }
        8 if slots.len() > 1 => {
            // move two slots independently
            let j = other(rng);
            next[j] = (next[j] + rng.random_range(-6..=6)).clamp(slots[j].min, slots[j].max);
            c + rng.random_range(-6..=6)
        }
        9 => {
            // small steps on every slot at once, to follow constraint ridges
            for (j, slot) in slots.iter().enumerate() {
                if j != i {
                    next[j] = (next[j] + rng.random_range(-2..=2)).clamp(slot.min, slot.max);
                }
            }
            c + rng.random_range(-2..=2)
        }
        _ => c + 1,
    };
    next[i] = moved.clamp(slots[i].min, slots[i].max);
    next
}

/// Hill climbing with restarts. Deterministic for a given spec.
pub fn search_costs(spec: &SearchSpec) -> Result<SearchOutcome> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut cache: HashMap<Vec<i64>, Evaluation> = HashMap::new();
    let mut evaluations = 0u64;
    let mut restarts = 0u64;
    let mut trace = Vec::new();

    let mut eval_at = |costs: Vec<i64>, evaluations: &mut u64| -> Result<Evaluation> {
        if let Some(e) = cache.get(&costs) {
            return Ok(e.clone());
        }
        *evaluations += 1;
        let e = evaluate(spec, &costs)?;
        cache.insert(costs, e.clone());
        Ok(e)
    };

    let mut current = eval_at(spec.initial(), &mut evaluations)?;
    let mut best = current.clone();
    trace.push(TraceEntry { evaluation: 1, restart: 0, score: best.score.clone(), costs: best.costs.clone() });
    let mut stale = 0u64;
    let mut attempts = 0u64;
    // cached revisits do not spend budget, so cap attempts as well
    let attempt_cap = spec.budget.saturating_mul(20);
    while evaluations < spec.budget && attempts < attempt_cap && !best.exact_match(&spec.objective) {
        attempts += 1;
        if stale >= spec.patience {
            restarts += 1;
            stale = 0;
            // restart near the best point, or from the initial assignment
            // with every slot scaled by a log-uniform factor in [1/2, 2]
            let start: Vec<i64> = if !restarts.is_multiple_of(3) {
                let radius = 5 * (1 + restarts % 8) as i64;
                best.costs
                    .iter()
                    .zip(&spec.slots)
                    .map(|(&c, s)| (c + rng.random_range(-radius..=radius)).clamp(s.min, s.max))
                    .collect()
            } else {
                spec.initial()
                    .iter()
                    .zip(&spec.slots)
                    .map(|(&c, s)| {
                        let f = 2f64.powf(rng.random_range(-1.0..=1.0));
                        ((c as f64 * f).round() as i64).clamp(s.min, s.max)
                    })
                    .collect()
            };
            current = eval_at(start, &mut evaluations)?;
        } else {
            let candidate = eval_at(mutate(&mut rng, &spec.slots, &current.costs), &mut evaluations)?;
            if candidate.score > current.score {
                stale = 0;
                current = candidate;
            } else {
                stale += 1;
                if candidate.score == current.score {
                    current = candidate;
                }
            }
        }
        if current.score > best.score {
            best = current.clone();
            trace.push(TraceEntry {
                evaluation: evaluations,
                restart: restarts,
                score: best.score.clone(),
                costs: best.costs.clone(),
            });
        }
    }
    if !best.score.feasible {
        return Err(Error::Budget { steps: evaluations as usize, detail: "no feasible cost assignment found".into() });
    }
    Ok(SearchOutcome {
        game: spec.instantiate(&best.costs),
        exact_match: best.exact_match(&spec.objective),
        best,
        evaluations,
        restarts,
        trace,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_budget")]
    budget: u64,
    #[serde(default = "default_patience")]
    patience: u64,
    objective: String,
    #[serde(default)]
    require_unique_nash: bool,
    #[serde(default)]
    required_nash: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    targets: Vec<TargetFile>,
    #[serde(default)]
    directed: bool,
    vertices: usize,
    players: Vec<[usize; 2]>,
    edges: Vec<EdgeFile>,
    max_paths: Option<usize>,
}

fn default_budget() -> u64 {
    10_000
}

fn default_patience() -> u64 {
    400
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetFile {
    quantity: String,
    value: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    u: usize,
    v: usize,
    cost: i64,
    #[serde(default)]
    eps: Option<String>,
    /// Present on searchable edges.
    bounds: Option<[i64; 2]>,
}

/// Reads a TOML search spec.
///
/// ```toml
/// objective = "maximize-pos"
/// vertices = 3
/// players = [[0, 2], [1, 2]]
/// edges = [
///     { u = 0, v = 2, cost = 5, bounds = [1, 50] },
///     { u = 1, v = 2, cost = 5, bounds = [1, 50] },
///     { u = 0, v = 1, cost = 1, eps = "1" },
/// ]
/// ```
pub fn parse_search_spec(text: &str) -> Result<SearchSpec> {
    let file: SpecFile = toml::from_str(text).map_err(|e| Error::SearchSpec(e.to_string()))?;
    let mut game = Game::new(file.vertices, file.directed);
    let mut slots = Vec::new();
    for (id, e) in file.edges.iter().enumerate() {
        if e.u >= file.vertices || e.v >= file.vertices {
            return Err(Error::SearchSpec(format!("edge {id} has an endpoint out of range")));
        }
        let b = match &e.eps {
            Some(t) => parse_rational(t).map_err(Error::SearchSpec)?,
            None => Rational::zero(),
        };
        game.add_edge(e.u, e.v, EpsCost::new(int(e.cost), b));
        if let Some([min, max]) = e.bounds {
            slots.push(Slot { edge: id, min, max });
        }
    }
    for [s, t] in &file.players {
        if *s >= file.vertices || *t >= file.vertices {
            return Err(Error::SearchSpec("player terminal out of range".into()));
        }
        game.add_player(*s, *t);
    }
    let objective = match file.objective.as_str() {
        "maximize-pos" => Objective::MaximizePos,
        "maximize-popos" => Objective::MaximizePopos,
        "match-targets" => {
            let mut targets = Vec::new();
            for t in &file.targets {
                let quantity = Quantity::parse(&t.quantity)
                    .ok_or_else(|| Error::SearchSpec(format!("unknown target quantity `{}`", t.quantity)))?;
                let value = parse_rational(&t.value).map_err(Error::SearchSpec)?;
                targets.push(Target { quantity, value });
            }
            Objective::MatchTargets(targets)
        }
        other => return Err(Error::SearchSpec(format!("unknown objective `{other}`"))),
    };
    let mut spec = SearchSpec::new(game, slots, objective);
    spec.seed = file.seed;
    spec.budget = file.budget;
    spec.patience = file.patience;
    spec.require_unique_nash = file.require_unique_nash;
    spec.required_nash = file.required_nash;
    if let Some(p) = file.max_paths {
        spec.limits.max_paths = p;
    }
    spec.validate()?;
    Ok(spec)
}
