//! Closed-form price-of-stability bounds and per-instance verifiers for the
//! inequalities behind them.
//!
//! The verifiers never prove anything; they evaluate each inequality exactly
//! on a concrete game and report every side, so a failing check comes with
//! its witness.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::arith::{harmonic, int, EpsCost, EpsRatio, Rational};
use crate::equilibria::{analyze, is_forest, is_nash, Analysis};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::kernel::Limits;
use crate::path::Path;
use crate::profile::{edge_loads, player_cost, potential, social_cost, usage_histogram, StrategyProfile};

/// `k²(k+1)/2 − k`, the coefficient relating the non-shared edge costs of an
/// equilibrium to those of an optimum.
pub fn lemma1_factor(k: usize) -> Rational {
    let k = int(k as i64);
    &k * &k * (&k + int(1)) / int(2) - k
}

/// The closed-form upper bound `f(k)` on the potential-optimal price of
/// anarchy together with its relative gap `1 − f(k)/H_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremBound {
    pub k: usize,
    pub value: Rational,
    pub harmonic: Rational,
    pub gap: Rational,
}

/// `f(k) = (k³(k+1)/2 − k²) / (1 + k³(k+1)/2 − k²) · H_k` for `k ≥ 2`.
pub fn theorem_bound(k: usize) -> Result<TheoremBound> {
    if k < 2 {
        return Err(Error::Precondition(format!("theorem bound needs k ≥ 2, got {k}")));
    }
    let kk = int(k as i64);
    let core = &kk * &kk * &kk * (&kk + int(1)) / int(2) - &kk * &kk;
    let fraction = &core / (Rational::one() + &core);
    let h = harmonic(k);
    let value = &fraction * &h;
    Ok(TheoremBound { k, gap: Rational::one() - &fraction, value, harmonic: h })
}

/// `βk/(1+βk) · H_k`.
pub fn lemma2_bound(beta: &Rational, k: usize) -> Result<Rational> {
    if beta <= &Rational::zero() {
        return Err(Error::Precondition(format!("β must be positive, got {beta}")));
    }
    if k < 2 {
        return Err(Error::Precondition(format!("k must be at least 2, got {k}")));
    }
    let bk = beta * int(k as i64);
    Ok(&bk / (Rational::one() + &bk) * harmonic(k))
}

/// One inefficiency ratio with its witness profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioEntry {
    pub ratio: EpsRatio,
    /// Value as `ε → 0⁺`.
    pub limit: Rational,
    /// Side of the limit the ratio sits on for small `ε`.
    pub approach: Ordering,
    pub witness: StrategyProfile,
}

impl RatioEntry {
    fn new(num: &EpsCost, den: &EpsCost, witness: &StrategyProfile) -> Result<Self> {
        let ratio = EpsRatio::new(num.clone(), den.clone())?;
        Ok(RatioEntry { limit: ratio.limit()?, approach: ratio.approach(), ratio, witness: witness.clone() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioReport {
    pub pos: RatioEntry,
    pub poa: RatioEntry,
    pub popos: RatioEntry,
    pub popoa: RatioEntry,
    pub optimum: StrategyProfile,
    pub optimum_cost: EpsCost,
}

impl RatioReport {
    /// `PoS ≤ POPoS ≤ POPoA ≤ PoA`, compared exactly.
    pub fn chain_holds(&self) -> bool {
        let seq = [&self.pos, &self.popos, &self.popoa, &self.poa];
        seq.windows(2).all(|w| w[0].ratio.cmp_value(&w[1].ratio) != Ordering::Greater)
    }
}

pub fn ratios(game: &Game, limits: &Limits) -> Result<RatioReport> {
    ratios_of(&analyze(game, limits)?)
}

/// The four ratios of an already analyzed game.
pub fn ratios_of(analysis: &Analysis) -> Result<RatioReport> {
    let opt = analysis.optimum_cost();
    let pick = |set: &crate::equilibria::EquilibriumSet, best: bool| -> Result<RatioEntry> {
        let i = if best { set.cheapest() } else { set.costliest() }
            .ok_or_else(|| Error::Invariant(format!("{} set is empty", set.kind)))?;
        RatioEntry::new(&set.costs[i], opt, &set.profiles[i])
    };
    Ok(RatioReport {
        pos: pick(&analysis.nash, true)?,
        poa: pick(&analysis.nash, false)?,
        popos: pick(&analysis.potential_minima, true)?,
        popoa: pick(&analysis.potential_minima, false)?,
        optimum: analysis.optima.profiles[0].clone(),
        optimum_cost: opt.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaOneReport {
    /// `Σ_{j<k} |N^j|`.
    pub lhs: EpsCost,
    pub factor: Rational,
    /// `factor · Σ_{j<k} |O^j|`.
    pub rhs: EpsCost,
    pub holds: bool,
    /// Whether some edge of the optimum is shared by all players.
    pub applicable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaTwoReport {
    pub beta: Rational,
    /// `Φ(N) ≤ Φ(O)`.
    pub potential_ok: bool,
    /// `Σ_{j<k}|N^j| ≤ β Σ_{j<k}|O^j|`.
    pub share_ok: bool,
    pub bound: Rational,
    /// `cost(N) ≤ bound · cost(O)`.
    pub conclusion: bool,
}

impl LemmaTwoReport {
    pub fn holds(&self) -> bool {
        !(self.potential_ok && self.share_ok) || self.conclusion
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HkMinusOneReport {
    pub coefficient: Rational,
    pub cost_n: EpsCost,
    pub cost_o: EpsCost,
    pub holds: bool,
}

/// Verifiers bound to one analyzed game.
pub struct Verifier<'a> {
    pub game: &'a Game,
    pub analysis: &'a Analysis,
}

impl<'a> Verifier<'a> {
    pub fn new(game: &'a Game, analysis: &'a Analysis) -> Self {
        Verifier { game, analysis }
    }

    fn require_nash(&self, n: &StrategyProfile) -> Result<()> {
        n.check(self.game)?;
        if !is_nash(self.game, n) {
            return Err(Error::Precondition(format!("{:?} is not a Nash equilibrium", n.edge_ids())));
        }
        Ok(())
    }

    fn require_optimum(&self, o: &StrategyProfile) -> Result<()> {
        o.check(self.game)?;
        let cost = social_cost(self.game, o);
        if &cost != self.analysis.optimum_cost() {
            return Err(Error::Precondition(format!(
                "{:?} costs {cost}, the optimum costs {}",
                o.edge_ids(),
                self.analysis.optimum_cost()
            )));
        }
        Ok(())
    }

    pub fn lemma1(&self, n: &StrategyProfile, o: &StrategyProfile) -> Result<LemmaOneReport> {
        self.require_nash(n)?;
        self.require_optimum(o)?;
        let k = self.game.k();
        let hn = usage_histogram(self.game, n);
        let ho = usage_histogram(self.game, o);
        let factor = lemma1_factor(k);
        let lhs = hn.below_k();
        let rhs = ho.below_k().scale(&factor);
        Ok(LemmaOneReport { holds: lhs <= rhs, applicable: !ho.entry(k).is_zero(), lhs, factor, rhs })
    }

    pub fn lemma2(&self, n: &StrategyProfile, o: &StrategyProfile) -> Result<LemmaTwoReport> {
        lemma2_check(self.game, n, o)
    }

    pub fn hk_minus1(&self, n: &StrategyProfile, o: &StrategyProfile) -> Result<HkMinusOneReport> {
        hk_minus1_check(self.game, n, o)
    }
}

pub fn lemma1_check(game: &Game, n: &StrategyProfile, o: &StrategyProfile, limits: &Limits) -> Result<LemmaOneReport> {
    let analysis = analyze(game, limits)?;
    Verifier::new(game, &analysis).lemma1(n, o)
}

pub fn lemma2_check(game: &Game, n: &StrategyProfile, o: &StrategyProfile) -> Result<LemmaTwoReport> {
    let k = game.k();
    n.check(game)?;
    o.check(game)?;
    if k < 2 {
        return Err(Error::Precondition("needs at least two players".into()));
    }
    let beta = lemma1_factor(k);
    let bound = lemma2_bound(&beta, k)?;
    let hn = usage_histogram(game, n);
    let ho = usage_histogram(game, o);
    Ok(LemmaTwoReport {
        potential_ok: potential(game, n) <= potential(game, o),
        share_ok: hn.below_k() <= ho.below_k().scale(&beta),
        conclusion: social_cost(game, n) <= social_cost(game, o).scale(&bound),
        beta,
        bound,
    })
}

pub fn hk_minus1_check(game: &Game, n: &StrategyProfile, o: &StrategyProfile) -> Result<HkMinusOneReport> {
    let k = game.k();
    n.check(game)?;
    o.check(game)?;
    if !usage_histogram(game, o).entry(k).is_zero() {
        return Err(Error::Precondition("optimum shares an edge among all players".into()));
    }
    if potential(game, n) > potential(game, o) {
        return Err(Error::Precondition("Φ(N) exceeds Φ(O)".into()));
    }
    let coefficient = harmonic(k.saturating_sub(1));
    let cost_n = social_cost(game, n);
    let cost_o = social_cost(game, o);
    Ok(HkMinusOneReport { holds: cost_n <= cost_o.scale(&coefficient), coefficient, cost_n, cost_o })
}

/// Split of an optimum's edges around the edges shared by every player,
/// and the player order induced by a depth-first closed walk of the larger
/// side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MajorTreeOrder {
    /// Players in the order their terminals are first reached by the walk.
    pub order: Vec<usize>,
    /// Edges used by all players, ascending.
    pub shared: Vec<usize>,
    pub major: Vec<usize>,
    pub minor: Vec<usize>,
    pub major_cost: EpsCost,
    pub minor_cost: EpsCost,
    /// Vertex sequence of the closed walk (starts and ends at its root).
    pub walk: Vec<usize>,
    /// Terminal of each player inside the major tree.
    pub major_terminal: Vec<usize>,
}

impl MajorTreeOrder {
    /// Position of each player in [`MajorTreeOrder::order`].
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (p, &i) in self.order.iter().enumerate() {
            pos[i] = p;
        }
        pos
    }

    pub fn successor(&self, player: usize) -> usize {
        let p = self.positions()[player];
        self.order[(p + 1) % self.order.len()]
    }

    pub fn predecessor(&self, player: usize) -> usize {
        let p = self.positions()[player];
        let k = self.order.len();
        self.order[(p + k - 1) % k]
    }
}

pub fn major_tree_order(game: &Game, o: &StrategyProfile) -> Result<MajorTreeOrder> {
    o.check(game)?;
    let k = game.k();
    if game.directed {
        return Err(Error::Structure("major-tree order is defined for undirected games only".into()));
    }
    if k < 2 {
        return Err(Error::Structure(format!(
            "with {k} player(s) the optimum is a single tree; there is no two-tree split"
        )));
    }
    let loads = edge_loads(o);
    let shared: Vec<usize> = loads.iter().filter(|&(_, l)| l == k).map(|(e, _)| e).collect();
    if shared.is_empty() {
        return Err(Error::Precondition("no edge of the optimum is used by all players".into()));
    }
    let used = o.used_edges();
    if !is_forest(game, &used) {
        return Err(Error::Structure("optimum edge set contains a cycle".into()));
    }
    let rest: Vec<usize> = used.iter().copied().filter(|e| !shared.contains(e)).collect();

    // components of the terminals under the non-shared edges; interior
    // vertices of a longer shared segment stay isolated and are not trees
    let terminals: BTreeSet<usize> = game.players.iter().flat_map(|p| [p.source, p.target]).collect();
    let mut comp: BTreeMap<usize, usize> = BTreeMap::new();
    let mut adjacency: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for &id in &rest {
        let e = &game.edges[id];
        adjacency.entry(e.u).or_default().push((id, e.v));
        adjacency.entry(e.v).or_default().push((id, e.u));
    }
    let mut count = 0;
    for &v in &terminals {
        if comp.contains_key(&v) {
            continue;
        }
        let mut stack = vec![v];
        comp.insert(v, count);
        while let Some(x) = stack.pop() {
            for &(_, y) in adjacency.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                if let std::collections::btree_map::Entry::Vacant(slot) = comp.entry(y) {
                    slot.insert(count);
                    stack.push(y);
                }
            }
        }
        count += 1;
    }
    if count != 2 || rest.iter().any(|&id| !comp.contains_key(&game.edges[id].u)) {
        return Err(Error::Structure(format!(
            "removing the shared edges leaves {count} terminal trees instead of two"
        )));
    }
    let mut side_terminal = vec![[None, None]; k];
    for (i, p) in game.players.iter().enumerate() {
        for t in [p.source, p.target] {
            let c = comp[&t];
            if side_terminal[i][c].is_some() {
                return Err(Error::Structure(format!("player {i} has both terminals in one tree")));
            }
            side_terminal[i][c] = Some(t);
        }
    }
    let side_edges =
        |c: usize| -> Vec<usize> { rest.iter().copied().filter(|&id| comp[&game.edges[id].u] == c).collect() };
    let side_cost = |edges: &[usize]| -> EpsCost { edges.iter().map(|&id| &game.edges[id].cost).sum() };
    let (e0, e1) = (side_edges(0), side_edges(1));
    let (c0, c1) = (side_cost(&e0), side_cost(&e1));
    let least_vertex = |c: usize| comp.iter().find(|&(_, &x)| x == c).map(|(&v, _)| v).unwrap();
    let major_side = match c0.cmp(&c1) {
        Ordering::Greater => 0,
        Ordering::Less => 1,
        Ordering::Equal => match (e0.first(), e1.first()) {
            (Some(a), Some(b)) => usize::from(b < a),
            _ => usize::from(least_vertex(1) < least_vertex(0)),
        },
    };
    let (major, minor, major_cost, minor_cost) = if major_side == 0 { (e0, e1, c0, c1) } else { (e1, e0, c1, c0) };

    // depth-first closed walk from the least vertex of the major tree
    let root = least_vertex(major_side);
    let mut walk = vec![root];
    let mut first_seen = vec![root];
    let mut visited: BTreeSet<usize> = BTreeSet::from([root]);
    fn descend(
        x: usize,
        adjacency: &BTreeMap<usize, Vec<(usize, usize)>>,
        visited: &mut BTreeSet<usize>,
        walk: &mut Vec<usize>,
        first_seen: &mut Vec<usize>,
    ) {
        let mut next: Vec<(usize, usize)> = adjacency.get(&x).cloned().unwrap_or_default();
        next.sort_unstable();
        for (_, y) in next {
            if visited.insert(y) {
                walk.push(y);
                first_seen.push(y);
                descend(y, adjacency, visited, walk, first_seen);
                walk.push(x);
            }
        }
    }
    descend(root, &adjacency, &mut visited, &mut walk, &mut first_seen);

    let major_terminal: Vec<usize> =
        side_terminal.iter().map(|t| t[major_side].expect("one terminal per tree")).collect();
    let mut order = Vec::with_capacity(k);
    for v in &first_seen {
        for (i, &t) in major_terminal.iter().enumerate() {
            if t == *v {
                order.push(i);
            }
        }
    }
    if order.len() != k {
        return Err(Error::Structure("walk does not reach every major-tree terminal".into()));
    }
    Ok(MajorTreeOrder { order, shared, major, minor, major_cost, minor_cost, walk, major_terminal })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Successor,
    Predecessor,
}

/// An alternative strategy for player `i` routed through a neighbouring
/// player's terminals, plus the checks it certifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationCertificate {
    pub player: usize,
    pub partner: usize,
    /// Edge sequence of the walk before cycles are cut out.
    pub walk: Vec<usize>,
    pub path: Path,
    /// Edges of the path that belong to the optimum.
    pub q: Vec<usize>,
    /// Every path edge is in the partner's equilibrium path or outside the
    /// two players' common optimum edges.
    pub property_holds: bool,
    /// Every path edge is in the partner's equilibrium path or not shared
    /// by all players in the optimum.
    pub shared_property_holds: bool,
    /// `cost_i(N) ≤ cost_i(P, N_{-i})`.
    pub deviation_ok: bool,
    pub lhs: EpsCost,
    pub rhs: EpsCost,
    /// `lhs ≤ rhs`.
    pub inequality_holds: bool,
}

impl DeviationCertificate {
    pub fn passes(&self) -> bool {
        self.property_holds && self.shared_property_holds && self.deviation_ok && self.inequality_holds
    }
}

/// Position of `v` in the vertex sequence of `p`.
fn position(p: &Path, v: usize) -> usize {
    p.vertices().iter().position(|&x| x == v).expect("vertex on path")
}

/// Edges of `p` between vertex positions `from..to` (`from ≤ to`).
fn segment(p: &Path, from: usize, to: usize) -> (Vec<usize>, Vec<usize>) {
    (p.edges()[from..to].to_vec(), p.vertices()[from..=to].to_vec())
}

/// Cuts cycles out of a walk, keeping the first visit of each vertex.
fn erase_loops(edges: &[usize], vertices: &[usize]) -> Path {
    let mut out_edges: Vec<usize> = Vec::new();
    let mut out_vertices: Vec<usize> = vec![vertices[0]];
    for (i, &e) in edges.iter().enumerate() {
        let next = vertices[i + 1];
        if let Some(p) = out_vertices.iter().position(|&x| x == next) {
            out_vertices.truncate(p + 1);
            out_edges.truncate(p);
        } else {
            out_edges.push(e);
            out_vertices.push(next);
        }
    }
    Path::from_parts(out_edges, out_vertices)
}

/// Builds the deviation of player `i` through the successor (or
/// predecessor) in major-tree order and certifies its properties.
pub fn deviation_path(
    game: &Game,
    n: &StrategyProfile,
    o: &StrategyProfile,
    i: usize,
    direction: Direction,
) -> Result<DeviationCertificate> {
    let order = major_tree_order(game, o)?;
    n.check(game)?;
    let j = match direction {
        Direction::Successor => order.successor(i),
        Direction::Predecessor => order.predecessor(i),
    };
    let oi = &o.paths[i];
    let mut oj = o.paths[j].clone();
    let mut nj = n.paths[j].clone();
    let common: BTreeSet<usize> = oi.edges().iter().copied().filter(|e| oj.contains(*e)).collect();
    if common.is_empty() {
        return Err(Error::Structure(format!("optimum paths of players {i} and {j} share no edge")));
    }
    let on_j: BTreeSet<usize> = oj.vertices().iter().copied().collect();
    let u = *oi.vertices().iter().find(|v| on_j.contains(v)).unwrap();
    let v = *oi.vertices().iter().rev().find(|v| on_j.contains(v)).unwrap();
    if position(&oj, u) > position(&oj, v) {
        oj = oj.reversed();
        nj = nj.reversed();
    }
    let (pu_i, pv_i) = (position(oi, u), position(oi, v));
    let (pu_j, pv_j) = (position(&oj, u), position(&oj, v));

    let mut walk_e = Vec::new();
    let mut walk_v = vec![oi.source()];
    let mut push = |(e, vs): (Vec<usize>, Vec<usize>)| {
        walk_e.extend(e);
        walk_v.extend(vs.into_iter().skip(1));
    };
    // O_i from s_i to u
    push(segment(oi, 0, pu_i));
    // O_j backwards from u to its start
    let back = segment(&oj, 0, pu_j);
    push((back.0.into_iter().rev().collect(), back.1.into_iter().rev().collect()));
    // N_j across
    push((nj.edges().to_vec(), nj.vertices().to_vec()));
    // O_j backwards from its end to v
    let tail = segment(&oj, pv_j, oj.len());
    push((tail.0.into_iter().rev().collect(), tail.1.into_iter().rev().collect()));
    // O_i from v to t_i
    push(segment(oi, pv_i, oi.len()));
    debug_assert_eq!(walk_v.len(), walk_e.len() + 1);

    let path = erase_loops(&walk_e, &walk_v);
    let nj_edges: BTreeSet<usize> = nj.edges().iter().copied().collect();
    let used_o: BTreeSet<usize> = o.used_edges().into_iter().collect();
    let k = game.k();
    let o_loads = edge_loads(o);
    let property_holds = path.edges().iter().all(|e| nj_edges.contains(e) || !common.contains(e));
    let shared_property_holds = path.edges().iter().all(|&e| nj_edges.contains(&e) || o_loads.get(e) != k);
    let q: Vec<usize> = path.edges().iter().copied().filter(|e| used_o.contains(e)).collect();

    let loads = edge_loads(n);
    let ni: BTreeSet<usize> = n.paths[i].edges().iter().copied().collect();
    let share = |e: usize, extra: usize| &game.edges[e].cost / &int((loads.get(e) + extra) as i64);
    let mut lhs = EpsCost::zero();
    for &e in ni.difference(&nj_edges) {
        lhs += share(e, 0);
    }
    for &e in nj_edges.difference(&ni) {
        lhs -= &share(e, 1);
    }
    let rhs: EpsCost = q.iter().map(|&e| &game.edges[e].cost).sum();
    let deviated = n.with_path(i, path.clone());
    let deviation_ok = player_cost(game, n, i) <= player_cost(game, &deviated, i);
    Ok(DeviationCertificate {
        player: i,
        partner: j,
        walk: walk_e,
        path,
        q,
        property_holds,
        shared_property_holds,
        deviation_ok,
        inequality_holds: lhs <= rhs,
        lhs,
        rhs,
    })
}

/// Every per-instance check on one analyzed game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceChecks {
    pub ratios: RatioReport,
    pub chain_ok: bool,
    pub potential_minima_nash: bool,
    /// `Φ(N) ≤ Φ(O)` and `cost(N) ≤ H_k cost(O)` for every potential minimum.
    pub harmonic_ok: bool,
    /// `cost(N) ≤ f(k) cost(O)` for every potential minimum (k ≥ 2).
    pub theorem_ok: bool,
    pub optima_acyclic: bool,
    /// Whether the first optimum shares an edge among all players.
    pub shared_edge: bool,
    /// Lemma-1 inequality over every Nash equilibrium (when applicable).
    pub lemma1_ok: bool,
    pub lemma1_reports: usize,
    pub lemma2_ok: bool,
    pub hk_minus1_ok: bool,
    pub deviation_ok: bool,
    pub deviation_certificates: usize,
    pub failures: Vec<String>,
}

impl InstanceChecks {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every verifier on an analyzed game and collects the failures with
/// their witnesses. The lemma, `H_(k-1)` and theorem checks are statements
/// about undirected games and are skipped for directed ones.
pub fn check_instance(game: &Game, analysis: &Analysis) -> Result<InstanceChecks> {
    let k = game.k();
    let ratios = ratios_of(analysis)?;
    let verifier = Verifier::new(game, analysis);
    let mut failures = Vec::new();
    let o = &analysis.optima.profiles[0];
    let opt_cost = analysis.optimum_cost();
    let phi_o = potential(game, o);
    let hk = harmonic(k);
    let f = if k >= 2 && !game.directed { Some(theorem_bound(k)?.value) } else { None };

    let chain_ok = ratios.chain_holds();
    if !chain_ok {
        failures.push("ratio chain PoS ≤ POPoS ≤ POPoA ≤ PoA violated".to_string());
    }
    let potential_minima_nash = analysis.potential_minima.profiles.iter().all(|p| is_nash(game, p));
    if !potential_minima_nash {
        failures.push("a potential minimum is not a Nash equilibrium".to_string());
    }
    let mut harmonic_ok = true;
    let mut theorem_ok = true;
    for (p, cost) in analysis.potential_minima.profiles.iter().zip(&analysis.potential_minima.costs) {
        if potential(game, p) > phi_o || cost > &opt_cost.scale(&hk) {
            harmonic_ok = false;
            failures.push(format!("H_k chain fails for potential minimum {:?}", p.edge_ids()));
        }
        if let Some(f) = &f {
            if cost > &opt_cost.scale(f) {
                theorem_ok = false;
                failures.push(format!("theorem bound fails for potential minimum {:?}", p.edge_ids()));
            }
        }
    }
    let optima_acyclic = game.directed || analysis.optima.profiles.iter().all(|p| is_forest(game, &p.used_edges()));
    if !optima_acyclic {
        failures.push("an optimum contains a cycle".to_string());
    }

    let shared_edge = k >= 1 && !usage_histogram(game, o).entry(k).is_zero();
    let mut lemma1_ok = true;
    let mut lemma1_reports = 0;
    let mut lemma2_ok = true;
    let mut hk_minus1_ok = true;
    let mut deviation_ok = true;
    let mut deviation_certificates = 0;
    if k >= 2 && !game.directed {
        for n in &analysis.nash.profiles {
            let r = verifier.lemma1(n, o)?;
            lemma1_reports += 1;
            if r.applicable && !r.holds {
                lemma1_ok = false;
                failures.push(format!(
                    "lemma-1 inequality fails: N={:?} O={:?} lhs={} rhs={}",
                    n.edge_ids(),
                    o.edge_ids(),
                    r.lhs,
                    r.rhs
                ));
            }
        }
        for n in &analysis.potential_minima.profiles {
            let r = verifier.lemma2(n, o)?;
            if !r.holds() {
                lemma2_ok = false;
                failures.push(format!("lemma-2 implication fails: N={:?}", n.edge_ids()));
            }
            if !shared_edge {
                let r = verifier.hk_minus1(n, o)?;
                if !r.holds {
                    hk_minus1_ok = false;
                    failures.push(format!("H_(k-1) bound fails: N={:?}", n.edge_ids()));
                }
            } else {
                for i in 0..k {
                    for dir in [Direction::Successor, Direction::Predecessor] {
                        let c = deviation_path(game, n, o, i, dir)?;
                        deviation_certificates += 1;
                        if !c.passes() {
                            deviation_ok = false;
                            failures.push(format!(
                                "deviation certificate fails: N={:?} O={:?} player {i} {dir:?}: {c:?}",
                                n.edge_ids(),
                                o.edge_ids()
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(InstanceChecks {
        ratios,
        chain_ok,
        potential_minima_nash,
        harmonic_ok,
        theorem_ok,
        optima_acyclic,
        shared_edge,
        lemma1_ok,
        lemma1_reports,
        lemma2_ok,
        hk_minus1_ok,
        deviation_ok,
        deviation_certificates,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    #[test]
    fn theorem_bound_small_k() {
        assert_eq!(theorem_bound(2).unwrap().value, ratio(4, 3));
        assert_eq!(theorem_bound(3).unwrap().value, ratio(165, 92));
        assert!(theorem_bound(1).is_err());
        assert_eq!(lemma1_factor(3), int(15));
        assert_eq!(lemma1_factor(2), int(4));
    }

    #[test]
    fn lemma2_compositions() {
        assert_eq!(lemma2_bound(&int(15), 3).unwrap(), ratio(165, 92));
        assert_eq!(lemma2_bound(&int(4), 2).unwrap(), ratio(4, 3));
        assert_eq!(lemma2_bound(&int(1), 2).unwrap(), int(1));
        assert!(lemma2_bound(&int(0), 2).is_err());
    }

    #[test]
    fn loop_erasure_keeps_first_visits() {
        // walk 0 -a- 1 -b- 2 -c- 1 -d- 3 becomes 0 -a- 1 -d- 3
        let p = erase_loops(&[10, 11, 12, 13], &[0, 1, 2, 1, 3]);
        assert_eq!(p.edges(), &[10, 13]);
        assert_eq!(p.vertices(), &[0, 1, 3]);
        let p = erase_loops(&[1, 1], &[0, 1, 0]);
        assert!(p.is_empty());
    }

    #[test]
    fn shared_segment_of_two_edges() {
        // 0 and 4 hang off 1, the path 1-2-3 is shared, 5 hangs off 3
        let mut g = Game::new(6, false);
        for (u, v, c) in [(0, 1, 2), (4, 1, 3), (1, 2, 1), (2, 3, 1), (3, 5, 4)] {
            g.add_edge(u, v, EpsCost::from_ints(c, 0));
        }
        g.add_player(0, 3);
        g.add_player(4, 5);
        let analysis = analyze(&g, &Limits::default()).unwrap();
        let o = &analysis.optima.profiles[0];
        let order = major_tree_order(&g, o).unwrap();
        assert_eq!(order.shared, vec![2, 3]);
        assert_eq!(order.major, vec![0, 1]);
        assert_eq!(order.minor, vec![4]);
        let checks = check_instance(&g, &analysis).unwrap();
        assert!(checks.all_hold(), "{:?}", checks.failures);
        assert_eq!(checks.deviation_certificates, 4);
    }
}
