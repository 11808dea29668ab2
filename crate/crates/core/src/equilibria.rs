//! Nash equilibria, social optima, potential minima, and best-response
//! dynamics.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{int, EpsCost};
use crate::error::{Error, Result};
use crate::game::{ensure_valid, Game};
use crate::kernel::{scan_summary, Kernel, Limits};
use crate::path::{min_weight_path, Path};
use crate::profile::{edge_loads, player_cost, potential, StrategyProfile};

/// A cost-minimal unilateral deviation of one player.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestResponse {
    pub player: usize,
    pub path: Path,
    pub cost: EpsCost,
}

/// Minimum-cost path for player `i` against the other players' fixed paths.
/// Each edge weighs `c_e / (ℓ_{-i}(e) + 1)` where `ℓ_{-i}` excludes player
/// `i`; ties go to the lexicographically least path.
pub fn best_response(game: &Game, profile: &StrategyProfile, i: usize) -> Result<BestResponse> {
    let player = game.players[i];
    let mut loads = edge_loads(profile);
    for &e in profile.paths[i].edges() {
        if let Some(l) = loads.0.get_mut(&e) {
            *l -= 1;
        }
    }
    let (cost, path) =
        min_weight_path(game, player.source, player.target, |e| &game.edges[e].cost / &int(loads.get(e) as i64 + 1))
            .ok_or(Error::NoPath { player: i, source_vertex: player.source, target: player.target })?;
    Ok(BestResponse { player: i, path, cost })
}

/// Whether no player can strictly lower its cost by switching paths.
pub fn is_nash(game: &Game, profile: &StrategyProfile) -> bool {
    (0..game.k()).all(|i| {
        let br = best_response(game, profile, i).expect("valid profiles have connected players");
        player_cost(game, profile, i) <= br.cost
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EquilibriumKind {
    Nash,
    PotentialMinimum,
    SocialOptimum,
}

impl fmt::Display for EquilibriumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquilibriumKind::Nash => "nash",
            EquilibriumKind::PotentialMinimum => "potential-minimum",
            EquilibriumKind::SocialOptimum => "social-optimum",
        })
    }
}

/// Profiles in canonical order with their social costs and potentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquilibriumSet {
    pub kind: EquilibriumKind,
    pub profiles: Vec<StrategyProfile>,
    pub costs: Vec<EpsCost>,
    pub potentials: Vec<EpsCost>,
}

impl EquilibriumSet {
    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    /// Position of the first profile of least social cost.
    pub fn cheapest(&self) -> Option<usize> {
        (0..self.len()).min_by(|&a, &b| self.costs[a].cmp(&self.costs[b]))
    }

    /// Position of the first profile of greatest social cost.
    pub fn costliest(&self) -> Option<usize> {
        (0..self.len()).rev().max_by(|&a, &b| self.costs[a].cmp(&self.costs[b]))
    }

    pub fn contains(&self, profile: &StrategyProfile) -> bool {
        self.profiles.contains(profile)
    }
}

/// Streams the Cartesian product of per-player simple paths in canonical
/// order (player 0 varies slowest).
pub struct Profiles {
    kernel: Kernel,
    next: u128,
}

impl Profiles {
    pub fn total(&self) -> u128 {
        self.kernel.total()
    }
}

impl Iterator for Profiles {
    type Item = StrategyProfile;

    fn next(&mut self) -> Option<StrategyProfile> {
        if self.next >= self.kernel.total() {
            return None;
        }
        let p = self.kernel.profile(self.next);
        self.next += 1;
        Some(p)
    }
}

pub fn enumerate_profiles(game: &Game, limits: &Limits) -> Result<Profiles> {
    Ok(Profiles { kernel: Kernel::new(game, limits)?, next: 0 })
}

/// Result of one exhaustive pass: every Nash equilibrium, every social
/// optimum and every potential minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub profile_count: u128,
    pub nash: EquilibriumSet,
    pub optima: EquilibriumSet,
    pub potential_minima: EquilibriumSet,
}

impl Analysis {
    pub fn optimum_cost(&self) -> &EpsCost {
        &self.optima.costs[0]
    }

    pub fn min_potential(&self) -> &EpsCost {
        &self.potential_minima.potentials[0]
    }
}

/// Exhaustively enumerates all profiles once and collects the three sets.
/// Fails with [`Error::Invariant`] if a potential minimum is not an
/// equilibrium or (undirected) an optimum's edge set contains a cycle.
pub fn analyze(game: &Game, limits: &Limits) -> Result<Analysis> {
    let kernel = Kernel::new(game, limits)?;
    let summary = scan_summary(&kernel, limits.parallel);
    let set = |kind, entries: Vec<u128>| {
        let mut set = EquilibriumSet { kind, profiles: Vec::new(), costs: Vec::new(), potentials: Vec::new() };
        for i in entries {
            let cur = kernel.cursor(i);
            set.costs.push(kernel.to_eps(cur.social_cost()));
            set.potentials.push(kernel.to_eps(cur.potential()));
            set.profiles.push(kernel.profile(i));
        }
        set
    };
    let (_, opt_idx) = summary.opt.clone().expect("at least one profile");
    let (_, pot_idx) = summary.potmin.clone().expect("at least one profile");
    for &i in &pot_idx {
        if summary.nash.binary_search_by(|n| n.0.cmp(&i)).is_err() {
            return Err(Error::Invariant(format!(
                "potential minimum {:?} is not a Nash equilibrium",
                kernel.profile(i).edge_ids()
            )));
        }
    }
    let optima = set(EquilibriumKind::SocialOptimum, opt_idx);
    if !game.directed {
        for p in &optima.profiles {
            if !is_forest(game, &p.used_edges()) {
                return Err(Error::Invariant(format!("social optimum {:?} contains a cycle", p.edge_ids())));
            }
        }
    }
    Ok(Analysis {
        profile_count: kernel.total(),
        nash: set(EquilibriumKind::Nash, summary.nash.iter().map(|n| n.0).collect()),
        optima,
        potential_minima: set(EquilibriumKind::PotentialMinimum, pot_idx),
    })
}

pub fn all_nash(game: &Game, limits: &Limits) -> Result<EquilibriumSet> {
    analyze(game, limits).map(|a| a.nash)
}

pub fn social_optimum(game: &Game, limits: &Limits) -> Result<EquilibriumSet> {
    analyze(game, limits).map(|a| a.optima)
}

pub fn potential_minima(game: &Game, limits: &Limits) -> Result<EquilibriumSet> {
    analyze(game, limits).map(|a| a.potential_minima)
}

/// Whether the undirected edge set is acyclic.
pub fn is_forest(game: &Game, edges: &[usize]) -> bool {
    let mut parent: Vec<usize> = (0..game.vertex_count).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for &id in edges {
        let e = &game.edges[id];
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Which improving player moves next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// Cyclic scan starting after the last mover (player 0 first).
    RoundRobin,
    /// Uniform choice among improving players from a seeded generator.
    Random(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicsStep {
    pub player: usize,
    pub old_path: Path,
    pub new_path: Path,
    /// New cost minus old cost of the mover; always negative.
    pub delta_cost: EpsCost,
    pub potential_after: EpsCost,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicsTrace {
    pub start_potential: EpsCost,
    pub steps: Vec<DynamicsStep>,
    pub terminal: StrategyProfile,
}

/// Applies strictly improving best responses until no player can improve.
/// The potential drops at every step, so this terminates on any valid game;
/// exceeding `max_steps` is reported as [`Error::Budget`].
pub fn best_response_dynamics(
    game: &Game,
    start: &StrategyProfile,
    schedule: Schedule,
    max_steps: usize,
) -> Result<DynamicsTrace> {
    ensure_valid(game)?;
    start.check(game)?;
    let k = game.k();
    let mut rng = match schedule {
        Schedule::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Schedule::RoundRobin => None,
    };
    let mut profile = start.clone();
    let start_potential = potential(game, &profile);
    let mut steps: Vec<DynamicsStep> = Vec::new();
    let mut next = 0usize;
    loop {
        let mut improving = Vec::new();
        for offset in 0..k {
            let i = (next + offset) % k;
            let current = player_cost(game, &profile, i);
            let br = best_response(game, &profile, i)?;
            if br.cost < current {
                improving.push((i, br, current));
                if rng.is_none() {
                    break;
                }
            }
        }
        if improving.is_empty() {
            return Ok(DynamicsTrace { start_potential, steps, terminal: profile });
        }
        if steps.len() == max_steps {
            let trace: Vec<String> = steps.iter().map(|s| s.potential_after.to_string()).collect();
            return Err(Error::Budget { steps: max_steps, detail: format!("potential trace [{}]", trace.join(", ")) });
        }
        let pick = match rng.as_mut() {
            Some(r) => r.random_range(0..improving.len()),
            None => 0,
        };
        let (i, br, current) = improving.swap_remove(pick);
        let old_path = profile.paths[i].clone();
        profile = profile.with_path(i, br.path.clone());
        steps.push(DynamicsStep {
            player: i,
            old_path,
            new_path: br.path,
            delta_cost: br.cost - current,
            potential_after: potential(game, &profile),
        });
        next = (i + 1) % k;
    }
}

/// Each player's first canonical path.
pub fn canonical_start(game: &Game, limits: &Limits) -> Result<StrategyProfile> {
    let kernel = Kernel::new(game, limits)?;
    Ok(kernel.profile(0))
}

/// Each player's path drawn uniformly from the player's simple paths.
pub fn random_start(game: &Game, limits: &Limits, seed: u64) -> Result<StrategyProfile> {
    let kernel = Kernel::new(game, limits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let paths = (0..game.k())
        .map(|i| {
            let options = kernel.paths(i);
            options[rng.random_range(0..options.len())].clone()
        })
        .collect();
    Ok(StrategyProfile::new(paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn parallel_pair(a: i64, b: i64) -> Game {
        let mut g = Game::new(2, false);
        g.add_edge(0, 1, EpsCost::from_ints(a, 0));
        g.add_edge(0, 1, EpsCost::from_ints(b, 0));
        g.add_player(0, 1);
        g.add_player(0, 1);
        g
    }

    fn on(g: &Game, edges: &[usize]) -> StrategyProfile {
        StrategyProfile::new(
            edges
                .iter()
                .enumerate()
                .map(|(i, &e)| Path::from_edges(g, g.players[i].source, vec![e]).unwrap())
                .collect(),
        )
    }

    #[test]
    fn best_response_stays_on_shared_edge() {
        let g = parallel_pair(10, 12);
        let prof = on(&g, &[0, 0]);
        let br = best_response(&g, &prof, 1).unwrap();
        assert_eq!(br.path.edges(), &[0]);
        assert_eq!(br.cost, EpsCost::from_ints(5, 0));
        assert!(is_nash(&g, &prof));
    }

    #[test]
    fn dominated_lonely_edge_is_not_nash() {
        let g = parallel_pair(1, 3);
        let prof = on(&g, &[0, 1]);
        assert!(!is_nash(&g, &prof));
        let br = best_response(&g, &prof, 1).unwrap();
        assert_eq!(br.cost, EpsCost::constant(ratio(1, 2)));
    }

    #[test]
    fn equal_parallel_edges_have_two_pooled_equilibria() {
        let g = parallel_pair(1, 1);
        let nash = all_nash(&g, &Limits::default()).unwrap();
        assert_eq!(nash.profiles, vec![on(&g, &[0, 0]), on(&g, &[1, 1])]);
    }

    #[test]
    fn potential_minimum_pools_on_cheap_edge() {
        let g = parallel_pair(1, 3);
        let pm = potential_minima(&g, &Limits::default()).unwrap();
        assert_eq!(pm.profiles, vec![on(&g, &[0, 0])]);
        assert_eq!(pm.potentials[0], EpsCost::constant(ratio(3, 2)));
        // exhaustive table: Φ(0,0)=3/2, Φ(0,1)=Φ(1,0)=4, Φ(1,1)=9/2
        let table: Vec<EpsCost> =
            enumerate_profiles(&g, &Limits::default()).unwrap().map(|p| potential(&g, &p)).collect();
        assert_eq!(
            table,
            vec![
                EpsCost::constant(ratio(3, 2)),
                EpsCost::from_ints(4, 0),
                EpsCost::from_ints(4, 0),
                EpsCost::constant(ratio(9, 2)),
            ]
        );
    }

    #[test]
    fn dynamics_from_expensive_edge() {
        let g = parallel_pair(1, 3);
        let trace = best_response_dynamics(&g, &on(&g, &[1, 1]), Schedule::RoundRobin, 10).unwrap();
        assert!(trace.steps.len() <= 2);
        assert_eq!(trace.terminal, on(&g, &[0, 0]));
        let mut last = trace.start_potential.clone();
        for s in &trace.steps {
            assert!(s.delta_cost < EpsCost::zero());
            assert!(s.potential_after < last);
            last = s.potential_after.clone();
        }
    }

    #[test]
    fn dynamics_at_equilibrium_is_empty() {
        let g = parallel_pair(1, 3);
        let trace = best_response_dynamics(&g, &on(&g, &[0, 0]), Schedule::Random(7), 10).unwrap();
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn dynamics_budget() {
        let g = parallel_pair(1, 3);
        let err = best_response_dynamics(&g, &on(&g, &[1, 1]), Schedule::RoundRobin, 0).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn k4_profile_count() {
        let mut g = Game::new(4, false);
        for u in 0..4 {
            for v in u + 1..4 {
                g.add_edge(u, v, EpsCost::from_ints(1, 0));
            }
        }
        g.add_player(0, 1);
        g.add_player(0, 1);
        assert_eq!(enumerate_profiles(&g, &Limits::default()).unwrap().count(), 25);
    }

    #[test]
    fn forest_check() {
        let g = parallel_pair(1, 1);
        assert!(is_forest(&g, &[0]));
        assert!(!is_forest(&g, &[0, 1]));
    }
}
