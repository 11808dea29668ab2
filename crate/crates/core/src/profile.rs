//! Strategy profiles and the cost and potential functions evaluated on them.

use std::collections::BTreeMap;

use crate::arith::{harmonic, int, EpsCost};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::path::Path;

/// One simple path per player; index `i` is player `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrategyProfile {
    pub paths: Vec<Path>,
}

impl StrategyProfile {
    pub fn new(paths: Vec<Path>) -> Self {
        StrategyProfile { paths }
    }

    /// Checks that path `i` connects `s_i` to `t_i` in `game`.
    pub fn check(&self, game: &Game) -> Result<()> {
        if self.paths.len() != game.k() {
            return Err(Error::InvalidProfile(format!(
                "profile has {} paths for {} players",
                self.paths.len(),
                game.k()
            )));
        }
        for (i, (path, player)) in self.paths.iter().zip(&game.players).enumerate() {
            let rebuilt = Path::from_edges(game, player.source, path.edges().to_vec())?;
            if rebuilt.target() != player.target || &rebuilt != path {
                return Err(Error::InvalidProfile(format!(
                    "path of player {i} does not connect {} to {}",
                    player.source, player.target
                )));
            }
        }
        Ok(())
    }

    /// Replaces player `i`'s path.
    pub fn with_path(&self, i: usize, path: Path) -> StrategyProfile {
        let mut paths = self.paths.clone();
        paths[i] = path;
        StrategyProfile { paths }
    }

    /// Edge ids used by at least one player, ascending.
    pub fn used_edges(&self) -> Vec<usize> {
        let mut edges: Vec<usize> = self.paths.iter().flat_map(|p| p.edges().iter().copied()).collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    pub fn edge_ids(&self) -> Vec<Vec<usize>> {
        self.paths.iter().map(|p| p.edges().to_vec()).collect()
    }
}

/// Number of players `k_e` on every edge with `k_e ≥ 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadMap(pub BTreeMap<usize, usize>);

impl LoadMap {
    pub fn get(&self, edge: usize) -> usize {
        self.0.get(&edge).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().map(|(&e, &l)| (e, l))
    }
}

pub fn edge_loads(profile: &StrategyProfile) -> LoadMap {
    let mut loads = BTreeMap::new();
    for path in &profile.paths {
        for &e in path.edges() {
            *loads.entry(e).or_insert(0) += 1;
        }
    }
    LoadMap(loads)
}

/// `cost_i(P) = Σ_{e ∈ P_i} c_e / k_e`.
pub fn player_cost(game: &Game, profile: &StrategyProfile, i: usize) -> EpsCost {
    let loads = edge_loads(profile);
    share_sum(game, &loads, &profile.paths[i])
}

fn share_sum(game: &Game, loads: &LoadMap, path: &Path) -> EpsCost {
    path.edges().iter().map(|&e| &game.edges[e].cost / &int(loads.get(e) as i64)).sum()
}

/// Total cost of the used edges, each counted once. Cross-checked against
/// the sum of the players' shares.
pub fn social_cost(game: &Game, profile: &StrategyProfile) -> EpsCost {
    let loads = edge_loads(profile);
    let by_edges: EpsCost = loads.iter().map(|(e, _)| &game.edges[e].cost).sum();
    let by_players: EpsCost = profile.paths.iter().map(|p| share_sum(game, &loads, p)).sum();
    assert_eq!(by_edges, by_players, "social cost must equal the sum of Shapley shares");
    by_edges
}

/// Rosenthal's potential `Φ(P) = Σ_e H_{k_e} · c_e`.
pub fn potential(game: &Game, profile: &StrategyProfile) -> EpsCost {
    edge_loads(profile).iter().map(|(e, load)| game.edges[e].cost.scale(&harmonic(load))).sum()
}

/// Total edge cost by multiplicity: entry `j` (1-based) is the cost of the
/// edges used by exactly `j` players.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsageHistogram {
    totals: Vec<EpsCost>,
}

impl UsageHistogram {
    /// `|P^j|`; zero outside `1..=k`.
    pub fn entry(&self, j: usize) -> EpsCost {
        if j == 0 {
            return EpsCost::zero();
        }
        self.totals.get(j - 1).cloned().unwrap_or_default()
    }

    pub fn k(&self) -> usize {
        self.totals.len()
    }

    /// `Σ_{j<k} |P^j|`: cost of the edges not shared by every player.
    pub fn below_k(&self) -> EpsCost {
        let k = self.k();
        self.totals.iter().take(k.saturating_sub(1)).sum()
    }

    pub fn total(&self) -> EpsCost {
        self.totals.iter().sum()
    }

    pub fn entries(&self) -> &[EpsCost] {
        &self.totals
    }
}

pub fn usage_histogram(game: &Game, profile: &StrategyProfile) -> UsageHistogram {
    let mut totals = vec![EpsCost::zero(); game.k()];
    for (e, load) in edge_loads(profile).iter() {
        totals[load - 1] += &game.edges[e].cost;
    }
    UsageHistogram { totals }
}
