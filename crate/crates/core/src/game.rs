//! Game representation and validation.

use std::collections::VecDeque;
use std::fmt;

use crate::arith::EpsCost;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub cost: EpsCost,
}

impl Edge {
    pub fn new(u: usize, v: usize, cost: EpsCost) -> Self {
        Edge { u, v, cost }
    }

    /// The endpoint opposite `from`, if this edge can be traversed from it.
    pub fn traverse(&self, from: usize, directed: bool) -> Option<usize> {
        if self.u == from {
            Some(self.v)
        } else if !directed && self.v == from {
            Some(self.u)
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Player {
    pub source: usize,
    pub target: usize,
}

impl Player {
    pub fn new(source: usize, target: usize) -> Self {
        Player { source, target }
    }
}

/// A Shapley network design game. Edge ids are indices into `edges`;
/// parallel edges are distinct strategies.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Game {
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
    pub directed: bool,
    pub players: Vec<Player>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    NoPlayers,
    EdgeEndpoint { edge: usize, vertex: usize },
    NonPositiveCost { edge: usize, cost: EpsCost },
    TerminalOutOfRange { player: usize, vertex: usize },
    Disconnected { player: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "game has no vertices"),
            Violation::NoPlayers => write!(f, "game has no players"),
            Violation::EdgeEndpoint { edge, vertex } => {
                write!(f, "edge {edge} has endpoint {vertex} out of range")
            }
            Violation::NonPositiveCost { edge, cost } => {
                write!(f, "edge {edge} has non-positive cost {cost}")
            }
            Violation::TerminalOutOfRange { player, vertex } => {
                write!(f, "player {player} has terminal {vertex} out of range")
            }
            Violation::Disconnected { player } => write!(f, "player {player} has no path"),
        }
    }
}

impl Game {
    pub fn new(vertex_count: usize, directed: bool) -> Self {
        Game { vertex_count, edges: Vec::new(), directed, players: Vec::new() }
    }

    /// Adds an edge and returns its id.
    pub fn add_edge(&mut self, u: usize, v: usize, cost: EpsCost) -> usize {
        self.edges.push(Edge::new(u, v, cost));
        self.edges.len() - 1
    }

    pub fn add_player(&mut self, source: usize, target: usize) -> usize {
        self.players.push(Player::new(source, target));
        self.players.len() - 1
    }

    pub fn k(&self) -> usize {
        self.players.len()
    }

    /// Outgoing `(edge id, neighbour)` pairs per vertex, sorted by edge id.
    /// Self-loops are dropped since no simple path can use them.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (id, e) in self.edges.iter().enumerate() {
            if e.u == e.v || e.u >= self.vertex_count || e.v >= self.vertex_count {
                continue;
            }
            adj[e.u].push((id, e.v));
            if !self.directed {
                adj[e.v].push((id, e.u));
            }
        }
        adj
    }

    /// Whether `target` is reachable from `source`.
    pub fn reachable(&self, source: usize, target: usize) -> bool {
        if source == target {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([source]);
        seen[source] = true;
        while let Some(x) = queue.pop_front() {
            for &(_, y) in &adj[x] {
                if !seen[y] {
                    if y == target {
                        return true;
                    }
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        false
    }
}

/// Returns every violated game invariant; empty iff the game is valid and
/// every player can connect its terminals.
pub fn validate_game(game: &Game) -> Vec<Violation> {
    let mut out = Vec::new();
    if game.vertex_count == 0 {
        out.push(Violation::NoVertices);
    }
    if game.players.is_empty() {
        out.push(Violation::NoPlayers);
    }
    for (id, e) in game.edges.iter().enumerate() {
        for vertex in [e.u, e.v] {
            if vertex >= game.vertex_count {
                out.push(Violation::EdgeEndpoint { edge: id, vertex });
            }
        }
        if !e.cost.is_positive() {
            out.push(Violation::NonPositiveCost { edge: id, cost: e.cost.clone() });
        }
    }
    let mut terminals_ok = true;
    for (i, p) in game.players.iter().enumerate() {
        for vertex in [p.source, p.target] {
            if vertex >= game.vertex_count {
                out.push(Violation::TerminalOutOfRange { player: i, vertex });
                terminals_ok = false;
            }
        }
    }
    if terminals_ok {
        for (i, p) in game.players.iter().enumerate() {
            if !game.reachable(p.source, p.target) {
                out.push(Violation::Disconnected { player: i });
            }
        }
    }
    out
}

/// Fails with [`crate::Error::InvalidGame`] unless the game is valid.
pub fn ensure_valid(game: &Game) -> crate::Result<()> {
    let violations = validate_game(game);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(crate::Error::InvalidGame(violations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_path_player_is_valid() {
        let mut g = Game::new(1, false);
        g.add_player(0, 0);
        assert!(validate_game(&g).is_empty());
    }

    #[test]
    fn zero_cost_rejected() {
        let mut g = Game::new(2, false);
        g.add_edge(0, 1, EpsCost::from_ints(0, 0));
        g.add_player(0, 1);
        let v = validate_game(&g);
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().contains("non-positive cost"));
    }

    #[test]
    fn pure_epsilon_cost_accepted() {
        let mut g = Game::new(2, false);
        g.add_edge(0, 1, EpsCost::from_ints(0, 1));
        g.add_player(0, 1);
        assert!(validate_game(&g).is_empty());
    }

    #[test]
    fn disconnected_player() {
        let mut g = Game::new(2, false);
        g.add_player(0, 1);
        let v = validate_game(&g);
        assert_eq!(v, vec![Violation::Disconnected { player: 0 }]);
        assert_eq!(v[0].to_string(), "player 0 has no path");
    }

    #[test]
    fn directed_reachability_respects_arcs() {
        let mut g = Game::new(2, true);
        g.add_edge(1, 0, EpsCost::from_ints(1, 0));
        g.add_player(0, 1);
        assert_eq!(validate_game(&g), vec![Violation::Disconnected { player: 0 }]);
        g.players[0] = Player::new(1, 0);
        assert!(validate_game(&g).is_empty());
    }

    #[test]
    fn out_of_range_and_no_players() {
        let mut g = Game::new(2, false);
        g.add_edge(0, 5, EpsCost::from_ints(1, 0));
        let v = validate_game(&g);
        assert!(v.contains(&Violation::EdgeEndpoint { edge: 0, vertex: 5 }));
        assert!(v.contains(&Violation::NoPlayers));
        g.add_player(0, 9);
        assert!(validate_game(&g).contains(&Violation::TerminalOutOfRange { player: 0, vertex: 9 }));
    }
}
