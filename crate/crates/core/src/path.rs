//! Simple paths, their enumeration, and minimum-weight path search.

use std::ops::Add;

use crate::error::{Error, Result};
use crate::game::Game;

/// Default per-player cap on enumerated simple paths.
pub const DEFAULT_PATH_CAP: usize = 10_000;

/// A simple path given as a sequence of edge ids together with the vertex
/// sequence it traces. The empty path sits on a single vertex.
///
/// Paths order lexicographically by edge-id sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    edges: Vec<usize>,
    vertices: Vec<usize>,
}

impl Path {
    pub fn empty(vertex: usize) -> Self {
        Path { edges: Vec::new(), vertices: vec![vertex] }
    }

    /// Builds a path from `start` along `edges`, checking that consecutive
    /// edges connect, that arcs are respected, and that no vertex repeats.
    pub fn from_edges(game: &Game, start: usize, edges: Vec<usize>) -> Result<Self> {
        let mut vertices = Vec::with_capacity(edges.len() + 1);
        vertices.push(start);
        let mut at = start;
        for &id in &edges {
            let edge = game.edges.get(id).ok_or_else(|| Error::InvalidProfile(format!("edge {id} does not exist")))?;
            at = edge
                .traverse(at, game.directed)
                .ok_or_else(|| Error::InvalidProfile(format!("edge {id} cannot be traversed from vertex {at}")))?;
            if vertices.contains(&at) {
                return Err(Error::InvalidProfile(format!("walk {edges:?} from {start} revisits vertex {at}")));
            }
            vertices.push(at);
        }
        Ok(Path { edges, vertices })
    }

    pub(crate) fn from_parts(edges: Vec<usize>, vertices: Vec<usize>) -> Self {
        debug_assert_eq!(edges.len() + 1, vertices.len());
        Path { edges, vertices }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn source(&self) -> usize {
        self.vertices[0]
    }

    pub fn target(&self) -> usize {
        *self.vertices.last().expect("path has at least one vertex")
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.edges.contains(&edge)
    }

    /// The same path traversed from the other end (undirected use only).
    pub fn reversed(&self) -> Path {
        let mut edges = self.edges.clone();
        edges.reverse();
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Path { edges, vertices }
    }
}

/// All simple `source`–`target` paths in lexicographic order of edge-id
/// sequences. Fails once more than `cap` paths exist.
pub fn simple_paths(game: &Game, source: usize, target: usize, cap: usize) -> Result<Vec<Path>> {
    if source == target {
        return Ok(vec![Path::empty(source)]);
    }
    let adj = game.adjacency();
    let mut on_path = vec![false; game.vertex_count];
    let mut edges = Vec::new();
    let mut vertices = vec![source];
    let mut out = Vec::new();
    on_path[source] = true;
    dfs(&adj, target, cap, &mut on_path, &mut edges, &mut vertices, &mut out)?;
    Ok(out)
}

fn dfs(
    adj: &[Vec<(usize, usize)>],
    target: usize,
    cap: usize,
    on_path: &mut [bool],
    edges: &mut Vec<usize>,
    vertices: &mut Vec<usize>,
    out: &mut Vec<Path>,
) -> Result<()> {
    let at = *vertices.last().unwrap();
    for &(id, next) in &adj[at] {
        if on_path[next] {
            continue;
        }
        edges.push(id);
        vertices.push(next);
        if next == target {
            if out.len() == cap {
                return Err(Error::Explosion {
                    what: "simple paths per player".into(),
                    limit: cap as u128,
                    count: cap as u128 + 1,
                });
            }
            out.push(Path { edges: edges.clone(), vertices: vertices.clone() });
        } else {
            on_path[next] = true;
            dfs(adj, target, cap, on_path, edges, vertices, out)?;
            on_path[next] = false;
        }
        edges.pop();
        vertices.pop();
    }
    Ok(())
}

/// Every simple path of player `player`, canonical order, capped.
pub fn enumerate_simple_paths(game: &Game, player: usize, cap: usize) -> Result<Vec<Path>> {
    let p = game.players[player];
    simple_paths(game, p.source, p.target, cap)
}

/// Minimum-weight `source`–`target` path under strictly positive edge
/// weights (`W::default()` is the zero weight). Among equal-weight optima
/// the lexicographically least edge-id sequence is returned. `None` if the
/// target is unreachable.
pub fn min_weight_path<W, F>(game: &Game, source: usize, target: usize, weight: F) -> Option<(W, Path)>
where
    W: Clone + Ord + Default + for<'a> Add<&'a W, Output = W>,
    F: Fn(usize) -> W,
{
    let n = game.vertex_count;
    let weights: Vec<W> = (0..game.edges.len()).map(weight).collect();
    // distances to the target over reversed arcs
    let mut incoming: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, e) in game.edges.iter().enumerate() {
        if e.u == e.v {
            continue;
        }
        incoming[e.v].push((id, e.u));
        if !game.directed {
            incoming[e.u].push((id, e.v));
        }
    }
    let mut dist: Vec<Option<W>> = vec![None; n];
    let mut done = vec![false; n];
    dist[target] = Some(W::default());
    loop {
        // O(V^2) selection; graphs here are small
        let mut pick: Option<usize> = None;
        for x in 0..n {
            if done[x] || dist[x].is_none() {
                continue;
            }
            if pick.is_none_or(|p| dist[x] < dist[p]) {
                pick = Some(x);
            }
        }
        let Some(x) = pick else { break };
        done[x] = true;
        if x == source {
            break;
        }
        let dx = dist[x].clone().expect("picked vertices have a distance");
        for &(id, y) in &incoming[x] {
            if done[y] {
                continue;
            }
            let through = dx.clone() + &weights[id];
            if dist[y].as_ref().is_none_or(|d| &through < d) {
                dist[y] = Some(through);
            }
        }
    }
    let total = dist[source].clone()?;
    // greedy walk along tight edges, least edge id first; distances strictly
    // decrease along tight edges, so the walk is simple
    let adj = game.adjacency();
    let mut at = source;
    let mut edges = Vec::new();
    let mut vertices = vec![source];
    while at != target {
        let here = dist[at].as_ref();
        let &(id, next) = adj[at]
            .iter()
            .find(|&&(id, next)| dist[next].as_ref().is_some_and(|rest| Some(&(rest.clone() + &weights[id])) == here))
            .expect("a tight edge leaves every vertex with finite distance");
        edges.push(id);
        vertices.push(next);
        at = next;
    }
    Some((total, Path { edges, vertices }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::EpsCost;

    fn unit() -> EpsCost {
        EpsCost::from_ints(1, 0)
    }

    fn triangle() -> Game {
        let mut g = Game::new(3, false);
        g.add_edge(0, 1, unit());
        g.add_edge(0, 2, unit());
        g.add_edge(2, 1, unit());
        g.add_player(0, 1);
        g
    }

    pub(crate) fn complete(n: usize) -> Game {
        let mut g = Game::new(n, false);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v, unit());
            }
        }
        g
    }

    #[test]
    fn triangle_has_two_paths() {
        let paths = enumerate_simple_paths(&triangle(), 0, 10).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].edges(), &[0]);
        assert_eq!(paths[1].edges(), &[1, 2]);
        assert_eq!(paths[1].vertices(), &[0, 2, 1]);
    }

    #[test]
    fn same_terminal_gives_empty_path() {
        let mut g = triangle();
        g.add_player(2, 2);
        let paths = enumerate_simple_paths(&g, 1, 10).unwrap();
        assert_eq!(paths, vec![Path::empty(2)]);
    }

    #[test]
    fn k4_has_five_paths() {
        let mut g = complete(4);
        g.add_player(0, 1);
        g.add_player(2, 3);
        assert_eq!(enumerate_simple_paths(&g, 0, 100).unwrap().len(), 5);
        assert_eq!(enumerate_simple_paths(&g, 1, 100).unwrap().len(), 5);
    }

    #[test]
    fn cap_is_a_hard_error() {
        let mut g = complete(4);
        g.add_player(0, 1);
        match enumerate_simple_paths(&g, 0, 4) {
            Err(Error::Explosion { limit, count, .. }) => {
                assert_eq!(limit, 4);
                assert_eq!(count, 5);
            }
            other => panic!("expected explosion, got {other:?}"),
        }
        assert_eq!(enumerate_simple_paths(&g, 0, 5).unwrap().len(), 5);
    }

    #[test]
    fn parallel_edges_are_distinct_paths() {
        let mut g = Game::new(2, false);
        g.add_edge(0, 1, unit());
        g.add_edge(1, 0, unit());
        g.add_edge(0, 0, unit());
        g.add_player(0, 1);
        let paths = enumerate_simple_paths(&g, 0, 10).unwrap();
        assert_eq!(paths.len(), 2);
    }

    #[test]
    fn from_edges_rejects_bad_walks() {
        let g = triangle();
        assert!(Path::from_edges(&g, 0, vec![1, 2]).is_ok());
        assert!(Path::from_edges(&g, 0, vec![2]).is_err());
        assert!(Path::from_edges(&g, 0, vec![0, 2, 1]).is_err());
        assert!(Path::from_edges(&g, 0, vec![7]).is_err());
    }

    #[test]
    fn min_weight_prefers_least_edge_ids_on_ties() {
        let mut g = triangle();
        g.edges[0].cost = EpsCost::from_ints(2, 0);
        let (w, p) = min_weight_path(&g, 0, 1, |e| g.edges[e].cost.clone()).unwrap();
        assert_eq!(w, EpsCost::from_ints(2, 0));
        assert_eq!(p.edges(), &[0]);
        g.edges[0].cost = EpsCost::from_ints(2, 1);
        let (w, p) = min_weight_path(&g, 0, 1, |e| g.edges[e].cost.clone()).unwrap();
        assert_eq!(w, EpsCost::from_ints(2, 0));
        assert_eq!(p.edges(), &[1, 2]);
    }

    #[test]
    fn min_weight_respects_direction() {
        let mut g = Game::new(3, true);
        g.add_edge(0, 1, EpsCost::from_ints(10, 0));
        g.add_edge(2, 0, unit());
        g.add_edge(2, 1, unit());
        let (w, p) = min_weight_path(&g, 0, 1, |e| g.edges[e].cost.clone()).unwrap();
        assert_eq!(w, EpsCost::from_ints(10, 0));
        assert_eq!(p.edges(), &[0]);
        assert!(min_weight_path(&g, 1, 0, |e| g.edges[e].cost.clone()).is_none());
    }
}
