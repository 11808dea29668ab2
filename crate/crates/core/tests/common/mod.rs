//! Brute-force oracles written without the library's kernel, path
//! enumeration or cost code. Costs are `(constant, ε-coefficient)` pairs,
//! which compare lexicographically as tuples.

#![allow(dead_code)]

use std::collections::BTreeMap;

use ndgame::{EpsCost, Game, Rational};
use num_traits::Zero;

pub type Pair = (Rational, Rational);

pub fn pair(c: &EpsCost) -> Pair {
    (c.a.clone(), c.b.clone())
}

fn zero() -> Pair {
    (Rational::zero(), Rational::zero())
}

fn add(x: &Pair, y: &Pair) -> Pair {
    (&x.0 + &y.0, &x.1 + &y.1)
}

fn div(x: &Pair, n: usize) -> Pair {
    let n = Rational::from_integer((n as i64).into());
    (&x.0 / &n, &x.1 / &n)
}

/// Every simple path from `s` to `t` as an edge list, by depth-first search.
pub fn dfs_paths(game: &Game, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn go(game: &Game, at: usize, t: usize, seen: &mut Vec<bool>, edges: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if at == t {
            out.push(edges.clone());
            return;
        }
        for (id, e) in game.edges.iter().enumerate() {
            let next = if e.u == at {
                Some(e.v)
            } else if !game.directed && e.v == at {
                Some(e.u)
            } else {
                None
            };
            if let Some(y) = next {
                if !seen[y] {
                    seen[y] = true;
                    edges.push(id);
                    go(game, y, t, seen, edges, out);
                    edges.pop();
                    seen[y] = false;
                }
            }
        }
    }
    let mut seen = vec![false; game.vertex_count];
    seen[s] = true;
    let mut out = Vec::new();
    go(game, s, t, &mut seen, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn loads(profile: &[Vec<usize>]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for p in profile {
        for &e in p {
            *m.entry(e).or_insert(0) += 1;
        }
    }
    m
}

pub fn player_cost(game: &Game, profile: &[Vec<usize>], i: usize) -> Pair {
    let l = loads(profile);
    profile[i].iter().fold(zero(), |acc, &e| add(&acc, &div(&pair(&game.edges[e].cost), l[&e])))
}

pub fn social_cost(game: &Game, profile: &[Vec<usize>]) -> Pair {
    loads(profile).keys().fold(zero(), |acc, &e| add(&acc, &pair(&game.edges[e].cost)))
}

/// Rosenthal's potential: each used edge contributes `c/1 + c/2 + … + c/n`.
pub fn potential(game: &Game, profile: &[Vec<usize>]) -> Pair {
    let mut total = zero();
    for (e, n) in loads(profile) {
        let c = pair(&game.edges[e].cost);
        for j in 1..=n {
            total = add(&total, &div(&c, j));
        }
    }
    total
}

/// Cheapest unilateral deviation of player `i` over every simple path.
pub fn best_deviation(game: &Game, profile: &[Vec<usize>], i: usize) -> Pair {
    let p = &game.players[i];
    dfs_paths(game, p.source, p.target)
        .into_iter()
        .map(|path| {
            let mut q = profile.to_vec();
            q[i] = path;
            player_cost(game, &q, i)
        })
        .min()
        .expect("a path exists")
}

pub fn is_nash(game: &Game, profile: &[Vec<usize>]) -> bool {
    (0..game.players.len()).all(|i| best_deviation(game, profile, i) >= player_cost(game, profile, i))
}

/// Every strategy profile, as edge lists per player, in odometer order.
pub fn all_profiles(game: &Game) -> Vec<Vec<Vec<usize>>> {
    let options: Vec<Vec<Vec<usize>>> = game.players.iter().map(|p| dfs_paths(game, p.source, p.target)).collect();
    let mut out = vec![Vec::new()];
    for opts in &options {
        let mut next = Vec::new();
        for prefix in &out {
            for o in opts {
                let mut p: Vec<Vec<usize>> = prefix.clone();
                p.push(o.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Nash equilibria, optimum cost and minimum potential by brute force.
pub struct Brute {
    pub nash: Vec<Vec<Vec<usize>>>,
    pub optimum: Pair,
    pub min_potential: Pair,
    pub profiles: usize,
}

pub fn brute(game: &Game) -> Brute {
    let all = all_profiles(game);
    let nash = all.iter().filter(|p| is_nash(game, p)).cloned().collect();
    let optimum = all.iter().map(|p| social_cost(game, p)).min().unwrap();
    let min_potential = all.iter().map(|p| potential(game, p)).min().unwrap();
    Brute { nash, optimum, min_potential, profiles: all.len() }
}

/// `1 + 1/2 + … + 1/k` by direct summation.
pub fn harmonic(k: usize) -> Rational {
    (1..=k).map(|j| Rational::new(1.into(), (j as i64).into())).sum()
}

/// Whether the undirected edge set has no cycle (union-find).
pub fn acyclic(game: &Game, edges: &[usize]) -> bool {
    let mut parent: Vec<usize> = (0..game.vertex_count).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for &e in edges {
        let (a, b) = (find(&mut parent, game.edges[e].u), find(&mut parent, game.edges[e].v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}
