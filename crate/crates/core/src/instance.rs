//! Line-oriented instance text format.
//!
//! ```text
//! # comment
//! name: fig-a
//! provenance: constraint-matched reconstruction
//! directed: false
//! vertices: 4
//! edge 0 1 282 1        # u v cost-constant [cost-ε-coefficient]
//! player 0 1            # s t
//! ```
//!
//! Edge ids and player ids are record order, vertices are 0-based, and
//! rationals are written as integers or `p/q`.

use std::fmt::Write as _;

use num_traits::Zero;

use crate::arith::{parse_rational, EpsCost};
use crate::error::{Error, Result};
use crate::game::Game;

/// A game together with its optional metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub name: Option<String>,
    pub provenance: Option<String>,
    pub game: Game,
}

impl InstanceFile {
    pub fn new(game: Game) -> Self {
        InstanceFile { name: None, provenance: None, game }
    }

    pub fn named(game: Game, name: &str, provenance: &str) -> Self {
        InstanceFile { name: Some(name.to_string()), provenance: Some(provenance.to_string()), game }
    }
}

fn err(line: usize, column: usize, reason: impl Into<String>) -> Error {
    Error::Parse { line, column, reason: reason.into() }
}

/// Splits a line into `(column, token)` pairs, 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_index(line: usize, (col, tok): (usize, &str)) -> Result<usize> {
    tok.parse().map_err(|_| err(line, col, format!("expected a vertex index, found `{tok}`")))
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let mut name = None;
    let mut provenance = None;
    let mut directed: Option<bool> = None;
    let mut vertices: Option<usize> = None;
    let mut edges = Vec::new();
    let mut players = Vec::new();
    let mut last_line = 0;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let body = content.trim();
        if let Some((key, value)) = body.split_once(':') {
            let key = key.trim();
            let value_col = indent + body.find(':').unwrap() + 2 + (value.len() - value.trim_start().len());
            let value = value.trim();
            let dup = |seen: bool| {
                if seen {
                    Err(err(line, indent + 1, format!("duplicate `{key}:` header")))
                } else {
                    Ok(())
                }
            };
            match key {
                "name" => {
                    dup(name.is_some())?;
                    name = Some(value.to_string());
                }
                "provenance" => {
                    dup(provenance.is_some())?;
                    provenance = Some(value.to_string());
                }
                "directed" => {
                    dup(directed.is_some())?;
                    directed = Some(match value {
                        "true" => true,
                        "false" => false,
                        other => return Err(err(line, value_col, format!("expected true or false, found `{other}`"))),
                    });
                }
                "vertices" => {
                    dup(vertices.is_some())?;
                    let n: usize = value
                        .parse()
                        .map_err(|_| err(line, value_col, format!("expected a vertex count, found `{value}`")))?;
                    if n == 0 {
                        return Err(err(line, value_col, "vertex count must be positive"));
                    }
                    vertices = Some(n);
                }
                other => return Err(err(line, indent + 1, format!("unknown header `{other}`"))),
            }
            continue;
        }
        let toks = tokens(content);
        match toks[0].1 {
            "edge" => {
                if toks.len() != 4 && toks.len() != 5 {
                    return Err(err(line, toks[0].0, "expected `edge <u> <v> <const> [<eps>]`"));
                }
                let u = parse_index(line, toks[1])?;
                let v = parse_index(line, toks[2])?;
                let a = parse_rational(toks[3].1).map_err(|r| err(line, toks[3].0, r))?;
                let b = match toks.get(4) {
                    Some(&(col, tok)) => parse_rational(tok).map_err(|r| err(line, col, r))?,
                    None => Zero::zero(),
                };
                let cost = EpsCost::new(a, b);
                if !cost.is_positive() {
                    return Err(err(line, toks[3].0, format!("edge cost {cost} is not positive")));
                }
                edges.push((line, toks[1].0, u, v, cost));
            }
            "player" => {
                if toks.len() != 3 {
                    return Err(err(line, toks[0].0, "expected `player <s> <t>`"));
                }
                let s = parse_index(line, toks[1])?;
                let t = parse_index(line, toks[2])?;
                players.push((line, toks[1].0, s, t));
            }
            other => return Err(err(line, toks[0].0, format!("unknown record `{other}`"))),
        }
    }
    let n = vertices.ok_or_else(|| err(last_line.max(1), 1, "missing `vertices:` header"))?;
    let mut game = Game::new(n, directed.unwrap_or(false));
    for (line, col, u, v, cost) in edges {
        if u >= n || v >= n {
            return Err(err(line, col, format!("edge endpoint out of range (vertices: {n})")));
        }
        game.add_edge(u, v, cost);
    }
    for (line, col, s, t) in players {
        if s >= n || t >= n {
            return Err(err(line, col, format!("player terminal out of range (vertices: {n})")));
        }
        game.add_player(s, t);
    }
    if game.players.is_empty() {
        return Err(err(last_line.max(1), 1, "instance has no players"));
    }
    Ok(InstanceFile { name, provenance, game })
}

pub fn serialize_instance(file: &InstanceFile) -> String {
    let mut out = String::new();
    let clean = |s: &str| s.replace(['\n', '\r', '#'], " ");
    if let Some(name) = &file.name {
        let _ = writeln!(out, "name: {}", clean(name));
    }
    if let Some(p) = &file.provenance {
        let _ = writeln!(out, "provenance: {}", clean(p));
    }
    let g = &file.game;
    let _ = writeln!(out, "directed: {}", g.directed);
    let _ = writeln!(out, "vertices: {}", g.vertex_count);
    for e in &g.edges {
        if e.cost.b.is_zero() {
            let _ = writeln!(out, "edge {} {} {}", e.u, e.v, e.cost.a);
        } else {
            let _ = writeln!(out, "edge {} {} {} {}", e.u, e.v, e.cost.a, e.cost.b);
        }
    }
    for p in &g.players {
        let _ = writeln!(out, "player {} {}", p.source, p.target);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    #[test]
    fn minimal_file() {
        let f = parse_instance("vertices: 2\nedge 0 1 1\nplayer 0 1\n").unwrap();
        assert_eq!(f.game.vertex_count, 2);
        assert!(!f.game.directed);
        assert_eq!(f.game.edges[0].cost, EpsCost::from_ints(1, 0));
        assert!(crate::game::validate_game(&f.game).is_empty());
    }

    #[test]
    fn pure_epsilon_edge() {
        let f = parse_instance("vertices: 2\nedge 0 1 0 1\nplayer 0 1\n").unwrap();
        assert_eq!(f.game.edges[0].cost, EpsCost::from_ints(0, 1));
    }

    #[test]
    fn rationals_and_comments() {
        let text =
            "# header\nname: demo\ndirected: true\nvertices: 3 # three\nedge 0 2 1/3 -1/2\nedge 2 1 4/2\nplayer 0 1\n";
        let f = parse_instance(text).unwrap();
        assert_eq!(f.name.as_deref(), Some("demo"));
        assert!(f.game.directed);
        assert_eq!(f.game.edges[0].cost, EpsCost::new(ratio(1, 3), ratio(-1, 2)));
        assert_eq!(f.game.edges[1].cost, EpsCost::from_ints(2, 0));
        assert_eq!(parse_instance(&serialize_instance(&f)).unwrap(), f);
    }

    #[test]
    fn duplicate_directed_header() {
        let e = parse_instance("directed: true\ndirected: false\nvertices: 2\nplayer 0 1\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, column: 1, reason: "duplicate `directed:` header".into() });
    }

    #[test]
    fn error_positions() {
        let e = parse_instance("vertices: 2\nedge 0 x 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 8, .. }));
        let e = parse_instance("vertices: 2\nedge 0 1 0 0\nplayer 0 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 10, .. }));
        let e = parse_instance("vertices: 2\n  edge 0 5 1\nplayer 0 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 8, .. }));
        let e = parse_instance("edge 0 1 1\nplayer 0 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { ref reason, .. } if reason.contains("vertices")));
        let e = parse_instance("vertices: 2\nhyperedge 0 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 1, .. }));
        let e = parse_instance("vertices: 2\ndirected: maybe\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 11, .. }));
    }
}
