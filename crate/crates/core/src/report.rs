//! Versioned JSON reports shared by every command.
//!
//! Exact values travel as integer numerator/denominator pairs for the
//! constant part and the `ε` coefficient. Integers that fit in `i64` are JSON
//! numbers, larger ones are decimal strings. The `decimal` fields are
//! 12-significant-digit renderings for people and are never compared.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::arith::{to_decimal, to_i64, EpsCost, Rational};
use crate::bounds::{RatioEntry, RatioReport};
use crate::game::Game;
use crate::instance::{serialize_instance, InstanceFile};
use crate::profile::StrategyProfile;

pub const SCHEMA: u64 = 1;

/// Significant digits of every decimal rendering.
pub const DECIMAL_DIGITS: usize = 12;

fn integer(n: &BigInt) -> Value {
    match to_i64(n) {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

/// Display form of an `ε`-extended cost, e.g. `700 + 3ε`.
pub fn eps_decimal(c: &EpsCost) -> String {
    let a = to_decimal(&c.a, DECIMAL_DIGITS);
    match c.b.cmp(&Rational::zero()) {
        Ordering::Equal => a,
        Ordering::Greater => format!("{a} + {}ε", to_decimal(&c.b, DECIMAL_DIGITS)),
        Ordering::Less => format!("{a} - {}ε", to_decimal(&-c.b.clone(), DECIMAL_DIGITS)),
    }
}

pub fn exact(c: &EpsCost) -> Value {
    json!({
        "num": integer(c.a.numer()),
        "den": integer(c.a.denom()),
        "eps_num": integer(c.b.numer()),
        "eps_den": integer(c.b.denom()),
        "decimal": eps_decimal(c),
    })
}

pub fn exact_rational(r: &Rational) -> Value {
    exact(&EpsCost::constant(r.clone()))
}

/// Edge ids per player.
pub fn profile(p: &StrategyProfile) -> Value {
    Value::from(p.edge_ids())
}

fn approach(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "below",
        Ordering::Equal => "exact",
        Ordering::Greater => "above",
    }
}

pub fn ratio_entry(e: &RatioEntry) -> Value {
    json!({
        "limit": exact_rational(&e.limit),
        "approach": approach(e.approach),
        "numerator": exact(&e.ratio.num),
        "denominator": exact(&e.ratio.den),
        "witness": profile(&e.witness),
    })
}

pub fn ratios(r: &RatioReport) -> Value {
    json!({
        "pos": ratio_entry(&r.pos),
        "poa": ratio_entry(&r.poa),
        "popos": ratio_entry(&r.popos),
        "popoa": ratio_entry(&r.popoa),
        "chain_holds": r.chain_holds(),
    })
}

/// Hex SHA-256 of the game's canonical text form (metadata and comments
/// excluded), prefixed with `sha256:`.
pub fn digest(game: &Game) -> String {
    let text = serialize_instance(&InstanceFile::new(game.clone()));
    let hash = Sha256::digest(text.as_bytes());
    let mut out = String::from("sha256:");
    for byte in hash.iter() {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

pub fn game_summary(game: &Game) -> Value {
    json!({
        "vertices": game.vertex_count,
        "directed": game.directed,
        "edges": game.edges.len(),
        "players": game.players.iter().map(|p| vec![p.source, p.target]).collect::<Vec<_>>(),
    })
}

/// One command's output.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub args: Vec<String>,
    pub digest: Option<String>,
    pub results: Value,
    pub error: Option<Value>,
    /// Wall-clock milliseconds, included only on request so that reports
    /// stay byte-identical by default.
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &str, args: &[String]) -> Self {
        Report {
            command: command.to_string(),
            args: args.to_vec(),
            digest: None,
            results: Value::Null,
            error: None,
            timing_ms: None,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut map = Map::new();
        map.insert("schema".into(), Value::from(SCHEMA));
        map.insert("command".into(), json!({ "name": self.command, "args": self.args }));
        if let Some(d) = &self.digest {
            map.insert("instance_digest".into(), Value::from(d.clone()));
        }
        if let Some(e) = &self.error {
            map.insert("error".into(), e.clone());
        } else {
            map.insert("results".into(), self.results.clone());
        }
        if let Some(t) = self.timing_ms {
            map.insert("timing".into(), json!({ "elapsed_ms": t }));
        }
        Value::Object(map)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Indented `key: value` lines; exact values are shown as fractions with
    /// their decimal rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        render(&mut out, 0, None, &self.to_value());
        out
    }
}

fn is_exact(v: &Value) -> bool {
    v.as_object().is_some_and(|m| m.contains_key("num") && m.contains_key("eps_den") && m.len() == 5)
}

fn fraction(num: &Value, den: &Value) -> String {
    let text = |v: &Value| v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string());
    if text(den) == "1" {
        text(num)
    } else {
        format!("{}/{}", text(num), text(den))
    }
}

fn inline(v: &Value) -> Option<String> {
    if is_exact(v) {
        let m = v.as_object()?;
        let a = fraction(&m["num"], &m["den"]);
        let b = fraction(&m["eps_num"], &m["eps_den"]);
        let exact = if b == "0" {
            a
        } else if let Some(neg) = b.strip_prefix('-') {
            format!("{a} - {neg}ε")
        } else {
            format!("{a} + {b}ε")
        };
        let decimal = m["decimal"].as_str().unwrap_or_default();
        return Some(if exact == decimal { exact } else { format!("{exact} (≈ {decimal})") });
    }
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object()) => serde_json::to_string(v).ok(),
        _ => None,
    }
}

fn render(out: &mut String, depth: usize, key: Option<&str>, v: &Value) {
    let pad = "  ".repeat(depth);
    let label = key.map(|k| format!("{k}:")).unwrap_or_else(|| "-".to_string());
    if let Some(line) = inline(v) {
        let _ = writeln!(out, "{pad}{label} {line}");
        return;
    }
    let child = if key.is_none() && depth == 0 { 0 } else { depth + 1 };
    if key.is_some() || depth > 0 {
        let _ = writeln!(out, "{pad}{label}");
    }
    match v {
        Value::Object(m) => {
            for (k, item) in m {
                render(out, child, Some(k), item);
            }
        }
        Value::Array(items) => {
            for item in items {
                render(out, child, None, item);
            }
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    #[test]
    fn exact_fields() {
        let v = exact(&EpsCost::new(ratio(286, 175), ratio(-1, 3)));
        assert_eq!(v["num"], 286);
        assert_eq!(v["den"], 175);
        assert_eq!(v["eps_num"], -1);
        assert_eq!(v["eps_den"], 3);
        assert_eq!(v["decimal"], "1.63428571429 - 0.333333333333ε");
    }

    #[test]
    fn huge_integers_become_strings() {
        let big = Rational::new(BigInt::from(10).pow(30), BigInt::from(7));
        let v = exact_rational(&big);
        assert_eq!(v["num"], "1000000000000000000000000000000");
        assert_eq!(v["den"], 7);
    }

    #[test]
    fn digest_ignores_metadata() {
        let mut g = Game::new(2, false);
        g.add_edge(0, 1, EpsCost::from_ints(1, 0));
        g.add_player(0, 1);
        let d = digest(&g);
        assert!(d.starts_with("sha256:") && d.len() == 7 + 64);
        g.edges[0].cost = EpsCost::from_ints(2, 0);
        assert_ne!(digest(&g), d);
    }

    #[test]
    fn text_rendering() {
        let mut r = Report::new("bounds", &["--k".into(), "3".into()]);
        r.results = json!({ "k": 3, "theorem_bound": exact_rational(&ratio(165, 92)) });
        let text = r.to_text();
        assert!(text.contains("theorem_bound: 165/92 (≈ 1.79347826087)"), "{text}");
        assert!(text.contains("schema: 1"));
    }
}
