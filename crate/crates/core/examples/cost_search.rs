//! Hill-climbing search over integer edge costs, driven by a TOML spec.

use ndgame::search::{parse_search_spec, search_costs};

fn main() -> ndgame::Result<()> {
    let spec = parse_search_spec(include_str!("../instances/k2-tight.toml"))?;
    let out = search_costs(&spec)?;
    for t in &out.trace {
        println!("evaluation {:>6} restart {:>3}: score {} at {:?}", t.evaluation, t.restart, t.score.value, t.costs);
    }
    println!(
        "best pos {:?} after {} evaluations, exact match: {}",
        out.best.pos.as_ref().map(|p| p.to_string()),
        out.evaluations,
        out.exact_match
    );
    Ok(())
}
