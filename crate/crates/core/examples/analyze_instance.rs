//! Exhaustive analysis of a bundled instance: equilibria, optimum, potential
//! minima and the four inefficiency ratios.
//!
//! ```bash
//! cargo run --example analyze_instance -- crates/core/instances/fig-a.txt
//! ```

use ndgame::arith::to_decimal;
use ndgame::bounds::ratios_of;
use ndgame::instance::parse_instance;
use ndgame::{analyze, Limits};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/instances/fig-a.txt").to_string());
    let file = parse_instance(&std::fs::read_to_string(&path)?)?;
    let game = &file.game;
    let analysis = analyze(game, &Limits::default())?;
    let ratios = ratios_of(&analysis)?;

    println!("{} ({} players, {} edges)", file.name.as_deref().unwrap_or(&path), game.k(), game.edges.len());
    println!("profiles enumerated: {}", analysis.profile_count);
    println!("optimum cost: {} over {} optima", analysis.optimum_cost(), analysis.optima.len());
    println!("nash equilibria: {}", analysis.nash.len());
    for (p, c) in analysis.nash.profiles.iter().zip(&analysis.nash.costs) {
        println!("  {:?} cost {c}", p.edge_ids());
    }
    println!("potential minima: {} at Φ = {}", analysis.potential_minima.len(), analysis.min_potential());
    for (name, entry) in
        [("PoS", &ratios.pos), ("PoA", &ratios.poa), ("POPoS", &ratios.popos), ("POPoA", &ratios.popoa)]
    {
        println!(
            "{name:>6} = {} ≈ {} (ε→0, approached {:?})",
            entry.limit,
            to_decimal(&entry.limit, 12),
            entry.approach
        );
    }
    Ok(())
}
