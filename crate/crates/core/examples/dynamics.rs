//! Best-response dynamics from random starts. Each step lowers the potential
//! and the run ends in a Nash equilibrium.

use ndgame::equilibria::random_start;
use ndgame::families::{random_game, RandomGameParams};
use ndgame::{best_response_dynamics, is_nash, Limits, Schedule};

fn main() -> ndgame::Result<()> {
    let params = RandomGameParams { vertices: 6, players: 3, extra_edges: 5, ..Default::default() };
    for seed in 0..5 {
        let game = random_game(&params, seed);
        let start = random_start(&game, &Limits::default(), seed)?;
        let trace = best_response_dynamics(&game, &start, Schedule::Random(seed), 10_000)?;
        print!("seed {seed}: Φ {}", trace.start_potential);
        for step in &trace.steps {
            print!(" → {} (player {})", step.potential_after, step.player);
        }
        println!();
        assert!(is_nash(&game, &trace.terminal));
        println!("  terminal {:?} after {} steps", trace.terminal.edge_ids(), trace.steps.len());
    }
    Ok(())
}
