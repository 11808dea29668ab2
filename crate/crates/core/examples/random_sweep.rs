//! Solves a batch of random games and tallies the per-instance checks.

use ndgame::bounds::check_instance;
use ndgame::families::{solved_sweep, RandomGameParams};
use ndgame::Limits;

fn main() -> ndgame::Result<()> {
    let mut shared = 0;
    let mut failing = 0;
    for trunk in [false, true] {
        let params = RandomGameParams { trunk, ..Default::default() };
        for solved in solved_sweep(&params, 0, 50, &Limits::default())? {
            let checks = check_instance(&solved.game, &solved.analysis)?;
            shared += usize::from(checks.shared_edge);
            if !checks.all_hold() {
                failing += 1;
                println!("seed {} (trunk {trunk}): {:?}", solved.seed, checks.failures);
            }
        }
    }
    println!("100 instances, {shared} with an edge shared by every player in the optimum, {failing} failing");
    Ok(())
}
