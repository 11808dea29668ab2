//! Best-effort search for a three-player instance whose unique equilibrium
//! costs 1769/1126 times the optimum.
//!
//! ```bash
//! cargo run --release --example reconstruct_fig_b -- <seed> <budget>
//! ```

use ndgame::families::{fig_b_floor, reconstruct_fig_b, FigBConfig};
use ndgame::instance::serialize_instance;

fn main() -> ndgame::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("numeric argument"));
    let mut config = FigBConfig::default();
    if let Some(seed) = args.next() {
        config.seed = seed;
    }
    if let Some(budget) = args.next() {
        config.budget = budget;
    }
    let r = reconstruct_fig_b(&config)?;
    for p in &r.phases {
        println!(
            "{:>10}: topology {:>3}, {:>7} evaluations, pos {:?}",
            p.phase,
            p.topology,
            p.evaluations,
            p.pos.as_ref().map(|x| x.to_string())
        );
    }
    println!("pos {} (floor {}): floor met {}, exact match {}", r.pos, fig_b_floor(), r.floor_met, r.exact_match);
    print!("{}", serialize_instance(&r.instance));
    Ok(())
}
