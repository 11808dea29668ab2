//! The directed family whose price of stability tends to `H_k` as ε → 0.

use ndgame::bounds::ratios;
use ndgame::families::{directed_hk_expected, directed_hk_family};
use ndgame::Limits;

fn main() -> ndgame::Result<()> {
    for k in 2..=4 {
        let game = directed_hk_family(k)?;
        let r = ratios(&game, &Limits::default())?;
        println!(
            "k = {k}: PoS → {} (expected H_k = {}), approached {:?}",
            r.pos.limit,
            directed_hk_expected(k),
            r.pos.approach
        );
    }
    Ok(())
}
