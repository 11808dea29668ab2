//! Searches small topologies for an instance meeting every claim about the
//! three-player example with POPoS = POPoA = 286/175.

use ndgame::families::reconstruct_fig_a;
use ndgame::instance::serialize_instance;

fn main() -> ndgame::Result<()> {
    let r = reconstruct_fig_a()?;
    println!("examined {} candidates, analyzed {}", r.examined, r.analyzed);
    for claim in &r.claims {
        println!("[{}] {}: {}", if claim.holds { "ok" } else { "FAIL" }, claim.name, claim.detail);
    }
    print!("{}", serialize_instance(&r.instance));
    Ok(())
}
