//! Runs every per-instance verifier on a bundled instance and prints the
//! sides of each inequality.

use ndgame::bounds::{check_instance, Verifier};
use ndgame::instance::parse_instance;
use ndgame::{analyze, Limits};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = include_str!("../instances/fig-b.txt");
    let game = parse_instance(text)?.game;
    let analysis = analyze(&game, &Limits::default())?;
    let verifier = Verifier::new(&game, &analysis);
    let o = &analysis.optima.profiles[0];

    for n in &analysis.nash.profiles {
        let r = verifier.lemma1(n, o)?;
        println!("lemma 1 at N={:?}: {} ≤ {} ({}), applicable: {}", n.edge_ids(), r.lhs, r.rhs, r.holds, r.applicable);
    }
    for n in &analysis.potential_minima.profiles {
        let r = verifier.lemma2(n, o)?;
        println!(
            "lemma 2 at N={:?}: premises {} {}, conclusion {} with bound {}",
            n.edge_ids(),
            r.potential_ok,
            r.share_ok,
            r.conclusion,
            r.bound
        );
    }
    let checks = check_instance(&game, &analysis)?;
    println!("deviation certificates: {} (all pass: {})", checks.deviation_certificates, checks.deviation_ok);
    println!("every check holds: {}", checks.all_hold());
    Ok(())
}
