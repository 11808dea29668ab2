//! The major-tree order of an optimum and the deviation path each player
//! gets toward its successor and predecessor.

use ndgame::bounds::{deviation_path, major_tree_order, Direction};
use ndgame::instance::parse_instance;
use ndgame::{analyze, Limits};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let game = parse_instance(include_str!("../instances/fig-a.txt"))?.game;
    let analysis = analyze(&game, &Limits::default())?;
    let o = &analysis.optima.profiles[0];
    let n = &analysis.potential_minima.profiles[0];
    let order = major_tree_order(&game, o)?;
    println!("shared edges {:?}, major side {:?}, minor side {:?}", order.shared, order.major, order.minor);
    println!("player order {:?} from walk {:?}", order.order, order.walk);
    for i in 0..game.k() {
        for dir in [Direction::Successor, Direction::Predecessor] {
            let c = deviation_path(&game, n, o, i, dir)?;
            println!(
                "player {i} {dir:?} (partner {}): path {:?}, {} ≤ {}: {}",
                c.partner,
                c.path.edges(),
                c.lhs,
                c.rhs,
                c.passes()
            );
        }
    }
    Ok(())
}
