//! The closed-form bound `f(k)` next to `H_k`, with the relative gap scaled
//! by `k⁴` to show it settles near a constant.

use ndgame::arith::{int, to_decimal};
use ndgame::bounds::{lemma1_factor, theorem_bound};

fn main() -> ndgame::Result<()> {
    println!("{:>4} {:>16} {:>16} {:>10} {:>14}", "k", "f(k)", "H_k", "β(k)", "k⁴(1-f/H)");
    for k in [2, 3, 4, 5, 10, 20, 50, 100] {
        let t = theorem_bound(k)?;
        let scaled = &t.gap * int((k as i64).pow(4));
        println!(
            "{k:>4} {:>16} {:>16} {:>10} {:>14}",
            to_decimal(&t.value, 10),
            to_decimal(&t.harmonic, 10),
            lemma1_factor(k).to_string(),
            to_decimal(&scaled, 6)
        );
    }
    println!("f(2) = {}, f(3) = {}", theorem_bound(2)?.value, theorem_bound(3)?.value);
    Ok(())
}
