//! Which two-vertex data survive every odd reflection.
//!
//! cargo run --example admissibility

use superkac::admissibility::{explore_closure, is_regular_kac_moody, Budget, Verdict};
use superkac::CartanDatum;

fn main() {
    let budget = Budget::new(6, 256).unwrap();
    for a in 1..=5 {
        let d = CartanDatum::from_ints(&[&[0, 1], &[-a, 2]], &[1, 0]);
        let orbit = explore_closure(&d, budget, true).unwrap();
        match orbit.verdict() {
            Verdict::Yes => println!("a21 = -{a}: admissible, {} bases", orbit.len()),
            Verdict::No(w) => println!(
                "a21 = -{a}: fails after reflecting at {:?}: {}",
                w.word.iter().map(|k| k + 1).collect::<Vec<_>>(),
                w.violation
            ),
            Verdict::Inconclusive => println!("a21 = -{a}: budget exhausted"),
        }
    }

    let d = CartanDatum::from_ints(&[&[0, 1], &[-2, 2]], &[1, 0]);
    println!("regular Kac-Moody: {}", is_regular_kac_moody(&d, budget).unwrap().name());
    println!("{}", explore_closure(&d, budget, true).unwrap().to_dot());
}
