//! Polynomial against exponential growth.
//!
//! cargo run --release --example growth

use superkac::superalgebra::{build_graded, growth_estimate};
use superkac::CartanDatum;

fn main() {
    let cases = [
        ("affine A1", CartanDatum::from_ints(&[&[2, -2], &[-2, 2]], &[0, 0]), 24, 64),
        ("hyperbolic", CartanDatum::from_ints(&[&[2, -3], &[-3, 2]], &[0, 0]), 15, 100_000),
        ("hyperbolic, small budget", CartanDatum::from_ints(&[&[2, -3], &[-3, 2]], &[0, 0]), 15, 64),
    ];
    for (name, d, height, budget) in cases {
        let g = build_graded(&d, height, budget);
        let v = growth_estimate(&g);
        println!("{name}: {:?}", g.height_dims());
        println!("  {:?} over heights {:?}", v.kind, v.window);
    }
}
