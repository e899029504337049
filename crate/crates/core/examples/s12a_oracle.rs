//! S(1,2,a) from vector fields against the generic construction.
//!
//! cargo run --release --example s12a_oracle -- 1/3

use superkac::rational;
use superkac::superalgebra::{build_graded, oracle_s12a, s12a_realized};

fn main() {
    let a = std::env::args().nth(1).unwrap_or_else(|| "1/2".into());
    let a = rational::parse(&a).expect("a rational like 1/2");
    let d = s12a_realized(&a);
    println!("{d}");
    let generic = build_graded(&d, 8, 64);
    let fields = oracle_s12a(&a, 8);
    for (root, dim) in &fields.by_root {
        let mark = if generic.dim(root) == *dim { "" } else { "  MISMATCH" };
        println!("{root}: {dim}{mark}");
    }
    println!("agree: {}", generic.by_root == fields.by_root);
}
