//! Root-space dimensions of g(A) up to a height.
//!
//! cargo run --release --example root_dims

use superkac::superalgebra::build_graded;
use superkac::CartanDatum;

fn main() {
    // D(2,1;0) is finite dimensional
    let d = CartanDatum::from_ints(&[&[2, -1, 0], &[1, 0, 0], &[0, -1, 2]], &[0, 1, 0]);
    let g = build_graded(&d, 6, 64);
    for (root, dim) in &g.by_root {
        println!("{root}: {dim}");
    }
    print!("{}", g.to_csv());

    // osp(1|2): the odd root doubles
    let osp = CartanDatum::from_ints(&[&[2]], &[1]);
    println!("{}", build_graded(&osp, 3, 64).to_json());
}
