//! Reflecting at isotropic roots, and reflecting back.
//!
//! cargo run --example odd_reflections

use superkac::reflections::{classify_simple_root, odd_reflection, reflect_word, BaseState};
use superkac::CartanDatum;

fn main() {
    // sl(2|1) in its distinguished base
    let d = CartanDatum::from_ints(&[&[2, -1], &[1, 0]], &[0, 1]);
    for i in 0..d.n() {
        println!("root {}: {:?}", i + 1, classify_simple_root(&d, i).unwrap());
    }

    let s = odd_reflection(&BaseState::initial(&d), 1).unwrap();
    println!("after reflecting at 2:\n{}", s.datum);
    for (i, r) in s.roots.iter().enumerate() {
        println!("  new simple root {} = {r}", i + 1);
    }

    let back = odd_reflection(&s, 1).unwrap();
    println!("reflect again:\n{}roots {:?}", back.datum, back.roots);

    // singular reflections change the algebra; the state remembers it
    let d210 = CartanDatum::from_ints(&[&[2, -1, 0], &[1, 0, 0], &[0, -1, 2]], &[0, 1, 0]);
    let w = reflect_word(&d210, &[1]).unwrap();
    println!("D(2,1;0) reflected at its singular root:\n{}singular used: {}", w.datum, w.singular_used);
}
