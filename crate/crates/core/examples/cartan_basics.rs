//! Normalization, structure flags and canonical forms.
//!
//! cargo run --example cartan_basics

use superkac::cartan::{canonical_form, symmetrizer};
use superkac::{normalize, structure_flags, CartanDatum};

fn main() {
    // S(1,2,1/2) with its rows scaled and its vertices shuffled
    let d = CartanDatum::from_strs(
        &[&["2", "-1", "-1"], &["3", "0", "-1"], &["-1", "1", "0"]],
        &[0, 1, 1],
    );
    let n = normalize(&d);
    println!("input\n{d}\nnormalized\n{n}");

    let flags = structure_flags(&n);
    println!("{flags:?}");
    println!("symmetrizer: {:?}", symmetrizer(&n).map(|s| s.iter().map(|x| x.to_string()).collect::<Vec<_>>()));

    let cf = canonical_form(&d).unwrap();
    println!("canonical form (vertex order {:?})\n{}", cf.permutation, cf.datum);

    let sl3 = CartanDatum::from_ints(&[&[2, -1], &[-1, 2]], &[0, 0]);
    println!("sl(3) symmetrizer: {:?}", symmetrizer(&sl3).is_some());
}
