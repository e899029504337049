//! Principal even roots and their Cartan matrix.
//!
//! cargo run --example principal_roots

use superkac::admissibility::{check_pi0, principal_roots, Budget};
use superkac::CartanDatum;

fn main() {
    // the integral S(1,2,a) class
    let d = CartanDatum::from_ints(&[&[0, 1, 0], &[1, 0, -2], &[-1, -1, 2]], &[1, 1, 0]);
    let prs = principal_roots(&d, Budget::default()).unwrap();
    for (r, p) in prs.roots.iter().zip(&prs.provenance) {
        println!("{r}  via {:?} from {:?}", p.word, p.source);
    }
    if let Some(b) = prs.b_datum() {
        println!("B =\n{b}");
    }
    let report = check_pi0(&prs, d.n());
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
}
