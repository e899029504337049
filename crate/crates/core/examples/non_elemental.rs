//! Stripping zero rows and checking the attachment conditions.
//!
//! cargo run --release --example non_elemental

use superkac::classify::{check_th84, decompose_nonelemental, ClassifyBudget};
use superkac::CartanDatum;

fn main() {
    let chain = |p: &[u8]| {
        CartanDatum::from_ints(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 2]], p)
    };
    for p in [[1, 1, 1, 0], [1, 1, 0, 0]] {
        let d = chain(&p);
        let dec = decompose_nonelemental(&d).unwrap();
        println!("parity {p:?}");
        for (k, level) in dec.levels.iter().enumerate() {
            println!("  strip {}: {:?}", k + 1, level.stripped.iter().map(|i| i + 1).collect::<Vec<_>>());
        }
        let report = check_th84(&dec, &d, ClassifyBudget::default());
        for (i, c) in report.conditions.iter().enumerate() {
            println!("  condition {}: {} ({})", i + 1, c.holds, c.note);
        }
        println!("  overall: {}", report.overall);
    }
}
