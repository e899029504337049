//! Classification verdicts with their evidence.
//!
//! cargo run --release --example classify

use superkac::classify::{classify, ClassifyBudget};
use superkac::CartanDatum;

fn main() {
    let inputs = [
        ("S(1,2,1/2)", CartanDatum::from_strs(&[&["0", "-1/2", "-1/2"], &["-1/2", "0", "3/2"], &["-1", "-1", "2"]], &[1, 1, 0])),
        ("q(3)", CartanDatum::from_ints(&[&[2, -1, -1], &[-1, 2, -1], &[1, -1, 0]], &[0, 0, 1])),
        ("sl(2|1)", CartanDatum::from_ints(&[&[2, -1], &[1, 0]], &[0, 1])),
        ("wild", CartanDatum::from_ints(&[&[0, 1], &[-3, 2]], &[1, 0])),
    ];
    for (name, d) in &inputs {
        let v = classify(d, ClassifyBudget::default()).unwrap();
        println!("{name}: {} (finite growth {:?})", v.name(), v.finite_growth());
        if let Some(m) = v.table_match() {
            println!("  {:?}", m.family);
        }
    }
    // the full report for the last one, witness included
    let v = classify(&inputs[3].1, ClassifyBudget::default()).unwrap();
    println!("{}", serde_json::to_string_pretty(&v.to_json()).unwrap());
}
