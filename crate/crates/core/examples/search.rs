//! Exhaustive search over three-vertex data and one-vertex extensions.
//!
//! cargo run --release --example search

use superkac::classify::{d210, s12a_pattern};
use superkac::rational::int;
use superkac::search::{candidate_count, run_search, SearchSpec};
use superkac::normalize;

fn main() {
    let specs = [
        ("three vertices", SearchSpec::full(3)),
        ("D(2,1;0) plus one", SearchSpec::extension(&d210())),
        ("S(1,2,0) plus one", SearchSpec::extension(&normalize(&s12a_pattern(&int(1))))),
    ];
    for (name, spec) in specs {
        println!("{name}: {} candidates", candidate_count(&spec).unwrap());
        let report = run_search(&spec).unwrap();
        println!("  {:?}", report.counts);
        println!("  {} classes, {} rejected", report.classes.len(), report.rejected());
        for c in report.accepted() {
            println!("  accepted {:?}\n{}", c.verdict.table_match().map(|m| &m.family), c.datum);
        }
        for c in report.inconclusive() {
            println!("  open\n{}", c.datum);
        }
    }
}
