//! Text and Graphviz renderings of a diagram.
//!
//! cargo run --example diagrams | dot -Tsvg  (the second half is DOT)

use superkac::classify::dhat210;
use superkac::diagram::{to_diagram, Format};

fn main() {
    let d = dhat210();
    print!("{}", to_diagram(&d, Format::Text));
    println!();
    print!("{}", to_diagram(&d, Format::Dot));
}
