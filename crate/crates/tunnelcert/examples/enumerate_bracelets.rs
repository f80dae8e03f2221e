//! Bracelets through the ball at infinity in the square tangent lattice.
//!
//! ```text
//! cargo run --example enumerate_bracelets
//! ```

use std::collections::BTreeMap;

use tunnelcert::fixtures;
use tunnelcert::graph::{build_quotient_graph, enumerate_bracelets, is_connected};

fn main() {
    let p = fixtures::square_lattice(0.0);
    let graph = build_quotient_graph(&p);
    println!(
        "quotient graph: {} vertices, {} edges, connected: {}",
        graph.vertex_count(),
        graph.edges.len(),
        is_connected(&graph)
    );

    let bracelets = enumerate_bracelets(&p, 6, 2);
    let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
    for b in &bracelets {
        *by_size.entry(b.n).or_default() += 1;
    }
    for (n, count) in by_size {
        println!("{n}-bracelets: {count}");
    }
    for b in bracelets.iter().filter(|b| b.n == 4).take(3) {
        let cycle: Vec<String> = b
            .cycle()
            .iter()
            .map(|e| format!("{}{:?}", e.id, (e.offset.0, e.offset.1)))
            .collect();
        println!("  {}", cycle.join(" -> "));
    }
}
