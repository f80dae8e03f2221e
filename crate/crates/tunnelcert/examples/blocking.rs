//! The wall test on two 4-bracelets: the square lattice (nothing crosses)
//! and the extremal configuration where a beam across the middle ball
//! blocks it.
//!
//! ```text
//! cargo run --example blocking
//! ```

use tunnelcert::blocking::{check_lemma34, find_blocking, wall_envelope_height, BlockingVerdict};
use tunnelcert::fixtures;
use tunnelcert::geom::DEFAULT_TOL;
use tunnelcert::graph::enumerate_bracelets;

fn main() {
    for (name, p) in [
        ("square lattice", fixtures::square_lattice(0.0)),
        ("extremal", fixtures::extremal_four_bracelet_pattern()),
    ] {
        let b = enumerate_bracelets(&p, 4, 1)
            .into_iter()
            .find(|b| b.n == 4)
            .expect("a 4-bracelet");
        let env: Vec<String> = (0..=4)
            .map(|k| format!("{:.3}", wall_envelope_height(&b, 0.25 * k as f64)))
            .collect();
        println!("{name}: wall envelope near the start {}", env.join(" "));
        match find_blocking(&b, &p, DEFAULT_TOL).unwrap() {
            BlockingVerdict::Blocked(pair) => {
                println!(
                    "  blocked by beam orbit {} (larger radius {}), {} crossing(s)",
                    pair.beam.orbit,
                    pair.larger_radius,
                    pair.crossings.len()
                );
                println!(
                    "  radius bound holds: {}",
                    check_lemma34(&b, &pair, p.g(), DEFAULT_TOL).unwrap()
                );
            }
            BlockingVerdict::NotBlocked(nb) => println!(
                "  not blocked after {} beams; a missing blocker would need radius {:?}",
                nb.beams_scanned, nb.required_blocker_radius
            ),
            BlockingVerdict::Indeterminate(contacts) => {
                println!("  indeterminate: {} degenerate contact(s)", contacts.len())
            }
        }
    }
}
