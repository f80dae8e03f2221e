//! Count edge orientations of a hexagon up to each symmetry convention.
//!
//! ```text
//! cargo run --example hexagon_classes
//! ```

use tunnelcert::oracle::{hexagon_orientation_classes, Symmetry};

fn main() {
    for s in [
        Symmetry::RotationOnly,
        Symmetry::Dihedral,
        Symmetry::RotationPlusReversingReflection,
        Symmetry::DihedralPlusGlobalReversal,
    ] {
        let classes = hexagon_orientation_classes(s);
        println!("{s:?}: {}", classes.count);
        if s == Symmetry::RotationPlusReversingReflection {
            for rep in &classes.representatives {
                let arrows: String = rep.0.iter().map(|&e| if e { '>' } else { '<' }).collect();
                println!("  {arrows}");
            }
        }
    }
}
