//! Horoball geometry in the upper half-space: lengths, separations, arcs.
//!
//! ```text
//! cargo run --example geometry
//! ```

use tunnelcert::geom::{
    beam_arc, beam_length, center_separation, min_blocking_ratio, Horoball, Point2, DEFAULT_TOL,
};

fn main() {
    let a = Horoball::finite(Point2::new(0.0, 0.0), 0.25);
    let b = Horoball::finite(Point2::new(1.0, 0.0), 0.25);
    let g = beam_length(&a, &b, DEFAULT_TOL).unwrap();
    println!(
        "quarter balls one apart: length {g:.12} (ln 4 = {:.12})",
        4f64.ln()
    );
    println!(
        "small ball to infinity:  length {:.12}",
        beam_length(
            &Horoball::finite(Point2::default(), 0.125),
            &Horoball::Infinity,
            DEFAULT_TOL
        )
        .unwrap()
    );

    for g in [0.0, 0.1, 0.5] {
        let d = center_separation(0.5, 0.3, g).unwrap();
        println!("r = 0.5, 0.3 at length {g}: centers {d:.9} apart");
    }

    let arc = beam_arc(&a, &b, DEFAULT_TOL).unwrap();
    let [(p, z0), (q, z1)] = arc.span_endpoints();
    println!("clipped arc runs from {p} at height {z0:.6} to {q} at height {z1:.6}");

    for g in [0.0, 0.2, 2f64.sqrt().ln(), 2f64.ln()] {
        println!(
            "blocking ratio at g = {g:.6}: {:.9}",
            min_blocking_ratio(g).unwrap()
        );
    }
}
