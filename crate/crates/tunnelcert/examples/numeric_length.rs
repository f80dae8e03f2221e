//! Compare the closed-form beam length against numeric integration of
//! `ds / z` along the geodesic.
//!
//! ```text
//! cargo run --release --example numeric_length
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tunnelcert::geom::{beam_length, Horoball, Point2, DEFAULT_TOL};
use tunnelcert::oracle::numeric_geodesic_length;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (r1, r2) = (rng.gen_range(0.01..=0.5), rng.gen_range(0.01..=0.5));
        let min = 2.0 * f64::sqrt(r1 * r2);
        let d = rng.gen_range(min..10.0);
        let h1 = Horoball::finite(Point2::new(0.0, 0.0), r1);
        let h2 = Horoball::finite(Point2::new(d, 0.0), r2);
        let closed = beam_length(&h1, &h2, DEFAULT_TOL).unwrap();
        let numeric = numeric_geodesic_length(&h1, &h2, 20_000).unwrap();
        worst = worst.max((closed - numeric).abs());
        println!("r1 {r1:.3}  r2 {r2:.3}  d {d:.3}  closed {closed:.12}  numeric {numeric:.12}");
    }
    println!("largest difference: {worst:.2e}");
}
