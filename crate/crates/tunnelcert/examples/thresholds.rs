//! The three length thresholds, and how the 5-bracelet bound moves with the
//! radius of the end ball.
//!
//! ```text
//! cargo run --example thresholds
//! ```

use tunnelcert::criteria::{compute_thresholds, five_bracelet_min_g};

fn main() {
    let t = compute_thresholds();
    println!("4-bracelet  {:.10}", t.t4);
    println!("5-bracelet  {:.10}", t.t5);
    println!("elder       {:.10}", t.t_es);
    println!();
    for r in [0.5, 0.4, 0.3, 0.2, 0.1, 0.01, 1e-4, 1e-8] {
        println!(
            "r_e = {r:<8} min g = {:.10}",
            five_bracelet_min_g(r).unwrap()
        );
    }
}
