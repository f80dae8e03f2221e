//! Load a pattern file (or a built-in fixture) and list what is wrong
//! with it.
//!
//! ```text
//! cargo run --example validate_pattern -- fixtures/five_bracelet.json
//! ```

use tunnelcert::fixtures;
use tunnelcert::pattern::{validate_pattern, BallBeamPattern, DEFAULT_WINDOW};

fn main() {
    let pattern = match std::env::args().nth(1) {
        Some(path) => BallBeamPattern::parse(&std::fs::read(&path).expect("readable file"))
            .expect("well-formed pattern"),
        None => fixtures::five_bracelet(0.1, 0.2),
    };
    let report = validate_pattern(&pattern, DEFAULT_WINDOW, 1e-9);
    println!(
        "{} balls, {} beam orbits, g = {}",
        pattern.balls().len(),
        pattern.beams().len(),
        pattern.g()
    );
    if report.is_clean() {
        println!("clean over window {}", report.window);
    }
    for v in &report.violations {
        println!("{v}");
    }

    // push one ball so a beam no longer has length g
    let mut file = pattern.to_file();
    file.balls[0].center[0] += 0.01;
    let moved = BallBeamPattern::from_file(file).unwrap();
    println!("after moving `{}`:", moved.balls()[0].id);
    for v in validate_pattern(&moved, DEFAULT_WINDOW, 1e-9).violations {
        println!("  {v}");
    }
}
