//! Regenerate the JSON files under `fixtures/`.
//!
//! ```text
//! cargo run --example write_fixtures
//! ```

use std::path::Path;

use tunnelcert::fixtures;

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir)?;
    for (name, p) in fixtures::all() {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, p.to_json())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
