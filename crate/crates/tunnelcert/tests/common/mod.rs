//! Helpers shared by the property tests and the acceptance runner.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tunnelcert::pattern::{
    BallBeamPattern, BallFile, BeamEndFile, BeamFile, LatticeFile, Offset, PatternFile, INFINITY_ID,
};

fn end(id: &str, offset: Offset) -> BeamEndFile {
    BeamEndFile {
        id: id.into(),
        offset,
    }
}

/// A combinatorially random pattern; geometry is not checked, which is fine
/// for the graph-level properties below.
pub fn random_pattern(rng: &mut ChaCha8Rng) -> Option<BallBeamPattern> {
    let n = rng.gen_range(1..7);
    let balls: Vec<BallFile> = (0..n)
        .map(|i| BallFile {
            id: format!("b{i}"),
            center: [rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0)],
            // a few repeated sizes so ties occur
            radius: [0.5, 0.4, 0.25, 0.25, 0.1][rng.gen_range(0..5)],
            cusp: 0,
        })
        .collect();
    let mut beams = Vec::new();
    for b in &balls {
        if rng.gen_bool(0.35) {
            beams.push(BeamFile {
                a: end(&b.id, Offset::ZERO),
                b: end(INFINITY_ID, Offset::ZERO),
            });
        }
    }
    for _ in 0..rng.gen_range(0..2 * n) {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let o = Offset(rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        beams.push(BeamFile {
            a: end(&balls[i].id, Offset::ZERO),
            b: end(&balls[j].id, o),
        });
    }
    BallBeamPattern::from_file(PatternFile {
        version: 1,
        cusp_count: 1,
        orientable: true,
        lattice: LatticeFile {
            t1: [4.0, 0.0],
            t2: [0.0, 4.0],
        },
        g: 0.3,
        epsilon: 0.01,
        completeness_radius: 0.01,
        balls,
        beams,
    })
    .ok()
}
