//! Small hand-built patterns used by the examples, the tests and the files
//! under `fixtures/`. They are geometric configurations, not horoball
//! diagrams of particular manifolds.

use crate::geom::center_separation;
use crate::oracle::{extremal_four_bracelet, ExtremalOutcome};
use crate::pattern::{
    BallBeamPattern, BallFile, BeamEndFile, BeamFile, LatticeFile, Offset, PatternFile, INFINITY_ID,
};

struct Builder {
    file: PatternFile,
}

impl Builder {
    fn new(cusp_count: u8, t1: [f64; 2], t2: [f64; 2], g: f64) -> Self {
        Self {
            file: PatternFile {
                version: 1,
                cusp_count,
                orientable: true,
                lattice: LatticeFile { t1, t2 },
                g,
                epsilon: 0.01,
                completeness_radius: 0.01,
                balls: Vec::new(),
                beams: Vec::new(),
            },
        }
    }

    fn completeness(mut self, radius: f64) -> Self {
        self.file.completeness_radius = radius;
        self
    }

    fn ball(mut self, id: &str, center: [f64; 2], radius: f64, cusp: u8) -> Self {
        self.file.balls.push(BallFile {
            id: id.into(),
            center,
            radius,
            cusp,
        });
        self
    }

    fn vertical(mut self, id: &str) -> Self {
        self.file.beams.push(BeamFile {
            a: BeamEndFile {
                id: id.into(),
                offset: Offset::ZERO,
            },
            b: BeamEndFile {
                id: INFINITY_ID.into(),
                offset: Offset::ZERO,
            },
        });
        self
    }

    fn beam(mut self, a: &str, b: &str, offset: Offset) -> Self {
        self.file.beams.push(BeamFile {
            a: BeamEndFile {
                id: a.into(),
                offset: Offset::ZERO,
            },
            b: BeamEndFile {
                id: b.into(),
                offset,
            },
        });
        self
    }

    fn build(self) -> BallBeamPattern {
        BallBeamPattern::from_file(self.file).expect("fixture is structurally valid")
    }
}

/// One ball per cell of a square lattice, each tangent to infinity at length
/// `g` and joined to its four neighbours by beams of length `g`.
///
/// The radius is `e^{-g}/2` and the period `e^{-g/2}`; `g = 0` gives the
/// lattice of tangent half-unit balls.
pub fn square_lattice(g: f64) -> BallBeamPattern {
    let r = (-g).exp() / 2.0;
    let period = center_separation(r, r, g).unwrap();
    Builder::new(1, [period, 0.0], [0.0, period], g)
        .completeness(r)
        .ball("a", [0.0, 0.0], r, 0)
        .vertical("a")
        .beam("a", "a", Offset(1, 0))
        .beam("a", "a", Offset(0, 1))
        .build()
}

/// The `g = 0` square lattice presented with a 2x1 cell holding two balls.
pub fn square_lattice_two_cell() -> BallBeamPattern {
    Builder::new(1, [2.0, 0.0], [0.0, 1.0], 0.0)
        .completeness(0.5)
        .ball("a", [0.0, 0.0], 0.5, 0)
        .ball("b", [1.0, 0.0], 0.5, 0)
        .vertical("a")
        .vertical("b")
        .beam("a", "b", Offset::ZERO)
        .beam("b", "a", Offset(1, 0))
        .beam("a", "a", Offset(0, 1))
        .beam("b", "b", Offset(0, 1))
        .build()
}

/// One half-unit ball at the origin with its vertical beam, `g = 0`.
pub fn single_vertical_ball() -> BallBeamPattern {
    Builder::new(1, [1.0, 0.0], [0.0, 1.0], 0.0)
        .completeness(0.5)
        .ball("a", [0.0, 0.0], 0.5, 0)
        .vertical("a")
        .build()
}

/// Two tangent half-unit balls in a 3x3 cell joined by one beam.
pub fn ball_pair_with_beam() -> BallBeamPattern {
    Builder::new(1, [3.0, 0.0], [0.0, 3.0], 0.0)
        .ball("a", [0.0, 0.0], 0.5, 0)
        .ball("b", [1.0, 0.0], 0.5, 0)
        .beam("a", "b", Offset::ZERO)
        .build()
}

/// A single quarter-radius ball per unit cell, touching nothing.
pub fn lone_small_ball() -> BallBeamPattern {
    Builder::new(1, [1.0, 0.0], [0.0, 1.0], 0.0)
        .ball("a", [0.0, 0.0], 0.25, 0)
        .build()
}

/// Two tangent half-unit balls in a 3x3 cell, no beams listed.
pub fn tangent_pair_wide_lattice() -> BallBeamPattern {
    Builder::new(1, [3.0, 0.0], [0.0, 3.0], 0.0)
        .ball("a", [0.0, 0.0], 0.5, 0)
        .ball("b", [1.0, 0.0], 0.5, 0)
        .build()
}

/// A straight 5-bracelet `inf - a - c - d - b - inf` at length `g`, with the
/// two middle balls of radius `rc`. Its only cycle through infinity has
/// five horoballs.
pub fn five_bracelet(g: f64, rc: f64) -> BallBeamPattern {
    let ra = (-g).exp() / 2.0;
    let ac = center_separation(ra, rc, g).unwrap();
    let cd = center_separation(rc, rc, g).unwrap();
    let (y, xa) = (2.5, 1.0);
    let xc = xa + ac;
    let xd = xc + cd;
    let xb = xd + ac;
    Builder::new(1, [5.0, 0.0], [0.0, 5.0], g)
        .completeness(rc)
        .ball("a", [xa, y], ra, 0)
        .ball("b", [xb, y], ra, 0)
        .ball("c", [xc, y], rc, 0)
        .ball("d", [xd, y], rc, 0)
        .vertical("a")
        .vertical("b")
        .beam("a", "c", Offset::ZERO)
        .beam("c", "d", Offset::ZERO)
        .beam("d", "b", Offset::ZERO)
        .build()
}

/// A ball hanging from infinity plus a pair of equal small balls beamed only
/// to each other. There is no bracelet, and the pair has no elder sibling
/// chain.
pub fn isolated_equal_pair(g: f64) -> BallBeamPattern {
    let ra = (-g).exp() / 2.0;
    let rp = 0.1;
    let pq = center_separation(rp, rp, g).unwrap();
    Builder::new(1, [2.0, 0.0], [0.0, 2.0], g)
        .ball("a", [0.5, 0.5], ra, 0)
        .ball("p", [1.2, 1.2], rp, 0)
        .ball("q", [1.2 + pq, 1.2], rp, 0)
        .vertical("a")
        .beam("p", "q", Offset::ZERO)
        .build()
}

/// Two-cusp pattern at `g = 0`: cusp-1 balls `a` hang from infinity and
/// alternate with cusp-0 balls `b` along the x axis, so
/// `inf - a - b - a(1,0) - inf` is a 4-bracelet.
pub fn two_cusp_chain() -> BallBeamPattern {
    Builder::new(2, [2.0, 0.0], [0.0, 1.0], 0.0)
        .completeness(0.5)
        .ball("a", [0.0, 0.0], 0.5, 1)
        .ball("b", [1.0, 0.0], 0.5, 0)
        .vertical("a")
        .beam("a", "b", Offset::ZERO)
        .beam("b", "a", Offset(1, 0))
        .build()
}

/// The blocked 4-bracelet at the feasibility boundary `g = ln sqrt 2`.
pub fn extremal_four_bracelet_pattern() -> BallBeamPattern {
    match extremal_four_bracelet(std::f64::consts::SQRT_2.ln(), crate::geom::DEFAULT_TOL) {
        ExtremalOutcome::Feasible(config) => config.to_pattern(),
        ExtremalOutcome::Infeasible { .. } => unreachable!("boundary configuration is feasible"),
    }
}

/// Named fixtures, in the order they are written to `fixtures/`.
pub fn all() -> Vec<(&'static str, BallBeamPattern)> {
    vec![
        ("square_lattice", square_lattice(0.0)),
        ("square_lattice_g02", square_lattice(0.2)),
        ("five_bracelet", five_bracelet(0.1, 0.2)),
        ("isolated_pair", isolated_equal_pair(0.2)),
        ("two_cusp_chain", two_cusp_chain()),
        ("extremal_four_bracelet", extremal_four_bracelet_pattern()),
    ]
}
