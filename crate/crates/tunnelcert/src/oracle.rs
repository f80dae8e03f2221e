//! Brute-force and numeric cross-checks for the closed forms used elsewhere.
//!
//! Nothing in here is on the certification path; the tests and the
//! acceptance suite compare these against `geom`, `criteria` and
//! `blocking`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::geom::{GeomError, Horoball, Point2};
use crate::pattern::{
    BallBeamPattern, BallFile, BeamEndFile, BeamFile, LatticeFile, Offset, PatternFile, INFINITY_ID,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("need at least {min} integration steps (got {got})")]
    TooFewSteps { min: usize, got: usize },
}

pub const MIN_STEPS: usize = 1000;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, steps: usize) -> f64 {
    let n = steps + steps % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// `int_lo^hi dtheta / sin(theta)` for `0 < lo <= hi <= pi/2`, integrated in
/// `s = ln(theta)` so the blow-up near zero is resolved.
fn csc_integral(lo: f64, hi: f64, steps: usize) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    simpson(|s| s.exp() / s.exp().sin(), lo.ln(), hi.ln(), steps)
}

/// Boundary of `{inside(theta)}` on `[lo, hi]`, given which end is inside.
fn bisect(mut lo: f64, mut hi: f64, inside_at_lo: bool, inside: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid) == inside_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Hyperbolic length of the geodesic between two horoballs, found by
/// locating where the geodesic leaves each ball and integrating `ds / z`.
pub fn numeric_geodesic_length(
    h1: &Horoball,
    h2: &Horoball,
    steps: usize,
) -> Result<f64, OracleError> {
    if steps < MIN_STEPS {
        return Err(OracleError::TooFewSteps {
            min: MIN_STEPS,
            got: steps,
        });
    }
    match (*h1, *h2) {
        (Horoball::Infinity, Horoball::Infinity) => Err(GeomError::BothInfinity.into()),
        (Horoball::Finite { radius, .. }, Horoball::Infinity)
        | (Horoball::Infinity, Horoball::Finite { radius, .. }) => {
            let bottom = 2.0 * radius;
            if bottom > 1.0 {
                return Err(GeomError::OverlappingBalls {
                    separation: 1.0,
                    required: bottom,
                }
                .into());
            }
            // dz / z with z = e^s
            Ok(simpson(|_| 1.0, bottom.ln(), 0.0, steps))
        }
        (
            Horoball::Finite {
                center: c1,
                radius: r1,
            },
            Horoball::Finite {
                center: c2,
                radius: r2,
            },
        ) => {
            let d = c1.dist(c2);
            if d * d < 4.0 * r1 * r2 {
                return Err(GeomError::OverlappingBalls {
                    separation: d,
                    required: 2.0 * (r1 * r2).sqrt(),
                }
                .into());
            }
            let b = 0.5 * d;
            let u = (c2 - c1) * (1.0 / d);
            let m = (c1 + c2) * 0.5;
            let at = |theta: f64| -> (Point2, f64) { (m - u * (b * theta.cos()), b * theta.sin()) };
            let inside = |theta: f64, c: Point2, r: f64| {
                let (p, z) = at(theta);
                let q = p - c;
                q.dot(q) + (z - r) * (z - r) - r * r
            };
            let pi = std::f64::consts::PI;
            let theta1 = bisect(0.0, pi, true, |t| inside(t, c1, r1) < 0.0);
            let theta2 = bisect(0.0, pi, false, |t| inside(t, c2, r2) < 0.0);
            if theta1 >= theta2 {
                return Ok(0.0);
            }
            let half = 0.5 * pi;
            let len = if theta2 <= half {
                csc_integral(theta1, theta2, steps)
            } else if theta1 >= half {
                csc_integral(pi - theta2, pi - theta1, steps)
            } else {
                csc_integral(theta1, half, steps) + csc_integral(pi - theta2, half, steps)
            };
            Ok(len)
        }
    }
}

/// Which symmetries identify two orientation patterns on a hexagon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    RotationOnly,
    /// Rotations and reflections, arrows carried along unchanged.
    Dihedral,
    /// Rotations, and reflections that also reverse every arrow.
    RotationPlusReversingReflection,
    /// Dihedral group together with reversing all arrows at once.
    DihedralPlusGlobalReversal,
}

/// Orientation of each hexagon edge; `true` points from vertex `i` to
/// vertex `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedHexagon(pub [bool; 6]);

impl OrientedHexagon {
    fn from_bits(bits: u8) -> Self {
        Self(std::array::from_fn(|i| bits >> (5 - i) & 1 == 1))
    }

    fn rotate(self) -> Self {
        Self(std::array::from_fn(|i| self.0[(i + 1) % 6]))
    }

    /// Mirror through vertex 0: edge `i` lands on edge `5 - i`.
    fn mirror(self, reverse: bool) -> Self {
        Self(std::array::from_fn(|i| self.0[5 - i] ^ reverse))
    }

    fn reversed(self) -> Self {
        Self(self.0.map(|e| !e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HexagonClasses {
    pub count: usize,
    /// Lexicographically least member of each class, sorted.
    pub representatives: Vec<OrientedHexagon>,
}

pub fn hexagon_orientation_classes(symmetry: Symmetry) -> HexagonClasses {
    let generators: Vec<fn(OrientedHexagon) -> OrientedHexagon> = match symmetry {
        Symmetry::RotationOnly => vec![OrientedHexagon::rotate],
        Symmetry::Dihedral => vec![OrientedHexagon::rotate, |h| h.mirror(false)],
        Symmetry::RotationPlusReversingReflection => {
            vec![OrientedHexagon::rotate, |h| h.mirror(true)]
        }
        Symmetry::DihedralPlusGlobalReversal => vec![
            OrientedHexagon::rotate,
            |h| h.mirror(false),
            OrientedHexagon::reversed,
        ],
    };
    let mut seen = BTreeSet::new();
    let mut representatives = Vec::new();
    for bits in 0..64u8 {
        let start = OrientedHexagon::from_bits(bits);
        if seen.contains(&start) {
            continue;
        }
        let mut orbit = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(h) = stack.pop() {
            for g in &generators {
                let next = g(h);
                if orbit.insert(next) {
                    stack.push(next);
                }
            }
        }
        representatives.push(*orbit.iter().next().unwrap());
        seen.extend(orbit);
    }
    representatives.sort();
    HexagonClasses {
        count: representatives.len(),
        representatives,
    }
}

/// A blocked 4-bracelet `inf - a - c - b - inf` with blocking balls `e`, `f`
/// of radius 1/2 tangent to `c`, beamed to each other across `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalFourBracelet {
    pub g: f64,
    pub radius_a: f64,
    pub radius_c: f64,
    pub radius_e: f64,
    pub d_ac: f64,
    pub d_ce: f64,
    pub d_ae: f64,
    /// `d_ac^2 + d_ce^2 - d_ae^2`.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExtremalOutcome {
    Feasible(ExtremalFourBracelet),
    Infeasible { slack: f64 },
}

impl ExtremalOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, ExtremalOutcome::Feasible(_))
    }
}

/// Build the tightest blocked 4-bracelet at length `g`. Feasible iff the
/// right angle at `c` leaves `e` clear of `a`, up to `tol`.
pub fn extremal_four_bracelet(g: f64, tol: f64) -> ExtremalOutcome {
    let radius_e = 0.5;
    let radius_a = (-g).exp() / 2.0;
    let radius_c = radius_e * g.exp() / 4.0;
    let d_ac = 2.0 * (radius_a * radius_c * g.exp()).sqrt();
    let d_ce = 2.0 * (radius_c * radius_e).sqrt();
    let d_ae = 2.0 * (radius_a * radius_e).sqrt();
    let slack = d_ac * d_ac + d_ce * d_ce - d_ae * d_ae;
    if slack < -tol {
        return ExtremalOutcome::Infeasible { slack };
    }
    ExtremalOutcome::Feasible(ExtremalFourBracelet {
        g,
        radius_a,
        radius_c,
        radius_e,
        d_ac,
        d_ce,
        d_ae,
        slack,
    })
}

/// Bisect the feasibility of [`extremal_four_bracelet`] over `[lo, hi]`
/// (infeasible at `lo`, feasible at `hi`) down to width `width`.
pub fn extremal_feasibility_boundary(mut lo: f64, mut hi: f64, width: f64) -> f64 {
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if extremal_four_bracelet(mid, 0.0).is_feasible() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

impl ExtremalFourBracelet {
    /// The configuration as a one-cusp pattern on a 10x10 lattice, `c` in
    /// the middle, `a` and `b` on the x axis through `c`, `e` and `f` on the
    /// y axis.
    pub fn to_pattern(&self) -> BallBeamPattern {
        let (cx, cy) = (5.0, 5.0);
        let ball = |id: &str, x: f64, y: f64, radius: f64| BallFile {
            id: id.into(),
            center: [x, y],
            radius,
            cusp: 0,
        };
        let end = |id: &str| BeamEndFile {
            id: id.into(),
            offset: Offset::ZERO,
        };
        let beam = |a: &str, b: &str| BeamFile {
            a: end(a),
            b: end(b),
        };
        let file = PatternFile {
            version: 1,
            cusp_count: 1,
            orientable: true,
            lattice: LatticeFile {
                t1: [10.0, 0.0],
                t2: [0.0, 10.0],
            },
            g: self.g,
            epsilon: 0.01,
            completeness_radius: self.radius_c,
            balls: vec![
                ball("a", cx - self.d_ac, cy, self.radius_a),
                ball("b", cx + self.d_ac, cy, self.radius_a),
                ball("c", cx, cy, self.radius_c),
                ball("e", cx, cy + self.d_ce, self.radius_e),
                ball("f", cx, cy - self.d_ce, self.radius_e),
            ],
            beams: vec![
                beam("a", INFINITY_ID),
                beam("b", INFINITY_ID),
                beam("a", "c"),
                beam("c", "b"),
                beam("e", "f"),
            ],
        };
        BallBeamPattern::from_file(file).expect("extremal configuration is well formed")
    }
}
