use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BallBeamPattern, BeamEnd, Offset};
use crate::geom::{balls_disjoint, beam_length, Contact};

/// Everything wrong with a pattern over a given offset window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub window: u32,
    pub tolerance: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Two translates of listed balls have overlapping interiors.
    Overlap {
        a: String,
        b: String,
        offset: Offset,
        separation: f64,
        required: f64,
    },
    /// A finite beam whose realized length differs from `g`.
    BeamLength {
        beam: usize,
        expected: f64,
        actual: f64,
    },
    /// A beam whose two end balls overlap, so it has no length at all.
    BeamOverlap { beam: usize },
    /// A ball carrying a vertical beam whose radius is not `e^{-g}/2`.
    VerticalRadius {
        beam: usize,
        id: String,
        radius: f64,
        expected: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overlap {
                a,
                b,
                offset,
                separation,
                required,
            } => write!(
                f,
                "balls `{a}` and `{b}`{:?} overlap: separation {separation} < {required}",
                (offset.0, offset.1)
            ),
            Violation::BeamLength {
                beam,
                expected,
                actual,
            } => write!(f, "beam {beam} has length {actual}, expected g = {expected}"),
            Violation::BeamOverlap { beam } => write!(f, "beam {beam} joins overlapping balls"),
            Violation::VerticalRadius {
                beam,
                id,
                radius,
                expected,
            } => write!(
                f,
                "beam {beam}: ball `{id}` has radius {radius}, a vertical beam of length g needs {expected}"
            ),
        }
    }
}

/// Check disjointness and beam lengths over the translates with offsets in
/// `[-window, window]^2`. Beams passing through third balls (ghost
/// intersections) are not violations.
pub fn validate_pattern(p: &BallBeamPattern, window: u32, tol: f64) -> ValidationReport {
    let mut violations = Vec::new();
    let balls = p.balls();

    for i in 0..balls.len() {
        let hi = p.concrete_ball(i, Offset::ZERO);
        for j in i..balls.len() {
            for o in Offset::grid(window) {
                if i == j && o <= Offset::ZERO {
                    continue;
                }
                let hj = p.concrete_ball(j, o);
                if balls_disjoint(&hi, &hj, tol) == Contact::Overlap {
                    let (ci, cj) = (hi.center().unwrap(), hj.center().unwrap());
                    violations.push(Violation::Overlap {
                        a: balls[i].id.clone(),
                        b: balls[j].id.clone(),
                        offset: o,
                        separation: ci.dist(cj),
                        required: 2.0 * (balls[i].radius * balls[j].radius).sqrt(),
                    });
                }
            }
        }
    }

    let g = p.g();
    let expected_radius = (-g).exp() / 2.0;
    for (k, beam) in p.beams().iter().enumerate() {
        match (beam.a, beam.b) {
            (BeamEnd::Ball { index, .. }, BeamEnd::Infinity)
            | (BeamEnd::Infinity, BeamEnd::Ball { index, .. }) => {
                let radius = balls[index].radius;
                if (radius - expected_radius).abs() > tol {
                    violations.push(Violation::VerticalRadius {
                        beam: k,
                        id: balls[index].id.clone(),
                        radius,
                        expected: expected_radius,
                    });
                }
            }
            (a, b) => match beam_length(&p.end_ball(a), &p.end_ball(b), tol) {
                Ok(actual) if (actual - g).abs() <= tol => {}
                Ok(actual) => violations.push(Violation::BeamLength {
                    beam: k,
                    expected: g,
                    actual,
                }),
                Err(_) => violations.push(Violation::BeamOverlap { beam: k }),
            },
        }
    }

    ValidationReport {
        window,
        tolerance: tol,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geom::{center_separation, DEFAULT_TOL};

    #[test]
    fn square_lattice_is_clean() {
        let report = validate_pattern(&fixtures::square_lattice(0.0), 2, DEFAULT_TOL);
        assert!(report.is_clean(), "{:?}", report.violations);
        let report = validate_pattern(&fixtures::square_lattice(0.2), 2, DEFAULT_TOL);
        assert!(report.is_clean(), "{:?}", report.violations);
    }

    #[test]
    fn moved_ball_overlaps() {
        // two-ball cell so that moving one ball changes a separation
        let p = fixtures::square_lattice_two_cell();
        assert!(validate_pattern(&p, 2, DEFAULT_TOL).is_clean());
        let mut f = p.to_file();
        f.balls[1].center[0] -= 0.1;
        let moved = BallBeamPattern::from_file(f).unwrap();
        let report = validate_pattern(&moved, 2, DEFAULT_TOL);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Overlap { .. })));
    }

    #[test]
    fn perturbed_beam_reports_length() {
        let p = fixtures::five_bracelet(0.1, 0.2);
        assert!(validate_pattern(&p, 2, DEFAULT_TOL).is_clean());
        let mut f = p.to_file();
        // push `b` (last ball) outward: its beam to `d` no longer has length g
        let d_index = f.balls.iter().position(|b| b.id == "d").unwrap();
        let b_index = f.balls.iter().position(|b| b.id == "b").unwrap();
        let rd = f.balls[d_index].radius;
        let rb = f.balls[b_index].radius;
        let expected_sep = center_separation(rd, rb, 0.1).unwrap();
        f.balls[b_index].center[0] += 0.05;
        let actual_sep = f.balls[b_index].center[0] - f.balls[d_index].center[0];
        assert!((actual_sep - expected_sep - 0.05).abs() < 1e-12);
        let bad = BallBeamPattern::from_file(f).unwrap();
        let report = validate_pattern(&bad, 2, DEFAULT_TOL);
        let named: Vec<_> = report
            .violations
            .iter()
            .filter_map(|v| match v {
                Violation::BeamLength { beam, actual, .. } => Some((*beam, *actual)),
                _ => None,
            })
            .collect();
        assert_eq!(named.len(), 1);
        let (beam, actual) = named[0];
        let ends = bad.beams()[beam];
        let ids: Vec<_> = [ends.a, ends.b]
            .iter()
            .filter_map(|e| e.index())
            .map(|i| bad.balls()[i].id.as_str())
            .collect();
        assert!(ids.contains(&"b") && ids.contains(&"d"));
        let recomputed = ((actual_sep / 2.0).powi(2) / (rd * rb)).ln();
        assert!((actual - recomputed).abs() < 1e-12);
    }

    #[test]
    fn vertical_radius_mismatch() {
        let mut f = fixtures::square_lattice(0.2).to_file();
        f.g = 0.25;
        let p = BallBeamPattern::from_file(f).unwrap();
        let report = validate_pattern(&p, 1, DEFAULT_TOL);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::VerticalRadius { .. })));
    }
}
