//! Is a bracelet blocked?
//!
//! The disk tested is the vertical wall standing over the polyline through
//! the bracelet's finite ball centers, from the bracelet body up to the
//! plane `z = 1`. A beam of the pattern blocks the bracelet when its
//! clipped arc crosses that wall an odd number of times.

use serde::Serialize;
use thiserror::Error;

use crate::geom::{beam_arc, min_blocking_ratio, GeodesicArc, GeomError, Horoball, Point2};
use crate::graph::Bracelet;
use crate::pattern::{BallBeamPattern, BeamEnd, ConcreteBeam, Offset};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlockingError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(
        "blocking pair with larger radius {larger_radius} is below the lower bound {bound} \
         (ratio {ratio} times smallest bracelet radius {min_radius})"
    )]
    RadiusBoundViolation {
        larger_radius: f64,
        bound: f64,
        ratio: f64,
        min_radius: f64,
    },
}

/// The vertical wall over a bracelet.
#[derive(Debug, Clone, PartialEq)]
pub struct Wall {
    vertices: Vec<Point2>,
    radii: Vec<f64>,
    /// Arclength at each vertex, starting from 0.
    stations: Vec<f64>,
}

impl Wall {
    pub fn new(b: &Bracelet) -> Self {
        let vertices = b.centers();
        let radii = b
            .balls
            .iter()
            .map(|x| x.ball.radius().expect("bracelet balls are finite"))
            .collect();
        let mut stations = vec![0.0];
        for w in vertices.windows(2) {
            let last = *stations.last().unwrap();
            stations.push(last + w[0].dist(w[1]));
        }
        Self {
            vertices,
            radii,
            stations,
        }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn length(&self) -> f64 {
        *self.stations.last().unwrap()
    }

    /// Lower edge of the wall at `x`, a point of segment `k`.
    pub fn envelope_on_segment(&self, k: usize, x: Point2) -> f64 {
        let (a, b) = (self.vertices[k], self.vertices[k + 1]);
        let half = 0.5 * a.dist(b);
        let m = (a + b) * 0.5;
        let rho2 = (x - m).dot(x - m);
        let beam = (half * half - rho2).max(0.0).sqrt();
        let hemi = |c: Point2, r: f64| Horoball::finite(c, r).surface_height(x).unwrap_or(0.0);
        beam.max(hemi(a, self.radii[k]))
            .max(hemi(b, self.radii[k + 1]))
    }

    /// Point and envelope height at arclength `s` along the polyline.
    pub fn at(&self, s: f64) -> (Point2, f64) {
        let s = s.clamp(0.0, self.length());
        let k = match self.stations[1..].iter().position(|&st| s <= st) {
            Some(k) => k,
            None => self.vertices.len() - 2,
        };
        let seg = self.stations[k + 1] - self.stations[k];
        let frac = if seg > 0.0 {
            (s - self.stations[k]) / seg
        } else {
            0.0
        };
        let x = self.vertices[k] + (self.vertices[k + 1] - self.vertices[k]) * frac;
        (x, self.envelope_on_segment(k, x))
    }

    /// Axis-aligned bounding box of the polyline, grown by `margin`.
    pub fn bounds(&self, margin: f64) -> SearchBound {
        let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            min = Point2::new(min.x.min(v.x), min.y.min(v.y));
            max = Point2::new(max.x.max(v.x), max.y.max(v.y));
        }
        let grow = Point2::new(margin, margin);
        SearchBound {
            min: min - grow,
            max: max + grow,
        }
    }
}

/// Height of the wall's lower edge at arclength `s` along the bracelet's
/// polyline.
pub fn wall_envelope_height(b: &Bracelet, s: f64) -> f64 {
    Wall::new(b).at(s).1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchBound {
    pub min: Point2,
    pub max: Point2,
}

impl SearchBound {
    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

/// A transversal crossing of a beam through the wall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub point: Point2,
    pub height: f64,
    pub envelope: f64,
    /// Polyline segment (or, for a crossing through a vertex, the segment
    /// leaving it).
    pub segment: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    /// The arc meets the wall at its lower envelope or at `z = 1`.
    Tangential,
    /// The arc's projection touches a polyline vertex without crossing.
    Vertex,
    /// The arc passes over an end of the polyline, on the wall's side edge.
    WallEdge,
    /// The arc meets the wall right where it leaves one of its balls.
    SpanEnd,
    /// The arc's projection runs along a polyline segment.
    Collinear,
    /// A vertical beam standing inside the wall.
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Puncture {
    Crossings(Vec<Crossing>),
    Degenerate { kind: Degeneracy, at: Point2 },
}

enum Hit {
    Miss,
    Cross(f64),
    Degenerate(Degeneracy),
}

struct ArcFrame {
    m: Point2,
    u: Point2,
    radius: f64,
    span: (f64, f64),
}

impl ArcFrame {
    fn degenerate(&self) -> bool {
        self.span.0 >= self.span.1
    }

    fn height(&self, t: f64) -> f64 {
        (self.radius * self.radius - t * t).max(0.0).sqrt()
    }

    /// Whether parameter `t` is on the clipped arc, near its ends, or off it.
    fn locate(&self, t: f64, tol: f64) -> Option<(f64, bool)> {
        if self.degenerate() {
            let t0 = self.span.0;
            return ((t - t0).abs() <= tol).then(|| (self.height(t0), false));
        }
        if t < self.span.0 - tol || t > self.span.1 + tol {
            return None;
        }
        let near_end = t < self.span.0 + tol || t > self.span.1 - tol;
        Some((self.height(t), near_end))
    }

    fn classify(&self, t: f64, envelope: f64, tol: f64) -> Hit {
        let Some((h, near_end)) = self.locate(t, tol) else {
            return Hit::Miss;
        };
        let in_wall = h >= envelope - tol && h <= 1.0 + tol;
        if near_end {
            return if in_wall {
                Hit::Degenerate(Degeneracy::SpanEnd)
            } else {
                Hit::Miss
            };
        }
        if h > envelope + tol && h < 1.0 - tol {
            Hit::Cross(h)
        } else if in_wall {
            Hit::Degenerate(Degeneracy::Tangential)
        } else {
            Hit::Miss
        }
    }

    fn touches(&self, t: f64, envelope: f64, tol: f64) -> bool {
        self.locate(t, tol)
            .is_some_and(|(h, _)| h >= envelope - tol && h <= 1.0 + tol)
    }
}

/// Transversal crossings of a clipped beam arc through the wall, or the
/// first degenerate contact found.
pub fn beam_punctures_wall(arc: &GeodesicArc, wall: &Wall, tol: f64) -> Puncture {
    let vs = wall.vertices();
    let last = vs.len() - 1;
    let frame = match *arc {
        GeodesicArc::Vertical { foot, bottom, top } => {
            for k in 0..last {
                let (a, b) = (vs[k], vs[k + 1]);
                if segment_distance(foot, a, b) <= tol {
                    let env = wall.envelope_on_segment(k, foot);
                    if top >= env - tol && bottom <= 1.0 + tol {
                        return Puncture::Degenerate {
                            kind: Degeneracy::Vertical,
                            at: foot,
                        };
                    }
                }
            }
            return Puncture::Crossings(Vec::new());
        }
        GeodesicArc::Semicircle {
            center,
            radius,
            direction,
            span,
        } => ArcFrame {
            m: center,
            u: direction,
            radius,
            span,
        },
    };

    let sigma: Vec<f64> = vs.iter().map(|&v| frame.u.cross(v - frame.m)).collect();
    let param = |p: Point2| frame.u.dot(p - frame.m);
    let on: Vec<bool> = sigma.iter().map(|s| s.abs() <= tol).collect();
    let mut crossings = Vec::new();

    for k in 0..last {
        let (a, b) = (vs[k], vs[k + 1]);
        if on[k] && on[k + 1] {
            let (ta, tb) = (param(a), param(b));
            let (lo, hi) = (ta.min(tb), ta.max(tb));
            let (s0, s1) = (
                frame.span.0.min(frame.span.1),
                frame.span.1.max(frame.span.0),
            );
            if s0 <= hi + tol && s1 >= lo - tol {
                let t = s0.clamp(lo, hi);
                return Puncture::Degenerate {
                    kind: Degeneracy::Collinear,
                    at: frame.m + frame.u * t,
                };
            }
            continue;
        }
        if on[k] || on[k + 1] || (sigma[k] > 0.0) == (sigma[k + 1] > 0.0) {
            continue;
        }
        let x = a + (b - a) * (sigma[k] / (sigma[k] - sigma[k + 1]));
        let env = wall.envelope_on_segment(k, x);
        match frame.classify(param(x), env, tol) {
            Hit::Miss => {}
            Hit::Cross(height) => crossings.push(Crossing {
                point: x,
                height,
                envelope: env,
                segment: k,
            }),
            Hit::Degenerate(kind) => return Puncture::Degenerate { kind, at: x },
        }
    }

    for k in 0..=last {
        let collinear_neighbour = (k > 0 && on[k - 1]) || (k < last && on[k + 1]);
        if !on[k] || collinear_neighbour {
            continue;
        }
        let v = vs[k];
        let env = 2.0 * wall.radii[k];
        let t = param(v);
        if k == 0 || k == last {
            if frame.touches(t, env, tol) {
                return Puncture::Degenerate {
                    kind: Degeneracy::WallEdge,
                    at: v,
                };
            }
            continue;
        }
        if (sigma[k - 1] > 0.0) == (sigma[k + 1] > 0.0) {
            if frame.touches(t, env, tol) {
                return Puncture::Degenerate {
                    kind: Degeneracy::Vertex,
                    at: v,
                };
            }
            continue;
        }
        match frame.classify(t, env, tol) {
            Hit::Miss => {}
            Hit::Cross(height) => crossings.push(Crossing {
                point: v,
                height,
                envelope: env,
                segment: k,
            }),
            Hit::Degenerate(kind) => return Puncture::Degenerate { kind, at: v },
        }
    }
    crossings.sort_by_key(|c| c.segment);
    Puncture::Crossings(crossings)
}

fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let s = if len2 > 0.0 {
        ((p - a).dot(ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    p.dist(a + ab * s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockingPair {
    pub beam: ConcreteBeam,
    pub larger_radius: f64,
    pub crossings: Vec<Crossing>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndeterminateContact {
    pub beam: ConcreteBeam,
    pub kind: Degeneracy,
    pub at: Point2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NotBlocked {
    pub search_bound: SearchBound,
    pub beams_scanned: usize,
    /// Radius any unlisted blocking ball would need; absent when `g >= ln 2`.
    pub required_blocker_radius: Option<f64>,
    /// Whether the ball list is complete down to `required_blocker_radius`.
    pub unconditional: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlockingVerdict {
    Blocked(BlockingPair),
    NotBlocked(NotBlocked),
    Indeterminate(Vec<IndeterminateContact>),
}

/// Every concrete beam of `p` with both ends inside `bound`, in canonical
/// order (orbit index, then shift).
pub fn beams_within(p: &BallBeamPattern, bound: &SearchBound) -> Vec<ConcreteBeam> {
    let lattice = p.lattice();
    let corners = [
        bound.min,
        Point2::new(bound.max.x, bound.min.y),
        Point2::new(bound.min.x, bound.max.y),
        bound.max,
    ];
    let mut out = Vec::new();
    for (orbit, beam) in p.beams().iter().enumerate() {
        let anchor = match (beam.a, beam.b) {
            (BeamEnd::Ball { index, .. }, _) | (_, BeamEnd::Ball { index, .. }) => index,
            _ => continue,
        };
        let base = p.balls()[anchor].center;
        let (mut lo0, mut hi0, mut lo1, mut hi1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for c in corners {
            let (u, v) = lattice.coords(c - base);
            lo0 = lo0.min(u);
            hi0 = hi0.max(u);
            lo1 = lo1.min(v);
            hi1 = hi1.max(v);
        }
        for s0 in lo0.floor() as i64..=hi0.ceil() as i64 {
            for s1 in lo1.floor() as i64..=hi1.ceil() as i64 {
                let cb = p.concrete_beam(orbit, Offset(s0, s1));
                let inside = [cb.a, cb.b].iter().all(|&e| match p.end_ball(e) {
                    Horoball::Finite { center, .. } => bound.contains(center),
                    Horoball::Infinity => true,
                });
                if inside {
                    out.push(cb);
                }
            }
        }
    }
    out
}

fn larger_radius(p: &BallBeamPattern, beam: &ConcreteBeam) -> f64 {
    [beam.a, beam.b]
        .iter()
        .map(|&e| p.end_ball(e).radius().unwrap_or(0.5))
        .fold(0.0, f64::max)
}

/// Look for a beam puncturing the wall over `b`.
///
/// Vertical beams standing on the bracelet's own balls run from the
/// bracelet body to infinity, both part of the disk's boundary, and are not
/// tested.
pub fn find_blocking(
    b: &Bracelet,
    p: &BallBeamPattern,
    tol: f64,
) -> Result<BlockingVerdict, BlockingError> {
    let g = p.g();
    let wall = Wall::new(b);
    let bound = wall.bounds((0.5 * g).exp());
    let candidates = beams_within(p, &bound);
    let own: Vec<(usize, Offset)> = b.beams.iter().map(|x| (x.orbit, x.shift)).collect();
    let mut indeterminate = Vec::new();
    let mut scanned = 0;
    let mut blocked = None;

    for beam in candidates {
        if own.contains(&(beam.orbit, beam.shift)) {
            continue;
        }
        let on_bracelet = |e: BeamEnd| match e {
            BeamEnd::Ball { index, offset } => b.contains(index, offset),
            BeamEnd::Infinity => false,
        };
        let vertical = beam.a == BeamEnd::Infinity || beam.b == BeamEnd::Infinity;
        if vertical && (on_bracelet(beam.a) || on_bracelet(beam.b)) {
            continue;
        }
        scanned += 1;
        let arc = beam_arc(&p.end_ball(beam.a), &p.end_ball(beam.b), tol)?;
        match beam_punctures_wall(&arc, &wall, tol) {
            Puncture::Degenerate { kind, at } => {
                indeterminate.push(IndeterminateContact { beam, kind, at })
            }
            Puncture::Crossings(crossings) => {
                if crossings.len() % 2 == 1 && blocked.is_none() {
                    blocked = Some(BlockingPair {
                        beam,
                        larger_radius: larger_radius(p, &beam),
                        crossings,
                    });
                }
            }
        }
    }

    if !indeterminate.is_empty() {
        return Ok(BlockingVerdict::Indeterminate(indeterminate));
    }
    if let Some(pair) = blocked {
        if g <= std::f64::consts::LN_2 && !check_lemma34(b, &pair, g, tol)? {
            let ratio = min_blocking_ratio(g)?;
            return Err(BlockingError::RadiusBoundViolation {
                larger_radius: pair.larger_radius,
                bound: ratio * b.min_radius,
                ratio,
                min_radius: b.min_radius,
            });
        }
        return Ok(BlockingVerdict::Blocked(pair));
    }
    let required_blocker_radius = if g < std::f64::consts::LN_2 {
        Some(min_blocking_ratio(g)? * b.min_radius)
    } else {
        None
    };
    let unconditional =
        required_blocker_radius.is_some_and(|need| p.completeness_radius() <= need + tol);
    Ok(BlockingVerdict::NotBlocked(NotBlocked {
        search_bound: bound,
        beams_scanned: scanned,
        required_blocker_radius,
        unconditional,
    }))
}

/// Whether the blocking pair is at least as large as the radius bound
/// requires.
pub fn check_lemma34(
    b: &Bracelet,
    pair: &BlockingPair,
    g: f64,
    tol: f64,
) -> Result<bool, GeomError> {
    let ratio = min_blocking_ratio(g)?;
    Ok(pair.larger_radius >= ratio * b.min_radius - tol)
}
