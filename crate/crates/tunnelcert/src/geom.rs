//! Closed-form geometry of horoballs and geodesic arcs in the upper
//! half-space model.
//!
//! Everything here works in the fixed frame where the horoball at infinity
//! is the half-space `z >= 1`. A finite horoball is a Euclidean ball of
//! radius `r` resting on the boundary plane at `center`, so its top sits at
//! height `2r` and it stays clear of the ball at infinity iff `r <= 1/2`.

use std::f64::consts::LN_2;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default geometric tolerance used for tangency and incidence decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("heights must satisfy z1 >= z2 > 0 (got z1 = {z1}, z2 = {z2})")]
    InvalidHeights { z1: f64, z2: f64 },
    #[error("horoball interiors overlap (center separation {separation}, tangency at {required})")]
    OverlappingBalls { separation: f64, required: f64 },
    #[error("both endpoints are the horoball at infinity")]
    BothInfinity,
    #[error("radius must be positive and finite (got {0})")]
    InvalidRadius(f64),
    #[error("length must be non-negative and finite (got {0})")]
    InvalidLength(f64),
    #[error("length {0} exceeds ln 2; the blocking bound is vacuous there")]
    BeyondLn2(f64),
}

/// A point of the boundary plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Self) -> Self {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Self) -> Self {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Self {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horoball {
    Finite { center: Point2, radius: f64 },
    Infinity,
}

impl Horoball {
    pub fn finite(center: Point2, radius: f64) -> Self {
        Horoball::Finite { center, radius }
    }

    pub fn radius(&self) -> Option<f64> {
        match *self {
            Horoball::Finite { radius, .. } => Some(radius),
            Horoball::Infinity => None,
        }
    }

    pub fn center(&self) -> Option<Point2> {
        match *self {
            Horoball::Finite { center, .. } => Some(center),
            Horoball::Infinity => None,
        }
    }

    /// Height of the upper hemisphere above `p`, if `p` lies under the ball.
    pub fn surface_height(&self, p: Point2) -> Option<f64> {
        match *self {
            Horoball::Finite { center, radius } => {
                let rho2 = (p - center).dot(p - center);
                let r2 = radius * radius;
                (rho2 <= r2).then(|| radius + (r2 - rho2).sqrt())
            }
            Horoball::Infinity => None,
        }
    }
}

/// How two horoballs sit relative to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Contact {
    Disjoint,
    Tangent,
    Overlap,
}

/// The geodesic joining the centers of two horoballs, together with the
/// sub-arc lying outside both balls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeodesicArc {
    /// Vertical ray above `foot`, clipped to heights `[bottom, top]`.
    Vertical { foot: Point2, bottom: f64, top: f64 },
    /// Semicircle of Euclidean radius `radius` over the segment joining the
    /// two centers. Points are addressed by the signed offset `t` from
    /// `center` along the unit vector `direction`; the clipped span is
    /// `span.0 <= t <= span.1`.
    Semicircle {
        center: Point2,
        radius: f64,
        direction: Point2,
        span: (f64, f64),
    },
}

impl GeodesicArc {
    /// True when the clipped part collapses to a single point (tangent balls).
    pub fn is_degenerate(&self) -> bool {
        match *self {
            GeodesicArc::Vertical { bottom, top, .. } => bottom >= top,
            GeodesicArc::Semicircle { span, .. } => span.0 >= span.1,
        }
    }

    /// Euclidean height of the semicircle at offset `t` (zero outside it).
    pub fn height_at(&self, t: f64) -> f64 {
        match *self {
            GeodesicArc::Semicircle { radius, .. } => (radius * radius - t * t).max(0.0).sqrt(),
            GeodesicArc::Vertical { top, .. } => top,
        }
    }

    pub fn point_at(&self, t: f64) -> Point2 {
        match *self {
            GeodesicArc::Semicircle {
                center, direction, ..
            } => center + direction * t,
            GeodesicArc::Vertical { foot, .. } => foot,
        }
    }

    /// The two ends of the clipped span as `(boundary point, height)`.
    pub fn span_endpoints(&self) -> [(Point2, f64); 2] {
        match *self {
            GeodesicArc::Vertical { foot, bottom, top } => [(foot, bottom), (foot, top)],
            GeodesicArc::Semicircle { span, .. } => [
                (self.point_at(span.0), self.height_at(span.0)),
                (self.point_at(span.1), self.height_at(span.1)),
            ],
        }
    }
}

/// Hyperbolic length of the vertical segment between heights `z1 >= z2 > 0`.
pub fn vertical_distance(z1: f64, z2: f64) -> Result<f64, GeomError> {
    if !(z2 > 0.0 && z1 >= z2 && z1.is_finite()) {
        return Err(GeomError::InvalidHeights { z1, z2 });
    }
    Ok((z1 / z2).ln())
}

/// Classify two horoballs as disjoint, tangent or overlapping.
///
/// Finite pairs compare the center separation against `2 sqrt(r1 r2)`;
/// a finite ball against infinity compares `2r` against the plane at 1.
/// Differences within `tol` count as tangency.
pub fn balls_disjoint(h1: &Horoball, h2: &Horoball, tol: f64) -> Contact {
    let slack = match (*h1, *h2) {
        (
            Horoball::Finite {
                center: c1,
                radius: r1,
            },
            Horoball::Finite {
                center: c2,
                radius: r2,
            },
        ) => c1.dist(c2) - 2.0 * (r1 * r2).sqrt(),
        (Horoball::Finite { radius, .. }, Horoball::Infinity)
        | (Horoball::Infinity, Horoball::Finite { radius, .. }) => 1.0 - 2.0 * radius,
        (Horoball::Infinity, Horoball::Infinity) => return Contact::Overlap,
    };
    classify_slack(slack, tol)
}

fn classify_slack(slack: f64, tol: f64) -> Contact {
    if slack.abs() <= tol {
        Contact::Tangent
    } else if slack > 0.0 {
        Contact::Disjoint
    } else {
        Contact::Overlap
    }
}

fn tangency_separation(h1: &Horoball, h2: &Horoball) -> (f64, f64) {
    match (*h1, *h2) {
        (
            Horoball::Finite {
                center: c1,
                radius: r1,
            },
            Horoball::Finite {
                center: c2,
                radius: r2,
            },
        ) => (c1.dist(c2), 2.0 * (r1 * r2).sqrt()),
        (Horoball::Finite { radius, .. }, _) | (_, Horoball::Finite { radius, .. }) => {
            (1.0, 2.0 * radius)
        }
        _ => (0.0, 0.0),
    }
}

/// Hyperbolic length of the geodesic segment between two horoballs.
///
/// For finite balls this is `ln(b^2 / (r1 r2))` with `b` half the center
/// separation; against infinity it is `-ln(2r)`. Tangent balls (within
/// `tol`) give exactly zero.
pub fn beam_length(h1: &Horoball, h2: &Horoball, tol: f64) -> Result<f64, GeomError> {
    if matches!((h1, h2), (Horoball::Infinity, Horoball::Infinity)) {
        return Err(GeomError::BothInfinity);
    }
    match balls_disjoint(h1, h2, tol) {
        Contact::Tangent => Ok(0.0),
        Contact::Overlap => {
            let (separation, required) = tangency_separation(h1, h2);
            Err(GeomError::OverlappingBalls {
                separation,
                required,
            })
        }
        Contact::Disjoint => Ok(match (*h1, *h2) {
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
                let b = 0.5 * c1.dist(c2);
                (b * b / (r1 * r2)).ln()
            }
            (Horoball::Finite { radius, .. }, _) | (_, Horoball::Finite { radius, .. }) => {
                -(2.0 * radius).ln()
            }
            _ => unreachable!(),
        }),
    }
}

/// Center separation of two horoballs joined by a geodesic of length `g`.
pub fn center_separation(r1: f64, r2: f64, g: f64) -> Result<f64, GeomError> {
    for r in [r1, r2] {
        if !(r > 0.0 && r.is_finite()) {
            return Err(GeomError::InvalidRadius(r));
        }
    }
    if !(g >= 0.0 && g.is_finite()) {
        return Err(GeomError::InvalidLength(g));
    }
    Ok(2.0 * (r1 * r2 * g.exp()).sqrt())
}

/// The geodesic through both centers, clipped to the part outside both balls.
pub fn beam_arc(h1: &Horoball, h2: &Horoball, tol: f64) -> Result<GeodesicArc, GeomError> {
    let contact = balls_disjoint(h1, h2, tol);
    match (*h1, *h2) {
        (Horoball::Infinity, Horoball::Infinity) => Err(GeomError::BothInfinity),
        _ if contact == Contact::Overlap => {
            let (separation, required) = tangency_separation(h1, h2);
            Err(GeomError::OverlappingBalls {
                separation,
                required,
            })
        }
        (Horoball::Finite { center, radius }, Horoball::Infinity)
        | (Horoball::Infinity, Horoball::Finite { center, radius }) => {
            let bottom = if contact == Contact::Tangent {
                1.0
            } else {
                2.0 * radius
            };
            Ok(GeodesicArc::Vertical {
                foot: center,
                bottom,
                top: 1.0,
            })
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
            let b = 0.5 * d;
            let direction = (c2 - c1) * (1.0 / d);
            let mid = (c1 + c2) * 0.5;
            let span = if contact == Contact::Tangent {
                // Tangency point sits at height 2 r1 r2 / (r1 + r2).
                let t = b * (r1 - r2) / (r1 + r2);
                (t, t)
            } else {
                let b2 = b * b;
                let t1 = b * (r1 * r1 - b2) / (b2 + r1 * r1);
                let t2 = b * (b2 - r2 * r2) / (b2 + r2 * r2);
                (t1, t2)
            };
            Ok(GeodesicArc::Semicircle {
                center: mid,
                radius: b,
                direction,
                span,
            })
        }
    }
}

/// Lower bound on the ratio between the larger blocking ball and the
/// smallest ball of a blocked bracelet, `(2 + sqrt(4 - e^{2g})) / e^g`.
///
/// Defined for `0 <= g <= ln 2`; it decreases from `2 + sqrt 3` to 1.
pub fn min_blocking_ratio(g: f64) -> Result<f64, GeomError> {
    if g.is_nan() || g < 0.0 {
        return Err(GeomError::InvalidLength(g));
    }
    if g > LN_2 {
        return Err(GeomError::BeyondLn2(g));
    }
    let eg = g.exp();
    let disc = (4.0 - eg * eg).max(0.0);
    Ok((2.0 + disc.sqrt()) / eg)
}
