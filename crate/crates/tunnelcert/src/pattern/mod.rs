//! Ball-and-beam patterns given as finite presentations.
//!
//! The infinite pattern in hyperbolic space is periodic under the peripheral
//! lattice of the cusp owning the ball at infinity. A [`BallBeamPattern`]
//! stores one representative per ball orbit and one [`BeamRef`] per beam
//! orbit, plus the geodesic length `g` and the radius down to which the ball
//! list is claimed to be complete.

mod file;
mod validate;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::geom::{balls_disjoint, Contact, Horoball, Point2, DEFAULT_TOL};

pub use file::{BallFile, BeamEndFile, BeamFile, LatticeFile, PatternFile, INFINITY_ID};
pub use validate::{validate_pattern, ValidationReport, Violation};

/// Default half-width of the offset window used by window-dependent checks.
pub const DEFAULT_WINDOW: u32 = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PatternError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format version {0} (expected 1)")]
    UnsupportedVersion(u32),
    #[error("cusp_count must be 1 or 2 (got {0})")]
    InvalidCuspCount(u8),
    #[error("lattice generators are not linearly independent")]
    DegenerateLattice,
    #[error("field `{0}` must be a finite number")]
    NonFinite(String),
    #[error("field `{field}` out of range: {value}")]
    OutOfRange { field: String, value: f64 },
    #[error("duplicate ball id `{0}`")]
    DuplicateBallId(String),
    #[error("ball id `{0}` is reserved for the horoball at infinity")]
    ReservedBallId(String),
    #[error("ball `{id}`: radius {radius} outside (0, 1/2]")]
    RadiusOutOfRange { id: String, radius: f64 },
    #[error("ball `{id}`: radius {radius} is below the truncation radius {epsilon}")]
    RadiusBelowEpsilon {
        id: String,
        radius: f64,
        epsilon: f64,
    },
    #[error("ball `{id}`: center is not in the fundamental parallelogram")]
    CenterNotCanonical { id: String },
    #[error("ball `{id}`: cusp {cusp} not below cusp_count")]
    CuspOutOfRange { id: String, cusp: u8 },
    #[error("beam {beam}: unknown ball id `{id}`")]
    UnknownBall { beam: usize, id: String },
    #[error("beam {beam}: offset not canonical (first endpoint must sit at [0, 0])")]
    NonCanonicalOffset { beam: usize },
    #[error("beam {beam}: joins the horoball at infinity to itself")]
    InfinityLoop { beam: usize },
    #[error("beam {beam}: joins a ball to itself")]
    SelfLoop { beam: usize },
    #[error("beam {beam}: duplicates an earlier beam orbit")]
    DuplicateBeam { beam: usize },
    #[error("beam {beam}: in a two-cusp pattern every beam must join cusp 0 to cusp 1")]
    CuspRule { beam: usize },
    #[error("tangency beams can only be inferred when g = 0 (g = {0})")]
    NonZeroLength(f64),
}

/// Integer coordinates of a peripheral lattice translation.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct Offset(pub i64, pub i64);

#[allow(clippy::should_implement_trait)]
impl Offset {
    pub const ZERO: Offset = Offset(0, 0);

    pub fn neg(self) -> Offset {
        Offset(-self.0, -self.1)
    }

    pub fn add(self, other: Offset) -> Offset {
        Offset(self.0 + other.0, self.1 + other.1)
    }

    pub fn sub(self, other: Offset) -> Offset {
        Offset(self.0 - other.0, self.1 - other.1)
    }

    /// Whether both coordinates lie in `[-window, window]`.
    pub fn within(self, window: u32) -> bool {
        let w = i64::from(window);
        self.0.abs() <= w && self.1.abs() <= w
    }

    /// All offsets of `[-window, window]^2` in lexicographic order.
    pub fn grid(window: u32) -> impl Iterator<Item = Offset> {
        let w = i64::from(window);
        (-w..=w).flat_map(move |m| (-w..=w).map(move |n| Offset(m, n)))
    }
}

/// Rank-2 lattice of parabolic translations fixing infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub t1: Point2,
    pub t2: Point2,
}

impl Lattice {
    pub fn new(t1: Point2, t2: Point2) -> Result<Self, PatternError> {
        if !(t1.is_finite() && t2.is_finite()) {
            return Err(PatternError::NonFinite("lattice".into()));
        }
        if t1.cross(t2).abs() <= DEFAULT_TOL {
            return Err(PatternError::DegenerateLattice);
        }
        Ok(Self { t1, t2 })
    }

    pub fn translation(&self, o: Offset) -> Point2 {
        self.t1 * o.0 as f64 + self.t2 * o.1 as f64
    }

    /// Coordinates of `p` in the basis `(t1, t2)`.
    pub fn coords(&self, p: Point2) -> (f64, f64) {
        let det = self.t1.cross(self.t2);
        (p.cross(self.t2) / det, self.t1.cross(p) / det)
    }

    pub fn area(&self) -> f64 {
        self.t1.cross(self.t2).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallEntry {
    pub id: String,
    pub center: Point2,
    pub radius: f64,
    pub cusp: u8,
}

/// One end of a beam orbit representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BeamEnd {
    Ball { index: usize, offset: Offset },
    Infinity,
}

impl BeamEnd {
    pub fn ball(index: usize, offset: Offset) -> Self {
        BeamEnd::Ball { index, offset }
    }

    pub fn offset(&self) -> Offset {
        match *self {
            BeamEnd::Ball { offset, .. } => offset,
            BeamEnd::Infinity => Offset::ZERO,
        }
    }

    pub fn index(&self) -> Option<usize> {
        match *self {
            BeamEnd::Ball { index, .. } => Some(index),
            BeamEnd::Infinity => None,
        }
    }
}

/// A lattice orbit of lifts of the vertical geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BeamRef {
    pub a: BeamEnd,
    pub b: BeamEnd,
}

impl BeamRef {
    pub fn vertical(index: usize) -> Self {
        BeamRef {
            a: BeamEnd::ball(index, Offset::ZERO),
            b: BeamEnd::Infinity,
        }
    }

    pub fn between(a: usize, b: usize, offset: Offset) -> Self {
        BeamRef {
            a: BeamEnd::ball(a, Offset::ZERO),
            b: BeamEnd::ball(b, offset),
        }
    }

    pub fn is_vertical(&self) -> bool {
        matches!(self.a, BeamEnd::Infinity) || matches!(self.b, BeamEnd::Infinity)
    }

    /// Translation-invariant key identifying the beam orbit.
    pub fn orbit_key(&self) -> (usize, Option<(usize, Offset)>) {
        match (self.a, self.b) {
            (BeamEnd::Ball { index, .. }, BeamEnd::Infinity)
            | (BeamEnd::Infinity, BeamEnd::Ball { index, .. }) => (index, None),
            (
                BeamEnd::Ball {
                    index: i,
                    offset: oi,
                },
                BeamEnd::Ball {
                    index: j,
                    offset: oj,
                },
            ) => {
                let fwd = (i, Some((j, oj.sub(oi))));
                let rev = (j, Some((i, oi.sub(oj))));
                fwd.min(rev)
            }
            (BeamEnd::Infinity, BeamEnd::Infinity) => (usize::MAX, None),
        }
    }
}

/// A ball of the developed pattern: orbit representative plus translation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcreteBall {
    pub index: usize,
    pub id: String,
    pub offset: Offset,
    pub ball: Horoball,
    pub cusp: u8,
}

/// A lift of the geodesic in the developed pattern. `orbit` indexes the
/// pattern's beam list; the translate places the orbit's `a` end at `shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConcreteBeam {
    pub orbit: usize,
    pub shift: Offset,
    pub a: BeamEnd,
    pub b: BeamEnd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub window: u32,
    pub balls: Vec<ConcreteBall>,
    pub beams: Vec<ConcreteBeam>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallBeamPattern {
    cusp_count: u8,
    orientable: bool,
    lattice: Lattice,
    balls: Vec<BallEntry>,
    beams: Vec<BeamRef>,
    g: f64,
    epsilon: f64,
    completeness_radius: f64,
    index: HashMap<String, usize>,
}

fn finite(field: &str, value: f64) -> Result<f64, PatternError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(PatternError::NonFinite(field.into()))
    }
}

impl BallBeamPattern {
    /// Parse the JSON pattern format and check every structural invariant.
    pub fn parse(bytes: &[u8]) -> Result<Self, PatternError> {
        let file: PatternFile =
            serde_json::from_slice(bytes).map_err(|e| PatternError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
        Self::from_file(file)
    }

    pub fn from_file(file: PatternFile) -> Result<Self, PatternError> {
        if file.version != 1 {
            return Err(PatternError::UnsupportedVersion(file.version));
        }
        if !(1..=2).contains(&file.cusp_count) {
            return Err(PatternError::InvalidCuspCount(file.cusp_count));
        }
        let lattice = Lattice::new(
            Point2::new(file.lattice.t1[0], file.lattice.t1[1]),
            Point2::new(file.lattice.t2[0], file.lattice.t2[1]),
        )?;
        let g = finite("g", file.g)?;
        if g < 0.0 {
            return Err(PatternError::OutOfRange {
                field: "g".into(),
                value: g,
            });
        }
        let epsilon = finite("epsilon", file.epsilon)?;
        if !(0.0..=0.5).contains(&epsilon) {
            return Err(PatternError::OutOfRange {
                field: "epsilon".into(),
                value: epsilon,
            });
        }
        let completeness_radius = finite("completeness_radius", file.completeness_radius)?;
        if completeness_radius <= 0.0 {
            return Err(PatternError::OutOfRange {
                field: "completeness_radius".into(),
                value: completeness_radius,
            });
        }

        let mut index = HashMap::new();
        let mut balls = Vec::with_capacity(file.balls.len());
        for (i, b) in file.balls.iter().enumerate() {
            if b.id == INFINITY_ID {
                return Err(PatternError::ReservedBallId(b.id.clone()));
            }
            if index.insert(b.id.clone(), i).is_some() {
                return Err(PatternError::DuplicateBallId(b.id.clone()));
            }
            let center = Point2::new(
                finite("center", b.center[0])?,
                finite("center", b.center[1])?,
            );
            let radius = finite("radius", b.radius)?;
            if !(radius > 0.0 && radius <= 0.5) {
                return Err(PatternError::RadiusOutOfRange {
                    id: b.id.clone(),
                    radius,
                });
            }
            if radius < epsilon {
                return Err(PatternError::RadiusBelowEpsilon {
                    id: b.id.clone(),
                    radius,
                    epsilon,
                });
            }
            let (u, v) = lattice.coords(center);
            let in_cell = |c: f64| (-DEFAULT_TOL..1.0 - DEFAULT_TOL).contains(&c);
            if !(in_cell(u) && in_cell(v)) {
                return Err(PatternError::CenterNotCanonical { id: b.id.clone() });
            }
            if b.cusp >= file.cusp_count {
                return Err(PatternError::CuspOutOfRange {
                    id: b.id.clone(),
                    cusp: b.cusp,
                });
            }
            balls.push(BallEntry {
                id: b.id.clone(),
                center,
                radius,
                cusp: b.cusp,
            });
        }

        let resolve = |beam: usize, end: &BeamEndFile| -> Result<BeamEnd, PatternError> {
            if end.id == INFINITY_ID {
                if end.offset != Offset::ZERO {
                    return Err(PatternError::NonCanonicalOffset { beam });
                }
                return Ok(BeamEnd::Infinity);
            }
            index
                .get(&end.id)
                .map(|&i| BeamEnd::ball(i, end.offset))
                .ok_or_else(|| PatternError::UnknownBall {
                    beam,
                    id: end.id.clone(),
                })
        };

        let mut beams = Vec::with_capacity(file.beams.len());
        let mut seen = BTreeSet::new();
        for (k, bf) in file.beams.iter().enumerate() {
            let beam = BeamRef {
                a: resolve(k, &bf.a)?,
                b: resolve(k, &bf.b)?,
            };
            match (beam.a, beam.b) {
                (BeamEnd::Infinity, BeamEnd::Infinity) => {
                    return Err(PatternError::InfinityLoop { beam: k })
                }
                (BeamEnd::Ball { offset, .. }, _) if offset != Offset::ZERO => {
                    return Err(PatternError::NonCanonicalOffset { beam: k })
                }
                (BeamEnd::Infinity, BeamEnd::Ball { offset, .. }) if offset != Offset::ZERO => {
                    return Err(PatternError::NonCanonicalOffset { beam: k })
                }
                (
                    BeamEnd::Ball {
                        index: i,
                        offset: oi,
                    },
                    BeamEnd::Ball {
                        index: j,
                        offset: oj,
                    },
                ) if i == j && oi == oj => return Err(PatternError::SelfLoop { beam: k }),
                _ => {}
            }
            if file.cusp_count == 2 {
                let cusp_of = |e: BeamEnd| match e {
                    BeamEnd::Infinity => 0,
                    BeamEnd::Ball { index, .. } => balls[index].cusp,
                };
                if cusp_of(beam.a) == cusp_of(beam.b) {
                    return Err(PatternError::CuspRule { beam: k });
                }
            }
            if !seen.insert(beam.orbit_key()) {
                return Err(PatternError::DuplicateBeam { beam: k });
            }
            beams.push(beam);
        }

        Ok(Self {
            cusp_count: file.cusp_count,
            orientable: file.orientable,
            lattice,
            balls,
            beams,
            g,
            epsilon,
            completeness_radius,
            index,
        })
    }

    pub fn to_file(&self) -> PatternFile {
        let end = |e: BeamEnd| match e {
            BeamEnd::Infinity => BeamEndFile {
                id: INFINITY_ID.to_string(),
                offset: Offset::ZERO,
            },
            BeamEnd::Ball { index, offset } => BeamEndFile {
                id: self.balls[index].id.clone(),
                offset,
            },
        };
        PatternFile {
            version: 1,
            cusp_count: self.cusp_count,
            orientable: self.orientable,
            lattice: LatticeFile {
                t1: [self.lattice.t1.x, self.lattice.t1.y],
                t2: [self.lattice.t2.x, self.lattice.t2.y],
            },
            g: self.g,
            epsilon: self.epsilon,
            completeness_radius: self.completeness_radius,
            balls: self
                .balls
                .iter()
                .map(|b| BallFile {
                    id: b.id.clone(),
                    center: [b.center.x, b.center.y],
                    radius: b.radius,
                    cusp: b.cusp,
                })
                .collect(),
            beams: self
                .beams
                .iter()
                .map(|b| BeamFile {
                    a: end(b.a),
                    b: end(b.b),
                })
                .collect(),
        }
    }

    /// Canonical serialization (17 significant digits, LF endings).
    pub fn to_json(&self) -> String {
        crate::json::to_canonical_string(&self.to_file())
    }

    /// SHA-256 of the canonical serialization, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    /// Same pattern with its beam list replaced.
    pub fn with_beams(&self, beams: Vec<BeamRef>) -> Result<Self, PatternError> {
        let mut file = self.to_file();
        let placeholder = self.clone();
        file.beams = beams
            .into_iter()
            .map(|b| {
                let end = |e: BeamEnd| match e {
                    BeamEnd::Infinity => BeamEndFile {
                        id: INFINITY_ID.to_string(),
                        offset: Offset::ZERO,
                    },
                    BeamEnd::Ball { index, offset } => BeamEndFile {
                        id: placeholder.balls[index].id.clone(),
                        offset,
                    },
                };
                BeamFile {
                    a: end(b.a),
                    b: end(b.b),
                }
            })
            .collect();
        Self::from_file(file)
    }

    pub fn cusp_count(&self) -> u8 {
        self.cusp_count
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn balls(&self) -> &[BallEntry] {
        &self.balls
    }

    pub fn beams(&self) -> &[BeamRef] {
        &self.beams
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn completeness_radius(&self) -> f64 {
        self.completeness_radius
    }

    pub fn ball_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// The translate of ball orbit `index` by `offset`.
    pub fn concrete_ball(&self, index: usize, offset: Offset) -> Horoball {
        let b = &self.balls[index];
        Horoball::finite(b.center + self.lattice.translation(offset), b.radius)
    }

    pub fn end_ball(&self, end: BeamEnd) -> Horoball {
        match end {
            BeamEnd::Infinity => Horoball::Infinity,
            BeamEnd::Ball { index, offset } => self.concrete_ball(index, offset),
        }
    }

    pub fn concrete(&self, index: usize, offset: Offset) -> ConcreteBall {
        let b = &self.balls[index];
        ConcreteBall {
            index,
            id: b.id.clone(),
            offset,
            ball: self.concrete_ball(index, offset),
            cusp: b.cusp,
        }
    }

    /// The orbit-`orbit` beam translated so its `a` end sits at `shift`.
    pub fn concrete_beam(&self, orbit: usize, shift: Offset) -> ConcreteBeam {
        let beam = self.beams[orbit];
        let move_end = |e: BeamEnd| match e {
            BeamEnd::Infinity => BeamEnd::Infinity,
            BeamEnd::Ball { index, offset } => BeamEnd::ball(index, offset.add(shift)),
        };
        ConcreteBeam {
            orbit,
            shift,
            a: move_end(beam.a),
            b: move_end(beam.b),
        }
    }

    /// Number of ball orbits with radius at least `rho`.
    pub fn orbits_at_least(&self, rho: f64) -> usize {
        self.balls.iter().filter(|b| b.radius >= rho).count()
    }

    /// Distinct radii (up to `tol`) among orbits with radius at least `rho`,
    /// largest first.
    pub fn radius_classes_at_least(&self, rho: f64, tol: f64) -> Vec<f64> {
        let mut radii: Vec<f64> = self
            .balls
            .iter()
            .map(|b| b.radius)
            .filter(|&r| r >= rho)
            .collect();
        radii.sort_by(|a, b| b.total_cmp(a));
        radii.dedup_by(|a, b| (*a - *b).abs() <= tol);
        radii
    }
}

/// Develop the lattice orbits over the offsets `[-window, window]^2`.
///
/// Balls come out ordered by id then offset; beams by orbit index then the
/// offset of their `a` end. There are `balls * (2w+1)^2` concrete balls and
/// `beams * (2w+1)^2` concrete beams.
pub fn expand_window(p: &BallBeamPattern, window: u32) -> Expansion {
    let mut order: Vec<usize> = (0..p.balls.len()).collect();
    order.sort_by(|&a, &b| p.balls[a].id.cmp(&p.balls[b].id));
    let balls = order
        .iter()
        .flat_map(|&i| Offset::grid(window).map(move |o| (i, o)))
        .map(|(i, o)| p.concrete(i, o))
        .collect();
    let beams = (0..p.beams.len())
        .flat_map(|k| Offset::grid(window).map(move |o| (k, o)))
        .map(|(k, o)| p.concrete_beam(k, o))
        .collect();
    Expansion {
        window,
        balls,
        beams,
    }
}

/// Recover the length-zero beams of a maximal-cusp pattern from its
/// tangencies: one [`BeamRef`] per lattice orbit of tangent pairs, plus one
/// vertical beam per ball of radius 1/2.
pub fn infer_tangency_beams(
    p: &BallBeamPattern,
    window: u32,
    tol: f64,
) -> Result<Vec<BeamRef>, PatternError> {
    if p.g.abs() > tol {
        return Err(PatternError::NonZeroLength(p.g));
    }
    let cusp_ok = |ci: u8, cj: u8| p.cusp_count == 1 || ci != cj;
    let mut order: Vec<usize> = (0..p.balls.len()).collect();
    order.sort_by(|&a, &b| p.balls[a].id.cmp(&p.balls[b].id));

    let mut out = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let bi = &p.balls[i];
        if (2.0 * bi.radius - 1.0).abs() <= tol && cusp_ok(bi.cusp, 0) {
            out.push(BeamRef::vertical(i));
        }
        let hi = p.concrete_ball(i, Offset::ZERO);
        for &j in &order[pos..] {
            if !cusp_ok(bi.cusp, p.balls[j].cusp) {
                continue;
            }
            for o in Offset::grid(window) {
                if i == j && o <= Offset::ZERO {
                    continue;
                }
                let hj = p.concrete_ball(j, o);
                if balls_disjoint(&hi, &hj, tol) == Contact::Tangent {
                    out.push(BeamRef::between(i, j, o));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn minimal_file_parses() {
        let text = r#"{
  "version": 1, "cusp_count": 1, "orientable": true,
  "lattice": {"t1": [1, 0], "t2": [0, 1]},
  "g": 0, "epsilon": 0.01, "completeness_radius": 0.5,
  "balls": [{"id": "a", "center": [0, 0], "radius": 0.5, "cusp": 0}],
  "beams": [{"a": {"id": "a", "offset": [0, 0]}, "b": {"id": "INF", "offset": [0, 0]}}]
}"#;
        let p = BallBeamPattern::parse(text.as_bytes()).unwrap();
        assert_eq!(p.balls().len(), 1);
        assert_eq!(p.beams().len(), 1);
        assert!(p.beams()[0].is_vertical());
    }

    #[test]
    fn radius_above_half_rejected() {
        let mut f = fixtures::square_lattice(0.0).to_file();
        f.balls[0].radius = 0.6;
        assert!(matches!(
            BallBeamPattern::from_file(f),
            Err(PatternError::RadiusOutOfRange { .. })
        ));
    }

    #[test]
    fn two_cusp_beam_between_cusp_one_balls_rejected() {
        let mut f = fixtures::two_cusp_chain().to_file();
        // add a second cusp-1 ball and beam the two cusp-1 balls together
        f.balls.push(BallFile {
            id: "z".into(),
            center: [0.5, 0.5],
            radius: 0.01,
            cusp: 1,
        });
        f.beams.push(BeamFile {
            a: BeamEndFile {
                id: "a".into(),
                offset: Offset::ZERO,
            },
            b: BeamEndFile {
                id: "z".into(),
                offset: Offset::ZERO,
            },
        });
        assert!(matches!(
            BallBeamPattern::from_file(f),
            Err(PatternError::CuspRule { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = BallBeamPattern::parse(b"{\n  \"version\": 1,\n  oops\n}").unwrap_err();
        match err {
            PatternError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn structural_rejections() {
        let base = fixtures::square_lattice(0.0).to_file();

        let mut f = base.clone();
        f.balls.push(f.balls[0].clone());
        assert!(matches!(
            BallBeamPattern::from_file(f),
            Err(PatternError::DuplicateBallId(_))
        ));

        let mut f = base.clone();
        f.beams[1].a.offset = Offset(1, 0);
        assert!(matches!(
            BallBeamPattern::from_file(f),
            Err(PatternError::NonCanonicalOffset { .. })
        ));

        let mut f = base.clone();
        f.balls[0].center = [1.2, 0.0];
        assert!(matches!(
            BallBeamPattern::from_file(f),
            Err(PatternError::CenterNotCanonical { .. })
        ));

        let mut f = base.clone();
        f.beams.push(BeamFile {
            a: f.beams[1].b.clone(),
            b: BeamEndFile {
                id: "a".into(),
                offset: Offset(2, 0),
            },
        });
        f.beams.last_mut().unwrap().a.offset = Offset::ZERO;
        // a -> a(+1,0) again, written from the other end: same orbit
        f.beams.last_mut().unwrap().b.offset = Offset(-1, 0);
        assert!(matches!(
            BallBeamPattern::from_file(f),
            Err(PatternError::DuplicateBeam { .. })
        ));

        let mut f = base.clone();
        f.lattice.t2 = [2.0, 0.0];
        assert!(matches!(
            BallBeamPattern::from_file(f),
            Err(PatternError::DegenerateLattice)
        ));

        let mut f = base;
        f.version = 2;
        assert!(matches!(
            BallBeamPattern::from_file(f),
            Err(PatternError::UnsupportedVersion(2))
        ));
    }

    #[test]
    fn canonical_serialization_is_byte_stable() {
        for (_, p) in fixtures::all() {
            let text = p.to_json();
            let again = BallBeamPattern::parse(text.as_bytes()).unwrap();
            assert_eq!(again.to_json(), text);
            assert!(!text.contains('\r'));
        }
    }

    #[test]
    fn expansion_counts() {
        let one = fixtures::single_vertical_ball();
        assert_eq!(expand_window(&one, 0).balls.len(), 1);
        assert_eq!(expand_window(&one, 1).balls.len(), 9);

        let two = fixtures::ball_pair_with_beam();
        let ex = expand_window(&two, 1);
        assert_eq!(ex.balls.len(), 18);
        assert_eq!(ex.beams.len(), 9);
        // ordered by id, then lexicographic offset
        assert_eq!(ex.balls[0].id, "a");
        assert_eq!(ex.balls[0].offset, Offset(-1, -1));
        assert_eq!(ex.balls[9].id, "b");
        assert_eq!(ex.balls[17].offset, Offset(1, 1));
    }

    #[test]
    fn tangency_inference_square_lattice() {
        let p = fixtures::square_lattice(0.0);
        let bare = p.with_beams(Vec::new()).unwrap();
        let beams = infer_tangency_beams(&bare, 2, DEFAULT_TOL).unwrap();
        assert_eq!(beams.len(), 3);
        assert_eq!(beams.iter().filter(|b| b.is_vertical()).count(), 1);
        let mut offsets: Vec<_> = beams
            .iter()
            .filter(|b| !b.is_vertical())
            .map(|b| b.b.offset())
            .collect();
        offsets.sort();
        assert_eq!(offsets, vec![Offset(0, 1), Offset(1, 0)]);
    }

    #[test]
    fn tangency_inference_lone_small_ball() {
        let p = fixtures::lone_small_ball();
        assert!(infer_tangency_beams(&p, 2, DEFAULT_TOL).unwrap().is_empty());
    }

    #[test]
    fn tangency_inference_dedups_pair_orbit() {
        let p = fixtures::tangent_pair_wide_lattice();
        let beams = infer_tangency_beams(&p, 2, DEFAULT_TOL).unwrap();
        let finite: Vec<_> = beams.iter().filter(|b| !b.is_vertical()).collect();
        assert_eq!(finite.len(), 1);
        assert_eq!(beams.len(), 3);
    }

    #[test]
    fn tangency_inference_requires_zero_length() {
        let p = fixtures::square_lattice(0.2);
        assert!(matches!(
            infer_tangency_beams(&p, 2, DEFAULT_TOL),
            Err(PatternError::NonZeroLength(_))
        ));
    }

    #[test]
    fn finitely_many_sizes_above_threshold() {
        let p = fixtures::five_bracelet(0.1, 0.2);
        for rho in [0.05, 0.1, 0.2, 0.3, 0.5] {
            let direct = p.balls().iter().filter(|b| b.radius >= rho).count();
            assert_eq!(p.orbits_at_least(rho), direct);
            assert!(p.radius_classes_at_least(rho, DEFAULT_TOL).len() <= direct);
        }
        assert_eq!(p.radius_classes_at_least(0.0, DEFAULT_TOL).len(), 2);
    }
}
