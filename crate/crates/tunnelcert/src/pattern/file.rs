use serde::{Deserialize, Serialize};

use super::Offset;

/// Id used in beam endpoints to name the horoball at infinity.
pub const INFINITY_ID: &str = "INF";

/// On-disk form of a pattern. Field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternFile {
    pub version: u32,
    pub cusp_count: u8,
    pub orientable: bool,
    pub lattice: LatticeFile,
    pub g: f64,
    pub epsilon: f64,
    pub completeness_radius: f64,
    pub balls: Vec<BallFile>,
    pub beams: Vec<BeamFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub t1: [f64; 2],
    pub t2: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallFile {
    pub id: String,
    pub center: [f64; 2],
    pub radius: f64,
    pub cusp: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamFile {
    pub a: BeamEndFile,
    pub b: BeamEndFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamEndFile {
    pub id: String,
    #[serde(default)]
    pub offset: Offset,
}
