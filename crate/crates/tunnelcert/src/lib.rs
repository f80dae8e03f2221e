//! Certify vertical geodesics in cusped hyperbolic 3-manifolds as
//! unknotting tunnels, working from a finite presentation of the
//! ball-and-beam pattern seen from one cusp.
//!
//! The pieces, bottom up: [`geom`] for horoball geometry in the upper
//! half-space, [`pattern`] for reading and validating patterns, [`graph`]
//! for bracelets through the ball at infinity, [`blocking`] for the wall
//! test, and [`criteria`] for the decision procedure and its certificates.
//! [`oracle`] holds independent numeric and brute-force checks.

pub mod blocking;
pub mod cli;
pub mod criteria;
pub mod fixtures;
pub mod geom;
pub mod graph;
pub mod json;
pub mod oracle;
pub mod pattern;

pub use criteria::{certify, Certificate, CertifyOptions, Rule, Verdict};
pub use pattern::BallBeamPattern;
