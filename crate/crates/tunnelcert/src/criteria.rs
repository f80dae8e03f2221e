//! The certification pipeline: threshold constants, the elder sibling
//! check, and `certify`, which tries each sufficient condition in turn and
//! writes down a certificate that can be checked again from the pattern.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocking::{find_blocking, BlockingError, BlockingVerdict, SearchBound};
use crate::geom::DEFAULT_TOL;
use crate::graph::{bracelet_from_cycle, enumerate_bracelets, Bracelet, CycleEntry};
use crate::pattern::{BallBeamPattern, BeamEnd, Offset, DEFAULT_WINDOW, INFINITY_ID};

pub const TOOL_NAME: &str = "tunnelcert";
pub const DEFAULT_N_MAX: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriteriaError {
    #[error("radius {0} outside (0, 1/2]")]
    Domain(f64),
    #[error("no sign change of the boundary equation on [0, ln 2] (r_e = {0})")]
    Bracket(f64),
    #[error(transparent)]
    Blocking(#[from] BlockingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub t4: f64,
    pub t5: f64,
    pub t_es: f64,
}

/// Feasibility slack of a blocked 5-bracelet at length `g` with end-ball
/// radius `r_e`; the smallest root in `g` is the threshold.
///
/// `a` hangs from infinity, `c` is as large as the blocking bound allows,
/// and `x` is the foot of the perpendicular from `e` to the line through
/// `a` and `c`. The result is `d(a,e)^2 - 2 r_e e^{-g}`.
pub fn five_bracelet_slack(g: f64, r_e: f64) -> f64 {
    let eg = g.exp();
    let r_c = r_e * eg / (2.0 + (4.0 - eg * eg).max(0.0).sqrt());
    let d_ac = (2.0 * r_c).sqrt();
    let d_cx = r_c * (0.5 * g).exp();
    let d_ex = r_e * (0.5 * g).exp();
    let d_ax = d_ac + d_cx;
    d_ax * d_ax + d_ex * d_ex - 2.0 * r_e / eg
}

/// Least `g` in `[0, ln 2]` at which a blocked 5-bracelet with end-ball
/// radius `r_e` can exist, by bisection to 1e-13.
pub fn five_bracelet_min_g(r_e: f64) -> Result<f64, CriteriaError> {
    if !(r_e > 0.0 && r_e <= 0.5) {
        return Err(CriteriaError::Domain(r_e));
    }
    let (mut lo, mut hi) = (0.0, LN_2);
    if five_bracelet_slack(lo, r_e) >= 0.0 {
        return Ok(0.0);
    }
    if five_bracelet_slack(hi, r_e) < 0.0 {
        return Err(CriteriaError::Bracket(r_e));
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if five_bracelet_slack(mid, r_e) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn compute_thresholds() -> Thresholds {
    Thresholds {
        t4: SQRT_2.ln(),
        t5: five_bracelet_min_g(0.5).expect("root is bracketed at r_e = 1/2"),
        t_es: LN_2,
    }
}

/// One step of an elder sibling chain. The last link is the horoball at
/// infinity, which has no radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub id: String,
    pub offset: Offset,
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElderReport {
    pub verified: bool,
    /// Ball id to its chain, which starts at the ball (offset zero).
    pub chains: BTreeMap<String, Vec<ChainLink>>,
    pub failures: Vec<String>,
}

/// Check that every ball orbit reaches infinity through beams to strictly
/// larger balls.
pub fn elder_sibling_check(p: &BallBeamPattern, tol: f64) -> ElderReport {
    let balls = p.balls();
    let mut order: Vec<usize> = (0..balls.len()).collect();
    order.sort_by(|&a, &b| {
        balls[b]
            .radius
            .total_cmp(&balls[a].radius)
            .then_with(|| balls[a].id.cmp(&balls[b].id))
    });

    // neighbours of each orbit: (other orbit, offset of the other relative to this one)
    let mut links: Vec<Vec<(usize, Offset)>> = vec![Vec::new(); balls.len()];
    let mut vertical = vec![false; balls.len()];
    for beam in p.beams() {
        match (beam.a, beam.b) {
            (BeamEnd::Ball { index, .. }, BeamEnd::Infinity)
            | (BeamEnd::Infinity, BeamEnd::Ball { index, .. }) => vertical[index] = true,
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
                links[i].push((j, oj.sub(oi)));
                links[j].push((i, oi.sub(oj)));
            }
            _ => {}
        }
    }

    let key = |chain: &[ChainLink]| -> Vec<(String, Offset)> {
        chain.iter().map(|l| (l.id.clone(), l.offset)).collect()
    };
    let mut chains: Vec<Option<Vec<ChainLink>>> = vec![None; balls.len()];
    for &i in &order {
        let me = ChainLink {
            id: balls[i].id.clone(),
            offset: Offset::ZERO,
            radius: Some(balls[i].radius),
        };
        if vertical[i] {
            chains[i] = Some(vec![
                me,
                ChainLink {
                    id: INFINITY_ID.into(),
                    offset: Offset::ZERO,
                    radius: None,
                },
            ]);
            continue;
        }
        let mut best: Option<Vec<ChainLink>> = None;
        for &(j, d) in &links[i] {
            if balls[j].radius <= balls[i].radius + tol {
                continue;
            }
            let Some(tail) = &chains[j] else { continue };
            let candidate: Vec<ChainLink> = std::iter::once(me.clone())
                .chain(tail.iter().map(|l| ChainLink {
                    offset: if l.radius.is_some() {
                        l.offset.add(d)
                    } else {
                        Offset::ZERO
                    },
                    ..l.clone()
                }))
                .collect();
            let better = match &best {
                None => true,
                Some(b) => (candidate.len(), key(&candidate)) < (b.len(), key(b)),
            };
            if better {
                best = Some(candidate);
            }
        }
        chains[i] = best;
    }

    let mut failures: Vec<String> = order
        .iter()
        .filter(|&&i| chains[i].is_none())
        .map(|&i| balls[i].id.clone())
        .collect();
    failures.sort();
    let chains: BTreeMap<String, Vec<ChainLink>> = chains
        .into_iter()
        .enumerate()
        .filter_map(|(i, c)| c.map(|c| (balls[i].id.clone(), c)))
        .collect();
    ElderReport {
        verified: failures.is_empty(),
        chains,
        failures,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub n_max: usize,
    pub window: u32,
    pub tol: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            n_max: DEFAULT_N_MAX,
            window: DEFAULT_WINDOW,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    Prop4,
    Prop5,
    Prop6,
    ElderSibling,
    DirectDisk,
}

impl Rule {
    pub const ALL: [Rule; 5] = [
        Rule::Prop4,
        Rule::Prop5,
        Rule::Prop6,
        Rule::ElderSibling,
        Rule::DirectDisk,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Tunnel,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BraceletWitness {
    pub n: usize,
    pub cycle: Vec<CycleEntry>,
    pub min_radius: f64,
}

impl BraceletWitness {
    fn of(b: &Bracelet) -> Self {
        Self {
            n: b.n,
            cycle: b.cycle(),
            min_radius: b.min_radius,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundWitness {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl From<SearchBound> for BoundWitness {
    fn from(b: SearchBound) -> Self {
        Self {
            min: [b.min.x, b.min.y],
            max: [b.max.x, b.max.y],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskWitness {
    pub search_bound: BoundWitness,
    pub beams_scanned: usize,
    pub required_blocker_radius: f64,
    pub completeness_radius: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Witness {
    pub g: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    pub window: u32,
    pub n_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracelet: Option<BraceletWitness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chains: Option<BTreeMap<String, Vec<ChainLink>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk: Option<DiskWitness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reasons: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elder_failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conditions {
    pub completeness_radius: f64,
    pub epsilon: f64,
    pub cusp_count: u8,
    pub orientable: bool,
    pub g_treated_as_zero: bool,
    pub hypotheses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleReport {
    pub rule: Rule,
    pub applicable: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub tolerance: f64,
    pub input_sha256: String,
    pub n_max: usize,
    pub window: u32,
    pub thresholds: Thresholds,
    pub applicable_rules: Vec<Rule>,
    pub rule_reports: Vec<RuleReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub rule: Option<Rule>,
    pub witness: Witness,
    pub conditions: Conditions,
    pub metadata: Metadata,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        crate::json::to_canonical_string(self)
    }

    pub fn is_tunnel(&self) -> bool {
        self.verdict == Verdict::Tunnel
    }
}

const HYP_MANIFOLD: &str =
    "the pattern is the ball-and-beam pattern of a maximal cusp and a vertical geodesic of a finite-volume hyperbolic 3-manifold";
const HYP_PARITY: &str =
    "a beam blocks a bracelet when it crosses the vertical wall over the bracelet an odd number of times";

fn completeness_hypothesis(radius: f64) -> String {
    format!(
        "every ball orbit of radius at least {} is listed, with every beam between listed balls",
        crate::json::format_sig(radius, 17)
    )
}

fn orientable_hypothesis() -> String {
    "the manifold is orientable (asserted by the input)".into()
}

struct Evaluation {
    report: RuleReport,
    witness: Witness,
}

fn base_witness(p: &BallBeamPattern, opts: &CertifyOptions) -> Witness {
    Witness {
        g: p.g(),
        window: opts.window,
        n_max: opts.n_max,
        ..Witness::default()
    }
}

fn below(g: f64, t: f64, tol: f64) -> bool {
    g < t - tol
}

/// Run every rule on `p` and report the first that certifies a tunnel.
pub fn certify(p: &BallBeamPattern, opts: &CertifyOptions) -> Result<Certificate, CriteriaError> {
    let tol = opts.tol;
    let g = p.g();
    let thresholds = compute_thresholds();
    let bracelets = enumerate_bracelets(p, opts.n_max, opts.window);
    let elder = elder_sibling_check(p, tol);
    let g_is_zero = g.abs() <= tol;

    let first = |pred: &dyn Fn(&Bracelet) -> bool| bracelets.iter().find(|b| pred(b));
    let mut evals = Vec::with_capacity(5);

    // Prop4
    {
        let mut w = base_witness(p, opts);
        w.threshold = Some(thresholds.t4);
        let found = first(&|b| b.n == 4);
        let ok = found.is_some() && below(g, thresholds.t4, tol);
        let detail = match (found, ok) {
            (Some(b), true) => {
                format!("4-bracelet found and g < {}", fmt(thresholds.t4)) + &cycle_note(b)
            }
            (None, _) => "no 4-bracelet through infinity within the search window".into(),
            (Some(_), false) => format!(
                "4-bracelet found but g = {} is not below {}",
                fmt(g),
                fmt(thresholds.t4)
            ),
        };
        w.bracelet = found.map(BraceletWitness::of);
        evals.push(Evaluation {
            report: RuleReport {
                rule: Rule::Prop4,
                applicable: ok,
                detail,
            },
            witness: w,
        });
    }

    // Prop5
    {
        let mut w = base_witness(p, opts);
        w.threshold = Some(thresholds.t5);
        let found = first(&|b| b.n == 4 || b.n == 5);
        let one_cusp = p.cusp_count() == 1;
        let ok = one_cusp && found.is_some() && below(g, thresholds.t5, tol);
        let detail = if !one_cusp {
            "stated for one-cusped manifolds only".to_string()
        } else {
            match (found, ok) {
                (Some(b), true) => {
                    format!("{}-bracelet found and g < {}", b.n, fmt(thresholds.t5))
                        + &cycle_note(b)
                }
                (None, _) => "no 4- or 5-bracelet through infinity within the search window".into(),
                (Some(b), false) => format!(
                    "{}-bracelet found but g = {} is not below {}",
                    b.n,
                    fmt(g),
                    fmt(thresholds.t5)
                ),
            }
        };
        w.bracelet = found.map(BraceletWitness::of);
        evals.push(Evaluation {
            report: RuleReport {
                rule: Rule::Prop5,
                applicable: ok,
                detail,
            },
            witness: w,
        });
    }

    // Prop6
    {
        let mut w = base_witness(p, opts);
        w.threshold = Some(0.0);
        let found = first(&|b| (4..=6).contains(&b.n));
        let ok = p.orientable() && g_is_zero && found.is_some();
        let detail = if !p.orientable() {
            "input is not marked orientable".to_string()
        } else if !g_is_zero {
            format!("g = {} is not zero", fmt(g))
        } else {
            match found {
                Some(b) => format!("{}-bracelet found at g = 0", b.n) + &cycle_note(b),
                None => "no bracelet with 4 to 6 balls within the search window".into(),
            }
        };
        w.bracelet = found.map(BraceletWitness::of);
        evals.push(Evaluation {
            report: RuleReport {
                rule: Rule::Prop6,
                applicable: ok,
                detail,
            },
            witness: w,
        });
    }

    // ElderSibling
    {
        let mut w = base_witness(p, opts);
        w.threshold = Some(thresholds.t_es);
        let short = below(g, thresholds.t_es, tol);
        let ok = short && elder.verified;
        let detail = if !short {
            format!("g = {} is not below {}", fmt(g), fmt(thresholds.t_es))
        } else if elder.verified {
            format!(
                "all {} ball orbits have elder sibling chains",
                elder.chains.len()
            )
        } else {
            format!("no elder sibling chain for: {}", elder.failures.join(", "))
        };
        if ok {
            w.chains = Some(elder.chains.clone());
        }
        evals.push(Evaluation {
            report: RuleReport {
                rule: Rule::ElderSibling,
                applicable: ok,
                detail,
            },
            witness: w,
        });
    }

    // DirectDisk
    {
        let mut w = base_witness(p, opts);
        let candidates: Vec<&Bracelet> = bracelets.iter().filter(|b| b.n >= 4).collect();
        let verdicts: Vec<Result<BlockingVerdict, BlockingError>> = candidates
            .par_iter()
            .map(|b| find_blocking(b, p, tol))
            .collect();
        let (mut blocked, mut indeterminate, mut conditional) = (0, 0, 0);
        let mut hit = None;
        for (b, v) in candidates.iter().zip(verdicts) {
            match v? {
                BlockingVerdict::Blocked(_) => blocked += 1,
                BlockingVerdict::Indeterminate(_) => indeterminate += 1,
                BlockingVerdict::NotBlocked(nb) if nb.unconditional => {
                    if hit.is_none() {
                        hit = Some((*b, nb));
                    }
                }
                BlockingVerdict::NotBlocked(_) => conditional += 1,
            }
        }
        let ok = hit.is_some();
        let detail = match &hit {
            Some((b, _)) => format!("unblocked {}-bracelet", b.n) + &cycle_note(b),
            None => format!(
                "{} bracelets with at least 4 balls: {blocked} blocked, {indeterminate} indeterminate, \
                 {conditional} unblocked only if the ball list extends below completeness_radius",
                candidates.len()
            ),
        };
        if let Some((b, nb)) = hit {
            w.bracelet = Some(BraceletWitness::of(b));
            w.disk = Some(DiskWitness {
                search_bound: nb.search_bound.into(),
                beams_scanned: nb.beams_scanned,
                required_blocker_radius: nb
                    .required_blocker_radius
                    .expect("unconditional verdicts carry a radius bound"),
                completeness_radius: p.completeness_radius(),
            });
        }
        evals.push(Evaluation {
            report: RuleReport {
                rule: Rule::DirectDisk,
                applicable: ok,
                detail,
            },
            witness: w,
        });
    }

    let applicable_rules: Vec<Rule> = evals
        .iter()
        .filter(|e| e.report.applicable)
        .map(|e| e.report.rule)
        .collect();
    let rule_reports: Vec<RuleReport> = evals.iter().map(|e| e.report.clone()).collect();
    let fired = evals.into_iter().find(|e| e.report.applicable);

    let mut hypotheses = vec![HYP_MANIFOLD.to_string()];
    let (verdict, rule, witness) = match fired {
        Some(e) => {
            match e.report.rule {
                Rule::Prop6 => hypotheses.push(orientable_hypothesis()),
                Rule::ElderSibling => {
                    hypotheses.push(completeness_hypothesis(p.completeness_radius()))
                }
                Rule::DirectDisk => {
                    hypotheses.push(completeness_hypothesis(p.completeness_radius()));
                    hypotheses.push(HYP_PARITY.to_string());
                }
                _ => {}
            }
            (Verdict::Tunnel, Some(e.report.rule), e.witness)
        }
        None => {
            let mut w = base_witness(p, opts);
            w.reasons = rule_reports
                .iter()
                .map(|r| format!("{:?}: {}", r.rule, r.detail))
                .collect();
            w.elder_failures = elder.failures.clone();
            (Verdict::Inconclusive, None, w)
        }
    };

    Ok(Certificate {
        verdict,
        rule,
        witness,
        conditions: Conditions {
            completeness_radius: p.completeness_radius(),
            epsilon: p.epsilon(),
            cusp_count: p.cusp_count(),
            orientable: p.orientable(),
            g_treated_as_zero: g > 0.0 && g_is_zero,
            hypotheses,
        },
        metadata: Metadata {
            tool: TOOL_NAME.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            tolerance: tol,
            input_sha256: p.digest(),
            n_max: opts.n_max,
            window: opts.window,
            thresholds,
            applicable_rules,
            rule_reports,
        },
    })
}

fn fmt(x: f64) -> String {
    crate::json::format_sig(x, 10)
}

fn cycle_note(b: &Bracelet) -> String {
    let parts: Vec<String> = b
        .cycle()
        .iter()
        .map(|e| {
            if e.id == INFINITY_ID {
                e.id.clone()
            } else {
                format!("{}[{},{}]", e.id, e.offset.0, e.offset.1)
            }
        })
        .collect();
    format!(": {}", parts.join(" - "))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReplayError {
    #[error("certificate was issued for a different input (digest mismatch)")]
    Digest,
    #[error("witness is missing `{0}`")]
    Missing(&'static str),
    #[error("witness bracelet is not a cycle of the pattern")]
    BadBracelet,
    #[error("bracelet has {got} balls, rule needs {want}")]
    WrongSize { got: usize, want: &'static str },
    #[error("inequality fails on replay: {0}")]
    Inequality(String),
    #[error("chain for `{0}` is broken")]
    BadChain(String),
    #[error("verdict differs on replay")]
    VerdictMismatch,
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
}

fn linked(p: &BallBeamPattern, from: &ChainLink, to: &ChainLink) -> bool {
    let Some(i) = p.ball_index(&from.id) else {
        return false;
    };
    if to.id == INFINITY_ID {
        return p
            .beams()
            .iter()
            .any(|b| b.is_vertical() && (b.a.index() == Some(i) || b.b.index() == Some(i)));
    }
    let Some(j) = p.ball_index(&to.id) else {
        return false;
    };
    let d = to.offset.sub(from.offset);
    p.beams().iter().any(|b| match (b.a, b.b) {
        (BeamEnd::Ball { index: x, .. }, BeamEnd::Ball { index: y, offset }) => {
            (x == i && y == j && offset == d) || (x == j && y == i && offset == d.neg())
        }
        _ => false,
    })
}

/// Re-check a certificate against the pattern it was issued for, using
/// only the witness fields and fresh evaluations of every inequality.
pub fn verify_certificate(cert: &Certificate, p: &BallBeamPattern) -> Result<(), ReplayError> {
    if cert.metadata.input_sha256 != p.digest() {
        return Err(ReplayError::Digest);
    }
    let tol = cert.metadata.tolerance;
    let t = compute_thresholds();
    let g = p.g();
    let w = &cert.witness;
    if w.g.to_bits() != g.to_bits() {
        return Err(ReplayError::Inequality(format!(
            "witness g {} is not the pattern's {g}",
            w.g
        )));
    }
    let bracelet = || -> Result<Bracelet, ReplayError> {
        let bw = w
            .bracelet
            .as_ref()
            .ok_or(ReplayError::Missing("bracelet"))?;
        bracelet_from_cycle(p, &bw.cycle).ok_or(ReplayError::BadBracelet)
    };
    let need = |cond: bool, what: String| {
        if cond {
            Ok(())
        } else {
            Err(ReplayError::Inequality(what))
        }
    };
    match (cert.verdict, cert.rule) {
        (Verdict::Tunnel, Some(Rule::Prop4)) => {
            let b = bracelet()?;
            if b.n != 4 {
                return Err(ReplayError::WrongSize {
                    got: b.n,
                    want: "4",
                });
            }
            need(below(g, t.t4, tol), format!("g < {}", t.t4))
        }
        (Verdict::Tunnel, Some(Rule::Prop5)) => {
            let b = bracelet()?;
            if !(b.n == 4 || b.n == 5) {
                return Err(ReplayError::WrongSize {
                    got: b.n,
                    want: "4 or 5",
                });
            }
            need(p.cusp_count() == 1, "one cusp".into())?;
            need(below(g, t.t5, tol), format!("g < {}", t.t5))
        }
        (Verdict::Tunnel, Some(Rule::Prop6)) => {
            let b = bracelet()?;
            if !(4..=6).contains(&b.n) {
                return Err(ReplayError::WrongSize {
                    got: b.n,
                    want: "4 to 6",
                });
            }
            need(p.orientable(), "orientable".into())?;
            need(g.abs() <= tol, "g = 0".into())
        }
        (Verdict::Tunnel, Some(Rule::ElderSibling)) => {
            need(below(g, t.t_es, tol), format!("g < {}", t.t_es))?;
            let chains = w.chains.as_ref().ok_or(ReplayError::Missing("chains"))?;
            for ball in p.balls() {
                let chain = chains
                    .get(&ball.id)
                    .ok_or_else(|| ReplayError::BadChain(ball.id.clone()))?;
                let broken = || ReplayError::BadChain(ball.id.clone());
                let (head, last) = (chain.first().ok_or_else(broken)?, chain.last().unwrap());
                if head.id != ball.id || head.offset != Offset::ZERO || last.id != INFINITY_ID {
                    return Err(broken());
                }
                for pair in chain.windows(2) {
                    if !linked(p, &pair[0], &pair[1]) {
                        return Err(broken());
                    }
                    let r0 = p.balls()[p.ball_index(&pair[0].id).ok_or_else(broken)?].radius;
                    if pair[1].id != INFINITY_ID {
                        let r1 = p.balls()[p.ball_index(&pair[1].id).ok_or_else(broken)?].radius;
                        if r1 <= r0 + tol {
                            return Err(broken());
                        }
                    }
                }
            }
            Ok(())
        }
        (Verdict::Tunnel, Some(Rule::DirectDisk)) => {
            let b = bracelet()?;
            if b.n < 4 {
                return Err(ReplayError::WrongSize {
                    got: b.n,
                    want: "at least 4",
                });
            }
            match find_blocking(&b, p, tol).map_err(CriteriaError::from)? {
                BlockingVerdict::NotBlocked(nb) if nb.unconditional => Ok(()),
                _ => Err(ReplayError::Inequality("bracelet is unblocked".into())),
            }
        }
        (Verdict::Inconclusive, None) => {
            let again = certify(
                p,
                &CertifyOptions {
                    n_max: cert.metadata.n_max,
                    window: cert.metadata.window,
                    tol,
                },
            )?;
            if again.verdict == Verdict::Inconclusive {
                Ok(())
            } else {
                Err(ReplayError::VerdictMismatch)
            }
        }
        _ => Err(ReplayError::VerdictMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{build_quotient_graph, is_connected};
    use crate::pattern::{BallFile, BeamEndFile, BeamFile};

    #[test]
    fn closed_form_thresholds() {
        let t = compute_thresholds();
        assert!((t.t4 - 0.346_573_59).abs() < 1e-8);
        assert!((t.t_es - 2f64.ln()).abs() < 1e-15);
        assert!(0.0 < t.t5 && t.t5 < t.t4 && t.t4 < t.t_es);
    }

    #[test]
    fn five_bracelet_root_is_a_root() {
        let g = five_bracelet_min_g(0.5).unwrap();
        assert!(five_bracelet_slack(g - 1e-9, 0.5) < 0.0);
        assert!(five_bracelet_slack(g + 1e-9, 0.5) > 0.0);
    }

    #[test]
    fn five_bracelet_min_g_decreases_in_radius() {
        let mut prev = f64::INFINITY;
        for r in [0.01, 0.1, 0.2, 0.3, 0.4, 0.5] {
            let g = five_bracelet_min_g(r).unwrap();
            assert!(g < prev, "{r}: {g} >= {prev}");
            prev = g;
        }
        assert!(five_bracelet_min_g(0.3).unwrap() > five_bracelet_min_g(0.5).unwrap());
        assert!(five_bracelet_min_g(0.0).is_err());
        assert!(five_bracelet_min_g(0.6).is_err());
    }

    #[test]
    fn small_end_ball_limit_is_finite() {
        // as r_e -> 0 the root settles near ln sqrt 3 instead of growing
        let g = five_bracelet_min_g(1e-8).unwrap();
        assert!((g - 3f64.sqrt().ln()).abs() < 1e-3, "{g}");
        assert!(g > compute_thresholds().t4);
    }

    fn pattern_with(
        balls: Vec<(&str, f64, [f64; 2])>,
        beams: Vec<(&str, &str)>,
    ) -> BallBeamPattern {
        let mut f = fixtures::single_vertical_ball().to_file();
        f.lattice.t1 = [4.0, 0.0];
        f.lattice.t2 = [0.0, 4.0];
        f.epsilon = 0.01;
        f.balls = balls
            .into_iter()
            .map(|(id, r, c)| BallFile {
                id: id.into(),
                center: c,
                radius: r,
                cusp: 0,
            })
            .collect();
        let end = |id: &str| BeamEndFile {
            id: id.into(),
            offset: Offset::ZERO,
        };
        f.beams = beams
            .into_iter()
            .map(|(a, b)| BeamFile {
                a: end(a),
                b: end(b),
            })
            .collect();
        BallBeamPattern::from_file(f).unwrap()
    }

    #[test]
    fn elder_examples() {
        let one = elder_sibling_check(&fixtures::single_vertical_ball(), DEFAULT_TOL);
        assert!(one.verified);
        assert_eq!(one.chains["a"].len(), 2);

        let two = pattern_with(
            vec![("a", 0.5, [0.0, 0.0]), ("b", 0.25, [2.0, 2.0])],
            vec![("a", INFINITY_ID), ("b", "a")],
        );
        let report = elder_sibling_check(&two, DEFAULT_TOL);
        assert!(report.verified);
        let ids: Vec<_> = report.chains["b"].iter().map(|l| l.id.as_str()).collect();
        assert_eq!(ids, vec!["b", "a", INFINITY_ID]);

        let equal = pattern_with(
            vec![("p", 0.25, [1.0, 1.0]), ("q", 0.25, [2.0, 2.0])],
            vec![("p", "q")],
        );
        let report = elder_sibling_check(&equal, DEFAULT_TOL);
        assert!(!report.verified);
        assert_eq!(report.failures, vec!["p".to_string(), "q".to_string()]);
    }

    #[test]
    fn elder_prefers_short_chains() {
        let p = pattern_with(
            vec![
                ("a", 0.5, [0.0, 0.0]),
                ("b", 0.3, [2.0, 0.0]),
                ("c", 0.2, [2.0, 2.0]),
            ],
            vec![("a", INFINITY_ID), ("b", "a"), ("c", "b"), ("c", "a")],
        );
        let report = elder_sibling_check(&p, DEFAULT_TOL);
        assert_eq!(report.chains["c"].len(), 3);
        assert_eq!(report.chains["c"][1].id, "a");
        assert!(is_connected(&build_quotient_graph(&p)));
    }

    #[test]
    fn pipeline_examples() {
        let opts = CertifyOptions::default();
        let c = certify(&fixtures::square_lattice(0.0), &opts).unwrap();
        assert_eq!((c.verdict, c.rule), (Verdict::Tunnel, Some(Rule::Prop4)));
        verify_certificate(&c, &fixtures::square_lattice(0.0)).unwrap();

        let c = certify(&fixtures::square_lattice(0.2), &opts).unwrap();
        assert_eq!(c.rule, Some(Rule::Prop4));

        let p = fixtures::five_bracelet(0.1, 0.2);
        let c = certify(&p, &opts).unwrap();
        assert_eq!(c.rule, Some(Rule::Prop5));
        verify_certificate(&c, &p).unwrap();

        let p = fixtures::isolated_equal_pair(0.2);
        let c = certify(&p, &opts).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert_eq!(
            c.witness.elder_failures,
            vec!["p".to_string(), "q".to_string()]
        );
        verify_certificate(&c, &p).unwrap();
    }

    #[test]
    fn prop4_is_strict_at_threshold() {
        let t4 = compute_thresholds().t4;
        let p = fixtures::square_lattice(t4);
        let c = certify(&p, &CertifyOptions::default()).unwrap();
        assert_ne!(c.rule, Some(Rule::Prop4));
        assert!(!c.metadata.applicable_rules.contains(&Rule::Prop4));
    }

    #[test]
    fn all_applicable_rules_listed() {
        let c = certify(&fixtures::square_lattice(0.0), &CertifyOptions::default()).unwrap();
        assert!(c.metadata.applicable_rules.contains(&Rule::Prop4));
        assert!(c.metadata.applicable_rules.contains(&Rule::Prop6));
        assert!(c.metadata.applicable_rules.contains(&Rule::ElderSibling));
        assert_eq!(c.metadata.rule_reports.len(), 5);
    }

    #[test]
    fn tampered_witness_fails_replay() {
        let p = fixtures::square_lattice(0.0);
        let mut c = certify(&p, &CertifyOptions::default()).unwrap();
        c.witness.bracelet.as_mut().unwrap().cycle[2].offset = Offset(5, 5);
        assert!(verify_certificate(&c, &p).is_err());
        let other = fixtures::square_lattice(0.2);
        let c = certify(&p, &CertifyOptions::default()).unwrap();
        assert_eq!(verify_certificate(&c, &other), Err(ReplayError::Digest));
    }

    #[test]
    fn certificate_json_round_trips() {
        let c = certify(&fixtures::two_cusp_chain(), &CertifyOptions::default()).unwrap();
        let text = c.to_json();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_json(), text);
        let keys: Vec<_> = text
            .lines()
            .filter(|l| l.starts_with("  \""))
            .map(|l| l.trim().split('"').nth(1).unwrap().to_string())
            .collect();
        assert_eq!(
            keys,
            vec!["verdict", "rule", "witness", "conditions", "metadata"]
        );
    }
}
