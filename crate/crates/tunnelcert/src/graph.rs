//! Quotient ball-and-beam graph and the search for bracelets through the
//! horoball at infinity in the developed cover.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::geom::Point2;
use crate::pattern::{BallBeamPattern, BeamEnd, ConcreteBall, ConcreteBeam, Offset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Ball(usize),
    Infinity,
}

/// One beam orbit as an edge of the quotient graph. `offset` is the lattice
/// translation from the `a` end to the `b` end (zero for vertical edges).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientEdge {
    pub orbit: usize,
    pub a: Vertex,
    pub b: Vertex,
    pub offset: Offset,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientGraph {
    /// Number of ball-orbit vertices; the infinity vertex comes on top.
    pub ball_count: usize,
    pub edges: Vec<QuotientEdge>,
}

impl QuotientGraph {
    pub fn vertex_count(&self) -> usize {
        self.ball_count + 1
    }
}

pub fn build_quotient_graph(p: &BallBeamPattern) -> QuotientGraph {
    let vertex = |e: BeamEnd| match e {
        BeamEnd::Ball { index, .. } => Vertex::Ball(index),
        BeamEnd::Infinity => Vertex::Infinity,
    };
    let edges = p
        .beams()
        .iter()
        .enumerate()
        .map(|(orbit, beam)| QuotientEdge {
            orbit,
            a: vertex(beam.a),
            b: vertex(beam.b),
            offset: if beam.is_vertical() {
                Offset::ZERO
            } else {
                beam.b.offset().sub(beam.a.offset())
            },
        })
        .collect();
    QuotientGraph {
        ball_count: p.balls().len(),
        edges,
    }
}

/// Whether every vertex reaches the infinity vertex.
pub fn is_connected(gr: &QuotientGraph) -> bool {
    let n = gr.vertex_count();
    let slot = |v: Vertex| match v {
        Vertex::Ball(i) => i,
        Vertex::Infinity => gr.ball_count,
    };
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in &gr.edges {
        let (ra, rb) = (find(&mut parent, slot(e.a)), find(&mut parent, slot(e.b)));
        parent[ra] = rb;
    }
    let root = find(&mut parent, gr.ball_count);
    (0..n).all(|v| find(&mut parent, v) == root)
}

/// A cycle `inf -> balls[0] -> ... -> balls[k-1] -> inf` in the developed
/// pattern. `beams` lists the `n = k + 1` connecting beams in cycle order,
/// starting with the vertical beam into `balls[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracelet {
    pub balls: Vec<ConcreteBall>,
    pub beams: Vec<ConcreteBeam>,
    pub n: usize,
    pub min_radius: f64,
}

/// Entry of a bracelet cycle, as written into certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleEntry {
    pub id: String,
    pub offset: Offset,
}

impl Bracelet {
    /// The full cycle, starting at infinity.
    pub fn cycle(&self) -> Vec<CycleEntry> {
        std::iter::once(CycleEntry {
            id: crate::pattern::INFINITY_ID.to_string(),
            offset: Offset::ZERO,
        })
        .chain(self.balls.iter().map(|b| CycleEntry {
            id: b.id.clone(),
            offset: b.offset,
        }))
        .collect()
    }

    pub fn centers(&self) -> Vec<Point2> {
        self.balls
            .iter()
            .map(|b| b.ball.center().expect("bracelet balls are finite"))
            .collect()
    }

    /// Key invariant under lattice translation and reversal.
    pub fn canonical_key(&self) -> Vec<(String, Offset)> {
        canonical_key(
            &self
                .balls
                .iter()
                .map(|b| (b.id.clone(), b.offset))
                .collect::<Vec<_>>(),
        )
    }

    pub fn contains(&self, index: usize, offset: Offset) -> bool {
        self.balls
            .iter()
            .any(|b| b.index == index && b.offset == offset)
    }
}

/// Rebuild a bracelet from its cycle as written in a certificate: `INF`,
/// then the finite balls in order. `None` if some consecutive pair is not
/// joined by a beam of `p`.
pub fn bracelet_from_cycle(p: &BallBeamPattern, cycle: &[CycleEntry]) -> Option<Bracelet> {
    let inf = crate::pattern::INFINITY_ID;
    let (head, rest) = cycle.split_first()?;
    if head.id != inf || rest.len() < 2 {
        return None;
    }
    let path: Vec<(usize, Offset)> = rest
        .iter()
        .map(|e| p.ball_index(&e.id).map(|i| (i, e.offset)))
        .collect::<Option<_>>()?;
    let vertical = |(i, o): (usize, Offset)| {
        p.beams()
            .iter()
            .position(|b| b.is_vertical() && (b.a.index() == Some(i) || b.b.index() == Some(i)))
            .map(|k| p.concrete_beam(k, o))
    };
    let joining = |(i, oi): (usize, Offset), (j, oj): (usize, Offset)| {
        p.beams().iter().enumerate().find_map(|(k, b)| {
            let (
                BeamEnd::Ball { index: x, .. },
                BeamEnd::Ball {
                    index: y,
                    offset: d,
                },
            ) = (b.a, b.b)
            else {
                return None;
            };
            if x == i && y == j && d == oj.sub(oi) {
                Some(p.concrete_beam(k, oi))
            } else if x == j && y == i && d == oi.sub(oj) {
                Some(p.concrete_beam(k, oj))
            } else {
                None
            }
        })
    };
    let mut beams = vec![vertical(path[0])?];
    for w in path.windows(2) {
        beams.push(joining(w[0], w[1])?);
    }
    beams.push(vertical(*path.last().unwrap())?);
    let balls: Vec<ConcreteBall> = path.iter().map(|&(i, o)| p.concrete(i, o)).collect();
    let distinct: HashSet<_> = path.iter().collect();
    if distinct.len() != path.len() {
        return None;
    }
    let min_radius = balls
        .iter()
        .filter_map(|b| b.ball.radius())
        .fold(f64::INFINITY, f64::min);
    Some(Bracelet {
        n: balls.len() + 1,
        balls,
        beams,
        min_radius,
    })
}

fn canonical_key(seq: &[(String, Offset)]) -> Vec<(String, Offset)> {
    let normalize = |it: &mut dyn Iterator<Item = &(String, Offset)>| {
        let items: Vec<_> = it.cloned().collect();
        let base = items[0].1;
        items
            .into_iter()
            .map(|(id, o)| (id, o.sub(base)))
            .collect::<Vec<_>>()
    };
    let fwd = normalize(&mut seq.iter());
    let rev = normalize(&mut seq.iter().rev());
    fwd.min(rev)
}

#[derive(Debug, Clone, Copy)]
struct Step {
    to: usize,
    offset: Offset,
    orbit: usize,
    /// Traversed from the orbit's `a` end towards its `b` end.
    forward: bool,
}

struct Adjacency {
    steps: Vec<Vec<Step>>,
    vertical: Vec<Option<usize>>,
}

fn adjacency(p: &BallBeamPattern) -> Adjacency {
    let n = p.balls().len();
    let mut steps = vec![Vec::new(); n];
    let mut vertical = vec![None; n];
    for (orbit, beam) in p.beams().iter().enumerate() {
        match (beam.a, beam.b) {
            (BeamEnd::Ball { index, .. }, BeamEnd::Infinity)
            | (BeamEnd::Infinity, BeamEnd::Ball { index, .. }) => {
                vertical[index].get_or_insert(orbit);
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
            ) => {
                let d = oj.sub(oi);
                steps[i].push(Step {
                    to: j,
                    offset: d,
                    orbit,
                    forward: true,
                });
                steps[j].push(Step {
                    to: i,
                    offset: d.neg(),
                    orbit,
                    forward: false,
                });
            }
            (BeamEnd::Infinity, BeamEnd::Infinity) => {}
        }
    }
    Adjacency { steps, vertical }
}

struct Search<'a> {
    p: &'a BallBeamPattern,
    adj: Adjacency,
    n_max: usize,
    window: u32,
    path: Vec<(usize, Offset)>,
    orbits: Vec<ConcreteBeam>,
    on_path: HashSet<(usize, Offset)>,
    found: BTreeMap<(usize, Vec<(String, Offset)>), Bracelet>,
}

impl Search<'_> {
    fn extend(&mut self) {
        let &(cur, off) = self.path.last().expect("path starts non-empty");
        if self.path.len() >= 2 {
            if let Some(orbit) = self.adj.vertical[cur] {
                self.record(orbit);
            }
        }
        if self.path.len() + 1 >= self.n_max {
            return;
        }
        for k in 0..self.adj.steps[cur].len() {
            let step = self.adj.steps[cur][k];
            let next = (step.to, off.add(step.offset));
            if !next.1.within(self.window) || self.on_path.contains(&next) {
                continue;
            }
            let shift = if step.forward { off } else { next.1 };
            self.path.push(next);
            self.on_path.insert(next);
            self.orbits.push(self.p.concrete_beam(step.orbit, shift));
            self.extend();
            self.orbits.pop();
            self.on_path.remove(&next);
            self.path.pop();
        }
    }

    fn record(&mut self, closing_orbit: usize) {
        let balls: Vec<ConcreteBall> = self
            .path
            .iter()
            .map(|&(i, o)| self.p.concrete(i, o))
            .collect();
        let n = balls.len() + 1;
        let key = canonical_key(
            &balls
                .iter()
                .map(|b| (b.id.clone(), b.offset))
                .collect::<Vec<_>>(),
        );
        if self.found.contains_key(&(n, key.clone())) {
            return;
        }
        let (first, first_off) = self.path[0];
        let last_off = self.path.last().unwrap().1;
        let opening = self.adj.vertical[first].expect("path starts at a vertical ball");
        let mut beams = Vec::with_capacity(n);
        beams.push(self.p.concrete_beam(opening, first_off));
        beams.extend(self.orbits.iter().copied());
        beams.push(self.p.concrete_beam(closing_orbit, last_off));
        debug_assert_eq!(beams.len(), n);
        let min_radius = balls
            .iter()
            .filter_map(|b| b.ball.radius())
            .fold(f64::INFINITY, f64::min);
        self.found.insert(
            (n, key),
            Bracelet {
                balls,
                beams,
                n,
                min_radius,
            },
        );
    }
}

/// All bracelets through infinity with `3 <= n <= n_max` whose finite balls
/// sit at offsets within `[-window, window]^2`, deduplicated up to lattice
/// translation and reversal, ordered by `(n, canonical key)`.
pub fn enumerate_bracelets(p: &BallBeamPattern, n_max: usize, window: u32) -> Vec<Bracelet> {
    let adj = adjacency(p);
    let starts: Vec<usize> = (0..p.balls().len())
        .filter(|&i| adj.vertical[i].is_some())
        .collect();
    let mut search = Search {
        p,
        adj,
        n_max,
        window,
        path: Vec::new(),
        orbits: Vec::new(),
        on_path: HashSet::new(),
        found: BTreeMap::new(),
    };
    if n_max < 3 {
        return Vec::new();
    }
    for s in starts {
        let start = (s, Offset::ZERO);
        search.path.push(start);
        search.on_path.insert(start);
        search.extend();
        search.on_path.clear();
        search.path.clear();
    }
    search.found.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn quotient_graph_shapes() {
        let g = build_quotient_graph(&fixtures::single_vertical_ball());
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges.len(), 1);

        let g = build_quotient_graph(&fixtures::square_lattice(0.0));
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges.len(), 3);
        let loops: Vec<_> = g
            .edges
            .iter()
            .filter(|e| e.a == e.b)
            .map(|e| e.offset)
            .collect();
        assert_eq!(loops, vec![Offset(1, 0), Offset(0, 1)]);

        let g = build_quotient_graph(&fixtures::tangent_pair_wide_lattice());
        assert!(g.edges.is_empty());
        assert!(!is_connected(&g));
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&build_quotient_graph(
            &fixtures::single_vertical_ball()
        )));
        assert!(!is_connected(&build_quotient_graph(
            &fixtures::isolated_equal_pair(0.2)
        )));
        // chain c - a - inf
        assert!(is_connected(&build_quotient_graph(
            &fixtures::five_bracelet(0.1, 0.2)
        )));
    }

    #[test]
    fn square_lattice_has_straight_four_bracelet() {
        let p = fixtures::square_lattice(0.0);
        let found = enumerate_bracelets(&p, 4, 2);
        assert!(found.iter().all(|b| b.n == 3 || b.n == 4));
        let four: Vec<_> = found.iter().filter(|b| b.n == 4).collect();
        assert!(four.iter().any(|b| {
            let offs: Vec<_> = b.balls.iter().map(|x| x.offset).collect();
            offs == vec![Offset(0, 0), Offset(1, 0), Offset(2, 0)]
        }));
        // net offset (1,0) between the two vertical balls also appears: inf-a-a(0,1)-a(1,1)-inf
        assert!(four.iter().any(|b| {
            let first = b.balls[0].offset;
            let last = b.balls[2].offset;
            last.sub(first) == Offset(1, 1)
        }));
    }

    #[test]
    fn cycle_round_trip() {
        let p = fixtures::square_lattice(0.0);
        for b in enumerate_bracelets(&p, 5, 1) {
            assert_eq!(bracelet_from_cycle(&p, &b.cycle()).as_ref(), Some(&b));
        }
        let mut broken = enumerate_bracelets(&p, 4, 1)[0].cycle();
        broken[1].offset = Offset(2, 2);
        assert!(bracelet_from_cycle(&p, &broken).is_none());
    }

    #[test]
    fn single_ball_has_no_cycle() {
        assert!(enumerate_bracelets(&fixtures::single_vertical_ball(), 8, 2).is_empty());
    }

    #[test]
    fn triangle_through_infinity() {
        let p = fixtures::ball_pair_with_beam();
        let both_vertical = p
            .with_beams(vec![
                crate::pattern::BeamRef::vertical(0),
                crate::pattern::BeamRef::vertical(1),
                p.beams()[0],
            ])
            .unwrap();
        let found = enumerate_bracelets(&both_vertical, 3, 2);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].n, 3);
        assert_eq!(found[0].beams.len(), 3);
    }

    #[test]
    fn bracelet_invariants_hold() {
        let p = fixtures::square_lattice(0.0);
        for b in enumerate_bracelets(&p, 6, 2) {
            assert!(b.n >= 3 && b.n <= 6);
            assert_eq!(b.balls.len() + 1, b.n);
            assert_eq!(b.beams.len(), b.n);
            // consecutive finite balls are the ends of the connecting beam
            for (w, beam) in b.balls.windows(2).zip(&b.beams[1..]) {
                let ends = [beam.a, beam.b];
                for ball in w {
                    assert!(ends.contains(&BeamEnd::ball(ball.index, ball.offset)));
                }
            }
            assert!(b.beams[0].b == BeamEnd::Infinity || b.beams[0].a == BeamEnd::Infinity);
            let min = b
                .balls
                .iter()
                .map(|x| x.ball.radius().unwrap())
                .fold(1.0, f64::min);
            assert_eq!(min, b.min_radius);
        }
    }

    #[test]
    fn larger_window_is_superset() {
        let p = fixtures::square_lattice(0.0);
        let small: Vec<_> = enumerate_bracelets(&p, 5, 1)
            .into_iter()
            .map(|b| b.canonical_key())
            .collect();
        let large: HashSet<_> = enumerate_bracelets(&p, 5, 2)
            .into_iter()
            .map(|b| b.canonical_key())
            .collect();
        assert!(small.iter().all(|k| large.contains(k)));
        assert!(large.len() > small.len());
    }

    #[test]
    fn keys_are_unique_under_symmetries() {
        let p = fixtures::square_lattice(0.0);
        let found = enumerate_bracelets(&p, 6, 2);
        let keys: HashSet<_> = found.iter().map(|b| (b.n, b.canonical_key())).collect();
        assert_eq!(keys.len(), found.len());
        for b in &found {
            // translate and reverse: the key must map back to itself, not another bracelet
            let shifted: Vec<_> = b
                .balls
                .iter()
                .rev()
                .map(|x| (x.id.clone(), x.offset.add(Offset(3, -2))))
                .collect();
            assert_eq!(canonical_key(&shifted), b.canonical_key());
        }
    }
}
