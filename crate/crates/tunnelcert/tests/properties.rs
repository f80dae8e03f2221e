//! Randomised properties.

mod common;

use std::f64::consts::{LN_2, SQRT_2};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tunnelcert::blocking::{check_lemma34, find_blocking, BlockingVerdict};
use tunnelcert::criteria::elder_sibling_check;
use tunnelcert::geom::{beam_length, center_separation, Horoball, Point2};
use tunnelcert::graph::{build_quotient_graph, enumerate_bracelets, is_connected};
use tunnelcert::oracle::{extremal_four_bracelet, numeric_geodesic_length, ExtremalOutcome};
use tunnelcert::pattern::BallBeamPattern;
use tunnelcert::{certify, fixtures, CertifyOptions, Rule};

fn translated(p: &BallBeamPattern, dx: f64, dy: f64) -> BallBeamPattern {
    let mut file = p.to_file();
    for b in &mut file.balls {
        b.center[0] += dx;
        b.center[1] += dy;
    }
    BallBeamPattern::from_file(file).unwrap()
}

#[test]
fn elder_implies_connected_on_random_patterns() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    let mut verified = 0;
    while checked < 200 {
        let Some(p) = common::random_pattern(&mut rng) else {
            continue;
        };
        checked += 1;
        let report = elder_sibling_check(&p, 1e-9);
        if report.verified {
            verified += 1;
            assert!(is_connected(&build_quotient_graph(&p)), "{}", p.to_json());
        }
    }
    assert!(
        verified > 20,
        "only {verified} of 200 patterns had the property"
    );
}

#[test]
fn elder_chains_ignore_input_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 100 {
        let Some(p) = common::random_pattern(&mut rng) else {
            continue;
        };
        checked += 1;
        let mut file = p.to_file();
        file.balls.shuffle(&mut rng);
        file.beams.shuffle(&mut rng);
        let q = BallBeamPattern::from_file(file).unwrap();
        let (a, b) = (elder_sibling_check(&p, 1e-9), elder_sibling_check(&q, 1e-9));
        assert_eq!(a, b);
        assert_eq!(a, elder_sibling_check(&p, 1e-9));
    }
}

#[test]
fn equal_radius_mutual_beams_never_verify() {
    for g in [0.0, 0.2, 0.5] {
        let report = elder_sibling_check(&fixtures::isolated_equal_pair(g), 1e-9);
        assert!(!report.verified);
        assert_eq!(report.failures, vec!["p".to_string(), "q".to_string()]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn beam_length_matches_integration(
        r1 in 0.01f64..=0.5,
        r2 in 0.01f64..=0.5,
        extra in 0.0f64..8.0,
        angle in 0.0f64..std::f64::consts::TAU,
    ) {
        let d = 2.0 * (r1 * r2).sqrt() + extra;
        let h1 = Horoball::finite(Point2::new(0.3, -0.2), r1);
        let h2 = Horoball::finite(Point2::new(0.3 + d * angle.cos(), -0.2 + d * angle.sin()), r2);
        let closed = beam_length(&h1, &h2, 1e-9).unwrap();
        let numeric = numeric_geodesic_length(&h1, &h2, 4000).unwrap();
        prop_assert!((closed - numeric).abs() < 1e-9, "{closed} vs {numeric}");
    }

    #[test]
    fn vertical_length_matches_integration(r in 0.001f64..=0.5) {
        let h = Horoball::finite(Point2::new(1.0, 2.0), r);
        let closed = beam_length(&h, &Horoball::Infinity, 1e-9).unwrap();
        let numeric = numeric_geodesic_length(&h, &Horoball::Infinity, 2000).unwrap();
        prop_assert!((closed - numeric).abs() < 1e-9);
        prop_assert!((closed + (2.0 * r).ln()).abs() < 1e-15);
    }

    #[test]
    fn separation_round_trip(r1 in 1e-4f64..=0.5, r2 in 1e-4f64..=0.5, g in 0.0f64..5.0) {
        let d = center_separation(r1, r2, g).unwrap();
        let a = Horoball::finite(Point2::new(0.0, 0.0), r1);
        let b = Horoball::finite(Point2::new(d, 0.0), r2);
        prop_assert!((beam_length(&a, &b, 1e-9).unwrap() - g).abs() < 1e-12);
    }

    #[test]
    fn prop4_applies_exactly_below_threshold(g in 0.0f64..0.69) {
        let cert = certify(&fixtures::square_lattice(g), &CertifyOptions::default()).unwrap();
        let prop4 = cert.metadata.applicable_rules.contains(&Rule::Prop4);
        prop_assert_eq!(prop4, g < SQRT_2.ln() - 1e-9);
        // all balls hang from infinity, so something always applies below ln 2
        prop_assert!(cert.is_tunnel());
    }

    #[test]
    fn blocked_extremal_satisfies_radius_bound(g in SQRT_2.ln()..LN_2) {
        let ExtremalOutcome::Feasible(config) = extremal_four_bracelet(g, 1e-9) else {
            panic!("feasible above the boundary");
        };
        let p = config.to_pattern();
        let b = enumerate_bracelets(&p, 4, 1).into_iter().find(|b| b.n == 4).unwrap();
        match find_blocking(&b, &p, 1e-9).unwrap() {
            BlockingVerdict::Blocked(pair) => {
                prop_assert!(check_lemma34(&b, &pair, g, 1e-9).unwrap());
            }
            other => prop_assert!(false, "expected a block, got {other:?}"),
        }
    }

    #[test]
    fn crossing_parity_survives_translation(dx in -3.0f64..3.0, dy in -3.0f64..3.0) {
        let p = fixtures::extremal_four_bracelet_pattern();
        let q = translated(&p, dx, dy);
        let parity = |p: &BallBeamPattern| {
            let b = enumerate_bracelets(p, 4, 1).into_iter().find(|b| b.n == 4).unwrap();
            match find_blocking(&b, p, 1e-9).unwrap() {
                BlockingVerdict::Blocked(pair) => Some(pair.crossings.len() % 2),
                _ => None,
            }
        };
        prop_assert_eq!(parity(&p), parity(&q));
        prop_assert_eq!(parity(&q), Some(1));
    }
}
