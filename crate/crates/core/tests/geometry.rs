use std::f64::consts::PI;

use holderlab::geometry::{
    builtin_domain, check_h2, h1_fraction, h3_fraction, h4_partial_sums, BuiltinDomain, DomainKind,
    DomainOracle, H2Outcome, QuasiGeometricSequence,
};
use holderlab::rng::stream;
use holderlab::sphere::{cap_area_fraction, chord_to_angle, sample_in_ball, unit_ball_volume, unit_sphere_area};

fn domain(kind: DomainKind, n: usize) -> BuiltinDomain {
    builtin_domain(kind, n).unwrap()
}

fn unit_ball(n: usize) -> BuiltinDomain {
    domain(DomainKind::Ball { center: vec![], radius: 1.0 }, n)
}

fn dyadic() -> QuasiGeometricSequence {
    QuasiGeometricSequence::geometric(0.5, 9).unwrap()
}

/// Angle between a unit vector and `-e₁`.
fn angle_to_negative_axis(dir: &[f64]) -> f64 {
    (-dir[0]).clamp(-1.0, 1.0).acos()
}

#[test]
fn geometric_ladders() {
    let seq = QuasiGeometricSequence::geometric(0.5, 3).unwrap();
    assert_eq!(seq.radii(), &[1.0, 0.5, 0.25]);
    assert_eq!((seq.tau1(), seq.tau2()), (0.25, 0.5));
    assert_eq!(QuasiGeometricSequence::geometric(0.5, 0).unwrap().radii(), &[1.0]);
    assert!(QuasiGeometricSequence::geometric(1.2, 3).is_err());
}

#[test]
fn h1_of_full_complement_is_exact() {
    for n in 1..5 {
        let m = h1_fraction(&domain(DomainKind::Empty, n), 0.3, 17, 5).unwrap();
        assert_eq!(m.fraction, 1.0);
        assert_eq!(m.measure, unit_sphere_area(n));
        assert_eq!(m.measure_stderr, 0.0);
    }
}

#[test]
fn h1_of_half_ball_is_a_hemisphere() {
    let m = h1_fraction(&domain(DomainKind::HalfBall, 3), 0.5, 100_000, 11).unwrap();
    let expected = unit_sphere_area(3) / 2.0;
    assert!((m.measure - expected).abs() <= 3.0 * m.measure_stderr, "{m:?}");
}

#[test]
fn h1_of_cone_is_a_cap() {
    let m = h1_fraction(&domain(DomainKind::ConeComplement { aperture: PI / 4.0 }, 3), 0.5, 100_000, 12).unwrap();
    let expected = unit_sphere_area(3) * (1.0 - (PI / 4.0).cos()) / 2.0;
    assert!((expected - unit_sphere_area(3) * cap_area_fraction(3, PI / 4.0)).abs() < 1e-12);
    assert!((m.measure - expected).abs() <= 3.0 * m.measure_stderr, "{m:?}");
}

#[test]
fn h3_examples() {
    for n in 1..4 {
        let annulus = unit_ball_volume(n) * (1.0 - 0.5f64.powi(n as i32));
        let full = h3_fraction(&domain(DomainKind::Empty, n), 1.0, 0.5, 1000, 1).unwrap();
        assert_eq!(full.measure, annulus);
        let none = h3_fraction(&unit_ball(n), 1.0, 0.5, 1000, 1).unwrap();
        assert_eq!(none.measure, 0.0);
        let half = h3_fraction(&domain(DomainKind::HalfBall, n), 1.0, 0.5, 50_000, 2).unwrap();
        assert!((half.measure - annulus / 2.0).abs() <= 3.0 * half.stderr, "n={n}: {half:?}");
    }
}

#[test]
fn h3_never_exceeds_the_annulus() {
    let kinds = [
        DomainKind::ConeComplement { aperture: 1.0 },
        DomainKind::Corkscrew { delta: 0.2 },
        DomainKind::ShellCaps { nu: 0.3, thickness: 0.1 },
        DomainKind::HalfBall,
    ];
    for kind in kinds {
        for n in 2..4 {
            let d = domain(kind.clone(), n);
            let m = h3_fraction(&d, 0.5, 0.3, 2000, 4).unwrap();
            assert!(m.measure <= unit_ball_volume(n) * (1.0 - 0.6f64.powi(n as i32)));
        }
    }
}

#[test]
fn estimates_do_not_depend_on_thread_count() {
    let d = domain(DomainKind::ConeComplement { aperture: 0.7 }, 3);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            (
                h1_fraction(&d, 0.4, 20_000, 3).unwrap(),
                h3_fraction(&d, 0.4, 0.2, 20_000, 3).unwrap(),
                h4_partial_sums(&d, &dyadic(), 5000, 3).unwrap(),
            )
        })
    };
    let reference = run(1);
    for threads in [2, 4, 8] {
        assert_eq!(run(threads), reference);
    }
}

#[test]
fn cone_has_h2_witnesses_on_its_axis() {
    let aperture = PI / 4.0;
    let d = domain(DomainKind::ConeComplement { aperture }, 2);
    let outcomes = check_h2(&d, &dyadic(), 0.3, 64, 9).unwrap();
    assert_eq!(outcomes.len(), 9);
    for (k, outcome) in outcomes.iter().enumerate() {
        let w = outcome.witness().unwrap_or_else(|| panic!("scale {k}: {outcome:?}"));
        assert_eq!(w.scale_index, k);
        // at r = 1 the unit sphere itself lies in Ω^c, so any direction may win
        if k == 0 {
            continue;
        }
        // the whole cap must fit inside the excluded sector
        assert!(angle_to_negative_axis(&w.center) + chord_to_angle(0.3) <= aperture + 1e-12);
    }
}

#[test]
fn cone_has_h2_witnesses_in_three_dimensions() {
    let d = domain(DomainKind::ConeComplement { aperture: PI / 4.0 }, 3);
    let outcomes = check_h2(&d, &dyadic(), 0.3, 400, 2).unwrap();
    assert!(outcomes.iter().all(|o| o.witness().is_some()), "{outcomes:?}");
}

#[test]
fn ball_has_no_h2_witness_below_the_unit_scale() {
    for n in [2, 3] {
        let outcomes = check_h2(&unit_ball(n), &dyadic(), 0.3, 64, 9).unwrap();
        for outcome in &outcomes[1..] {
            match outcome {
                H2Outcome::Failure { best_coverage, .. } => assert_eq!(*best_coverage, 0.0),
                H2Outcome::Witness(w) => panic!("unexpected witness {w:?}"),
            }
        }
    }
}

#[test]
fn shell_caps_have_h2_witnesses_at_dyadic_scales() {
    let d = domain(DomainKind::ShellCaps { nu: 0.3, thickness: 0.05 }, 3);
    let outcomes = check_h2(&d, &dyadic(), 0.3, 400, 6).unwrap();
    for outcome in &outcomes[1..] {
        let w = outcome.witness().unwrap_or_else(|| panic!("{outcome:?}"));
        assert!(angle_to_negative_axis(&w.center) < 2.0 * 0.3f64.asin());
    }
}

#[test]
fn h2_witness_implies_h1_mass() {
    let nu = 0.3;
    let seq = dyadic();
    let cases = [
        (DomainKind::ConeComplement { aperture: PI / 4.0 }, 2),
        (DomainKind::ConeComplement { aperture: PI / 4.0 }, 3),
        (DomainKind::ShellCaps { nu: 0.3, thickness: 0.05 }, 3),
    ];
    for (kind, n) in cases {
        let d = domain(kind, n);
        let outcomes = check_h2(&d, &seq, nu, 400, 3).unwrap();
        let cap = cap_area_fraction(n, chord_to_angle(nu));
        for outcome in outcomes.iter().filter_map(H2Outcome::witness) {
            let m = h1_fraction(&d, outcome.radius, 20_000, 8).unwrap();
            // grid tolerance: the cap is only tested at finitely many points
            assert!(m.fraction >= 0.95 * cap - 3.0 * m.fraction_stderr, "{m:?} vs cap {cap}");
        }
    }
}

#[test]
fn cone_h4_sums_grow_linearly() {
    let d = domain(DomainKind::ConeComplement { aperture: PI / 4.0 }, 3);
    let terms = h4_partial_sums(&d, &dyadic(), 20_000, 21).unwrap();
    let per_scale = unit_sphere_area(3) * cap_area_fraction(3, PI / 4.0);
    // the r = 1 term also sees the unit sphere, which lies in Ω^c
    let base = &terms[0];
    for (k, t) in terms.iter().enumerate().skip(1) {
        let expected = k as f64 * per_scale;
        let stderr = (t.partial_sum_stderr.powi(2) - base.partial_sum_stderr.powi(2)).sqrt();
        assert!((t.partial_sum - base.partial_sum - expected).abs() <= 4.0 * stderr, "k={k}: {t:?}");
        assert!((t.term.measure - per_scale).abs() <= 4.0 * t.term.measure_stderr);
    }
}

#[test]
fn ball_h4_terms_vanish_below_the_unit_scale() {
    let terms = h4_partial_sums(&unit_ball(3), &dyadic(), 5000, 21).unwrap();
    let base = terms[0].partial_sum;
    for t in &terms[1..] {
        assert_eq!(t.term.measure, 0.0);
        assert_eq!(t.partial_sum, base);
    }
}

#[test]
fn shell_cap_h4_terms_are_positive_and_bounded() {
    let d = domain(DomainKind::ShellCaps { nu: 0.3, thickness: 0.05 }, 3);
    let terms = h4_partial_sums(&d, &dyadic(), 20_000, 22).unwrap();
    let cap = unit_sphere_area(3) * cap_area_fraction(3, 2.0 * 0.3f64.asin());
    for t in &terms[1..] {
        assert!((t.term.measure - cap).abs() <= 4.0 * t.term.measure_stderr, "{t:?} vs {cap}");
    }
    let last = terms.last().unwrap();
    assert!(last.partial_sum >= 7.0 * 0.9 * cap);
}

/// Monte Carlo search for a ball of radius `delta·r` inside `B(0,r) ∩ Ω^c`.
fn find_complement_ball(d: &BuiltinDomain, r: f64, delta: f64, candidates: u64, seed: u64) -> Option<Vec<f64>> {
    let radius = delta * r;
    let probes: Vec<[f64; 2]> = (0..24)
        .flat_map(|i| {
            let t = 2.0 * PI * i as f64 / 24.0;
            [0.25, 0.5, 0.75, 1.0].map(|s| [s * radius * t.cos(), s * radius * t.sin()])
        })
        .collect();
    let mut c = [0.0; 2];
    (0..candidates).find_map(|i| {
        sample_in_ball(&mut stream(seed, i), r - radius, &mut c);
        let inside = d.contains(&c) || probes.iter().any(|p| d.contains(&[c[0] + p[0], c[1] + p[1]]));
        (!inside).then(|| c.to_vec())
    })
}

#[test]
fn corkscrew_complement_holds_proportional_balls() {
    let delta = 0.25;
    let d = domain(DomainKind::Corkscrew { delta }, 2);
    for k in 0..9 {
        let r = 0.5f64.powi(k);
        let c = find_complement_ball(&d, r, delta, 200_000, k as u64)
            .unwrap_or_else(|| panic!("no ball of radius {} found in B(0, {r})", delta * r));
        assert!(c.iter().map(|v| v * v).sum::<f64>().sqrt() + delta * r <= r);
        // the centre is not near the unit-ball boundary, so the ball is an excluded one
        assert!(d.dist_to_complement(&c) == 0.0);
    }
}
