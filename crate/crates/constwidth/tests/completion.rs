//! Completion operator suites: ball hulls against analytic oracles, the
//! tight-cover and nesting properties, fixed points, endpoint
//! persistence, and the perturbation-stability bound.

mod common;

use constwidth::body::{diameter, Membership};
use constwidth::completion::{
    ball_hull, beta_v, complete, completeness_certificate, is_diameter_endpoint,
    CompletionConfig,
};
use constwidth::t4::reuleaux_polygon;
use constwidth::{hausdorff_distance, make_direction_grid, Body, Direction};
use rand::Rng;

fn cfg2d() -> CompletionConfig {
    CompletionConfig::for_dim(2).unwrap()
}

#[test]
fn ball_hull_of_triangle_is_reuleaux_triangle() {
    let tri = common::equilateral_triangle();
    let (hull, drop) = ball_hull(&tri, 1.0, 64).unwrap();
    assert_eq!(drop, 0.0, "point hulls take exact generators");
    // Oracle: dense arc samples from the triangle's own vertices.
    let verts = [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]];
    let oracle = common::ReuleauxOracle::from_vertices(&verts, 4000);
    let grid = make_direction_grid(2, std::f64::consts::PI / 256.0).unwrap();
    for u in grid.dirs() {
        let h = hull.support(u, 1e-10).unwrap().finite().unwrap();
        let theta = u.coords()[1].atan2(u.coords()[0]);
        let ho = oracle.support(theta);
        assert!((h - ho).abs() < 1e-6, "support mismatch {h} vs {ho}");
    }
}

#[test]
fn ball_hull_of_ball_is_the_ball() {
    let b = Body::ball(&[0.0, 0.0], 0.5).unwrap();
    let (hull, _) = ball_hull(&b, 1.0, 512).unwrap();
    // Brute-force membership scan over a grid of test points.
    for ix in -12..=12 {
        for iy in -12..=12 {
            let p = [ix as f64 * 0.05, iy as f64 * 0.05];
            let inside_ball = (p[0] * p[0] + p[1] * p[1]).sqrt() <= 0.5 - 1e-3;
            let outside_ball = (p[0] * p[0] + p[1] * p[1]).sqrt() >= 0.5 + 1e-3;
            match hull.membership(&p, 1e-3) {
                Membership::Inside => assert!(!outside_ball, "hull too large at {p:?}"),
                Membership::Outside => assert!(!inside_ball, "hull too small at {p:?}"),
                Membership::BoundaryBand => {}
            }
        }
    }
}

#[test]
fn ball_hull_rejects_radius_below_diameter() {
    let tri = common::equilateral_triangle();
    assert!(ball_hull(&tri, 0.9, 64).is_err());
}

#[test]
fn beta_v_fixed_point_for_constant_width() {
    // delta(W, beta_v(W)) small for W in {ball, Reuleaux 3}.
    let cfg = cfg2d();
    let bodies = vec![
        Body::ball(&[0.0, 0.0], 0.5).unwrap(),
        reuleaux_polygon(3, None).unwrap().body().clone(),
    ];
    for w in bodies {
        for k in 0..6 {
            let v = Direction::from_angle(k as f64 * std::f64::consts::PI / 3.0 + 0.2);
            let bv = beta_v(&w, &v, &cfg).unwrap();
            let d = hausdorff_distance(&w, &bv, &cfg.grid).unwrap();
            assert!(d <= 1e-3, "fixed point violated: {d}");
        }
    }
}

#[test]
fn beta_v_triangle_sandwich() {
    // T subset beta_v(T) subset ball_hull(T) = Reuleaux triangle.
    let tri = common::equilateral_triangle();
    let cfg = cfg2d();
    let v = Direction::from_angle(1.0);
    let b = beta_v(&tri, &v, &cfg).unwrap();
    let (hull, _) = ball_hull(&tri, 1.0, 64).unwrap();
    let grid = make_direction_grid(2, 0.05).unwrap();
    for u in grid.dirs() {
        let x = tri.boundary_point(u, 1e-10).unwrap();
        assert_ne!(b.membership(&x, 1e-6), Membership::Outside, "K not inside");
        let y = b.boundary_point(u, 1e-9).unwrap();
        assert_ne!(
            hull.membership(&y, 1e-6),
            Membership::Outside,
            "beta_v exceeds the ball hull"
        );
    }
}

#[test]
fn complete_triangle_converges_to_reuleaux() {
    let tri = common::equilateral_triangle();
    let cfg = cfg2d();
    let (done, trace) = complete(&tri, &cfg).unwrap();
    let last = trace.stages.last().unwrap();
    assert!(last.width_deficit <= cfg.width_tol);
    assert!((last.diameter - 1.0).abs() <= 2e-3);
    // Against the analytic Reuleaux triangle on the triangle's vertices.
    let verts = [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]];
    let oracle = common::ReuleauxOracle::from_vertices(&verts, 4000);
    let grid = make_direction_grid(2, std::f64::consts::PI / 256.0).unwrap();
    let mut worst = 0.0f64;
    for u in grid.dirs() {
        let h = done.support(u, 1e-9).unwrap().finite().unwrap();
        let theta = u.coords()[1].atan2(u.coords()[0]);
        worst = worst.max((h - oracle.support(theta)).abs());
    }
    assert!(worst <= 5e-3, "delta to analytic Reuleaux {worst}");
}

#[test]
fn complete_preserves_containment_and_diameter() {
    // Tight cover + nesting on random hulls.
    let mut rng = common::seeded_rng(21);
    let cfg = cfg2d();
    for _ in 0..3 {
        let k = common::random_unit_diameter_hull(&mut rng, 6);
        let (done, trace) = complete(&k, &cfg).unwrap();
        let last = trace.stages.last().unwrap();
        assert!((last.diameter - 1.0).abs() <= 2e-3, "diameter drifted");
        // 500-sample containment.
        let fan = make_direction_grid(2, std::f64::consts::PI / 250.0).unwrap();
        for u in fan.dirs() {
            let x = k.boundary_point(u, 1e-10).unwrap();
            assert_ne!(done.membership(&x, 1e-5), Membership::Outside);
        }
        // Stage bodies are nested (each table contains the previous).
        for w in 1..trace.stages.len() {
            let prev = &trace.stages[w - 1].body;
            let cur = &trace.stages[w].body;
            let probe = make_direction_grid(2, 0.06).unwrap();
            for u in probe.dirs() {
                let hp = prev.support(u, 1e-9).unwrap().finite().unwrap();
                let hc = cur.support(u, 1e-9).unwrap().finite().unwrap();
                assert!(hp <= hc + 1e-6, "stage {w} not nested");
            }
        }
    }
}

#[test]
fn diameter_endpoints_examples() {
    // Ball: every boundary point is a diameter endpoint.
    let ball = Body::ball(&[0.0, 0.0], 0.5).unwrap().with_diam_hint(1.0);
    let x = [0.5, 0.0];
    assert!(is_diameter_endpoint(&ball, &x, 1e-3).unwrap());
    // Triangle: vertices yes, edge midpoints no.
    let tri = common::equilateral_triangle();
    assert!(is_diameter_endpoint(&tri, &[0.0, 0.0], 1e-3).unwrap());
    assert!(!is_diameter_endpoint(&tri, &[0.5, 0.0], 1e-3).unwrap());
    // Reuleaux triangle: every boundary point.
    let r = reuleaux_polygon(3, None).unwrap();
    let grid = make_direction_grid(2, 0.3).unwrap();
    for u in grid.dirs() {
        let x = r.body().boundary_point(u, 1e-10).unwrap();
        assert!(is_diameter_endpoint(r.body(), &x, 1e-3).unwrap());
    }
    // Points away from the boundary are rejected.
    assert!(is_diameter_endpoint(&tri, &[0.5, 0.2], 1e-3).is_err());
}

#[test]
fn completeness_certificate_examples() {
    let grid = make_direction_grid(2, std::f64::consts::PI / 128.0).unwrap();
    let ball = Body::ball(&[0.0, 0.0], 0.5).unwrap();
    assert!(completeness_certificate(&ball, &grid, 2e-3).unwrap().pass);
    let tri = common::equilateral_triangle();
    let cert = completeness_certificate(&tri, &grid, 2e-3).unwrap();
    assert!(!cert.pass);
    assert!(cert.endpoint_fraction < 0.9);
    let cfg = cfg2d();
    let (done, _) = complete(&tri, &cfg).unwrap();
    let cert = completeness_certificate(&done, &grid, 2e-3).unwrap();
    assert!(cert.pass, "completed triangle certificate: {cert:?}");
}

#[test]
fn diameter_endpoints_persist_along_stages() {
    let tri = common::equilateral_triangle();
    let cfg = cfg2d();
    let v1 = Direction::from_angle(std::f64::consts::FRAC_PI_2);
    let v2 = Direction::from_angle(-std::f64::consts::FRAC_PI_2 + 0.3);
    let b1 = beta_v(&tri, &v1, &cfg).unwrap();
    let b2 = beta_v(&b1, &v2, &cfg).unwrap();
    // Triangle vertices are diameter endpoints of every later stage.
    for x in [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]] {
        assert!(is_diameter_endpoint(&b1, &x, 2e-3).unwrap());
        assert!(is_diameter_endpoint(&b2, &x, 2e-3).unwrap());
    }
}

#[test]
fn completion_is_stable_under_perturbation() {
    // delta(beta(K), beta(L)) / eps stays bounded as eps shrinks.
    let mut rng = common::seeded_rng(5);
    let base: Vec<Vec<f64>> = (0..6)
        .map(|_| vec![rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)])
        .collect();
    let normalize = |pts: &[Vec<f64>]| -> Body {
        let mut d = 0.0f64;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                d = d.max(
                    ((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2)).sqrt(),
                );
            }
        }
        Body::point_hull(pts.iter().map(|p| vec![p[0] / d, p[1] / d]).collect()).unwrap()
    };
    let cfg = cfg2d();
    let k = normalize(&base);
    let (bk, _) = complete(&k, &cfg).unwrap();
    let mut ratios = Vec::new();
    for eps in [1e-2, 5e-3, 2.5e-3] {
        let jittered: Vec<Vec<f64>> = base
            .iter()
            .map(|p| {
                vec![
                    p[0] + rng.gen_range(-eps..eps),
                    p[1] + rng.gen_range(-eps..eps),
                ]
            })
            .collect();
        let l = normalize(&jittered);
        let (bl, _) = complete(&l, &cfg).unwrap();
        let d = hausdorff_distance(&bk, &bl, &cfg.grid).unwrap();
        ratios.push(d / eps);
    }
    // Only boundedness is asserted; the true Lipschitz constant is unknown.
    for r in &ratios {
        assert!(*r < 12.0, "stability ratio blew up: {ratios:?}");
    }
}

#[test]
fn degenerate_input_is_rejected() {
    let point = Body::point_hull(vec![vec![0.3, 0.4]]).unwrap();
    let cfg = cfg2d();
    let v = Direction::from_angle(0.0);
    assert!(beta_v(&point, &v, &cfg).is_err());
}

#[test]
fn cylinder_unbounded_above_bounded_sideways() {
    let b = Body::ball(&[0.0, 0.0], 1.0).unwrap();
    let v = Direction::from_angle(std::f64::consts::FRAC_PI_2);
    let cyl = constwidth::completion::cylinder(&b, &v).unwrap();
    let u_up = Direction::from_angle(std::f64::consts::FRAC_PI_2 - 0.3);
    assert!(cyl.support(&u_up, 1e-9).unwrap().is_unbounded());
    let u_side = Direction::from_angle(std::f64::consts::PI);
    assert_eq!(
        cyl.support(&u_side, 1e-9).unwrap().finite().unwrap(),
        1.0
    );
}

#[test]
fn segment_completion_diameter_preserved() {
    let seg = Body::point_hull(vec![vec![-0.5, 0.0], vec![0.5, 0.0]]).unwrap();
    let cfg = cfg2d();
    let v = Direction::from_angle(std::f64::consts::FRAC_PI_2);
    let half_lens = beta_v(&seg, &v, &cfg).unwrap();
    let (d, _) = diameter(&half_lens, &cfg.grid, 1e-9).unwrap();
    assert!((d - 1.0).abs() < 2e-3);
    // Endpoints are retained.
    assert_ne!(
        half_lens.membership(&[0.5, 0.0], 1e-6),
        Membership::Outside
    );
    assert_ne!(
        half_lens.membership(&[-0.5, 0.0], 1e-6),
        Membership::Outside
    );
}
