//! Oracle consistency of the body model across the primitive zoo, plus
//! the width/diameter/reflection identities.

mod common;

use constwidth::body::{diameter, width_profile, Membership};
use constwidth::t4::reuleaux_polygon;
use constwidth::{make_direction_grid, minkowski_combine, Body, Direction};
use rand::Rng;

fn body_zoo() -> Vec<(&'static str, Body)> {
    let reuleaux = reuleaux_polygon(3, None).unwrap();
    let lens = Body::intersection(
        vec![
            Body::ball(&[-0.4, 0.0], 1.0).unwrap(),
            Body::ball(&[0.4, 0.0], 1.0).unwrap(),
        ],
        vec![0.0, 0.0],
    )
    .unwrap();
    let combo = minkowski_combine(vec![
        (0.6, reuleaux.body().clone()),
        (0.4, Body::ball(&[0.0, 0.0], 0.5).unwrap()),
    ])
    .unwrap();
    vec![
        ("ball", Body::ball(&[0.1, -0.2], 0.7).unwrap()),
        ("hull", common::equilateral_triangle()),
        ("reuleaux", reuleaux.body().clone()),
        ("lens", lens),
        ("combo", combo),
    ]
}

#[test]
fn oracle_consistency_on_random_directions() {
    // Boundary points support-match and are members, across the zoo.
    let mut rng = common::seeded_rng(3);
    for (name, body) in body_zoo() {
        for _ in 0..200 {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let u = Direction::from_angle(theta);
            let tol = 1e-9;
            let h = body.support(&u, tol).unwrap().finite().unwrap();
            let x = body.boundary_point(&u, tol).unwrap();
            let xs = x[0] * u.coords()[0] + x[1] * u.coords()[1];
            assert!(
                xs >= h - 2.0 * 1e-7 && xs <= h + 1e-7,
                "{name}: support {h}, boundary dot {xs}"
            );
            assert_ne!(
                body.membership(&x, 1e-6),
                Membership::Outside,
                "{name}: boundary point outside"
            );
        }
    }
}

#[test]
fn intersection_support_is_subadditive() {
    let a = Body::ball(&[-0.4, 0.0], 1.0).unwrap();
    let b = Body::ball(&[0.4, 0.1], 0.9).unwrap();
    let inter = Body::intersection(vec![a.clone(), b.clone()], vec![0.0, 0.0]).unwrap();
    let grid = make_direction_grid(2, 0.05).unwrap();
    for u in grid.dirs() {
        let hi = inter.support(u, 1e-9).unwrap().finite().unwrap();
        let ha = a.support(u, 1e-9).unwrap().finite().unwrap();
        let hb = b.support(u, 1e-9).unwrap().finite().unwrap();
        assert!(hi <= ha.min(hb) + 1e-9);
    }
}

#[test]
fn support_is_monotone_under_inclusion() {
    let inner = common::equilateral_triangle();
    let outer = Body::ball(&[0.5, 0.3], 1.0).unwrap();
    let grid = make_direction_grid(2, 0.1).unwrap();
    // Certify inclusion on boundary samples first.
    for u in grid.dirs() {
        let x = inner.boundary_point(u, 1e-10).unwrap();
        assert_ne!(outer.membership(&x, 1e-9), Membership::Outside);
    }
    for u in grid.dirs() {
        let hi = inner.support(u, 1e-10).unwrap().finite().unwrap();
        let ho = outer.support(u, 1e-10).unwrap().finite().unwrap();
        assert!(hi <= ho + 1e-9);
    }
}

#[test]
fn constant_width_antipodal_relation() {
    // x_K(-u) = x_K(u) - u for width-1 bodies.
    let r = reuleaux_polygon(5, None).unwrap();
    let grid = make_direction_grid(2, 0.03).unwrap();
    for u in grid.dirs().iter().step_by(5) {
        let x = r.body().boundary_point(u, 1e-11).unwrap();
        let y = r.body().boundary_point(&u.negate(), 1e-11).unwrap();
        let ex = [x[0] - u.coords()[0], x[1] - u.coords()[1]];
        assert!(
            ((y[0] - ex[0]).powi(2) + (y[1] - ex[1]).powi(2)).sqrt() < 1e-7,
            "antipodal relation violated"
        );
    }
}

#[test]
fn reuleaux_boundary_point_on_arc_midpoint() {
    // At the outward normal of an arc midpoint the boundary point is the
    // midpoint itself, at distance 1 from the opposite vertex.
    let r = reuleaux_polygon(3, None).unwrap();
    let verts = r.vertices();
    // Arc centered at vertex 0 spans towards the other two vertices.
    let v = verts[0];
    let a1 = (verts[1][1] - v[1]).atan2(verts[1][0] - v[0]);
    let a2 = (verts[2][1] - v[1]).atan2(verts[2][0] - v[0]);
    let mut span = a2 - a1;
    while span > std::f64::consts::PI {
        span -= std::f64::consts::TAU;
    }
    while span < -std::f64::consts::PI {
        span += std::f64::consts::TAU;
    }
    let mid_angle = a1 + span / 2.0;
    let u = Direction::from_angle(mid_angle);
    let x = r.body().boundary_point(&u, 1e-11).unwrap();
    let expected = [v[0] + mid_angle.cos(), v[1] + mid_angle.sin()];
    assert!(((x[0] - expected[0]).powi(2) + (x[1] - expected[1]).powi(2)).sqrt() < 1e-9);
    let dist_to_vertex = ((x[0] - v[0]).powi(2) + (x[1] - v[1]).powi(2)).sqrt();
    assert!((dist_to_vertex - 1.0).abs() < 1e-9);
}

#[test]
fn reuleaux_width_is_one() {
    for k in [3usize, 5, 7] {
        let r = reuleaux_polygon(k, None).unwrap();
        let grid = make_direction_grid(2, std::f64::consts::PI / 1024.0).unwrap();
        let wp = width_profile(r.body(), &grid).unwrap();
        assert!(wp.deficit < 1e-9, "k={k}: deficit {}", wp.deficit);
        assert!((wp.min_width - 1.0).abs() < 1e-9);
    }
}

#[test]
fn reuleaux_diameter_witness() {
    let r = reuleaux_polygon(3, None).unwrap();
    let grid = make_direction_grid(2, std::f64::consts::PI / 512.0).unwrap();
    let (d, (p, q)) = diameter(r.body(), &grid, 1e-10).unwrap();
    assert!((d - 1.0).abs() < 1e-6);
    let w = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
    assert!((w - 1.0).abs() < 1e-3);
}

#[test]
fn reflection_sum_of_reuleaux_is_unit_ball() {
    // K + (-K) for a width-1 body has support identically 1.
    let r = reuleaux_polygon(3, None).unwrap();
    let sum = minkowski_combine(vec![
        (1.0, r.body().clone()),
        (1.0, r.body().reflect()),
    ])
    .unwrap();
    let grid = make_direction_grid(2, 0.01).unwrap();
    for u in grid.dirs() {
        let h = sum.support(u, 1e-10).unwrap().finite().unwrap();
        assert!((h - 1.0).abs() < 1e-9);
    }
}

#[test]
fn ball_reflection_sum_is_unit_ball() {
    let k = Body::ball(&[0.2, -0.1], 0.5).unwrap();
    let sum = minkowski_combine(vec![(1.0, k.clone()), (1.0, k.reflect())]).unwrap();
    let grid = make_direction_grid(2, 0.1).unwrap();
    for u in grid.dirs() {
        let h = sum.support(u, 1e-12).unwrap().finite().unwrap();
        assert!((h - 1.0).abs() < 1e-12);
    }
}

#[test]
fn support_combination_matches_smoothing_formula() {
    // h((1-s) W0 + s B(o,1/2), u) = (1-s) h(W0,u) + s/2 exactly.
    let r = reuleaux_polygon(3, None).unwrap();
    let s = 0.37;
    let combo = minkowski_combine(vec![
        (1.0 - s, r.body().clone()),
        (s, Body::ball(&[0.0, 0.0], 0.5).unwrap()),
    ])
    .unwrap();
    let grid = make_direction_grid(2, 0.05).unwrap();
    for u in grid.dirs() {
        let h = combo.support(u, 1e-12).unwrap().finite().unwrap();
        let h0 = r.body().support(u, 1e-12).unwrap().finite().unwrap();
        assert!((h - ((1.0 - s) * h0 + s * 0.5)).abs() < 1e-12);
    }
}
