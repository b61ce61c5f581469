//! Shared independent oracles for the integration suites.
//!
//! Everything here recomputes expected values through routes that do not
//! touch the library's oracle implementations: dense boundary sampling,
//! point-set Hausdorff distances, closed-form ellipsoid curvature, and the
//! spherical-cap sagitta.

#![allow(dead_code)]

use constwidth::body::Body;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Brute-force support oracle for a Reuleaux polygon given its vertices:
/// dense samples of the unit arcs, each spanning between the two vertices
/// at (maximal) distance 1 from its center.
pub struct ReuleauxOracle {
    pub samples: Vec<[f64; 2]>,
}

impl ReuleauxOracle {
    pub fn from_vertices(vertices: &[[f64; 2]], samples_per_arc: usize) -> Self {
        let k = vertices.len();
        let mut samples = Vec::with_capacity(k * samples_per_arc);
        for (i, v) in vertices.iter().enumerate() {
            // The two vertices at distance ~1 from v bound its arc.
            let mut far: Vec<(f64, usize)> = (0..k)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = ((vertices[j][0] - v[0]).powi(2)
                        + (vertices[j][1] - v[1]).powi(2))
                    .sqrt();
                    (d, j)
                })
                .collect();
            far.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
            let (d1, j1) = far[0];
            let (d2, j2) = far[1];
            assert!((d1 - 1.0).abs() < 1e-9, "vertex distance {d1}");
            assert!((d2 - 1.0).abs() < 1e-9, "vertex distance {d2}");
            let a1 = (vertices[j1][1] - v[1]).atan2(vertices[j1][0] - v[0]);
            let a2 = (vertices[j2][1] - v[1]).atan2(vertices[j2][0] - v[0]);
            // Sweep the shorter angular interval from a1 to a2.
            let mut span = a2 - a1;
            while span > std::f64::consts::PI {
                span -= 2.0 * std::f64::consts::PI;
            }
            while span < -std::f64::consts::PI {
                span += 2.0 * std::f64::consts::PI;
            }
            for s in 0..=samples_per_arc {
                let t = a1 + span * s as f64 / samples_per_arc as f64;
                samples.push([v[0] + t.cos(), v[1] + t.sin()]);
            }
        }
        ReuleauxOracle { samples }
    }

    pub fn support(&self, theta: f64) -> f64 {
        let (c, s) = (theta.cos(), theta.sin());
        self.samples
            .iter()
            .map(|p| p[0] * c + p[1] * s)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Symmetric point-set Hausdorff distance on dense samples.
pub fn brute_hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let directed = |from: &[[f64; 2]], to: &[[f64; 2]]| -> f64 {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Dense boundary samples of an axis-aligned square `[x0,x1] x [y0,y1]`.
pub fn square_boundary(x0: f64, x1: f64, y0: f64, y1: f64, per_side: usize) -> Vec<[f64; 2]> {
    let mut pts = Vec::with_capacity(4 * per_side);
    for i in 0..per_side {
        let t = i as f64 / per_side as f64;
        pts.push([x0 + t * (x1 - x0), y0]);
        pts.push([x1, y0 + t * (y1 - y0)]);
        pts.push([x1 - t * (x1 - x0), y1]);
        pts.push([x0, y1 - t * (y1 - y0)]);
    }
    pts
}

/// Height lost when a spherical cap of angular radius `psi` is cut off a
/// sphere of radius `r` by the chord plane.
pub fn cap_sagitta(r: f64, psi: f64) -> f64 {
    r * (1.0 - psi.cos())
}

/// Closed-form principal tangential radii of a centered axis-aligned
/// ellipsoid at outward normal `u`: eigenvalues of the support-function
/// Hessian restricted to the tangent space.
pub fn ellipsoid_tangential_radii(semi_axes: &[f64], u: &[f64]) -> Vec<f64> {
    use nalgebra::{DMatrix, SymmetricEigen};
    let n = semi_axes.len();
    let du: Vec<f64> = semi_axes.iter().zip(u).map(|(a, x)| a * x).collect();
    let norm_du = du.iter().map(|x| x * x).sum::<f64>().sqrt();
    // H = (D^2 - (D^2 u)(D^2 u)^T / |Du|^2) / |Du|
    let d2u: Vec<f64> = semi_axes.iter().zip(u).map(|(a, x)| a * a * x).collect();
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut v = if i == j {
                semi_axes[i] * semi_axes[i]
            } else {
                0.0
            };
            v -= d2u[i] * d2u[j] / (norm_du * norm_du);
            h[(i, j)] = v / norm_du;
        }
    }
    // Orthonormal basis of u^perp by Gram-Schmidt over axes.
    let mut basis: Vec<Vec<f64>> = vec![u.to_vec()];
    for i in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        for b in &basis {
            let p: f64 = e.iter().zip(b).map(|(x, y)| x * y).sum();
            for (xi, bi) in e.iter_mut().zip(b) {
                *xi -= p * bi;
            }
        }
        let nn = e.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nn > 1e-8 {
            basis.push(e.iter().map(|x| x / nn).collect());
        }
    }
    let tangent = &basis[1..];
    let m = tangent.len();
    let mut proj = DMatrix::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    acc += tangent[a][i] * h[(i, j)] * tangent[b][j];
                }
            }
            proj[(a, b)] = acc;
        }
    }
    let eig = SymmetricEigen::new(proj);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Equilateral triangle of side 1 with base on the x-axis.
pub fn equilateral_triangle() -> Body {
    Body::point_hull(vec![
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![0.5, 3f64.sqrt() / 2.0],
    ])
    .unwrap()
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random planar point set whose hull has diameter exactly 1.
pub fn random_unit_diameter_hull(rng: &mut ChaCha8Rng, n_points: usize) -> Body {
    loop {
        let pts: Vec<Vec<f64>> = (0..n_points)
            .map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
            .collect();
        let mut d = 0.0f64;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let dd = ((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2))
                    .sqrt();
                d = d.max(dd);
            }
        }
        if d < 1e-3 {
            continue;
        }
        let scaled: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| vec![p[0] / d, p[1] / d])
            .collect();
        // Reject near-degenerate (collinear) sets; the completion pipeline
        // handles them, but the acceptance statistics want full-dimensional
        // hulls.
        let area_ok = {
            let mut best = 0.0f64;
            for i in 0..scaled.len() {
                for j in i + 1..scaled.len() {
                    for k in j + 1..scaled.len() {
                        let ax = scaled[j][0] - scaled[i][0];
                        let ay = scaled[j][1] - scaled[i][1];
                        let bx = scaled[k][0] - scaled[i][0];
                        let by = scaled[k][1] - scaled[i][1];
                        best = best.max((ax * by - ay * bx).abs());
                    }
                }
            }
            best > 0.05
        };
        if area_ok {
            return Body::point_hull(scaled).unwrap();
        }
    }
}
