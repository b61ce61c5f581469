//! The approximation pipeline: smoothing, spike-set selection on the lower
//! boundary, hull construction, completion, and the curvature-dichotomy
//! certificate on a spherical cap; plus the planar Reuleaux polygon
//! generator used as ground truth.
//!
//! Given a constant-width body `W0`, a direction `v`, and `eps > 0`, the
//! pipeline produces a constant-width body `Q` with `delta(W0, Q) <= eps`
//! such that at every cap normal the completed boundary lies on spheres of
//! radius 1 around the spike set: there the tangential radii are either
//! all 1 (single sphere) or some 0 (corner between spheres).

use crate::body::{width_profile, Body, SupportTable, TableBody};
use crate::completion::{complete, CompletionConfig, CompletionError, CompletionTrace};
use crate::curvature::{classify_normal, Classification, CurvatureReport, RhoSchedule};
use crate::error::{Error, Result};
use crate::geom::{hausdorff_distance, make_direction_grid, Cap, Direction, DirectionGrid};
use crate::vecmath as vm;

/// Stand-in for the dimension constant bounding the inradius of width-1
/// bodies; checked with a warning flag, not an error.
pub const C_N_CHECK: f64 = 0.05;

/// Pipeline configuration.
#[derive(Debug, Clone)]
pub struct T4Config {
    pub v: Direction,
    pub epsilon: f64,
    /// Smoothing weight; `None` selects it from `epsilon` and the distance
    /// of `W0` to the ball.
    pub sigma: Option<f64>,
    /// Upper bound on spike points.
    pub spike_budget: usize,
    pub cap: Cap,
    /// Initial estimate of the completion Lipschitz constant; doubled on
    /// overshoot.
    pub ell_hat: f64,
    pub max_restarts: usize,
    pub completion: CompletionConfig,
    pub classify_grid: DirectionGrid,
    pub eval_grid: DirectionGrid,
    pub schedule: RhoSchedule,
    pub tangent_count: usize,
    pub tol_one: f64,
    pub tol_zero: f64,
    /// Stand-in upper bound for the admissible epsilon.
    pub epsilon0: f64,
    /// Reporting slack accepted on top of epsilon.
    pub accept_slack: f64,
}

impl T4Config {
    pub fn new(v: Direction, epsilon: f64) -> Result<Self> {
        let dim = v.dim();
        let completion = CompletionConfig::for_dim(dim)?;
        let (classify_grid, eval_grid, tangent_count) = match dim {
            2 => (
                make_direction_grid(2, std::f64::consts::PI / 256.0)?,
                make_direction_grid(2, std::f64::consts::PI / 1024.0)?,
                2,
            ),
            3 => (
                make_direction_grid(3, 0.17)?,
                make_direction_grid(3, 0.09)?,
                24,
            ),
            d => (
                make_direction_grid(d, 0.6)?,
                make_direction_grid(d, 0.4)?,
                8,
            ),
        };
        Ok(T4Config {
            cap: Cap::half(v.clone()),
            v,
            epsilon,
            sigma: None,
            spike_budget: if dim == 2 { 4096 } else { 20000 },
            ell_hat: 4.0,
            max_restarts: 4,
            completion,
            classify_grid,
            eval_grid,
            schedule: RhoSchedule::default(),
            tangent_count,
            tol_one: crate::curvature::TOL_ONE,
            tol_zero: crate::curvature::TOL_ZERO,
            epsilon0: 0.25,
            accept_slack: 5e-3,
        })
    }
}

/// Chebyshev-style center of `W0` against the ball of radius 1/2:
/// minimizes `max_u |h(W0,u) - <c,u> - 1/2|` over the grid. Returns the
/// center and the achieved distance.
fn recenter(w0: &Body, grid: &DirectionGrid) -> Result<(Vec<f64>, f64)> {
    use crate::linprog::{seidel_lp, LpOutcome};
    let dim = w0.dim();
    let mut cons = Vec::with_capacity(2 * grid.len());
    for u in grid.dirs() {
        let h = w0.support(u, 1e-11)?.finite()?;
        // <c,u> + s >= h - 1/2  and  <c,u> - s <= h - 1/2
        let mut row = vm::neg(u.coords());
        row.push(-1.0);
        cons.push((row, 0.5 - h));
        let mut row = u.coords().to_vec();
        row.push(-1.0);
        cons.push((row, h - 0.5));
    }
    let mut obj = vec![0.0; dim];
    obj.push(-1.0);
    match seidel_lp(&cons, &obj, 10.0) {
        LpOutcome::Optimal(x) | LpOutcome::BoxBounded(x) => {
            Ok((x[..dim].to_vec(), x[dim].max(0.0)))
        }
        LpOutcome::Infeasible => Err(Error::InvalidInput("recentering LP infeasible".into())),
    }
}

/// Smoothing weight: the largest `sigma` in (0, 0.99] with
/// `sigma * delta(W0, B(c,1/2)) <= eps/2` after recentring.
pub fn choose_sigma(w0: &Body, epsilon: f64) -> Result<f64> {
    let grid = coarse_grid(w0.dim())?;
    let (_, delta) = recenter(w0, &grid)?;
    if delta < 1e-12 {
        return Ok(0.99);
    }
    Ok((epsilon / 2.0 / delta).min(0.99))
}

/// Minkowski combination `(1-sigma) W0 + sigma * B(c, 1/2)` with `c` the
/// recentering point; constant width 1 is preserved and the ball summand
/// makes the result smooth.
pub fn smooth_body(w0: &Body, sigma: f64) -> Result<Body> {
    if !(0.0 < sigma && sigma < 1.0) {
        return Err(Error::InvalidInput(format!(
            "sigma must lie in (0,1), got {sigma}"
        )));
    }
    let grid = coarse_grid(w0.dim())?;
    let (c, _) = recenter(w0, &grid)?;
    let ball = Body::ball(&c, 0.5)?;
    Body::support_combination(vec![(1.0 - sigma, w0.clone()), (sigma, ball)])
}

fn coarse_grid(dim: usize) -> Result<DirectionGrid> {
    match dim {
        2 => make_direction_grid(2, std::f64::consts::PI / 128.0),
        3 => make_direction_grid(3, 0.17),
        d => make_direction_grid(d, 0.5),
    }
}

/// Largest tangent offset along which internally tangent unit balls still
/// have nearly orthogonal boundary normals.
///
/// Configuration: `B_r` centered at the origin, boundary point `y = r e1`,
/// tangent `v = e2`; a unit ball `B_1 = B(c, 1)` with `B_r` inside and
/// `y + lambda v` on its sphere. The returned `alpha` guarantees
/// `<v, u1> <= 1/4` for every admissible configuration whenever
/// `lambda <= alpha` (brute-force sweep reduced by a 10% safety margin;
/// the extremal configuration is planar, so the 2D sweep covers all
/// dimensions).
pub fn alpha_of_r(r: f64) -> Result<f64> {
    if !(0.0 < r && r < 1.0) {
        return Err(Error::InvalidInput(format!(
            "alpha_of_r needs r in (0,1), got {r}"
        )));
    }
    // Monotone envelope scan in lambda, then bisection to the 1/4 level.
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    if worst_alignment(r, hi) <= 0.25 {
        return Ok(0.9 * hi);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if worst_alignment(r, mid) <= 0.25 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "no positive alpha found for r = {r}"
        )));
    }
    Ok(0.9 * lo)
}

/// `max <v, u1>` over admissible unit balls at tangent offset `lambda`.
pub fn worst_alignment(r: f64, lambda: f64) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    let samples = 4096;
    let eval = |phi: f64| -> f64 {
        let mut best = f64::NEG_INFINITY;
        // Ball center c = rho*(cos phi, sin phi) on the locus
        // |y + lambda v - c| = 1 with |c| <= 1 - r.
        let q = r * phi.cos() + lambda * phi.sin();
        let disc = q * q + 1.0 - r * r - lambda * lambda;
        if disc < 0.0 {
            return best;
        }
        for rho in [q + disc.sqrt(), q - disc.sqrt()] {
            if !(0.0..=1.0 - r + 1e-12).contains(&rho) {
                continue;
            }
            // u1 = (y + lambda v - c); its v-component is lambda - rho sin(phi).
            best = best.max(lambda - rho * phi.sin());
        }
        best
    };
    let mut best_phi = 0.0;
    for i in 0..samples {
        let phi = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / samples as f64;
        let v = eval(phi);
        if v > worst {
            worst = v;
            best_phi = phi;
        }
    }
    // Golden refinement around the best sample.
    let h = 2.0 * std::f64::consts::PI / samples as f64;
    let (mut a, mut b) = (best_phi - h, best_phi + h);
    for _ in 0..50 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if eval(m1) >= eval(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    worst.max(eval(0.5 * (a + b)))
}

/// A chosen spike set with its certificates.
#[derive(Debug, Clone)]
pub struct SpikeSet {
    /// The spike points M on the lower boundary of W.
    pub points: Vec<Vec<f64>>,
    /// The hull body `K = conv(M u upper-boundary samples)`.
    pub k_body: Body,
    pub achieved_delta: f64,
    pub normal_mesh: f64,
    pub inradius_estimate: f64,
    /// Whether the inradius estimate clears the dimension-constant check.
    pub inradius_ok: bool,
}

/// Spike points of `W` on the lower hemisphere of `v`, refined (grid
/// doubling) until `delta(W, conv(M u upper)) < eps_prime`.
pub fn pick_spike_set(
    w: &Body,
    v: &Direction,
    eps_prime: f64,
    budget: usize,
) -> Result<SpikeSet> {
    let dim = w.dim();
    let eval = eval_grid(dim)?;
    let mut achieved = f64::INFINITY;
    for level in 0..9 {
        let mesh = match dim {
            2 => std::f64::consts::PI / 8.0 * 0.5f64.powi(level),
            _ => 0.66 * 0.5f64.powi(level),
        };
        let grid = make_direction_grid(dim, mesh)?;
        let (m_points, k_body) = build_hull(w, v, &grid)?;
        if m_points.len() > budget {
            return Err(Error::NonConvergence {
                op: "pick_spike_set",
                achieved,
                needed: eps_prime,
                iterations: level as usize,
            });
        }
        let delta = hull_delta(w, &k_body, &eval)?;
        achieved = achieved.min(delta);
        if delta < eps_prime {
            let (inradius_estimate, _) = hull_inradius(&k_body, &eval)?;
            return Ok(SpikeSet {
                points: m_points,
                k_body,
                achieved_delta: delta,
                normal_mesh: mesh,
                inradius_estimate,
                inradius_ok: inradius_estimate >= C_N_CHECK,
            });
        }
    }
    Err(Error::NonConvergence {
        op: "pick_spike_set",
        achieved,
        needed: eps_prime,
        iterations: 9,
    })
}

/// `K = conv(M u tau(W, cl S(v)))` with both parts sampled at the normal
/// grid resolution; the equator pair of antipodal points with normals
/// orthogonal to `v` is always included, so `K` keeps diameter 1.
pub fn build_k(w: &Body, m_points: &[Vec<f64>], v: &Direction) -> Result<Body> {
    let dim = w.dim();
    let grid = match dim {
        2 => make_direction_grid(2, std::f64::consts::PI / 512.0)?,
        _ => make_direction_grid(dim, 0.09)?,
    };
    let (_, hull) = build_hull_from(w, v, &grid, Some(m_points))?;
    Ok(hull)
}

fn build_hull(w: &Body, v: &Direction, grid: &DirectionGrid) -> Result<(Vec<Vec<f64>>, Body)> {
    build_hull_from(w, v, grid, None)
}

fn build_hull_from(
    w: &Body,
    v: &Direction,
    grid: &DirectionGrid,
    fixed_m: Option<&[Vec<f64>]>,
) -> Result<(Vec<Vec<f64>>, Body)> {
    let mut m_points: Vec<Vec<f64>> = Vec::new();
    let mut points: Vec<Vec<f64>> = Vec::new();
    match fixed_m {
        Some(m) => {
            m_points = m.to_vec();
            points.extend(m.iter().cloned());
        }
        None => {
            for u in grid.dirs() {
                if v.dot(u) < -1e-9 {
                    m_points.push(w.boundary_point(u, 1e-12)?);
                }
            }
            points.extend(m_points.iter().cloned());
        }
    }
    // Upper boundary tau(W, cl S(v)) at the same resolution.
    for u in grid.dirs() {
        if v.dot(u) >= -1e-9 {
            points.push(w.boundary_point(u, 1e-12)?);
        }
    }
    // Antipodal pair with normals orthogonal to v: keeps diam K = 1.
    let u0 = Direction::new(&vm::tangent_basis(v.coords())[0])?;
    points.push(w.boundary_point(&u0, 1e-12)?);
    points.push(w.boundary_point(&u0.negate(), 1e-12)?);
    let hull = Body::point_hull(points)?;
    Ok((m_points, hull))
}

/// `sup_u (h(W,u) - h(K,u))`, the Hausdorff distance for `K inside W`.
fn hull_delta(w: &Body, k: &Body, grid: &DirectionGrid) -> Result<f64> {
    let mut worst = 0.0f64;
    for u in grid.dirs() {
        let hw = w.support(u, 1e-11)?.finite()?;
        let hk = k.support(u, 1e-11)?.finite()?;
        worst = worst.max(hw - hk);
    }
    Ok(worst)
}

fn hull_inradius(k: &Body, grid: &DirectionGrid) -> Result<(f64, Vec<f64>)> {
    let table = SupportTable::from_body(k, grid, 1e-11)?;
    let tb = TableBody::new(table)?;
    Ok((tb.inner_radius(), tb.anchor().to_vec()))
}

fn eval_grid(dim: usize) -> Result<DirectionGrid> {
    match dim {
        2 => make_direction_grid(2, std::f64::consts::PI / 1024.0),
        3 => make_direction_grid(3, 0.09),
        d => make_direction_grid(d, 0.4),
    }
}

/// One classified cap direction with its spike-sphere contact counts.
#[derive(Debug, Clone)]
pub struct T4Row {
    pub u: Direction,
    pub boundary_point: Vec<f64>,
    pub report: CurvatureReport,
    /// Spike spheres within 1e-3 of the boundary point.
    pub contacts_loose: usize,
    /// Spike spheres within 1e-6 (active contacts).
    pub contacts_sharp: usize,
    pub min_spike_dist: f64,
    pub second_spike_dist: f64,
}

/// Certificate of a pipeline run.
#[derive(Debug, Clone)]
pub struct T4Certificate {
    pub delta_to_input: f64,
    pub sigma: f64,
    pub eps_prime: f64,
    pub ell_hat: f64,
    pub restarts: usize,
    pub spike_points: Vec<Vec<f64>>,
    pub inradius_ok: bool,
    pub rows: Vec<T4Row>,
    pub trace: CompletionTrace,
}

impl T4Certificate {
    pub fn indeterminate_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        let n = self
            .rows
            .iter()
            .filter(|r| matches!(r.report.classification, Classification::Indeterminate))
            .count();
        n as f64 / self.rows.len() as f64
    }
}

/// Full pipeline: smooth, pick spikes, hull, complete with `v` first,
/// certify. Restarts with a doubled Lipschitz estimate when the output
/// overshoots `epsilon`.
pub fn theorem4(w0: &Body, cfg: &T4Config) -> Result<(Body, T4Certificate)> {
    if !(cfg.epsilon > 0.0 && cfg.epsilon <= cfg.epsilon0) {
        return Err(Error::InvalidInput(format!(
            "epsilon must lie in (0, {}], got {}",
            cfg.epsilon0, cfg.epsilon
        )));
    }
    let wp = width_profile(w0, &cfg.eval_grid)?;
    if wp.deficit > 1e-2 || (wp.max_width - 1.0).abs() > 1e-2 {
        return Err(Error::InvalidInput(format!(
            "theorem4 input must have constant width 1 (deficit {:.3e}, width {:.6})",
            wp.deficit, wp.max_width
        )));
    }
    let sigma = match cfg.sigma {
        Some(s) => s,
        None => choose_sigma(w0, cfg.epsilon)?,
    };
    let w = smooth_body(w0, sigma)?;
    let alpha = alpha_of_r(sigma / 2.0)?;
    let mut ell_hat = cfg.ell_hat;
    let mut last_err: Option<Error> = None;
    for restart in 0..=cfg.max_restarts {
        let eps_prime = (cfg.epsilon / 2.0).min(alpha) / ell_hat;
        let spikes = match pick_spike_set(&w, &cfg.v, eps_prime, cfg.spike_budget) {
            Ok(s) => s,
            Err(e) => {
                last_err = Some(e);
                break;
            }
        };
        let ccfg = cfg.completion.clone().with_first_direction(cfg.v.clone());
        let (q, trace) = match complete(&spikes.k_body, &ccfg) {
            Ok(ok) => ok,
            Err(CompletionError::Stalled { deficit, .. }) => {
                last_err = Some(Error::NonConvergence {
                    op: "theorem4 completion",
                    achieved: deficit,
                    needed: ccfg.width_tol,
                    iterations: ccfg.max_passes,
                });
                ell_hat *= 2.0;
                continue;
            }
            Err(CompletionError::Other(e)) => return Err(e),
        };
        let delta = hausdorff_distance(w0, &q, &cfg.eval_grid)?;
        if delta > cfg.epsilon + cfg.accept_slack {
            last_err = Some(Error::NonConvergence {
                op: "theorem4 overshoot",
                achieved: delta,
                needed: cfg.epsilon,
                iterations: restart,
            });
            ell_hat *= 2.0;
            continue;
        }
        let rows = certify_cap(&q, cfg, &spikes.points)?;
        let cert = T4Certificate {
            delta_to_input: delta,
            sigma,
            eps_prime,
            ell_hat,
            restarts: restart,
            spike_points: spikes.points,
            inradius_ok: spikes.inradius_ok,
            rows,
            trace,
        };
        return Ok((q, cert));
    }
    Err(last_err.unwrap_or(Error::NonConvergence {
        op: "theorem4",
        achieved: f64::INFINITY,
        needed: cfg.epsilon,
        iterations: cfg.max_restarts,
    }))
}

fn certify_cap(q: &Body, cfg: &T4Config, spikes: &[Vec<f64>]) -> Result<Vec<T4Row>> {
    let mut rows = Vec::new();
    for u in cfg.classify_grid.dirs() {
        if !cfg.cap.contains(u) {
            continue;
        }
        let report = classify_normal(
            q,
            u,
            cfg.tol_one,
            cfg.tol_zero,
            &cfg.schedule,
            cfg.tangent_count,
        )?;
        let x = q.boundary_point(u, 1e-12)?;
        let mut dists: Vec<f64> = spikes
            .iter()
            .map(|z| (vm::dist(&x, z) - 1.0).abs())
            .collect();
        dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let contacts_loose = dists.iter().filter(|d| **d <= 1e-3).count();
        let contacts_sharp = dists.iter().filter(|d| **d <= 1e-6).count();
        rows.push(T4Row {
            u: u.clone(),
            boundary_point: x,
            report,
            contacts_loose,
            contacts_sharp,
            min_spike_dist: dists.first().copied().unwrap_or(f64::INFINITY),
            second_spike_dist: dists.get(1).copied().unwrap_or(f64::INFINITY),
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Reuleaux polygons

/// Which ground-truth radius a normal direction sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReuleauxLabel {
    /// Normal of an arc interior: radius of curvature 1.
    ArcOne,
    /// Normal inside a vertex fan: radius of curvature 0.
    FanZero,
}

/// A planar Reuleaux polygon of width 1 with exact arc/fan structure.
#[derive(Debug, Clone)]
pub struct ReuleauxPolygon {
    vertices: Vec<[f64; 2]>,
    /// Interval boundaries of the 2k alternating arc/fan normal intervals,
    /// starting at angle `theta0 = 0` (post-centering the geometry is
    /// translated, angles are unchanged).
    boundaries: Vec<f64>,
    body: Body,
}

impl ReuleauxPolygon {
    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn sides(&self) -> usize {
        self.vertices.len()
    }

    /// Fraction of the normal circle covered by arc normals (always 1/2).
    pub fn arc_fraction(&self) -> f64 {
        let mut arc = 0.0;
        for j in (0..self.boundaries.len() - 1).step_by(2) {
            arc += self.boundaries[j + 1] - self.boundaries[j];
        }
        arc / (2.0 * std::f64::consts::PI)
    }

    /// Ground-truth radius label of the normal angle `theta`.
    pub fn label(&self, theta: f64) -> ReuleauxLabel {
        let j = self.interval_index(theta);
        if j % 2 == 0 {
            ReuleauxLabel::ArcOne
        } else {
            ReuleauxLabel::FanZero
        }
    }

    /// Angular distance from `theta` to the nearest arc/fan boundary.
    pub fn boundary_margin(&self, theta: f64) -> f64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        let t = theta.rem_euclid(two_pi);
        self.boundaries
            .iter()
            .map(|b| {
                let d = (t - b.rem_euclid(two_pi)).abs();
                d.min(two_pi - d)
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn interval_index(&self, theta: f64) -> usize {
        let two_pi = 2.0 * std::f64::consts::PI;
        let t = theta.rem_euclid(two_pi);
        for j in 0..self.boundaries.len() - 1 {
            if t >= self.boundaries[j] && t < self.boundaries[j + 1] {
                return j;
            }
        }
        0
    }
}

/// Build a Reuleaux polygon of width 1 from an odd number of arcs and an
/// arc partition (angles summing to pi). Equal arcs give the regular
/// polygon; partitions for which the classical construction does not close
/// are rejected.
pub fn reuleaux_polygon(odd_k: usize, arc_partition: Option<&[f64]>) -> Result<ReuleauxPolygon> {
    if odd_k < 3 || odd_k % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "Reuleaux polygon needs an odd number of arcs >= 3, got {odd_k}"
        )));
    }
    let partition: Vec<f64> = match arc_partition {
        Some(p) => p.to_vec(),
        None => vec![std::f64::consts::PI / odd_k as f64; odd_k],
    };
    if partition.len() != odd_k {
        return Err(Error::InvalidInput(format!(
            "partition length {} does not match k = {odd_k}",
            partition.len()
        )));
    }
    if partition.iter().any(|&w| w <= 0.0) {
        return Err(Error::InvalidInput("partition angles must be positive".into()));
    }
    let sum: f64 = partition.iter().sum();
    if (sum - std::f64::consts::PI).abs() > 1e-9 {
        return Err(Error::NonClosingPartition {
            residual: (sum - std::f64::consts::PI).abs(),
        });
    }
    // Interval boundaries: widths repeat the partition twice (interval j
    // and j+k pair up as the arc and the opposite vertex fan).
    let mut boundaries = vec![0.0f64];
    for j in 0..2 * odd_k {
        boundaries.push(boundaries[j] + partition[j % odd_k]);
    }
    let u_at = |theta: f64| [theta.cos(), theta.sin()];
    // Walk the arc centers: c_{i+1} = c_i + u(B_{2i+1}) - u(B_{2i+2}).
    let mut centers = vec![[0.0f64, 0.0f64]];
    for i in 0..odd_k {
        let a = u_at(boundaries[2 * i + 1]);
        let b = u_at(boundaries[2 * i + 2]);
        let c = centers[i];
        centers.push([c[0] + a[0] - b[0], c[1] + a[1] - b[1]]);
    }
    let closure = vm::dist(&centers[0], &centers[odd_k]);
    // Pairing constraints: the vertex entered at B_{2i+1} must be the
    // center of the opposite arc.
    let mut residual = closure;
    for i in 0..odd_k {
        let sigma = (i + (odd_k + 1) / 2) % odd_k;
        let a = u_at(boundaries[2 * i + 1]);
        let w = [centers[i][0] + a[0], centers[i][1] + a[1]];
        residual = residual.max(vm::dist(&w, &centers[sigma]));
    }
    if residual > 1e-9 {
        return Err(Error::NonClosingPartition { residual });
    }
    centers.truncate(odd_k);
    // Center at the vertex centroid.
    let mut centroid = [0.0f64, 0.0f64];
    for c in &centers {
        centroid[0] += c[0] / odd_k as f64;
        centroid[1] += c[1] / odd_k as f64;
    }
    let vertices: Vec<[f64; 2]> = centers
        .iter()
        .map(|c| [c[0] - centroid[0], c[1] - centroid[1]])
        .collect();
    let parts: Vec<Body> = vertices
        .iter()
        .map(|c| Body::ball(&[c[0], c[1]], 1.0).unwrap())
        .collect();
    let body = Body::intersection(parts, vec![0.0, 0.0])?.with_diam_hint(1.0);
    Ok(ReuleauxPolygon {
        vertices,
        boundaries,
        body,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::width_profile;

    #[test]
    fn reuleaux_triangle_has_width_one() {
        let r = reuleaux_polygon(3, None).unwrap();
        let grid = make_direction_grid(2, std::f64::consts::PI / 256.0).unwrap();
        let wp = width_profile(r.body(), &grid).unwrap();
        assert!(wp.deficit < 1e-9, "deficit {}", wp.deficit);
        assert!((wp.max_width - 1.0).abs() < 1e-9);
    }

    #[test]
    fn reuleaux_arc_fraction_is_half() {
        for k in [3usize, 5, 7] {
            let r = reuleaux_polygon(k, None).unwrap();
            assert!((r.arc_fraction() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn reuleaux_rejects_non_closing() {
        assert!(matches!(
            reuleaux_polygon(3, Some(&[1.0, 1.0, std::f64::consts::PI - 2.0])),
            Err(Error::NonClosingPartition { .. })
        ));
        assert!(reuleaux_polygon(4, None).is_err());
    }

    #[test]
    fn ball_sigma_is_capped() {
        let b = Body::ball(&[0.0, 0.0], 0.5).unwrap();
        assert!((choose_sigma(&b, 0.1).unwrap() - 0.99).abs() < 1e-12);
    }

    #[test]
    fn smooth_body_of_ball_is_ball() {
        let b = Body::ball(&[0.0, 0.0], 0.5).unwrap();
        let w = smooth_body(&b, 0.5).unwrap();
        let u = Direction::from_angle(0.8);
        assert!((w.support(&u, 1e-12).unwrap().finite().unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn alpha_of_r_is_positive_and_verified() {
        let a = alpha_of_r(0.25).unwrap();
        assert!(a > 0.0);
        assert!(worst_alignment(0.25, a) <= 0.25);
        assert!(alpha_of_r(0.01).unwrap() > 0.0);
        assert!(alpha_of_r(1.5).is_err());
    }
}
