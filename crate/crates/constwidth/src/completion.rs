//! The completion operator: cylinders `Z^+(K,v)`, ball hulls, the
//! single-direction completion `beta_v`, and its iteration `beta` that
//! terminates in a body of constant width.
//!
//! `beta_v(K) = Z^+(K,v) inter (inter_{x in K} B(x, d_K))` is a tight
//! cover of `K` (same diameter) and adds material only where needed; all
//! its boundary points reachable "from above" along `v` are diameter
//! endpoints. Sweeping a direction set whose caps cover the sphere and
//! repeating until the width deficit converges yields a constant-width
//! body containing `K`.
//!
//! `complete` runs an accelerated pipeline: each stage is represented by
//! its support table over a fixed symmetric grid (an outer polytope with
//! `O(mesh^2)` one-sided error) plus the exact ball/cylinder constraint
//! tree; ball-hull generators are fresh boundary samples of the previous
//! stage. The returned body is the exact constraint tree of the last
//! stage, so downstream curvature queries see true radius-`d` spheres.

use crate::body::{diameter, width_profile, Body, Membership, Node, SupportTable, TableBody};
use crate::error::{Error, Result};
use crate::geom::{make_direction_grid, Direction, DirectionGrid};
use crate::vecmath as vm;
use thiserror::Error as ThisError;

/// Configuration of the iterated completion.
#[derive(Debug, Clone)]
pub struct CompletionConfig {
    /// Completion directions v_1..v_p; their caps of threshold 1/2 must
    /// cover the sphere.
    pub directions: Vec<Direction>,
    /// Upper bound on ball-hull generators taken per stage.
    pub boundary_sample_count: usize,
    /// Width-deficit target.
    pub width_tol: f64,
    /// Maximum number of sweeps over the direction set.
    pub max_passes: usize,
    /// Symmetric grid carrying the stage support tables and all metrics.
    pub grid: DirectionGrid,
    /// Ray fan used to sample stage boundaries in dimension 3.
    pub sample_grid: DirectionGrid,
}

impl CompletionConfig {
    pub fn for_dim(dim: usize) -> Result<Self> {
        match dim {
            2 => {
                let grid = make_direction_grid(2, std::f64::consts::PI / 2048.0)?;
                let sample_grid = make_direction_grid(2, std::f64::consts::PI / 256.0)?;
                let directions = (0..6)
                    .map(|k| Direction::from_angle(std::f64::consts::PI * k as f64 / 3.0))
                    .collect();
                Self::new(directions, 512, 1e-3, 8, grid, sample_grid)
            }
            3 => {
                let grid = make_direction_grid(3, 0.045)?;
                let sample_grid = make_direction_grid(3, 0.045)?;
                let directions = make_direction_grid(3, 1.2)?.dirs().to_vec();
                Self::new(directions, 4000, 5e-3, 8, grid, sample_grid)
            }
            d if d >= 2 => {
                let grid = make_direction_grid(d, 0.3)?;
                let sample_grid = grid.clone();
                let directions = make_direction_grid(d, 1.0)?.dirs().to_vec();
                Self::new(directions, 2000, 1e-2, 8, grid, sample_grid)
            }
            d => Err(Error::DimensionTooSmall(d)),
        }
    }

    pub fn new(
        directions: Vec<Direction>,
        boundary_sample_count: usize,
        width_tol: f64,
        max_passes: usize,
        grid: DirectionGrid,
        sample_grid: DirectionGrid,
    ) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::InvalidInput("completion needs at least one direction".into()));
        }
        // The caps C(v_i) with threshold 1/2 must cover the sphere; check
        // on the metric grid.
        for u in grid.dirs() {
            if !directions.iter().any(|v| v.dot(u) >= 0.5 - 1e-9) {
                return Err(Error::InvalidInput(format!(
                    "completion caps do not cover the sphere (uncovered direction near {:?})",
                    u.coords()
                )));
            }
        }
        Ok(CompletionConfig {
            directions,
            boundary_sample_count,
            width_tol,
            max_passes,
            grid,
            sample_grid,
        })
    }

    /// Same configuration with `v` moved to the front of the sweep order
    /// (the completion pipeline may assume `v_1 = v`).
    pub fn with_first_direction(mut self, v: Direction) -> Self {
        self.directions.retain(|w| w.dot(&v) < 1.0 - 1e-12);
        self.directions.insert(0, v);
        self
    }
}

/// One recorded completion stage.
#[derive(Debug, Clone)]
pub struct CompletionStage {
    /// Outer-polytope snapshot of the stage.
    pub body: Body,
    pub diameter: f64,
    pub width_deficit: f64,
    /// Hausdorff distance to the previous stage (support-table sup gap).
    pub hausdorff_step: f64,
}

#[derive(Debug, Clone, Default)]
pub struct CompletionTrace {
    pub stages: Vec<CompletionStage>,
}

#[derive(Debug, ThisError)]
pub enum CompletionError {
    #[error("completion stalled: width deficit {deficit:.3e} > {tol:.3e} after {passes} passes")]
    Stalled {
        deficit: f64,
        tol: f64,
        passes: usize,
        trace: CompletionTrace,
    },
    #[error(transparent)]
    Other(#[from] Error),
}

/// The cylinder `Z^+(K, v)` above `K` in direction `v`.
pub fn cylinder(k: &Body, v: &Direction) -> Result<Body> {
    Body::cylinder(k.clone(), v.clone())
}

/// Intersection of balls `B(x_i, d)` over generators of `K`: exact hull
/// points for point hulls, otherwise boundary samples (an outer
/// approximation of the true ball hull whose generator count doubles until
/// the support moves by less than `width_tol/4`). Returns the hull body and
/// the last observed support drop.
pub fn ball_hull(k: &Body, d: f64, sample_count: usize) -> Result<(Body, f64)> {
    let dim = k.dim();
    let probe = probe_grid(dim)?;
    let (dk, _) = diameter(k, &probe, 1e-9)?;
    if d < dk - 1e-6 {
        return Err(Error::InvalidInput(format!(
            "ball hull radius {d} below the diameter {dk}"
        )));
    }
    let (gens, drop) = match k.node() {
        Node::PointHull { points } => (points.clone(), 0.0),
        _ => {
            let mut count = sample_count.max(8);
            let mut gens = sample_boundary(k, count)?;
            let mut drop = f64::INFINITY;
            for _ in 0..3 {
                let doubled = sample_boundary(k, count * 2)?;
                drop = max_support_drop(&gens, &doubled, d, &probe);
                if drop < 1e-3 / 4.0 {
                    break;
                }
                count *= 2;
                gens = doubled;
            }
            (gens, drop)
        }
    };
    let interior = hull_anchor(k, &gens);
    let parts: Vec<Body> = gens.iter().map(|g| Body::ball(g, d).unwrap()).collect();
    let body = Body::intersection(parts, interior)?.with_diam_hint(d);
    Ok((body, drop))
}

/// Single-direction completion `beta_v(K)`, certified to contain `K` on
/// boundary samples.
pub fn beta_v(k: &Body, v: &Direction, cfg: &CompletionConfig) -> Result<Body> {
    let (d, _) = diameter(k, &cfg.grid, 1e-9)?;
    if d <= 1e-9 {
        return Err(Error::DegenerateBody(
            "beta_v needs a positive diameter".into(),
        ));
    }
    let (hull, _) = ball_hull(k, d, cfg.boundary_sample_count)?;
    let mut parts = vec![cylinder(k, v)?];
    if let Node::Intersection { parts: hull_parts } = hull.node() {
        parts.extend(hull_parts.iter().cloned());
    } else {
        parts.push(hull);
    }
    let interior = k
        .interior_point()
        .map(|p| p.to_vec())
        .unwrap_or_else(|| vec![0.0; k.dim()]);
    let body = Body::intersection(parts, interior)?.with_diam_hint(d);
    // Containment certificate on boundary samples of K.
    let samples = sample_boundary(k, 500.min(cfg.boundary_sample_count))?;
    for s in &samples {
        if body.membership(s, 1e-6) == Membership::Outside {
            return Err(Error::ToleranceFailure {
                op: "beta_v containment",
                achieved: -body.signed_margin(s),
                needed: 1e-6,
            });
        }
    }
    Ok(body)
}

/// Iterated completion: sweeps `beta_v` over the configured directions
/// until the width deficit drops below `width_tol`; the error carries the
/// trace when `max_passes` sweeps are not enough.
pub fn complete(
    k: &Body,
    cfg: &CompletionConfig,
) -> std::result::Result<(Body, CompletionTrace), CompletionError> {
    let antipodes = antipode_map(&cfg.grid)?;
    let mut state = StageState::init(k, cfg)?;
    let mut trace = CompletionTrace::default();
    let (d0, deficit0) = table_metrics(&state.table, &antipodes);
    if (d0 - 1.0).abs() > 0.05 {
        return Err(CompletionError::Other(Error::InvalidInput(format!(
            "complete expects diameter 1 within 5e-2 (rescale upstream), got {d0}"
        ))));
    }
    trace.stages.push(CompletionStage {
        body: Body::from_table(state.table.clone())?,
        diameter: d0,
        width_deficit: deficit0,
        hausdorff_step: 0.0,
    });
    let mut deficit = deficit0;
    for pass in 0..cfg.max_passes {
        for v in &cfg.directions {
            let prev_table = state.table.clone();
            let _t_stage = std::time::Instant::now();
            state = state.step(v, cfg)?;
            if std::env::var("CW_TRACE_TIME").is_ok() {
                eprintln!("step: {:?} gens {}", _t_stage.elapsed(), state.generators.len());
            }
            let (dm, def) = table_metrics(&state.table, &antipodes);
            let step_gap = state
                .table
                .values()
                .iter()
                .zip(prev_table.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            trace.stages.push(CompletionStage {
                body: Body::from_table(state.table.clone())?,
                diameter: dm,
                width_deficit: def,
                hausdorff_step: step_gap,
            });
            deficit = def;
        }
        // Converge the table below tolerance with margin: the final ball
        // hull adds a small sampling sagitta on top.
        if deficit <= 0.8 * cfg.width_tol {
            let prev_table = state.table.clone();
            let (body, final_table) = state.into_ball_hull(cfg)?;
            let (dm, def) = table_metrics(&final_table, &antipodes);
            if def > cfg.width_tol {
                return Err(CompletionError::Stalled {
                    deficit: def,
                    tol: cfg.width_tol,
                    passes: pass + 1,
                    trace,
                });
            }
            let step_gap = final_table
                .values()
                .iter()
                .zip(prev_table.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            trace.stages.push(CompletionStage {
                body: Body::from_table(final_table)?,
                diameter: dm,
                width_deficit: def,
                hausdorff_step: step_gap,
            });
            return Ok((body, trace));
        }
        if pass + 1 == cfg.max_passes {
            break;
        }
    }
    Err(CompletionError::Stalled {
        deficit,
        tol: cfg.width_tol,
        passes: cfg.max_passes,
        trace,
    })
}

/// Is `x` an endpoint of a diameter segment of `K` (within `tol`)?
pub fn is_diameter_endpoint(k: &Body, x: &[f64], tol: f64) -> Result<bool> {
    let band = tol.max(1e-6) * 10.0;
    if k.signed_margin(x).abs() > band {
        return Err(Error::InvalidInput(
            "point is not in the boundary band of the body".into(),
        ));
    }
    let probe = probe_grid(k.dim())?;
    let d = match k.diam_hint() {
        Some(d) => d,
        None => diameter(k, &probe, 1e-9)?.0,
    };
    let samples = sample_boundary(k, 600)?;
    let best = samples
        .iter()
        .map(|y| vm::dist(x, y))
        .fold(0.0, f64::max);
    Ok(best >= d - tol)
}

/// Completeness certificate: fraction of boundary samples that are
/// diameter endpoints, plus the width deficit.
#[derive(Debug, Clone)]
pub struct CompletenessReport {
    pub endpoint_fraction: f64,
    pub width_deficit: f64,
    pub diameter: f64,
    pub pass: bool,
}

pub fn completeness_certificate(
    k: &Body,
    grid: &DirectionGrid,
    tol: f64,
) -> Result<CompletenessReport> {
    let wp = width_profile(k, grid)?;
    let d = wp.max_width;
    let mut samples = Vec::new();
    for u in grid.dirs().iter().take(500) {
        samples.push(k.boundary_point(u, 1e-9)?);
    }
    let mut endpoints = 0usize;
    for x in &samples {
        let best = samples.iter().map(|y| vm::dist(x, y)).fold(0.0, f64::max);
        if best >= d - tol {
            endpoints += 1;
        }
    }
    let endpoint_fraction = endpoints as f64 / samples.len() as f64;
    Ok(CompletenessReport {
        endpoint_fraction,
        width_deficit: wp.deficit,
        diameter: d,
        pass: endpoint_fraction == 1.0 && wp.deficit <= tol,
    })
}

// ---------------------------------------------------------------------------
// stage machinery

struct StageState {
    table: SupportTable,
    generators: Vec<Vec<f64>>,
    interior: Vec<f64>,
    /// Constraint data of the current stage (None right after init).
    stage: Option<StageData>,
}

struct StageData {
    base: SupportTable,
    axis: Direction,
    balls: Vec<Vec<f64>>,
    radius: f64,
}

impl StageState {
    fn init(k: &Body, cfg: &CompletionConfig) -> std::result::Result<Self, CompletionError> {
        let mut values = Vec::with_capacity(cfg.grid.len());
        for u in cfg.grid.dirs() {
            values.push(
                k.support(u, 1e-9)
                    .map_err(CompletionError::Other)?
                    .finite()
                    .map_err(CompletionError::Other)?,
            );
        }
        let table = SupportTable::new(cfg.grid.clone(), values).map_err(CompletionError::Other)?;
        let generators = match k.node() {
            Node::PointHull { points } => points.clone(),
            _ => sample_boundary(k, cfg.boundary_sample_count).map_err(CompletionError::Other)?,
        };
        let interior = stage_interior_candidates(k, &generators);
        Ok(StageState {
            table,
            generators,
            interior,
            stage: None,
        })
    }

    fn step(
        self,
        v: &Direction,
        cfg: &CompletionConfig,
    ) -> std::result::Result<StageState, CompletionError> {
        let grid = &cfg.grid;
        let antipodes = antipode_map(grid).map_err(CompletionError::Other)?;
        let (d, _) = table_metrics(&self.table, &antipodes);
        // Raw halfspace offsets: cylinder-masked previous table joined with
        // the sampled ball hull.
        let mut raw = Vec::with_capacity(grid.len());
        for (i, u) in grid.dirs().iter().enumerate() {
            let cyl = if v.dot(u) <= 1e-12 {
                self.table.value(i)
            } else {
                f64::INFINITY
            };
            let mut ball = f64::INFINITY;
            for g in &self.generators {
                ball = ball.min(vm::dot(g, u.coords()));
            }
            raw.push(cyl.min(ball + d));
        }
        let raw_table =
            SupportTable::new(grid.clone(), raw).map_err(CompletionError::Other)?;
        let tb = TableBody::new(raw_table).map_err(CompletionError::Other)?;
        let mut values = Vec::with_capacity(grid.len());
        for u in grid.dirs() {
            values.push(
                tb.support_dir(u)
                    .map_err(CompletionError::Other)?
                    .finite()
                    .map_err(CompletionError::Other)?,
            );
        }
        let table = SupportTable::new(grid.clone(), values).map_err(CompletionError::Other)?;
        let stage = StageData {
            base: self.table,
            axis: v.clone(),
            balls: self.generators,
            radius: d,
        };
        // Interior point for the new stage: the old one still works
        // (stages are nested), nudged upward when its margin is poor.
        let interior = best_interior(&stage, &self.interior, v, d);
        let generators = if grid.dim() == 2 {
            polygon_generators(&tb, cfg.boundary_sample_count)
        } else {
            ray_sample_stage(&stage, &interior, &cfg.sample_grid)
        };
        Ok(StageState {
            table,
            generators,
            interior,
            stage: Some(stage),
        })
    }

    /// Final representation: the converged constant-width body equals its
    /// own ball hull, so a fine-sampled `inter B(g, d)` is both an outer
    /// approximation within the sampling sagitta and a body whose boundary
    /// consists of genuine radius-`d` sphere pieces in every direction.
    /// Returns the body together with its sampled support table.
    fn into_ball_hull(self, cfg: &CompletionConfig) -> Result<(Body, SupportTable)> {
        let grid = &cfg.grid;
        let (gens, d) = match &self.stage {
            Some(stage) => {
                let gens = if grid.dim() == 2 {
                    let raw = SupportTable::new(grid.clone(), self.table.values().to_vec())?;
                    let tb = TableBody::new(raw)?;
                    polygon_generators(&tb, 4 * cfg.boundary_sample_count)
                } else {
                    let fine = make_direction_grid(grid.dim(), cfg.sample_grid.mesh() / 1.9)?;
                    ray_sample_stage(stage, &self.interior, &fine)
                };
                (gens, stage.radius)
            }
            None => (self.generators.clone(), {
                let antipodes = antipode_map(grid)?;
                table_metrics(&self.table, &antipodes).0
            }),
        };
        let parts: Vec<Body> = gens.iter().map(|g| Body::ball(g, d).unwrap()).collect();
        let body = Body::intersection(parts, self.interior)?.with_diam_hint(d);
        let mut values = Vec::with_capacity(grid.len());
        for u in grid.dirs() {
            values.push(body.support(u, 1e-9)?.finite()?);
        }
        let table = SupportTable::new(grid.clone(), values)?;
        Ok((body, table))
    }
}

/// Membership test of the stage body `Z^+(table, axis) inter balls`; the
/// cylinder part reduces to a closed-form interval in the ray parameter.
fn stage_feasible(stage: &StageData, y: &[f64], eps: f64) -> bool {
    for g in &stage.balls {
        if vm::dist(y, g) > stage.radius + eps {
            return false;
        }
    }
    let axis = stage.axis.coords();
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    for (t, u) in stage.base.values().iter().zip(stage.base.grid().dirs()) {
        if !t.is_finite() {
            continue;
        }
        let b = vm::dot(axis, u.coords());
        let a = vm::dot(y, u.coords()) - t;
        if b > 1e-12 {
            lo = lo.max(a / b);
        } else if b < -1e-12 {
            hi = hi.min(a / b);
        } else if a > eps {
            return false;
        }
        if lo > hi + eps {
            return false;
        }
    }
    lo <= hi + eps
}

fn best_interior(stage: &StageData, prev: &[f64], v: &Direction, d: f64) -> Vec<f64> {
    let mut best = prev.to_vec();
    let mut best_margin = stage_margin_estimate(stage, prev);
    for frac in [0.02, 0.05, 0.1] {
        let cand = vm::add_scaled(prev, frac * d, v.coords());
        let m = stage_margin_estimate(stage, &cand);
        if m > best_margin {
            best_margin = m;
            best = cand;
        }
    }
    best
}

fn stage_margin_estimate(stage: &StageData, y: &[f64]) -> f64 {
    let mut m = f64::INFINITY;
    for g in &stage.balls {
        m = m.min(stage.radius - vm::dist(y, g));
    }
    if !stage_feasible(stage, y, 1e-12) {
        return m.min(-1e-6);
    }
    m
}

fn ray_sample_stage(stage: &StageData, z: &[f64], fan: &DirectionGrid) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(fan.len());
    let reach = 2.0 * stage.radius + 1.0;
    for u in fan.dirs() {
        let dir = u.coords();
        let mut lo = 0.0f64;
        let mut hi = reach;
        if stage_feasible(stage, &vm::add_scaled(z, hi, dir), 1e-12) {
            continue;
        }
        for _ in 0..45 {
            let mid = 0.5 * (lo + hi);
            if stage_feasible(stage, &vm::add_scaled(z, mid, dir), 1e-12) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(vm::add_scaled(z, lo, dir));
    }
    out
}

fn polygon_generators(tb: &TableBody, count: usize) -> Vec<Vec<f64>> {
    match tb.polygon() {
        Some(poly) => {
            let mut verts: Vec<[f64; 2]> = Vec::with_capacity(poly.vertices.len());
            for v in &poly.vertices {
                if verts
                    .last()
                    .map_or(true, |l| (v[0] - l[0]).abs() + (v[1] - l[1]).abs() > 1e-11)
                {
                    verts.push(*v);
                }
            }
            let stride = (verts.len() / count).max(1);
            verts
                .iter()
                .step_by(stride)
                .map(|v| vec![v[0], v[1]])
                .collect()
        }
        None => vec![tb.anchor().to_vec()],
    }
}

fn stage_interior_candidates(k: &Body, generators: &[Vec<f64>]) -> Vec<f64> {
    if let Some(p) = k.interior_point() {
        return p.to_vec();
    }
    let dim = generators.first().map(|g| g.len()).unwrap_or(2);
    let mut c = vec![0.0; dim];
    for g in generators {
        c = vm::add(&c, g);
    }
    vm::scale(&c, 1.0 / generators.len().max(1) as f64)
}

fn table_metrics(table: &SupportTable, antipodes: &[usize]) -> (f64, f64) {
    let mut min_w = f64::INFINITY;
    let mut max_w = f64::NEG_INFINITY;
    for (i, &j) in antipodes.iter().enumerate() {
        let w = table.value(i) + table.value(j);
        min_w = min_w.min(w);
        max_w = max_w.max(w);
    }
    (max_w, max_w - min_w)
}

fn antipode_map(grid: &DirectionGrid) -> Result<Vec<usize>> {
    if !grid.is_symmetric() {
        return Err(Error::AsymmetricGrid);
    }
    let mut map = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        map.push(
            grid.antipode_index(i)
                .ok_or(Error::AsymmetricGrid)?,
        );
    }
    Ok(map)
}

fn probe_grid(dim: usize) -> Result<DirectionGrid> {
    match dim {
        2 => make_direction_grid(2, std::f64::consts::PI / 512.0),
        3 => make_direction_grid(3, 0.09),
        d => make_direction_grid(d, 0.5),
    }
}

fn sample_boundary(k: &Body, count: usize) -> Result<Vec<Vec<f64>>> {
    let dim = k.dim();
    let fan = match dim {
        2 => make_direction_grid(2, std::f64::consts::PI / (count.max(4) as f64 / 2.0))?,
        3 => {
            let mesh = (4.0 * std::f64::consts::PI / count.max(12) as f64).sqrt() * 1.4;
            make_direction_grid(3, mesh.min(1.2))?
        }
        d => make_direction_grid(d, 0.5)?,
    };
    let mut out = Vec::with_capacity(fan.len());
    for u in fan.dirs() {
        out.push(k.boundary_point(u, 1e-11)?);
    }
    Ok(out)
}

fn max_support_drop(
    coarse: &[Vec<f64>],
    fine: &[Vec<f64>],
    d: f64,
    probe: &DirectionGrid,
) -> f64 {
    let mut worst = 0.0f64;
    for u in probe.dirs() {
        let hc = coarse
            .iter()
            .map(|g| vm::dot(g, u.coords()))
            .fold(f64::INFINITY, f64::min)
            + d;
        let hf = fine
            .iter()
            .map(|g| vm::dot(g, u.coords()))
            .fold(f64::INFINITY, f64::min)
            + d;
        worst = worst.max(hc - hf);
    }
    worst
}

fn hull_anchor(k: &Body, gens: &[Vec<f64>]) -> Vec<f64> {
    if let Some(p) = k.interior_point() {
        return p.to_vec();
    }
    stage_interior_candidates(k, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Direction;

    fn cfg2d() -> CompletionConfig {
        CompletionConfig::for_dim(2).unwrap()
    }

    #[test]
    fn cylinder_support_matches_base_below() {
        let b = Body::ball(&[0.0, 0.0], 1.0).unwrap();
        let v = Direction::from_angle(std::f64::consts::FRAC_PI_2);
        let cyl = cylinder(&b, &v).unwrap();
        let u = Direction::from_angle(0.0);
        assert_eq!(
            cyl.support(&u, 1e-9).unwrap().finite().unwrap(),
            1.0
        );
        assert!(cyl.support(&v, 1e-9).unwrap().is_unbounded());
    }

    #[test]
    fn ball_hull_of_segment_is_lens() {
        let seg = Body::point_hull(vec![vec![-0.5, 0.0], vec![0.5, 0.0]]).unwrap();
        let (lens, drop) = ball_hull(&seg, 1.0, 64).unwrap();
        assert_eq!(drop, 0.0);
        let top = lens
            .support(&Direction::from_angle(std::f64::consts::FRAC_PI_2), 1e-10)
            .unwrap()
            .finite()
            .unwrap();
        assert!((top - 3f64.sqrt() / 2.0).abs() < 1e-9);
        assert_eq!(lens.membership(&[0.0, 0.0], 1e-9), Membership::Inside);
    }

    #[test]
    fn beta_v_of_segment_keeps_diameter() {
        let seg = Body::point_hull(vec![vec![-0.5, 0.0], vec![0.5, 0.0]]).unwrap();
        let v = Direction::from_angle(std::f64::consts::FRAC_PI_2);
        let cfg = cfg2d();
        let half_lens = beta_v(&seg, &v, &cfg).unwrap();
        let (d, _) = diameter(&half_lens, &cfg.grid, 1e-9).unwrap();
        assert!((d - 1.0).abs() < 2e-3);
        // Upper half only: the lens bottom is cut away by the cylinder.
        assert_eq!(
            half_lens.membership(&[0.0, -0.3], 1e-9),
            Membership::Outside
        );
        assert_ne!(
            half_lens.membership(&[0.0, 0.3], 1e-9),
            Membership::Outside
        );
    }

    #[test]
    fn complete_ball_is_fixed_point() {
        let b = Body::ball(&[0.0, 0.0], 0.5).unwrap();
        let cfg = cfg2d();
        let (done, trace) = complete(&b, &cfg).unwrap();
        let last = trace.stages.last().unwrap();
        assert!(last.width_deficit <= cfg.width_tol);
        let u = Direction::from_angle(0.7);
        let h = done.support(&u, 1e-9).unwrap().finite().unwrap();
        assert!((h - 0.5).abs() < 2e-3);
    }
}
