//! Hausdorff distance, radial functions, polar support, and the
//! support/radial convergence comparison.

use super::{Direction, DirectionGrid};
use crate::body::{Body, Membership, Node};
use crate::error::{Error, Result};
use crate::linprog::{seidel_lp, LpOutcome};
use crate::vecmath as vm;

/// Hausdorff distance between convex bodies as the sup-norm of the support
/// difference over the grid (exact up to `O(mesh * (diam A + diam B))`).
pub fn hausdorff_distance(a: &Body, b: &Body, grid: &DirectionGrid) -> Result<f64> {
    let mut worst = 0.0f64;
    for u in grid.dirs() {
        let ha = a.support(u, 1e-9)?.finite()?;
        let hb = b.support(u, 1e-9)?.finite()?;
        worst = worst.max((ha - hb).abs());
    }
    Ok(worst)
}

/// Largest `lambda >= 0` with `lambda * u` in `K`, by bisection on the
/// membership oracle. Requires the origin to be interior (certified by
/// membership of a small ball around it).
pub fn radial_function(body: &Body, u: &Direction, tol: f64) -> Result<f64> {
    certify_origin_interior(body)?;
    let origin = vec![0.0; body.dim()];
    let p = body.ray_boundary(&origin, u.coords(), tol)?;
    Ok(vm::norm(&p))
}

/// Support of the polar body, `h(K^\circ, u) = 1 / rho(K, u)`.
///
/// For point hulls the value is computed independently through the polar
/// polytope `{y : <y, p_i> <= 1}` (a direct LP), which together with
/// `radial_function` gives the two routes of the polar-radial identity;
/// other bodies fall back to the reciprocal radial value.
pub fn polar_support(body: &Body, u: &Direction, tol: f64) -> Result<f64> {
    certify_origin_interior(body)?;
    if let Node::PointHull { points } = body.node() {
        let cons: Vec<(Vec<f64>, f64)> = points.iter().map(|p| (p.clone(), 1.0)).collect();
        let bound = 1.0
            / points
                .iter()
                .map(|p| vm::norm(p))
                .fold(f64::INFINITY, f64::min)
            * 10.0
            + 10.0;
        return match seidel_lp(&cons, u.coords(), bound) {
            LpOutcome::Optimal(x) => Ok(vm::dot(&x, u.coords())),
            LpOutcome::BoxBounded(_) => Err(Error::UnboundedDirection),
            LpOutcome::Infeasible => Err(Error::EmptyIntersection),
        };
    }
    let rho = radial_function(body, u, tol)?;
    if rho <= 0.0 {
        return Err(Error::OriginNotInterior);
    }
    Ok(1.0 / rho)
}

fn certify_origin_interior(body: &Body) -> Result<()> {
    let dim = body.dim();
    let origin = vec![0.0; dim];
    if body.membership(&origin, 1e-12) == Membership::Outside {
        return Err(Error::OriginNotInterior);
    }
    // Small ball certificate.
    let eps = 1e-7;
    for i in 0..dim {
        for s in [eps, -eps] {
            let mut p = origin.clone();
            p[i] = s;
            if body.signed_margin(&p) < 0.0 {
                return Err(Error::OriginNotInterior);
            }
        }
    }
    Ok(())
}

/// Per-index support and radial gaps of a body sequence against a limit
/// body (the s-lim / r-lim comparison).
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub index: usize,
    pub sup_support_gap: f64,
    pub sup_radial_gap: f64,
}

pub fn convergence_compare(
    seq: &[Body],
    limit: &Body,
    grid: &DirectionGrid,
) -> Result<Vec<ConvergenceRow>> {
    certify_origin_interior(limit)?;
    let origin = vec![0.0; limit.dim()];
    for k in seq {
        if k.membership(&origin, 1e-9) == Membership::Outside {
            return Err(Error::OriginNotInterior);
        }
    }
    let tol = 1e-10;
    let mut rows = Vec::with_capacity(seq.len());
    for (index, k) in seq.iter().enumerate() {
        let mut sup_support_gap = 0.0f64;
        let mut sup_radial_gap = 0.0f64;
        for u in grid.dirs() {
            let hs = k.support(u, tol)?.finite()?;
            let hl = limit.support(u, tol)?.finite()?;
            sup_support_gap = sup_support_gap.max((hs - hl).abs());
            let rs = radial_in(k, u, tol)?;
            let rl = radial_in(limit, u, tol)?;
            sup_radial_gap = sup_radial_gap.max((rs - rl).abs());
        }
        rows.push(ConvergenceRow {
            index,
            sup_support_gap,
            sup_radial_gap,
        });
    }
    Ok(rows)
}

fn radial_in(body: &Body, u: &Direction, tol: f64) -> Result<f64> {
    let origin = vec![0.0; body.dim()];
    let p = body.ray_boundary(&origin, u.coords(), tol)?;
    Ok(vm::norm(&p))
}
