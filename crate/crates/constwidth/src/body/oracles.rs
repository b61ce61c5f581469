//! Support, membership, and boundary-point oracles for the body tree.
//!
//! Intersections are the only nontrivial case. When every part is a ball
//! (the spindle/ball-hull situation) the support point is found exactly by
//! active-set enumeration over sphere intersections; otherwise an
//! interior-point ray-shooting plus supporting-halfspace (cutting-plane)
//! loop runs until the inner and outer support bounds agree within `tol`.

use super::{Body, Membership, Node, SupportValue};
use crate::error::{Error, Result};
use crate::geom::Direction;
use crate::linprog::{min_norm_point, seidel_lp, LpOutcome};
use crate::vecmath as vm;
use std::sync::OnceLock;

const MEMBER_EPS: f64 = 1e-9;

impl Body {
    /// Support function value `h(K, u)` within `tol` (exact for primitive
    /// trees without generic intersections).
    pub fn support(&self, u: &Direction, tol: f64) -> Result<SupportValue> {
        Ok(self.support_with_point(u, tol)?.0)
    }

    /// Support value together with a maximizer when one is available.
    pub fn support_with_point(
        &self,
        u: &Direction,
        tol: f64,
    ) -> Result<(SupportValue, Option<Vec<f64>>)> {
        match &self.node {
            Node::PointHull { points } => {
                let p = lex_max_point(points, u.coords());
                Ok((
                    SupportValue::Finite(vm::dot(&p, u.coords())),
                    Some(p),
                ))
            }
            Node::Ball { center, radius } => {
                let p = vm::add_scaled(center, *radius, u.coords());
                Ok((
                    SupportValue::Finite(vm::dot(center, u.coords()) + radius),
                    Some(p),
                ))
            }
            Node::Halfspace { normal, offset } => {
                if normal.dot(u) > 1.0 - 1e-12 {
                    Ok((
                        SupportValue::Finite(*offset),
                        Some(vm::scale(normal.coords(), *offset)),
                    ))
                } else {
                    Ok((SupportValue::Unbounded, None))
                }
            }
            Node::Cylinder { base, axis } => {
                if vm::dot(u.coords(), axis.coords()) <= 1e-12 {
                    base.support_with_point(u, tol)
                } else {
                    Ok((SupportValue::Unbounded, None))
                }
            }
            Node::SupportCombination { terms } => {
                let mut total = 0.0;
                let mut point = vec![0.0; self.dim];
                let mut have_point = true;
                for (c, b) in terms {
                    if *c == 0.0 {
                        continue;
                    }
                    let (sv, pt) = b.support_with_point(u, tol)?;
                    match sv {
                        SupportValue::Finite(v) => total += c * v,
                        SupportValue::Unbounded => return Ok((SupportValue::Unbounded, None)),
                    }
                    match pt {
                        Some(p) => point = vm::add_scaled(&point, *c, &p),
                        None => have_point = false,
                    }
                }
                Ok((SupportValue::Finite(total), have_point.then_some(point)))
            }
            Node::Table(tb) => {
                let sv = tb.support_dir(u)?;
                let pt = match sv {
                    SupportValue::Finite(_) => Some(tb.support_point(u)?),
                    SupportValue::Unbounded => None,
                };
                Ok((sv, pt))
            }
            Node::Ellipsoid { center, semi_axes } => {
                let du: Vec<f64> = semi_axes
                    .iter()
                    .zip(u.coords())
                    .map(|(a, x)| a * x)
                    .collect();
                let n = vm::norm(&du);
                let p: Vec<f64> = center
                    .iter()
                    .zip(semi_axes)
                    .zip(u.coords())
                    .map(|((c, a), x)| c + a * a * x / n)
                    .collect();
                Ok((
                    SupportValue::Finite(vm::dot(center, u.coords()) + n),
                    Some(p),
                ))
            }
            Node::Intersection { parts } => self.support_intersection(parts, u, tol),
        }
    }

    /// Tri-state membership with a boundary band of width `tol`.
    pub fn membership(&self, y: &[f64], tol: f64) -> Membership {
        let m = self.signed_margin(y);
        if m > tol {
            Membership::Inside
        } else if m < -tol {
            Membership::Outside
        } else {
            Membership::BoundaryBand
        }
    }

    /// Signed margin estimate: positive depth inside, negative violation
    /// outside. Exact for balls/halfspaces/tables; conservative for
    /// intersections (min over parts).
    pub fn signed_margin(&self, y: &[f64]) -> f64 {
        match &self.node {
            Node::PointHull { points } => {
                let shifted: Vec<Vec<f64>> = points.iter().map(|p| vm::sub(p, y)).collect();
                let (d, _) = min_norm_point(&shifted);
                if d > 1e-12 {
                    return -d;
                }
                // Member: estimate interior depth with a radial probe from
                // the centroid (band semantics only).
                let anchor = self.interior.as_deref().unwrap_or(&[]);
                let dir = vm::sub(y, anchor);
                let probes: Vec<Vec<f64>> = if vm::norm(&dir) > 1e-12 {
                    vec![vm::normalize(&dir).unwrap()]
                } else {
                    let mut v = Vec::new();
                    for i in 0..self.dim {
                        let mut e = vec![0.0; self.dim];
                        e[i] = 1.0;
                        v.push(e.clone());
                        e[i] = -1.0;
                        v.push(e);
                    }
                    v
                };
                probes
                    .iter()
                    .map(|w| {
                        let h = points
                            .iter()
                            .map(|p| vm::dot(p, w))
                            .fold(f64::NEG_INFINITY, f64::max);
                        h - vm::dot(y, w)
                    })
                    .fold(f64::INFINITY, f64::min)
            }
            Node::Ball { center, radius } => radius - vm::dist(y, center),
            Node::Halfspace { normal, offset } => offset - vm::dot(y, normal.coords()),
            Node::Cylinder { base, axis } => cylinder_margin(base, axis, y),
            Node::Intersection { parts } => {
                let mut m = f64::INFINITY;
                for p in parts {
                    m = m.min(p.signed_margin(y));
                    if m < -1.0 {
                        break;
                    }
                }
                m
            }
            Node::SupportCombination { .. } => self.combination_margin(y),
            Node::Table(tb) => tb.margin(y),
            Node::Ellipsoid { center, semi_axes } => {
                let xi: Vec<f64> = y
                    .iter()
                    .zip(center)
                    .zip(semi_axes)
                    .map(|((yi, c), a)| (yi - c) / a)
                    .collect();
                let amin = semi_axes.iter().cloned().fold(f64::INFINITY, f64::min);
                (1.0 - vm::norm(&xi)) * amin
            }
        }
    }

    /// A boundary point maximizing `<., u>` within `tol`; for faces the
    /// maximizer is the lexicographically maximal one.
    pub fn boundary_point(&self, u: &Direction, tol: f64) -> Result<Vec<f64>> {
        match &self.node {
            Node::Cylinder { base, axis } => {
                if vm::dot(u.coords(), axis.coords()) <= 1e-12 {
                    base.boundary_point(u, tol)
                } else {
                    Err(Error::UnboundedDirection)
                }
            }
            _ => {
                let (sv, pt) = self.support_with_point(u, tol)?;
                match (sv, pt) {
                    (SupportValue::Finite(_), Some(p)) => Ok(p),
                    (SupportValue::Unbounded, _) => Err(Error::UnboundedDirection),
                    (SupportValue::Finite(_), None) => Err(Error::ToleranceFailure {
                        op: "boundary_point",
                        achieved: f64::NAN,
                        needed: tol,
                    }),
                }
            }
        }
    }

    /// Estimated absolute accuracy of the support oracle for this tree.
    /// Curvature quotients use it as a noise floor.
    pub fn support_accuracy(&self) -> f64 {
        match &self.node {
            Node::PointHull { .. }
            | Node::Ball { .. }
            | Node::Halfspace { .. }
            | Node::Ellipsoid { .. } => 1e-13,
            Node::Cylinder { base, .. } => base.support_accuracy(),
            Node::SupportCombination { terms } => terms
                .iter()
                .map(|(c, b)| c * b.support_accuracy())
                .sum::<f64>()
                .max(1e-13),
            Node::Table(_) => 1e-12,
            Node::Intersection { parts } => {
                let all_exactish = parts.iter().all(|p| {
                    matches!(
                        p.node,
                        Node::Ball { .. } | Node::Table(_) | Node::Cylinder { .. } | Node::Halfspace { .. }
                    )
                });
                if all_exactish {
                    1e-11
                } else {
                    1e-8
                }
            }
        }
    }

    /// Boundary point along the ray `from + t*dir`, `t >= 0`, by bisection
    /// on the membership oracle. `from` must be a member.
    pub fn ray_boundary(&self, from: &[f64], dir: &[f64], tol: f64) -> Result<Vec<f64>> {
        let dir = vm::normalize(dir)
            .ok_or_else(|| Error::InvalidInput("zero ray direction".into()))?;
        if self.signed_margin(from) < -1e-7 {
            return Err(Error::InvalidInput(
                "ray origin is not a member of the body".into(),
            ));
        }
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        let mut steps = 0;
        while self.signed_margin(&vm::add_scaled(from, hi, &dir)) > 0.0 {
            lo = hi;
            hi *= 2.0;
            steps += 1;
            if steps > 60 {
                return Err(Error::UnboundedDirection);
            }
        }
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.signed_margin(&vm::add_scaled(from, mid, &dir)) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(vm::add_scaled(from, 0.5 * (lo + hi), &dir))
    }

    fn combination_margin(&self, y: &[f64]) -> f64 {
        // min over unit w of h(K,w) - <y,w>, the exact signed distance,
        // approximated by a coarse sphere scan plus compass refinement.
        let dim = self.dim;
        let gap = |w: &[f64]| -> f64 {
            let u = Direction::new(w).unwrap();
            match self.support(&u, 1e-10) {
                Ok(SupportValue::Finite(h)) => h - vm::dot(y, w),
                _ => f64::INFINITY,
            }
        };
        let probes = coarse_sphere(dim);
        let mut best = probes[0].clone();
        let mut best_val = f64::INFINITY;
        for w in probes {
            let v = gap(w);
            if v < best_val {
                best_val = v;
                best = w.clone();
            }
        }
        // Compass descent on the sphere.
        let mut step = 0.4f64;
        let tangents = vm::tangent_basis(&best);
        let mut basis = tangents;
        for _ in 0..48 {
            let mut improved = false;
            for t in &basis {
                for s in [step, -step] {
                    let w = vm::normalize(&vm::add_scaled(&best, s, t)).unwrap();
                    let v = gap(&w);
                    if v < best_val - 1e-15 {
                        best_val = v;
                        best = w;
                        improved = true;
                    }
                }
            }
            if improved {
                basis = vm::tangent_basis(&best);
            } else {
                step *= 0.5;
                if step < 1e-9 {
                    break;
                }
            }
        }
        best_val
    }

    fn support_intersection(
        &self,
        parts: &[Body],
        u: &Direction,
        tol: f64,
    ) -> Result<(SupportValue, Option<Vec<f64>>)> {
        let mut balls: Vec<(&[f64], f64)> = Vec::new();
        let mut others: Vec<&Body> = Vec::new();
        for p in parts {
            match &p.node {
                Node::Ball { center, radius } => balls.push((center, *radius)),
                _ => others.push(p),
            }
        }
        // Strategy, cheapest first: a feasible maximizer of any single
        // part is the exact optimum of the intersection.
        let others_ok = |p: &[f64]| -> bool {
            others
                .iter()
                .all(|q| q.membership(p, MEMBER_EPS) != Membership::Outside)
        };
        let balls_ok = |p: &[f64]| -> bool {
            balls.iter().all(|(c, r)| vm::dist(p, c) <= r + MEMBER_EPS)
        };
        // 1. Best single ball.
        if !balls.is_empty() {
            let (h_min, j_min) = balls
                .iter()
                .enumerate()
                .map(|(j, (c, r))| (vm::dot(c, u.coords()) + r, j))
                .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
                .unwrap();
            let p0 = vm::add_scaled(balls[j_min].0, balls[j_min].1, u.coords());
            if balls_ok(&p0) && others_ok(&p0) {
                return Ok((SupportValue::Finite(h_min), Some(p0)));
            }
        }
        // 2. Best non-ball part (common when a cylinder binds below).
        let mut candidates: Vec<(f64, Vec<f64>)> = Vec::new();
        for p in &others {
            if let Ok((SupportValue::Finite(v), Some(bp))) = p.support_with_point(u, tol) {
                candidates.push((v, bp));
            }
        }
        candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if let Some((v, bp)) = candidates.first() {
            if balls_ok(bp) && others_ok(bp) {
                return Ok((SupportValue::Finite(*v), Some(bp.clone())));
            }
        }
        // 3. Ball corners by active-set enumeration.
        if !balls.is_empty() {
            match ball_active_set_support(&balls, u.coords()) {
                Some((val, point)) => {
                    if others_ok(&point) {
                        return Ok((SupportValue::Finite(val), Some(point)));
                    } else if std::env::var("CW_DEBUG_SUPPORT").is_ok() {
                        eprintln!("active-set point rejected by others at u={:?}", u.coords());
                    }
                }
                None => {
                    if std::env::var("CW_DEBUG_SUPPORT").is_ok() {
                        eprintln!("active-set returned None at u={:?}", u.coords());
                    }
                }
            }
        }
        self.kelley_support(parts, u, tol)
    }

    /// Cutting-plane support for general intersections: outer bound from an
    /// LP over accumulated supporting halfspaces, inner bound from
    /// ray-shooting through the certified interior point.
    fn kelley_support(
        &self,
        parts: &[Body],
        u: &Direction,
        tol: f64,
    ) -> Result<(SupportValue, Option<Vec<f64>>)> {
        let z = self
            .interior
            .clone()
            .ok_or_else(|| Error::InvalidInput("intersection without interior point".into()))?;
        let dim = self.dim;
        let reach = parts
            .iter()
            .map(body_reach)
            .fold(f64::INFINITY, f64::min)
            .min(1e6);
        let bound = if reach.is_finite() { reach * 4.0 + 4.0 } else { 1e6 };
        let mut cuts: Vec<(Vec<f64>, f64)> = Vec::new();
        let add_cut = |cuts: &mut Vec<(Vec<f64>, f64)>, m: &[f64]| {
            let md = match Direction::new(m) {
                Ok(d) => d,
                Err(_) => return,
            };
            let mut offset = f64::INFINITY;
            for p in parts {
                if let Ok(SupportValue::Finite(v)) = p.support(&md, tol) {
                    offset = offset.min(v);
                }
            }
            if !offset.is_finite() {
                return;
            }
            for (n, b) in cuts.iter_mut() {
                if vm::dot(n, md.coords()) > 1.0 - 1e-12 {
                    *b = b.min(offset);
                    return;
                }
            }
            cuts.push((md.coords().to_vec(), offset));
        };
        add_cut(&mut cuts, u.coords());
        for i in 0..dim {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            add_cut(&mut cuts, &e);
            e[i] = -1.0;
            add_cut(&mut cuts, &e);
        }
        let mut lower = f64::NEG_INFINITY;
        let mut lower_point: Option<Vec<f64>> = None;
        let mut last_gap = f64::INFINITY;
        for _ in 0..120 {
            let outcome = seidel_lp(&cuts, u.coords(), bound);
            let (x_lp, on_box) = match outcome {
                LpOutcome::Optimal(x) => (x, false),
                LpOutcome::BoxBounded(x) => (x, true),
                LpOutcome::Infeasible => return Err(Error::EmptyIntersection),
            };
            let upper = vm::dot(&x_lp, u.coords());
            let violated: Vec<&Body> = parts
                .iter()
                .filter(|p| p.membership(&x_lp, MEMBER_EPS) == Membership::Outside)
                .collect();
            if violated.is_empty() {
                if on_box {
                    return Ok((SupportValue::Unbounded, None));
                }
                return Ok((SupportValue::Finite(upper), Some(x_lp)));
            }
            // Inner bound via the chord from the interior point.
            let dir = vm::sub(&x_lp, &z);
            if vm::norm(&dir) > 1e-14 {
                if let Ok(b) = self.ray_boundary(&z, &dir, 1e-12) {
                    let v = vm::dot(&b, u.coords());
                    if v > lower {
                        lower = v;
                        lower_point = Some(b);
                    }
                }
            }
            last_gap = upper - lower;
            if last_gap <= tol {
                return Ok((
                    SupportValue::Finite(0.5 * (upper + lower)),
                    lower_point,
                ));
            }
            let mut progressed = false;
            for p in &violated {
                if let Some(m) = separating_normal(p, &x_lp) {
                    let before = cuts.len();
                    let offsets_before: Vec<f64> = cuts.iter().map(|c| c.1).collect();
                    add_cut(&mut cuts, &m);
                    if cuts.len() > before
                        || cuts.iter().map(|c| c.1).zip(&offsets_before).any(|(a, b)| a < *b)
                    {
                        progressed = true;
                    }
                }
            }
            if !progressed {
                break;
            }
        }
        // Accept a slightly loose gap before giving up.
        if last_gap <= 10.0 * tol {
            if let Some(b) = lower_point {
                return Ok((SupportValue::Finite(lower + 0.5 * last_gap), Some(b)));
            }
        }
        Err(Error::ToleranceFailure {
            op: "intersection support",
            achieved: last_gap,
            needed: tol,
        })
    }
}

fn lex_max_point(points: &[Vec<f64>], u: &[f64]) -> Vec<f64> {
    let mut best = &points[0];
    let mut best_val = vm::dot(best, u);
    for p in &points[1..] {
        let v = vm::dot(p, u);
        if v > best_val + 1e-13 * (1.0 + best_val.abs()) {
            best = p;
            best_val = v;
        } else if v > best_val - 1e-13 * (1.0 + best_val.abs())
            && vm::lex_cmp(p, best) == std::cmp::Ordering::Greater
        {
            best = p;
        }
    }
    best.clone()
}

/// Signed margin for the cylinder Z^+(base, axis): max over the ray
/// parameter of the base margin (concave along the ray, so a coarse scan
/// plus ternary refinement suffices).
fn cylinder_margin(base: &Body, axis: &Direction, y: &[f64]) -> f64 {
    let neg_axis = axis.negate();
    let lam_max = match base.support(&neg_axis, 1e-9) {
        Ok(SupportValue::Finite(h)) => (vm::dot(y, axis.coords()) + h).max(0.0),
        _ => 1e6,
    };
    if lam_max == 0.0 {
        return base.signed_margin(y);
    }
    let eval = |lam: f64| base.signed_margin(&vm::add_scaled(y, -lam, axis.coords()));
    let samples = 24;
    let mut best_lam = 0.0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=samples {
        let lam = lam_max * i as f64 / samples as f64;
        let v = eval(lam);
        if v > best {
            best = v;
            best_lam = lam;
        }
    }
    let h = lam_max / samples as f64;
    let mut lo = (best_lam - h).max(0.0);
    let mut hi = (best_lam + h).min(lam_max);
    for _ in 0..60 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if eval(m1) >= eval(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
        if hi - lo < 1e-12 * (1.0 + lam_max) {
            break;
        }
    }
    eval(0.5 * (lo + hi)).max(best)
}

fn body_reach(b: &Body) -> f64 {
    match &b.node {
        Node::Ball { center, radius } => vm::norm(center) + radius,
        Node::PointHull { points } => points.iter().map(|p| vm::norm(p)).fold(0.0, f64::max),
        Node::Ellipsoid { center, semi_axes } => {
            vm::norm(center) + semi_axes.iter().cloned().fold(0.0, f64::max)
        }
        Node::Table(tb) => tb
            .table()
            .values()
            .iter()
            .filter(|t| t.is_finite())
            .fold(1.0f64, |a, &b| a.max(b.abs()))
            * 4.0,
        Node::Intersection { parts } => parts.iter().map(body_reach).fold(f64::INFINITY, f64::min),
        Node::SupportCombination { terms } => terms
            .iter()
            .map(|(c, b)| c * body_reach(b))
            .sum(),
        Node::Cylinder { .. } | Node::Halfspace { .. } => f64::INFINITY,
    }
}

/// Outward separating direction of `p` at an exterior point, used for
/// cutting planes. Returns None when the node cannot produce one.
fn separating_normal(p: &Body, y: &[f64]) -> Option<Vec<f64>> {
    match &p.node {
        Node::Ball { center, .. } => vm::normalize(&vm::sub(y, center)),
        Node::Halfspace { normal, .. } => Some(normal.coords().to_vec()),
        Node::Ellipsoid { center, semi_axes } => {
            let g: Vec<f64> = y
                .iter()
                .zip(center)
                .zip(semi_axes)
                .map(|((yi, c), a)| (yi - c) / (a * a))
                .collect();
            vm::normalize(&g)
        }
        Node::PointHull { points } => {
            let shifted: Vec<Vec<f64>> = points.iter().map(|q| vm::sub(q, y)).collect();
            let (_, mn) = min_norm_point(&shifted);
            // Nearest hull point is y + mn; outward direction is -mn.
            vm::normalize(&vm::neg(&mn))
        }
        Node::Table(tb) => {
            let mut best = None;
            let mut worst = -f64::INFINITY;
            for (t, g) in tb.table().values().iter().zip(tb.table().grid().dirs()) {
                if !t.is_finite() {
                    continue;
                }
                let viol = vm::dot(y, g.coords()) - t;
                if viol > worst {
                    worst = viol;
                    best = Some(g.coords().to_vec());
                }
            }
            best
        }
        Node::Cylinder { base, axis } => {
            // Best effort: separate from the base at the margin-maximizing
            // ray offset, tangentialized against the axis.
            let neg_axis = axis.negate();
            let lam_max = match base.support(&neg_axis, 1e-9) {
                Ok(SupportValue::Finite(h)) => (vm::dot(y, axis.coords()) + h).max(0.0),
                _ => 1e6,
            };
            let mut best_lam = 0.0;
            let mut best = f64::NEG_INFINITY;
            for i in 0..=32 {
                let lam = lam_max * i as f64 / 32.0;
                let v = base.signed_margin(&vm::add_scaled(y, -lam, axis.coords()));
                if v > best {
                    best = v;
                    best_lam = lam;
                }
            }
            let m = separating_normal(base, &vm::add_scaled(y, -best_lam, axis.coords()))?;
            let t = vm::dot(&m, axis.coords());
            if t <= 1e-12 {
                return Some(m);
            }
            vm::normalize(&vm::add_scaled(&m, -t, axis.coords()))
        }
        Node::Intersection { parts } => parts
            .iter()
            .filter(|q| q.membership(y, MEMBER_EPS) == Membership::Outside)
            .find_map(|q| separating_normal(q, y)),
        Node::SupportCombination { .. } => {
            // Direction of maximal violation from the margin scan.
            let dim = y.len();
            let mut best: Option<Vec<f64>> = None;
            let mut best_v = f64::INFINITY;
            for w in coarse_sphere(dim) {
                let u = Direction::new(w).ok()?;
                if let Ok(SupportValue::Finite(h)) = p.support(&u, 1e-10) {
                    let v = h - vm::dot(y, w);
                    if v < best_v {
                        best_v = v;
                        best = Some(w.clone());
                    }
                }
            }
            best
        }
    }
}

/// Exact support of an intersection of balls by active-set enumeration.
///
/// Returns the optimum of the balls-only body; `None` when enumeration
/// cannot certify one (caller falls back to the cutting-plane path).
pub(super) fn ball_active_set_support(
    balls: &[(&[f64], f64)],
    u: &[f64],
) -> Option<(f64, Vec<f64>)> {
    let dim = u.len();
    let feasible = |p: &[f64]| -> bool {
        balls
            .iter()
            .all(|(c, r)| vm::dist(p, c) <= r + MEMBER_EPS)
    };
    let mut hs: Vec<(f64, usize)> = balls
        .iter()
        .enumerate()
        .map(|(j, (c, r))| (vm::dot(c, u) + r, j))
        .collect();
    hs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let (h_min, j_min) = hs[0];
    let (c0, r0) = balls[j_min];
    let p0 = vm::add_scaled(c0, r0, u);
    if feasible(&p0) {
        return Some((h_min, p0));
    }
    let r_scale = balls.iter().map(|(_, r)| *r).fold(0.0, f64::max).max(1.0);
    let eps_v = 1e-9 * r_scale;
    let max_violation = |p: &[f64]| -> (f64, usize) {
        let mut worst = f64::NEG_INFINITY;
        let mut worst_j = 0;
        for (j, (c, r)) in balls.iter().enumerate() {
            let viol = vm::dist(p, c) - r;
            if viol > worst {
                worst = viol;
                worst_j = j;
            }
        }
        (worst, worst_j)
    };
    // Active-set walk with add and swap steps. Swaps matter at wide normal
    // fans (body corners), where the binding pair sits far down the
    // h-order; the walk reaches it by replacing working members with the
    // most violated constraint. Failure falls through to the enumeration
    // ladder below.
    {
        let dbg = std::env::var("CW_DEBUG_SUPPORT").is_ok();
        let mut working: Vec<usize> = vec![j_min];
        let mut p = p0.clone();
        let mut best_viol = f64::INFINITY;
        let mut stall = 0;
        for it in 0..60 {
            let (viol, v) = max_violation(&p);
            if dbg {
                eprintln!("walk it {it}: viol {viol:.3e} v {v} working {working:?}");
            }
            if viol <= eps_v {
                let val = vm::dot(&p, u);
                if certify_ball_optimum(balls, &p, u, r_scale) {
                    return Some((val, p));
                }
                break;
            }
            if viol < best_viol - 1e-15 {
                best_viol = viol;
                stall = 0;
            } else {
                stall += 1;
                if stall > 6 {
                    break;
                }
            }
            if working.contains(&v) {
                break;
            }
            if working.len() < dim {
                working.push(v);
                let subset: Vec<(&[f64], f64)> = working.iter().map(|&i| balls[i]).collect();
                match sphere_subset_max(&subset, u) {
                    Some(q) => p = q,
                    None => break,
                }
            } else {
                // Swap: replace the member whose removal reduces the
                // violation most (ties: larger objective).
                let mut best_swap: Option<(f64, f64, usize, Vec<f64>)> = None;
                for drop_at in 0..working.len() {
                    let mut trial = working.clone();
                    trial[drop_at] = v;
                    let subset: Vec<(&[f64], f64)> = trial.iter().map(|&i| balls[i]).collect();
                    if let Some(q) = sphere_subset_max(&subset, u) {
                        let (tv, _) = max_violation(&q);
                        let obj = vm::dot(&q, u);
                        let better = match &best_swap {
                            None => true,
                            Some((bv, bo, _, _)) => {
                                tv < bv - 1e-15 || (tv < bv + 1e-15 && obj > *bo)
                            }
                        };
                        if better {
                            best_swap = Some((tv, obj, drop_at, q));
                        }
                    }
                }
                match best_swap {
                    Some((_, _, drop_at, q)) => {
                        working[drop_at] = v;
                        p = q;
                    }
                    None => break,
                }
            }
        }
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    let consider = |p: Vec<f64>, best: &mut Option<(f64, Vec<f64>)>| {
        if !feasible(&p) {
            return;
        }
        let v = vm::dot(&p, u);
        if best.as_ref().map_or(true, |(bv, _)| v > *bv) {
            *best = Some((v, p));
        }
    };
    let levels = [1e-6, 1e-4, 1e-2, 0.05, 0.15, 0.4, 1.0];
    let mut found_at: Option<usize> = None;
    for (li, slack) in levels.iter().enumerate() {
        let cutoff = h_min + slack * r_scale;
        // A corner of spheres a,b satisfies <x,u> <= min(h_a, h_b), so any
        // candidate involving a ball with h below the best feasible value
        // cannot improve it.
        let floor = best
            .as_ref()
            .map(|(v, _)| v - 1e-12 * r_scale)
            .unwrap_or(f64::NEG_INFINITY);
        // Collapse coincident centers; corner clusters would otherwise
        // exhaust the candidate cap with copies of one point.
        let mut cand: Vec<usize> = Vec::new();
        for (h, j) in hs.iter().take_while(|(h, _)| *h <= cutoff) {
            if *h < floor {
                continue;
            }
            if cand
                .iter()
                .any(|&i| vm::dist(balls[i].0, balls[*j].0) < 1e-10)
            {
                continue;
            }
            cand.push(*j);
            if cand.len() >= 64 {
                break;
            }
        }
        if cand.len() < 2 && li + 1 < levels.len() {
            continue;
        }
        for (a_i, &a) in cand.iter().enumerate() {
            let (ca, ra) = balls[a];
            consider(vm::add_scaled(ca, ra, u), &mut best);
            for &b in &cand[a_i + 1..] {
                if let Some(p) = sphere_subset_max(&[balls[a], balls[b]], u) {
                    consider(p, &mut best);
                }
                if dim >= 3 && cand.len() <= 32 {
                    for &c in &cand[a_i + 1..] {
                        if c <= b {
                            continue;
                        }
                        if let Some(p) = sphere_subset_max(&[balls[a], balls[b], balls[c]], u) {
                            consider(p, &mut best);
                        }
                    }
                }
            }
        }
        if best.is_some() {
            match found_at {
                // One confirmation level after the first hit.
                Some(prev) if li > prev => break,
                Some(_) => {}
                None => found_at = Some(li),
            }
        }
    }
    let dbg = std::env::var("CW_DEBUG_SUPPORT").is_ok();
    match &best {
        None => {
            if dbg {
                eprintln!("ladder: no feasible candidate (h gaps {:?})",
                    hs.iter().take(4).map(|(h, _)| h - h_min).collect::<Vec<_>>());
            }
        }
        Some((val, point)) => {
            if dbg {
                let active: Vec<f64> = balls
                    .iter()
                    .filter(|(c, r)| (vm::dist(point, c) - r).abs() <= 1e-7 * r_scale.max(1.0))
                    .map(|(c, _)| vm::angle_between(&vm::normalize(&vm::sub(point, c)).unwrap(), u))
                    .collect();
                eprintln!(
                    "ladder candidate val {val:.9}: active {} normals at angles {:?}, cert {}",
                    active.len(),
                    active,
                    certify_ball_optimum(balls, point, u, r_scale)
                );
            }
        }
    }
    let (val, point) = best?;
    if certify_ball_optimum(balls, &point, u, r_scale) {
        Some((val, point))
    } else {
        None
    }
}

/// Optimality certificate: `u` must lie in the cone of active normals at
/// the candidate point.
fn certify_ball_optimum(balls: &[(&[f64], f64)], point: &[f64], u: &[f64], r_scale: f64) -> bool {
    let active: Vec<Vec<f64>> = balls
        .iter()
        .filter(|(c, r)| (vm::dist(point, c) - r).abs() <= 1e-7 * r_scale.max(1.0))
        .filter_map(|(c, _)| vm::normalize(&vm::sub(point, c)))
        .collect();
    in_positive_span(u, &active)
}

/// Maximize `<x, u>` over the intersection of the given spheres
/// (radical-plane reduction; works for any subset size below the dimension).
fn sphere_subset_max(subset: &[(&[f64], f64)], u: &[f64]) -> Option<Vec<f64>> {
    use nalgebra::{DMatrix, DVector};
    let dim = u.len();
    let k = subset.len();
    if k < 2 || k > dim {
        return None;
    }
    let (c1, r1) = subset[0];
    let rows = k - 1;
    let mut a = DMatrix::zeros(rows, dim);
    let mut b = DVector::zeros(rows);
    for (i, (cj, rj)) in subset[1..].iter().enumerate() {
        for d in 0..dim {
            a[(i, d)] = cj[d] - c1[d];
        }
        b[i] = (vm::dot(cj, cj) - vm::dot(c1, c1) + r1 * r1 - rj * rj) / 2.0;
    }
    let svd = a.clone().svd(true, true);
    let x0 = svd.solve(&b, 1e-12).ok()?;
    // Residual check guards near-coincident centers.
    let res = (&a * &x0 - &b).norm();
    if res > 1e-8 {
        return None;
    }
    // Row-space basis by Gram-Schmidt, then complete with coordinate axes
    // to get the radical-plane null space.
    let mut row_basis: Vec<Vec<f64>> = Vec::new();
    for i in 0..rows {
        let mut r: Vec<f64> = (0..dim).map(|d| a[(i, d)]).collect();
        for q in &row_basis {
            let p = vm::dot(&r, q);
            r = vm::add_scaled(&r, -p, q);
        }
        if vm::norm(&r) > 1e-10 {
            row_basis.push(vm::normalize(&r)?);
        }
    }
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        for q in row_basis.iter().chain(basis.iter()) {
            let p = vm::dot(&e, q);
            e = vm::add_scaled(&e, -p, q);
        }
        if vm::norm(&e) > 1e-8 {
            basis.push(vm::normalize(&e)?);
        }
    }
    if basis.is_empty() {
        return None;
    }
    let x0v: Vec<f64> = (0..dim).map(|d| x0[d]).collect();
    let q = vm::sub(&x0v, c1);
    let q_n: Vec<f64> = basis.iter().map(|n| vm::dot(&q, n)).collect();
    let mut q_perp = q.clone();
    for (n, qn) in basis.iter().zip(&q_n) {
        q_perp = vm::add_scaled(&q_perp, -qn, n);
    }
    let rho2 = r1 * r1 - vm::dot(&q_perp, &q_perp);
    if rho2 < -1e-12 {
        return None;
    }
    let rho = rho2.max(0.0).sqrt();
    let w: Vec<f64> = basis.iter().map(|n| vm::dot(u, n)).collect();
    let wn = vm::norm(&w);
    let y: Vec<f64> = if wn < 1e-12 {
        // Objective indifferent on the sphere: deterministic first basis.
        let mut y = vm::scale(&q_n, -1.0);
        y[0] += rho;
        y
    } else {
        q_n.iter()
            .zip(&w)
            .map(|(qn, wi)| -qn + rho * wi / wn)
            .collect()
    };
    let mut x = x0v;
    for (n, yi) in basis.iter().zip(&y) {
        x = vm::add_scaled(&x, *yi, n);
    }
    Some(x)
}

/// Does `u` lie in the nonnegative span of `normals` (up to tolerance)?
///
/// Exact small solves over subsets (at most `dim` generators are needed);
/// robust against the nearly parallel normals of densely sampled hulls.
fn in_positive_span(u: &[f64], normals: &[Vec<f64>]) -> bool {
    use nalgebra::{DMatrix, DVector};
    if normals.is_empty() {
        return false;
    }
    let dim = u.len();
    // Keep the most u-aligned generators when the active set is large.
    let mut order: Vec<usize> = (0..normals.len()).collect();
    order.sort_by(|&a, &b| {
        vm::dot(&normals[b], u)
            .partial_cmp(&vm::dot(&normals[a], u))
            .unwrap()
    });
    order.truncate(8);
    let k = order.len();
    let max_size = dim.min(k);
    let mut subsets: Vec<Vec<usize>> = vec![Vec::new()];
    for &idx in &order {
        let mut extended = Vec::new();
        for s in &subsets {
            if s.len() < max_size {
                let mut t = s.clone();
                t.push(idx);
                extended.push(t);
            }
        }
        subsets.extend(extended);
    }
    for s in subsets.iter().filter(|s| !s.is_empty()) {
        let m = s.len();
        let mut gram = DMatrix::zeros(m, m);
        let mut rhs = DVector::zeros(m);
        for (i, &a) in s.iter().enumerate() {
            for (j, &b) in s.iter().enumerate() {
                gram[(i, j)] = vm::dot(&normals[a], &normals[b]);
            }
            rhs[i] = vm::dot(&normals[a], u);
        }
        let Some(mu) = gram.lu().solve(&rhs) else {
            continue;
        };
        if mu.iter().any(|&m| m < -1e-9) {
            continue;
        }
        let mut resid = u.to_vec();
        for (i, &a) in s.iter().enumerate() {
            resid = vm::add_scaled(&resid, -mu[i], &normals[a]);
        }
        if vm::norm(&resid) < 2e-5 {
            return true;
        }
    }
    false
}

fn coarse_sphere(dim: usize) -> &'static Vec<Vec<f64>> {
    static CACHE2: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    static CACHE3: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    static CACHEN: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    match dim {
        2 => CACHE2.get_or_init(|| {
            (0..128)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / 128.0;
                    vec![t.cos(), t.sin()]
                })
                .collect()
        }),
        3 => CACHE3.get_or_init(|| {
            crate::geom::make_direction_grid(3, 0.18)
                .unwrap()
                .dirs()
                .iter()
                .map(|d| d.coords().to_vec())
                .collect()
        }),
        _ => CACHEN.get_or_init(|| {
            crate::geom::make_direction_grid(4, 1.2)
                .unwrap()
                .dirs()
                .iter()
                .map(|d| d.coords().to_vec())
                .collect()
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Direction;

    fn dir2(x: f64, y: f64) -> Direction {
        Direction::new(&[x, y]).unwrap()
    }

    #[test]
    fn ball_support_and_boundary() {
        let b = Body::ball(&[0.0, 0.0], 0.5).unwrap();
        let u = dir2(0.0, 1.0);
        assert_eq!(
            b.support(&u, 1e-12).unwrap(),
            SupportValue::Finite(0.5)
        );
        let p = b.boundary_point(&u, 1e-12).unwrap();
        assert!(vm::dist(&p, &[0.0, 0.5]) < 1e-12);
    }

    #[test]
    fn point_hull_support_lex_tiebreak() {
        let square = Body::point_hull(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let p = square.boundary_point(&dir2(1.0, 0.0), 1e-12).unwrap();
        assert_eq!(p, vec![1.0, 1.0]);
    }

    #[test]
    fn cylinder_support_and_ray_membership() {
        let base = Body::point_hull(vec![vec![0.0, 0.0]]).unwrap();
        let ray = Body::cylinder(base, dir2(1.0, 0.0)).unwrap();
        assert!(ray
            .support(&dir2(1.0, 0.0), 1e-9)
            .unwrap()
            .is_unbounded());
        assert_ne!(ray.membership(&[5.0, 0.0], 1e-9), Membership::Outside);
        assert_eq!(ray.membership(&[-1.0, 0.0], 1e-9), Membership::Outside);
        assert_eq!(ray.membership(&[5.0, 1.0], 1e-9), Membership::Outside);
    }

    #[test]
    fn two_ball_lens_support() {
        // Lens B((-0.5,0),1) inter B((0.5,0),1); support at e2 is the top
        // corner sqrt(3)/2.
        let a = Body::ball(&[-0.5, 0.0], 1.0).unwrap();
        let b = Body::ball(&[0.5, 0.0], 1.0).unwrap();
        let lens = Body::intersection(vec![a, b], vec![0.0, 0.0]).unwrap();
        let h = lens
            .support(&dir2(0.0, 1.0), 1e-10)
            .unwrap()
            .finite()
            .unwrap();
        assert!((h - 3f64.sqrt() / 2.0).abs() < 1e-9);
        // Smooth side: support at e1 is 0.5 (right arc of the left ball).
        let h = lens
            .support(&dir2(1.0, 0.0), 1e-10)
            .unwrap()
            .finite()
            .unwrap();
        assert!((h - 0.5).abs() < 1e-9);
    }

    #[test]
    fn combination_support_is_linear() {
        let b1 = Body::ball(&[0.1, 0.0], 0.5).unwrap();
        let b2 = Body::ball(&[0.0, 0.0], 1.0).unwrap();
        let combo = Body::support_combination(vec![(0.7, b1), (0.3, b2)]).unwrap();
        let u = dir2(1.0, 0.0);
        let h = combo.support(&u, 1e-12).unwrap().finite().unwrap();
        assert!((h - (0.7 * 0.6 + 0.3)).abs() < 1e-12);
    }

    #[test]
    fn halfspace_unbounded_off_normal() {
        let hs = Body::halfspace(dir2(0.0, 1.0), 2.0);
        assert!(hs.support(&dir2(1.0, 0.0), 1e-9).unwrap().is_unbounded());
        assert_eq!(
            hs.support(&dir2(0.0, 1.0), 1e-9).unwrap(),
            SupportValue::Finite(2.0)
        );
    }

    #[test]
    fn ellipsoid_support_matches_formula() {
        let e = Body::ellipsoid(&[0.0, 0.0, 0.0], &[0.5, 0.5, 0.25]).unwrap();
        let u = Direction::new(&[1.0, 1.0, 1.0]).unwrap();
        let expected = {
            let du: Vec<f64> = [0.5, 0.5, 0.25]
                .iter()
                .zip(u.coords())
                .map(|(a, x)| a * x)
                .collect();
            vm::norm(&du)
        };
        let h = e.support(&u, 1e-12).unwrap().finite().unwrap();
        assert!((h - expected).abs() < 1e-12);
    }
}
