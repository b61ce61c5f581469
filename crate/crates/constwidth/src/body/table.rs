//! Sampled support functions and the outer polytopes they induce.

use super::{Body, SupportValue};
use crate::error::{Error, Result};
use crate::geom::{Direction, DirectionGrid};
use crate::linprog::{seidel_lp, LpOutcome};
use crate::vecmath as vm;
use serde::{Deserialize, Serialize};

/// A sampled support function `h(K, u)` over a direction grid.
///
/// The induced outer polytope `P = {y : <y,u> <= value(u) for all grid u}`
/// contains the sampled body; `support(P, u) <= value(u)` at every grid
/// direction, with equality within tolerance when the values are
/// self-consistent (convexified).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupportTable {
    grid: DirectionGrid,
    /// Offsets per grid direction; non-finite entries mean "no constraint
    /// in this direction" (used for cylinder-masked tables).
    values: Vec<f64>,
}

impl SupportTable {
    pub fn new(grid: DirectionGrid, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "table has {} values for {} directions",
                values.len(),
                grid.len()
            )));
        }
        Ok(SupportTable { grid, values })
    }

    /// Sample the support function of a body over a grid.
    pub fn from_body(body: &Body, grid: &DirectionGrid, tol: f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for u in grid.dirs() {
            match body.support(u, tol)? {
                SupportValue::Finite(v) => values.push(v),
                SupportValue::Unbounded => values.push(f64::INFINITY),
            }
        }
        Ok(SupportTable {
            grid: grid.clone(),
            values,
        })
    }

    pub fn grid(&self) -> &DirectionGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Pointwise minimum of two tables over the same grid.
    pub fn min_with(&self, other: &SupportTable) -> Result<SupportTable> {
        if self.grid.len() != other.grid.len() {
            return Err(Error::InvalidInput("table grids differ".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.min(*b))
            .collect();
        Ok(SupportTable {
            grid: self.grid.clone(),
            values,
        })
    }

    /// Replace each value by the support of the induced outer polytope,
    /// making the table self-consistent. Returns the consistent table.
    pub fn convexified(&self) -> Result<SupportTable> {
        let tb = TableBody::new(self.clone())?;
        let mut values = Vec::with_capacity(self.grid.len());
        for (i, u) in self.grid.dirs().iter().enumerate() {
            match tb.support_dir(u)? {
                SupportValue::Finite(v) => values.push(v.min(self.values[i])),
                SupportValue::Unbounded => values.push(f64::INFINITY),
            }
        }
        Ok(SupportTable {
            grid: self.grid.clone(),
            values,
        })
    }
}

/// 2D polygon extracted from a halfplane table: vertices in CCW order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Polygon2 {
    pub vertices: Vec<[f64; 2]>,
}

impl Polygon2 {
    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| v[0] * u[0] + v[1] * u[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn support_point(&self, u: &[f64]) -> [f64; 2] {
        let mut best = self.vertices[0];
        let mut best_val = f64::NEG_INFINITY;
        for v in &self.vertices {
            let val = v[0] * u[0] + v[1] * u[1];
            if val > best_val + 1e-13
                || (val > best_val - 1e-13 && vm::lex_cmp(v, &best) == std::cmp::Ordering::Greater)
            {
                best_val = val;
                best = *v;
            }
        }
        best
    }
}

/// The outer polytope of a support table, with cached interior anchor and
/// (in 2D) its vertex polygon.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableBody {
    table: SupportTable,
    anchor: Vec<f64>,
    inner_radius: f64,
    polygon: Option<Polygon2>,
}

impl TableBody {
    pub fn new(table: SupportTable) -> Result<Self> {
        let dim = table.grid.dim();
        let (anchor, inner_radius) = chebyshev_anchor(&table)?;
        let polygon = if dim == 2 {
            Some(halfplane_polygon(&table, &anchor)?)
        } else {
            None
        };
        Ok(TableBody {
            table,
            anchor,
            inner_radius,
            polygon,
        })
    }

    pub fn dim(&self) -> usize {
        self.table.grid.dim()
    }

    pub fn table(&self) -> &SupportTable {
        &self.table
    }

    pub fn anchor(&self) -> &[f64] {
        &self.anchor
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn polygon(&self) -> Option<&Polygon2> {
        self.polygon.as_ref()
    }

    /// Signed margin: positive depth estimate inside, negative violation
    /// outside (`min_g (t_g - <y,u_g>)`).
    pub fn margin(&self, y: &[f64]) -> f64 {
        self.table
            .values
            .iter()
            .zip(self.table.grid.dirs())
            .filter(|(t, _)| t.is_finite())
            .map(|(t, u)| t - vm::dot(y, u.coords()))
            .fold(f64::INFINITY, f64::min)
    }

    /// Support of the outer polytope in an arbitrary direction.
    pub fn support_dir(&self, u: &Direction) -> Result<SupportValue> {
        if let Some(poly) = &self.polygon {
            return Ok(SupportValue::Finite(poly.support(u.coords())));
        }
        let cons: Vec<(Vec<f64>, f64)> = self
            .table
            .values
            .iter()
            .zip(self.table.grid.dirs())
            .filter(|(t, _)| t.is_finite())
            .map(|(t, g)| (g.coords().to_vec(), *t))
            .collect();
        let bound = lp_box_bound(&self.table);
        match seidel_lp(&cons, u.coords(), bound) {
            LpOutcome::Optimal(x) => Ok(SupportValue::Finite(vm::dot(&x, u.coords()))),
            LpOutcome::BoxBounded(_) => Ok(SupportValue::Unbounded),
            LpOutcome::Infeasible => Err(Error::EmptyIntersection),
        }
    }

    /// A maximizer of `<., u>` over the outer polytope.
    pub fn support_point(&self, u: &Direction) -> Result<Vec<f64>> {
        if let Some(poly) = &self.polygon {
            let p = poly.support_point(u.coords());
            return Ok(vec![p[0], p[1]]);
        }
        let cons: Vec<(Vec<f64>, f64)> = self
            .table
            .values
            .iter()
            .zip(self.table.grid.dirs())
            .filter(|(t, _)| t.is_finite())
            .map(|(t, g)| (g.coords().to_vec(), *t))
            .collect();
        let bound = lp_box_bound(&self.table);
        match seidel_lp(&cons, u.coords(), bound) {
            LpOutcome::Optimal(x) => Ok(x),
            LpOutcome::BoxBounded(_) => Err(Error::UnboundedDirection),
            LpOutcome::Infeasible => Err(Error::EmptyIntersection),
        }
    }

    pub fn reflect(&self) -> TableBody {
        let grid = self.table.grid.clone();
        let mut values = self.table.values.clone();
        if grid.is_symmetric() {
            for (i, v) in self.table.values.iter().enumerate() {
                if let Some(j) = grid.antipode_index(i) {
                    values[j] = *v;
                }
            }
        } else {
            // Without antipodal pairing the reflected table cannot reuse the
            // grid; keep values aligned by negating directions is impossible,
            // so fall back to the original values (callers use symmetric
            // grids in practice).
            values = self.table.values.clone();
        }
        TableBody {
            table: SupportTable {
                grid,
                values,
            },
            anchor: vm::neg(&self.anchor),
            inner_radius: self.inner_radius,
            polygon: self.polygon.as_ref().map(|p| Polygon2 {
                vertices: p.vertices.iter().map(|v| [-v[0], -v[1]]).collect(),
            }),
        }
    }
}

fn lp_box_bound(table: &SupportTable) -> f64 {
    let max_t = table
        .values
        .iter()
        .filter(|t| t.is_finite())
        .fold(1.0f64, |a, &b| a.max(b.abs()));
    10.0 * max_t + 10.0
}

/// Chebyshev-style anchor: maximize r subject to `<c,u_g> + r <= t_g`.
fn chebyshev_anchor(table: &SupportTable) -> Result<(Vec<f64>, f64)> {
    let dim = table.grid.dim();
    let mut cons: Vec<(Vec<f64>, f64)> = Vec::with_capacity(table.values.len());
    for (t, g) in table.values.iter().zip(table.grid.dirs()) {
        if !t.is_finite() {
            continue;
        }
        let mut row = g.coords().to_vec();
        row.push(1.0);
        cons.push((row, *t));
    }
    if cons.is_empty() {
        return Err(Error::InvalidInput("table with no finite constraints".into()));
    }
    let mut obj = vec![0.0; dim];
    obj.push(1.0);
    let bound = lp_box_bound(table);
    match seidel_lp(&cons, &obj, bound) {
        LpOutcome::Optimal(x) | LpOutcome::BoxBounded(x) => {
            let r = x[dim];
            if r < -1e-9 {
                return Err(Error::EmptyIntersection);
            }
            Ok((x[..dim].to_vec(), r.max(0.0)))
        }
        LpOutcome::Infeasible => Err(Error::EmptyIntersection),
    }
}

/// Intersection of the halfplanes `<y,u_g> <= t_g` as a CCW polygon.
///
/// Standard deque sweep over slope-sorted halfplanes; the grid is already
/// angle-sorted, finite rows are kept, and the anchor is used to seed a
/// bounding box when the rows leave a direction unconstrained.
fn halfplane_polygon(table: &SupportTable, anchor: &[f64]) -> Result<Polygon2> {
    #[derive(Clone, Copy)]
    struct Line {
        // <y, n> <= t
        n: [f64; 2],
        t: f64,
        angle: f64,
    }
    let mut lines: Vec<Line> = Vec::with_capacity(table.values.len() + 4);
    for (t, g) in table.values.iter().zip(table.grid.dirs()) {
        if !t.is_finite() {
            continue;
        }
        let c = g.coords();
        lines.push(Line {
            n: [c[0], c[1]],
            t: *t,
            angle: c[1].atan2(c[0]),
        });
    }
    // Box rows around the anchor keep the sweep bounded even for masked
    // (cylinder) tables.
    let reach = table
        .values
        .iter()
        .filter(|t| t.is_finite())
        .fold(1.0f64, |a, &b| a.max(b.abs()))
        * 4.0
        + 4.0 * (vm::norm(anchor) + 1.0);
    for (nx, ny) in [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)] {
        lines.push(Line {
            n: [nx, ny],
            t: reach + nx * anchor[0] + ny * anchor[1],
            angle: (ny as f64).atan2(nx),
        });
    }
    lines.sort_by(|a, b| a.angle.partial_cmp(&b.angle).unwrap());
    // Among parallel lines keep the tightest.
    let mut dedup: Vec<Line> = Vec::with_capacity(lines.len());
    for l in lines {
        if let Some(last) = dedup.last_mut() {
            if (l.angle - last.angle).abs() < 1e-12 {
                if l.t < last.t {
                    *last = l;
                }
                continue;
            }
        }
        dedup.push(l);
    }
    let inter = |a: &Line, b: &Line| -> Option<[f64; 2]> {
        let det = a.n[0] * b.n[1] - a.n[1] * b.n[0];
        if det.abs() < 1e-14 {
            return None;
        }
        Some([
            (a.t * b.n[1] - b.t * a.n[1]) / det,
            (a.n[0] * b.t - b.n[0] * a.t) / det,
        ])
    };
    let violates = |l: &Line, p: &[f64; 2]| l.n[0] * p[0] + l.n[1] * p[1] > l.t + 1e-12 * (1.0 + l.t.abs());
    let mut dq: std::collections::VecDeque<Line> = std::collections::VecDeque::new();
    for l in dedup {
        while dq.len() >= 2 {
            let a = dq[dq.len() - 2];
            let b = dq[dq.len() - 1];
            match inter(&a, &b) {
                Some(p) if violates(&l, &p) => {
                    dq.pop_back();
                }
                _ => break,
            }
        }
        while dq.len() >= 2 {
            let a = dq[0];
            let b = dq[1];
            match inter(&a, &b) {
                Some(p) if violates(&l, &p) => {
                    dq.pop_front();
                }
                _ => break,
            }
        }
        dq.push_back(l);
    }
    // Final trim around the wrap.
    loop {
        let mut changed = false;
        while dq.len() >= 3 {
            let a = dq[dq.len() - 2];
            let b = dq[dq.len() - 1];
            let l = dq[0];
            match inter(&a, &b) {
                Some(p) if violates(&l, &p) => {
                    dq.pop_back();
                    changed = true;
                }
                _ => break,
            }
        }
        while dq.len() >= 3 {
            let a = *dq.back().unwrap();
            let b = dq[0];
            let l = dq[1];
            match inter(&a, &b) {
                Some(p) if violates(&l, &p) => {
                    dq.pop_front();
                    changed = true;
                }
                _ => break,
            }
        }
        if !changed {
            break;
        }
    }
    if dq.len() < 3 {
        return Err(Error::EmptyIntersection);
    }
    let lines: Vec<Line> = dq.into_iter().collect();
    let mut vertices: Vec<[f64; 2]> = Vec::with_capacity(lines.len());
    for i in 0..lines.len() {
        let j = (i + 1) % lines.len();
        if let Some(p) = inter(&lines[i], &lines[j]) {
            // Concurrent support lines (body corners) repeat the same
            // vertex; keep one copy.
            if let Some(last) = vertices.last() {
                if (p[0] - last[0]).abs() + (p[1] - last[1]).abs() < 1e-11 {
                    continue;
                }
            }
            vertices.push(p);
        }
    }
    while vertices.len() > 1 {
        let first = vertices[0];
        let last = *vertices.last().unwrap();
        if (first[0] - last[0]).abs() + (first[1] - last[1]).abs() < 1e-11 {
            vertices.pop();
        } else {
            break;
        }
    }
    if vertices.len() < 3 {
        return Err(Error::EmptyIntersection);
    }
    Ok(Polygon2 { vertices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::make_direction_grid;

    fn square_table(m: usize) -> SupportTable {
        // Unit square [-1,1]^2 sampled on a grid of 2m directions.
        let grid = make_direction_grid(2, std::f64::consts::PI / m as f64).unwrap();
        let values = grid
            .dirs()
            .iter()
            .map(|u| u.coords()[0].abs() + u.coords()[1].abs())
            .collect();
        SupportTable::new(grid, values).unwrap()
    }

    #[test]
    fn polygon_of_square_supports_match() {
        let table = square_table(64);
        let tb = TableBody::new(table).unwrap();
        let poly = tb.polygon().unwrap();
        // Support at axis directions equals 1 (faces of the square).
        assert!((poly.support(&[1.0, 0.0]) - 1.0).abs() < 1e-9);
        assert!((poly.support(&[0.0, -1.0]) - 1.0).abs() < 1e-9);
        // Support at the diagonal is below the raw table value (outer
        // polytope is consistent after convexification).
        let diag = [std::f64::consts::FRAC_1_SQRT_2; 2];
        let raw = 2f64.sqrt();
        assert!(poly.support(&diag) <= raw + 1e-9);
    }

    #[test]
    fn convexified_table_is_self_consistent() {
        let table = square_table(32);
        let conv = table.convexified().unwrap();
        let tb = TableBody::new(conv.clone()).unwrap();
        for (i, u) in conv.grid().dirs().iter().enumerate() {
            let s = tb.support_dir(u).unwrap().finite().unwrap();
            assert!(s <= conv.value(i) + 1e-9);
            assert!(s >= conv.value(i) - 1e-7);
        }
    }

    #[test]
    fn chebyshev_anchor_inside_square() {
        let table = square_table(32);
        let tb = TableBody::new(table).unwrap();
        assert!(vm::norm(tb.anchor()) < 1e-6);
        assert!((tb.inner_radius() - 1.0).abs() < 0.05);
    }

    #[test]
    fn table_margin_sign() {
        let table = square_table(32);
        let tb = TableBody::new(table).unwrap();
        assert!(tb.margin(&[0.0, 0.0]) > 0.9);
        assert!(tb.margin(&[3.0, 0.0]) < -1.9);
    }
}
