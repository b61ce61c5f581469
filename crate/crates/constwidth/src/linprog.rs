//! Small dense solvers for the low-dimensional subproblems behind the
//! body oracles: Seidel's randomized-incremental LP (here with a fixed,
//! seeded shuffle so every call is deterministic) and Wolfe's min-norm
//! point method for exact distance to a convex hull.

use crate::vecmath as vm;

const FEAS_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// Optimal point maximizing the objective.
    Optimal(Vec<f64>),
    Infeasible,
    /// Objective unbounded within the bounding box; carries the box vertex.
    BoxBounded(Vec<f64>),
}

/// Maximize `<c, x>` subject to `<a_i, x> <= b_i` and `|x_j| <= bound`.
///
/// The explicit box keeps every subproblem bounded; callers that need to
/// detect genuine unboundedness check for `BoxBounded`.
pub fn seidel_lp(constraints: &[(Vec<f64>, f64)], c: &[f64], bound: f64) -> LpOutcome {
    let dim = c.len();
    let order = shuffled_order(constraints.len());
    let mut active: Vec<(Vec<f64>, f64)> = Vec::with_capacity(constraints.len());
    // Start from the box vertex maximizing c.
    let mut x: Vec<f64> = c.iter().map(|&ci| if ci >= 0.0 { bound } else { -bound }).collect();
    let mut hit_box = true;
    for &idx in &order {
        let (a, b) = &constraints[idx];
        if vm::dot(a, &x) <= *b + FEAS_EPS * (1.0 + b.abs()) {
            active.push((a.clone(), *b));
            continue;
        }
        // Optimum lies on this hyperplane: substitute out one variable.
        match solve_on_hyperplane(&active, a, *b, c, bound, dim) {
            Some((nx, nb)) => {
                x = nx;
                hit_box = nb;
            }
            None => return LpOutcome::Infeasible,
        }
        active.push((a.clone(), *b));
    }
    if hit_box && on_box(&x, bound) {
        LpOutcome::BoxBounded(x)
    } else {
        LpOutcome::Optimal(x)
    }
}

fn on_box(x: &[f64], bound: f64) -> bool {
    x.iter().any(|v| (v.abs() - bound).abs() <= 1e-7 * bound)
}

/// Restrict the LP to `<a,x> = b` by eliminating the coordinate with the
/// largest |a| entry, then recurse one dimension lower.
fn solve_on_hyperplane(
    constraints: &[(Vec<f64>, f64)],
    a: &[f64],
    b: f64,
    c: &[f64],
    bound: f64,
    dim: usize,
) -> Option<(Vec<f64>, bool)> {
    let pivot = (0..dim)
        .max_by(|&i, &j| a[i].abs().partial_cmp(&a[j].abs()).unwrap())
        .unwrap();
    let ap = a[pivot];
    if ap.abs() < 1e-13 {
        return None;
    }
    // x_pivot = (b - sum_{j != pivot} a_j x_j) / a_pivot
    let reduce = |v: &[f64], off: f64| -> (Vec<f64>, f64) {
        // v.x <= off with x_pivot substituted.
        let scale = v[pivot] / ap;
        let rv: Vec<f64> = (0..dim)
            .filter(|&j| j != pivot)
            .map(|j| v[j] - scale * a[j])
            .collect();
        (rv, off - scale * b)
    };
    if dim == 1 {
        let x = vec![b / ap];
        if x[0].abs() > bound + 1e-9 {
            return None;
        }
        for (v, off) in constraints {
            if vm::dot(v, &x) > *off + FEAS_EPS * (1.0 + off.abs()) {
                return None;
            }
        }
        return Some((x, false));
    }
    let mut sub: Vec<(Vec<f64>, f64)> = constraints.iter().map(|(v, o)| reduce(v, *o)).collect();
    // Keep the substituted variable inside the box.
    let mut ei = vec![0.0; dim];
    ei[pivot] = 1.0;
    let (row, off) = reduce(&ei, bound);
    sub.push((row, off));
    ei[pivot] = -1.0;
    let (row, off) = reduce(&ei, bound);
    sub.push((row, off));
    let (rc, _) = reduce(c, 0.0);
    // Degenerate reduced objective: any feasible point on the plane works.
    let rc = if vm::norm(&rc) < 1e-14 { vec![1e-30; dim - 1] } else { rc };
    match seidel_lp(&sub, &rc, bound) {
        LpOutcome::Optimal(y) | LpOutcome::BoxBounded(y) => {
            let mut x = Vec::with_capacity(dim);
            let mut yi = y.iter();
            for j in 0..dim {
                if j == pivot {
                    x.push(0.0);
                } else {
                    x.push(*yi.next().unwrap());
                }
            }
            let rest: f64 = (0..dim).filter(|&j| j != pivot).map(|j| a[j] * x[j]).sum();
            x[pivot] = (b - rest) / ap;
            let hit = on_box(&x, bound);
            Some((x, hit))
        }
        LpOutcome::Infeasible => None,
    }
}

/// Deterministic pseudo-shuffle (splitmix64 driven Fisher-Yates).
fn shuffled_order(n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut state: u64 = 0x9E3779B97F4A7C15 ^ (n as u64);
    let mut next = || {
        state = state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    };
    for i in (1..n).rev() {
        let j = (next() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    order
}

/// Wolfe's min-norm point: distance from the origin to `conv(points)` and
/// the nearest point. Exact in finitely many steps up to rounding.
pub fn min_norm_point(points: &[Vec<f64>]) -> (f64, Vec<f64>) {
    assert!(!points.is_empty());
    let dim = points[0].len();
    // Start from the point of smallest norm.
    let mut best = 0;
    for (i, p) in points.iter().enumerate() {
        if vm::dot(p, p) < vm::dot(&points[best], &points[best]) {
            best = i;
        }
    }
    let mut corral: Vec<usize> = vec![best];
    let mut lambda: Vec<f64> = vec![1.0];
    let mut x = points[best].clone();
    for _ in 0..200 {
        // Most violating vertex.
        let xx = vm::dot(&x, &x);
        let mut jbest = 0;
        let mut vbest = f64::INFINITY;
        for (j, p) in points.iter().enumerate() {
            let v = vm::dot(&x, p);
            if v < vbest {
                vbest = v;
                jbest = j;
            }
        }
        if vbest >= xx - 1e-13 * (1.0 + xx) {
            break;
        }
        if !corral.contains(&jbest) {
            corral.push(jbest);
            lambda.push(0.0);
        }
        // Minor cycle: project onto the affine hull of the corral, contract
        // until all barycentric coefficients are nonnegative.
        for _ in 0..100 {
            let alpha = affine_min_norm(points, &corral, dim);
            if alpha.iter().all(|&a| a > -1e-12) {
                lambda = alpha;
                break;
            }
            // Largest feasible step toward alpha.
            let mut theta = 1.0f64;
            for (l, a) in lambda.iter().zip(&alpha) {
                if *a < *l {
                    theta = theta.min(l / (l - a));
                }
            }
            lambda = lambda
                .iter()
                .zip(&alpha)
                .map(|(l, a)| l + theta * (a - l))
                .collect();
            let keep: Vec<bool> = lambda.iter().map(|&l| l > 1e-12).collect();
            corral = corral
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(&i, _)| i)
                .collect();
            lambda = lambda.into_iter().filter(|&l| l > 1e-12).collect();
            let s: f64 = lambda.iter().sum();
            for l in &mut lambda {
                *l /= s;
            }
        }
        x = vec![0.0; dim];
        for (l, &i) in lambda.iter().zip(&corral) {
            x = vm::add_scaled(&x, *l, &points[i]);
        }
    }
    (vm::norm(&x), x)
}

/// Min-norm point of the affine hull of `points[corral]`, returned as
/// barycentric coefficients. Solves the KKT system with nalgebra.
fn affine_min_norm(points: &[Vec<f64>], corral: &[usize], _dim: usize) -> Vec<f64> {
    use nalgebra::{DMatrix, DVector};
    let k = corral.len();
    if k == 1 {
        return vec![1.0];
    }
    // Gram system: [G 1; 1^T 0] [alpha; mu] = [0; 1]
    let mut m = DMatrix::zeros(k + 1, k + 1);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = vm::dot(&points[corral[i]], &points[corral[j]]);
        }
        m[(i, k)] = 1.0;
        m[(k, i)] = 1.0;
    }
    let mut rhs = DVector::zeros(k + 1);
    rhs[k] = 1.0;
    match m.lu().solve(&rhs) {
        Some(sol) => (0..k).map(|i| sol[i]).collect(),
        None => {
            // Singular Gram matrix: fall back to uniform weights.
            vec![1.0 / k as f64; k]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_square_corner() {
        // max x + y over the unit square.
        let cons = vec![
            (vec![1.0, 0.0], 1.0),
            (vec![0.0, 1.0], 1.0),
            (vec![-1.0, 0.0], 0.0),
            (vec![0.0, -1.0], 0.0),
        ];
        match seidel_lp(&cons, &[1.0, 1.0], 100.0) {
            LpOutcome::Optimal(x) => {
                assert!((x[0] - 1.0).abs() < 1e-9);
                assert!((x[1] - 1.0).abs() < 1e-9);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn lp_detects_infeasible() {
        let cons = vec![(vec![1.0, 0.0], -1.0), (vec![-1.0, 0.0], -1.0)];
        assert_eq!(seidel_lp(&cons, &[1.0, 0.0], 100.0), LpOutcome::Infeasible);
    }

    #[test]
    fn lp_unbounded_reports_box() {
        let cons = vec![(vec![-1.0, 0.0], 0.0)];
        match seidel_lp(&cons, &[1.0, 0.0], 100.0) {
            LpOutcome::BoxBounded(x) => assert!((x[0] - 100.0).abs() < 1e-7),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn lp_octahedron_support() {
        // max z s.t. +-x +-y +-z <= 1 -> z = 1.
        let mut cons = Vec::new();
        for sx in [-1.0, 1.0] {
            for sy in [-1.0f64, 1.0] {
                for sz in [-1.0f64, 1.0] {
                    cons.push((vec![sx, sy, sz], 1.0));
                }
            }
        }
        match seidel_lp(&cons, &[0.0, 0.0, 1.0], 50.0) {
            LpOutcome::Optimal(x) => assert!((x[2] - 1.0).abs() < 1e-9),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn min_norm_inside_and_outside() {
        let square = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ];
        let dist = |y: &[f64]| {
            let shifted: Vec<Vec<f64>> = square.iter().map(|p| vm::sub(p, y)).collect();
            min_norm_point(&shifted).0
        };
        assert!(dist(&[0.5, 0.5]) < 1e-10);
        assert!((dist(&[2.0, 0.5]) - 1.0).abs() < 1e-9);
        assert!((dist(&[2.0, 2.0]) - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn min_norm_simplex_3d() {
        let tri = vec![
            vec![1.0, 0.0, 1.0],
            vec![-1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ];
        let (d, x) = min_norm_point(&tri);
        assert!((d - 1.0).abs() < 1e-9);
        assert!((x[2] - 1.0).abs() < 1e-9);
    }
}
