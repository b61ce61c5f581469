//! Dimension-generic vector helpers on `&[f64]` slices.
//!
//! Bodies and directions live in R^n for small n, so everything here is
//! plain slice arithmetic; `nalgebra` is reserved for the dense fits in
//! the curvature module.

use std::cmp::Ordering;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| -x).collect()
}

/// `a + s * b`.
pub fn add_scaled(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn normalize(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n < 1e-300 {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}

/// Lexicographic comparison, used for deterministic tie-breaking among
/// support-set maximizers.
pub fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(ord) => return ord,
        }
    }
    Ordering::Equal
}

/// Angle between two unit vectors, clamped against rounding.
pub fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

/// Orthonormal basis of the hyperplane orthogonal to unit vector `u`,
/// deterministic for fixed input (Gram-Schmidt over coordinate axes).
pub fn tangent_basis(u: &[f64]) -> Vec<Vec<f64>> {
    let n = u.len();
    let mut basis: Vec<Vec<f64>> = vec![u.to_vec()];
    for i in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        for b in &basis {
            let p = dot(&e, b);
            e = add_scaled(&e, -p, b);
        }
        if norm(&e) > 1e-8 {
            basis.push(normalize(&e).unwrap());
        }
    }
    debug_assert_eq!(basis.len(), n);
    basis.remove(0);
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tangent_basis_is_orthonormal() {
        let u = normalize(&[0.3, -0.5, 0.81]).unwrap();
        let basis = tangent_basis(&u);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!((norm(b) - 1.0).abs() < 1e-12);
            assert!(dot(b, &u).abs() < 1e-12);
        }
        assert!(dot(&basis[0], &basis[1]).abs() < 1e-12);
    }

    #[test]
    fn lex_cmp_orders_first_coordinate_first() {
        assert_eq!(lex_cmp(&[1.0, 0.0], &[1.0, 2.0]), Ordering::Less);
        assert_eq!(lex_cmp(&[2.0, 0.0], &[1.0, 9.0]), Ordering::Greater);
    }
}
