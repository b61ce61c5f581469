//! Vector and sphere primitives: unit directions, spherical caps,
//! direction grids, and the support/radial metric utilities.

mod grid;
mod metrics;

pub use grid::{make_direction_grid, DirectionGrid};
pub use metrics::{
    convergence_compare, hausdorff_distance, polar_support, radial_function, ConvergenceRow,
};

use crate::error::{Error, Result};
use crate::vecmath as vm;
use serde::{Deserialize, Serialize};

/// A unit vector on the sphere S^{n-1}.
///
/// Construction normalizes the coordinates and rejects near-zero input;
/// the stored norm is 1 within 1e-12.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Direction {
    coords: Vec<f64>,
}

impl Direction {
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionTooSmall(coords.len()));
        }
        let coords = vm::normalize(coords)
            .ok_or_else(|| Error::InvalidInput("zero vector cannot be normalized".into()))?;
        Ok(Direction { coords })
    }

    /// 2D direction from a polar angle.
    pub fn from_angle(theta: f64) -> Self {
        Direction {
            coords: vec![theta.cos(), theta.sin()],
        }
    }

    /// Standard basis direction `e_axis` in R^dim.
    pub fn axis(dim: usize, axis: usize) -> Self {
        let mut coords = vec![0.0; dim];
        coords[axis] = 1.0;
        Direction { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn negate(&self) -> Direction {
        Direction {
            coords: vm::neg(&self.coords),
        }
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        vm::dot(&self.coords, &other.coords)
    }

    /// Angular distance to another direction.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        vm::angle_between(&self.coords, &other.coords)
    }

    /// Unit combination `u cos(beta) + t sin(beta)` used by the angular
    /// curvature quotients; `t` must be orthogonal to `self`.
    pub fn rotate_towards(&self, t: &Direction, beta: f64) -> Direction {
        let c = beta.cos();
        let s = beta.sin();
        let coords = self
            .coords
            .iter()
            .zip(t.coords())
            .map(|(a, b)| a * c + b * s)
            .collect();
        Direction { coords }
    }
}

impl TryFrom<Vec<f64>> for Direction {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Direction::new(&v)
    }
}

impl From<Direction> for Vec<f64> {
    fn from(d: Direction) -> Vec<f64> {
        d.coords
    }
}

/// A closed spherical cap `{u : <u,pole> >= threshold}`.
///
/// With `threshold = 0` and the strict test it doubles as the open
/// halfsphere used for upper/lower boundaries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cap {
    pub pole: Direction,
    pub threshold: f64,
}

impl Cap {
    pub fn new(pole: Direction, threshold: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&threshold) && threshold != 0.0 {
            return Err(Error::InvalidInput(format!(
                "cap threshold must lie in [0,1), got {threshold}"
            )));
        }
        Ok(Cap { pole, threshold })
    }

    /// Default cap with threshold 1/2.
    pub fn half(pole: Direction) -> Self {
        Cap {
            pole,
            threshold: 0.5,
        }
    }

    /// Closed membership test.
    pub fn contains(&self, u: &Direction) -> bool {
        self.pole.dot(u) >= self.threshold
    }

    /// Strict membership test (open halfsphere semantics when threshold 0).
    pub fn contains_strict(&self, u: &Direction) -> bool {
        self.pole.dot(u) > self.threshold
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_normalizes() {
        let d = Direction::new(&[3.0, 4.0]).unwrap();
        assert!((vm::norm(d.coords()) - 1.0).abs() < 1e-12);
        assert!((d.coords()[0] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn direction_rejects_zero_and_1d() {
        assert!(Direction::new(&[0.0, 0.0]).is_err());
        assert!(Direction::new(&[1.0]).is_err());
    }

    #[test]
    fn cap_membership_uses_threshold() {
        let cap = Cap::half(Direction::axis(3, 2));
        assert!(cap.contains(&Direction::axis(3, 2)));
        assert!(!cap.contains(&Direction::axis(3, 0)));
        let edge = Direction::new(&[3f64.sqrt() / 2.0, 0.0, 0.5]).unwrap();
        assert!(cap.contains(&edge));
    }
}
