//! Convex body representation: a constraint/primitive tree with
//! membership, support, and boundary-point oracles.
//!
//! Two dual views coexist. The primitive tree gives exact membership
//! (primal); [`SupportTable`] snapshots give a fast outer-polytope view
//! (dual). Conversions between the two are explicit and carry a
//! one-sided error: a table body always *contains* the body it was
//! sampled from.

mod oracles;
mod table;
mod width;

pub use table::{SupportTable, TableBody};
pub use width::{diameter, width_profile, WidthProfile};

use crate::error::{Error, Result};
use crate::geom::Direction;
use crate::vecmath as vm;
use serde::{Deserialize, Serialize};

/// Support query result; unbounded directions are explicit, never a float
/// sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportValue {
    Finite(f64),
    Unbounded,
}

impl SupportValue {
    pub fn finite(self) -> Result<f64> {
        match self {
            SupportValue::Finite(v) => Ok(v),
            SupportValue::Unbounded => Err(Error::UnboundedDirection),
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, SupportValue::Unbounded)
    }
}

/// Tri-state membership at a tolerance band around the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Inside,
    BoundaryBand,
    Outside,
}

/// Primitive node of the body tree.
#[derive(Debug, Clone)]
pub enum Node {
    /// Convex hull of finitely many points.
    PointHull { points: Vec<Vec<f64>> },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// `{x : <x, normal> <= offset}`.
    Halfspace {
        normal: Direction,
        offset: f64,
    },
    /// `Z^+(base, axis) = {x + t*axis : x in base, t >= 0}`.
    Cylinder {
        base: Box<Body>,
        axis: Direction,
    },
    Intersection {
        parts: Vec<Body>,
    },
    /// Minkowski combination via support addition; coefficients are >= 0.
    SupportCombination {
        terms: Vec<(f64, Body)>,
    },
    /// Outer polytope of a sampled support function.
    Table(TableBody),
    /// Axis-aligned ellipsoid; present for the curvature test suites.
    Ellipsoid {
        center: Vec<f64>,
        semi_axes: Vec<f64>,
    },
}

/// An immutable convex body.
///
/// All oracles are pure reads; the interior point and diameter hint are
/// write-once caches set at construction.
#[derive(Debug, Clone)]
pub struct Body {
    dim: usize,
    node: Node,
    interior: Option<Vec<f64>>,
    diam_hint: Option<f64>,
}

impl Body {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn interior_point(&self) -> Option<&[f64]> {
        self.interior.as_deref()
    }

    pub fn diam_hint(&self) -> Option<f64> {
        self.diam_hint
    }

    pub fn with_diam_hint(mut self, d: f64) -> Self {
        self.diam_hint = Some(d);
        self
    }

    pub fn ball(center: &[f64], radius: f64) -> Result<Self> {
        if radius < 0.0 {
            return Err(Error::InvalidInput(format!(
                "ball radius must be >= 0, got {radius}"
            )));
        }
        if center.len() < 2 {
            return Err(Error::DimensionTooSmall(center.len()));
        }
        Ok(Body {
            dim: center.len(),
            interior: (radius > 0.0).then(|| center.to_vec()),
            diam_hint: Some(2.0 * radius),
            node: Node::Ball {
                center: center.to_vec(),
                radius,
            },
        })
    }

    pub fn point_hull(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("point hull needs at least one point".into()));
        }
        let dim = points[0].len();
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidInput("points of mixed dimension".into()));
        }
        let mut centroid = vec![0.0; dim];
        for p in &points {
            centroid = vm::add(&centroid, p);
        }
        centroid = vm::scale(&centroid, 1.0 / points.len() as f64);
        Ok(Body {
            dim,
            // Relative-interior anchor; full-dimensionality is not assumed.
            interior: Some(centroid),
            diam_hint: None,
            node: Node::PointHull { points },
        })
    }

    pub fn halfspace(normal: Direction, offset: f64) -> Self {
        let dim = normal.dim();
        let anchor = vm::scale(normal.coords(), offset - 1.0);
        Body {
            dim,
            interior: Some(anchor),
            diam_hint: None,
            node: Node::Halfspace { normal, offset },
        }
    }

    pub fn cylinder(base: Body, axis: Direction) -> Result<Self> {
        if base.dim() != axis.dim() {
            return Err(Error::InvalidInput("cylinder axis dimension mismatch".into()));
        }
        Ok(Body {
            dim: base.dim(),
            interior: base.interior.clone(),
            diam_hint: None,
            node: Node::Cylinder {
                base: Box::new(base),
                axis,
            },
        })
    }

    /// Intersection with a certified interior anchor. The anchor is checked
    /// to be a member of every part; construction fails otherwise.
    pub fn intersection(parts: Vec<Body>, interior: Vec<f64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidInput("intersection needs at least one part".into()));
        }
        let dim = parts[0].dim();
        if parts.iter().any(|p| p.dim() != dim) {
            return Err(Error::InvalidInput("intersection parts of mixed dimension".into()));
        }
        let body = Body {
            dim,
            interior: Some(interior.clone()),
            diam_hint: None,
            node: Node::Intersection { parts },
        };
        if body.membership(&interior, 1e-9) == Membership::Outside {
            return Err(Error::EmptyIntersection);
        }
        Ok(body)
    }

    /// Intersection that derives its anchor from the parts (ball centers,
    /// hull centroids, table anchors). Fails when no candidate is a member.
    pub fn intersection_auto(parts: Vec<Body>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidInput("intersection needs at least one part".into()));
        }
        let dim = parts[0].dim();
        let mut candidates: Vec<Vec<f64>> = Vec::new();
        let mut mean = vec![0.0; dim];
        let mut n = 0usize;
        for p in &parts {
            if let Some(ip) = p.interior_point() {
                candidates.push(ip.to_vec());
                mean = vm::add(&mean, ip);
                n += 1;
            }
        }
        if n > 0 {
            candidates.insert(0, vm::scale(&mean, 1.0 / n as f64));
        }
        let probe = Body {
            dim,
            interior: None,
            diam_hint: None,
            node: Node::Intersection { parts },
        };
        for cand in candidates {
            if probe.membership(&cand, 1e-9) != Membership::Outside {
                let mut body = probe;
                body.interior = Some(cand);
                return Ok(body);
            }
        }
        Err(Error::EmptyIntersection)
    }

    /// Minkowski combination `sum_i coeff_i * body_i` represented through
    /// support addition.
    pub fn support_combination(terms: Vec<(f64, Body)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("combination needs at least one term".into()));
        }
        let dim = terms[0].1.dim();
        for (c, b) in &terms {
            if *c < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "combination coefficient must be >= 0, got {c}"
                )));
            }
            if b.dim() != dim {
                return Err(Error::InvalidInput("combination terms of mixed dimension".into()));
            }
        }
        let interior = {
            let mut acc = vec![0.0; dim];
            let mut ok = true;
            for (c, b) in &terms {
                match b.interior_point() {
                    Some(ip) => acc = vm::add_scaled(&acc, *c, ip),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            ok.then_some(acc)
        };
        Ok(Body {
            dim,
            interior,
            diam_hint: None,
            node: Node::SupportCombination { terms },
        })
    }

    pub fn from_table(table: SupportTable) -> Result<Self> {
        let tb = TableBody::new(table)?;
        Ok(Body {
            dim: tb.dim(),
            interior: Some(tb.anchor().to_vec()),
            diam_hint: None,
            node: Node::Table(tb),
        })
    }

    pub fn ellipsoid(center: &[f64], semi_axes: &[f64]) -> Result<Self> {
        if center.len() != semi_axes.len() {
            return Err(Error::InvalidInput("ellipsoid center/axes dimension mismatch".into()));
        }
        if center.len() < 2 {
            return Err(Error::DimensionTooSmall(center.len()));
        }
        if semi_axes.iter().any(|&a| a <= 0.0) {
            return Err(Error::InvalidInput("ellipsoid semi-axes must be positive".into()));
        }
        Ok(Body {
            dim: center.len(),
            interior: Some(center.to_vec()),
            diam_hint: Some(2.0 * semi_axes.iter().cloned().fold(0.0, f64::max)),
            node: Node::Ellipsoid {
                center: center.to_vec(),
                semi_axes: semi_axes.to_vec(),
            },
        })
    }

    /// The reflected body `-K` (primitive tree negated).
    pub fn reflect(&self) -> Body {
        let node = match &self.node {
            Node::PointHull { points } => Node::PointHull {
                points: points.iter().map(|p| vm::neg(p)).collect(),
            },
            Node::Ball { center, radius } => Node::Ball {
                center: vm::neg(center),
                radius: *radius,
            },
            Node::Halfspace { normal, offset } => Node::Halfspace {
                normal: normal.negate(),
                offset: *offset,
            },
            Node::Cylinder { base, axis } => Node::Cylinder {
                base: Box::new(base.reflect()),
                axis: axis.negate(),
            },
            Node::Intersection { parts } => Node::Intersection {
                parts: parts.iter().map(|p| p.reflect()).collect(),
            },
            Node::SupportCombination { terms } => Node::SupportCombination {
                terms: terms.iter().map(|(c, b)| (*c, b.reflect())).collect(),
            },
            Node::Table(tb) => Node::Table(tb.reflect()),
            Node::Ellipsoid { center, semi_axes } => Node::Ellipsoid {
                center: vm::neg(center),
                semi_axes: semi_axes.clone(),
            },
        };
        Body {
            dim: self.dim,
            interior: self.interior.as_ref().map(|p| vm::neg(p)),
            diam_hint: self.diam_hint,
            node,
        }
    }
}

/// Minkowski combination builder; rejects negative coefficients.
pub fn minkowski_combine(terms: Vec<(f64, Body)>) -> Result<Body> {
    Body::support_combination(terms)
}
