//! Body documents, report documents, and boundary export.
//!
//! Bodies serialize as JSON with externally tagged nodes
//! (`{"dim": 2, "ball": {"center": [0,0], "radius": 0.5}}`); parsing
//! validates fields and reports the offending path. Reports are
//! CSV-plus-header text whose summary lines are recomputable from the
//! rows. Boundary export writes a closed `angle,x,y` polyline in the
//! plane and an OFF triangle mesh in dimension 3.

pub mod cli;

use crate::body::{Body, Node, SupportTable};
use crate::error::{Error, Result};
use crate::geom::{Direction, DirectionGrid};
use serde::{Deserialize, Serialize};

/// Serializable mirror of the body tree.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum NodeDocument {
    PointHull {
        points: Vec<Vec<f64>>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Halfspace {
        normal: Vec<f64>,
        offset: f64,
    },
    Cylinder {
        base: Box<NodeDocument>,
        axis: Vec<f64>,
    },
    Intersection {
        parts: Vec<NodeDocument>,
        #[serde(skip_serializing_if = "Option::is_none")]
        interior_point: Option<Vec<f64>>,
    },
    SupportCombination {
        terms: Vec<CombinationTerm>,
    },
    Table {
        table: SupportTable,
    },
    Ellipsoid {
        center: Vec<f64>,
        semi_axes: Vec<f64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CombinationTerm {
    pub coeff: f64,
    pub body: NodeDocument,
}

/// Top-level body document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BodyDocument {
    pub dim: usize,
    #[serde(flatten)]
    pub body: NodeDocument,
}

impl BodyDocument {
    pub fn from_body(body: &Body) -> Self {
        BodyDocument {
            dim: body.dim(),
            body: node_to_doc(body),
        }
    }

    pub fn into_body(self) -> Result<Body> {
        doc_to_body(&self.body, self.dim)
    }
}

fn node_to_doc(body: &Body) -> NodeDocument {
    match body.node() {
        Node::PointHull { points } => NodeDocument::PointHull {
            points: points.clone(),
        },
        Node::Ball { center, radius } => NodeDocument::Ball {
            center: center.clone(),
            radius: *radius,
        },
        Node::Halfspace { normal, offset } => NodeDocument::Halfspace {
            normal: normal.coords().to_vec(),
            offset: *offset,
        },
        Node::Cylinder { base, axis } => NodeDocument::Cylinder {
            base: Box::new(node_to_doc(base)),
            axis: axis.coords().to_vec(),
        },
        Node::Intersection { parts } => NodeDocument::Intersection {
            parts: parts.iter().map(node_to_doc).collect(),
            interior_point: body.interior_point().map(|p| p.to_vec()),
        },
        Node::SupportCombination { terms } => NodeDocument::SupportCombination {
            terms: terms
                .iter()
                .map(|(c, b)| CombinationTerm {
                    coeff: *c,
                    body: node_to_doc(b),
                })
                .collect(),
        },
        Node::Table(tb) => NodeDocument::Table {
            table: tb.table().clone(),
        },
        Node::Ellipsoid { center, semi_axes } => NodeDocument::Ellipsoid {
            center: center.clone(),
            semi_axes: semi_axes.clone(),
        },
    }
}

fn doc_to_body(doc: &NodeDocument, dim: usize) -> Result<Body> {
    let check_dim = |v: &[f64], what: &str| -> Result<()> {
        if v.len() != dim {
            return Err(Error::Parse(format!(
                "{what} has dimension {}, document says {dim}",
                v.len()
            )));
        }
        Ok(())
    };
    match doc {
        NodeDocument::PointHull { points } => {
            if points.is_empty() {
                return Err(Error::Parse("point_hull.points must be nonempty".into()));
            }
            for p in points {
                check_dim(p, "point_hull.points entry")?;
            }
            Body::point_hull(points.clone())
        }
        NodeDocument::Ball { center, radius } => {
            check_dim(center, "ball.center")?;
            if *radius < 0.0 {
                return Err(Error::Parse(format!(
                    "ball.radius must be >= 0, got {radius}"
                )));
            }
            Body::ball(center, *radius)
        }
        NodeDocument::Halfspace { normal, offset } => {
            check_dim(normal, "halfspace.normal")?;
            let n = Direction::new(normal)
                .map_err(|e| Error::Parse(format!("halfspace.normal: {e}")))?;
            Ok(Body::halfspace(n, *offset))
        }
        NodeDocument::Cylinder { base, axis } => {
            check_dim(axis, "cylinder.axis")?;
            let base = doc_to_body(base, dim)?;
            let axis =
                Direction::new(axis).map_err(|e| Error::Parse(format!("cylinder.axis: {e}")))?;
            Body::cylinder(base, axis)
        }
        NodeDocument::Intersection {
            parts,
            interior_point,
        } => {
            let parts = parts
                .iter()
                .map(|p| doc_to_body(p, dim))
                .collect::<Result<Vec<Body>>>()?;
            match interior_point {
                Some(ip) => {
                    check_dim(ip, "intersection.interior_point")?;
                    Body::intersection(parts, ip.clone())
                }
                None => Body::intersection_auto(parts),
            }
        }
        NodeDocument::SupportCombination { terms } => {
            let terms = terms
                .iter()
                .map(|t| {
                    if t.coeff < 0.0 {
                        return Err(Error::Parse(format!(
                            "support_combination.terms.coeff must be >= 0, got {}",
                            t.coeff
                        )));
                    }
                    Ok((t.coeff, doc_to_body(&t.body, dim)?))
                })
                .collect::<Result<Vec<(f64, Body)>>>()?;
            Body::support_combination(terms)
        }
        NodeDocument::Table { table } => Body::from_table(table.clone()),
        NodeDocument::Ellipsoid { center, semi_axes } => {
            check_dim(center, "ellipsoid.center")?;
            check_dim(semi_axes, "ellipsoid.semi_axes")?;
            if semi_axes.iter().any(|a| *a <= 0.0) {
                return Err(Error::Parse(
                    "ellipsoid.semi_axes must be positive".into(),
                ));
            }
            Body::ellipsoid(center, semi_axes)
        }
    }
}

/// Parse a body document from JSON text.
pub fn parse_body(text: &str) -> Result<Body> {
    let doc: BodyDocument = serde_json::from_str(text)?;
    doc.into_body()
}

/// Serialize a body to canonical pretty JSON.
pub fn serialize_body(body: &Body) -> Result<String> {
    let doc = BodyDocument::from_body(body);
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// CSV report with `# key=value` header and summary lines; every summary
/// number is recomputable from the rows.
#[derive(Debug, Clone, Default)]
pub struct ReportDocument {
    pub command: String,
    pub config: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<(String, String)>,
}

pub fn fmt_num(v: f64) -> String {
    format!("{v:.15e}")
}

impl ReportDocument {
    pub fn new(command: &str) -> Self {
        ReportDocument {
            command: command.to_string(),
            ..Default::default()
        }
    }

    pub fn config(&mut self, key: &str, value: impl std::fmt::Display) {
        self.config.push((key.to_string(), value.to_string()));
    }

    pub fn summary(&mut self, key: &str, value: impl std::fmt::Display) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# command={}\n", self.command));
        for (k, v) in &self.config {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("# summary {k}={v}\n"));
        }
        out
    }
}

/// Export the boundary as a closed polyline (2D CSV `angle,x,y`) or an
/// OFF triangle mesh (3D).
pub fn export_boundary(body: &Body, grid: &DirectionGrid) -> Result<String> {
    match body.dim() {
        2 => {
            let mut out = String::from("angle,x,y\n");
            for u in grid.dirs() {
                let p = body.boundary_point(u, 1e-11)?;
                let angle = u.coords()[1].atan2(u.coords()[0]);
                out.push_str(&format!(
                    "{},{},{}\n",
                    fmt_num(angle),
                    fmt_num(p[0]),
                    fmt_num(p[1])
                ));
            }
            Ok(out)
        }
        3 => {
            let facets = grid
                .facets()
                .ok_or_else(|| Error::InvalidInput("3D export needs a triangulated grid".into()))?;
            let mut out = String::from("OFF\n");
            out.push_str(&format!(
                "{} {} {}\n",
                grid.len(),
                facets.len(),
                3 * facets.len() / 2
            ));
            for u in grid.dirs() {
                let p = body.boundary_point(u, 1e-11)?;
                out.push_str(&format!(
                    "{} {} {}\n",
                    fmt_num(p[0]),
                    fmt_num(p[1]),
                    fmt_num(p[2])
                ));
            }
            for f in facets {
                out.push_str(&format!("3 {} {} {}\n", f[0], f[1], f[2]));
            }
            Ok(out)
        }
        d => Err(Error::InvalidInput(format!(
            "boundary export supports dimensions 2 and 3, got {d}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::make_direction_grid;

    #[test]
    fn ball_document_round_trip() {
        let text = r#"{"dim":2,"ball":{"center":[0.0,0.0],"radius":0.5}}"#;
        let body = parse_body(text).unwrap();
        let again = parse_body(&serialize_body(&body).unwrap()).unwrap();
        let grid = make_direction_grid(2, 0.1).unwrap();
        for u in grid.dirs() {
            let a = body.support(u, 1e-12).unwrap().finite().unwrap();
            let b = again.support(u, 1e-12).unwrap().finite().unwrap();
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn malformed_radius_names_field() {
        let text = r#"{"dim":2,"ball":{"center":[0.0,0.0],"radius":-1.0}}"#;
        let err = parse_body(text).unwrap_err();
        assert!(err.to_string().contains("ball.radius"), "{err}");
    }

    #[test]
    fn unknown_tag_rejected_with_position() {
        let text = r#"{"dim":2,"blob":{"center":[0.0,0.0]}}"#;
        let err = parse_body(text).unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }

    #[test]
    fn off_export_has_euler_characteristic_two() {
        let b = Body::ball(&[0.0, 0.0, 0.0], 1.0).unwrap();
        let grid = make_direction_grid(3, 0.4).unwrap();
        let off = export_boundary(&b, &grid).unwrap();
        let mut lines = off.lines();
        assert_eq!(lines.next(), Some("OFF"));
        let counts: Vec<usize> = lines
            .next()
            .unwrap()
            .split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect();
        let (v, f, e) = (counts[0], counts[1], counts[2]);
        assert_eq!(v + f, e + 2);
    }
}
