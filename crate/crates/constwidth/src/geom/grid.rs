//! Deterministic direction grids on S^{n-1}.
//!
//! Grids are hierarchical (each refinement contains the coarser grid) and
//! centrally symmetric, so antipodal width queries and nested
//! liminf/limsup schedules stay on grid points.
//!
//! * n = 2: equally spaced angles. With `m = ceil(pi / target)` antipodal
//!   angle classes the grid has `2m` directions and mesh `pi / m` (the gap
//!   between adjacent members; every unit vector is within half of that of
//!   a member).
//! * n = 3: recursively subdivided icosahedron, projected to the sphere.
//!   The mesh is the largest angular circumradius over the triangulation.
//! * n >= 4: cross-polytope with barycentric refinement (coarse but valid;
//!   the mesh bound uses facet diameters).

use super::Direction;
use crate::error::{Error, Result};
use crate::vecmath as vm;
use serde::{Deserialize, Serialize};

/// A finite set of unit directions covering the sphere within `mesh`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectionGrid {
    dim: usize,
    dirs: Vec<Direction>,
    mesh: f64,
    symmetric: bool,
    /// Triangulation of the sphere (index triples), present in dimension 3.
    facets: Option<Vec<[usize; 3]>>,
}

impl DirectionGrid {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dirs(&self) -> &[Direction] {
        &self.dirs
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    /// Max angular gap: every unit vector is within `mesh` of a member.
    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn facets(&self) -> Option<&[[usize; 3]]> {
        self.facets.as_deref()
    }

    /// Index of the antipodal member of `dirs()[i]`, if the grid is symmetric.
    pub fn antipode_index(&self, i: usize) -> Option<usize> {
        if !self.symmetric {
            return None;
        }
        let neg = self.dirs[i].negate();
        self.nearest_index(&neg).filter(|&j| {
            self.dirs[j].dot(&neg) > 1.0 - 1e-9
        })
    }

    /// Index of the member closest to `u` (linear scan).
    pub fn nearest_index(&self, u: &Direction) -> Option<usize> {
        let mut best = None;
        let mut best_dot = f64::NEG_INFINITY;
        for (i, d) in self.dirs.iter().enumerate() {
            let c = d.dot(u);
            if c > best_dot {
                best_dot = c;
                best = Some(i);
            }
        }
        best
    }

    /// Members lying in the closed cap around `pole`.
    pub fn cap_indices(&self, pole: &Direction, threshold: f64) -> Vec<usize> {
        self.dirs
            .iter()
            .enumerate()
            .filter(|(_, d)| d.dot(pole) >= threshold)
            .map(|(i, _)| i)
            .collect()
    }

    fn check_symmetry(dirs: &[Direction]) -> bool {
        dirs.iter().all(|d| {
            let neg = d.negate();
            dirs.iter().any(|e| e.dot(&neg) > 1.0 - 1e-9)
        })
    }
}

/// Build the deterministic grid with mesh at most `target_mesh`.
pub fn make_direction_grid(dim: usize, target_mesh: f64) -> Result<DirectionGrid> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    if !(target_mesh > 0.0) {
        return Err(Error::InvalidInput(format!(
            "target mesh must be positive, got {target_mesh}"
        )));
    }
    match dim {
        2 => Ok(planar_grid(target_mesh)),
        3 => Ok(icosphere_grid(target_mesh)),
        _ => Ok(cross_polytope_grid(dim, target_mesh)),
    }
}

fn planar_grid(target_mesh: f64) -> DirectionGrid {
    let m = (std::f64::consts::PI / target_mesh).ceil().max(1.0) as usize;
    let count = 2 * m;
    let dirs: Vec<Direction> = (0..count)
        .map(|k| Direction::from_angle(std::f64::consts::PI * k as f64 / m as f64))
        .collect();
    DirectionGrid {
        dim: 2,
        dirs,
        mesh: std::f64::consts::PI / m as f64,
        symmetric: true,
        facets: None,
    }
}

/// Vertices of the regular icosahedron on the unit sphere, plus its faces.
fn icosahedron() -> (Vec<Vec<f64>>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let raw: Vec<[f64; 3]> = vec![
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let verts = raw
        .iter()
        .map(|v| vm::normalize(v).unwrap())
        .collect();
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    (verts, faces)
}

/// Angular circumradius of a spherical triangle: the covering radius of its
/// vertex set within the triangle (icosphere triangles are acute, so the
/// circumcenter lies inside).
fn triangle_circumradius(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let ab = vm::sub(b, a);
    let ac = vm::sub(c, a);
    let n = [
        ab[1] * ac[2] - ab[2] * ac[1],
        ab[2] * ac[0] - ab[0] * ac[2],
        ab[0] * ac[1] - ab[1] * ac[0],
    ];
    match vm::normalize(&n) {
        Some(mut center) => {
            if vm::dot(&center, a) < 0.0 {
                center = vm::neg(&center);
            }
            vm::angle_between(&center, a)
        }
        // Degenerate triangle: fall back to half the longest edge.
        None => {
            let e = vm::angle_between(a, b)
                .max(vm::angle_between(b, c))
                .max(vm::angle_between(a, c));
            e / 2.0
        }
    }
}

fn icosphere_mesh(verts: &[Vec<f64>], faces: &[[usize; 3]]) -> f64 {
    faces
        .iter()
        .map(|f| triangle_circumradius(&verts[f[0]], &verts[f[1]], &verts[f[2]]))
        .fold(0.0, f64::max)
}

/// One 4-to-1 midpoint subdivision step, projecting new vertices to the sphere.
fn subdivide(verts: &mut Vec<Vec<f64>>, faces: &[[usize; 3]]) -> Vec<[usize; 3]> {
    use std::collections::HashMap;
    let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut new_faces = Vec::with_capacity(faces.len() * 4);
    let mut mid = |i: usize, j: usize, verts: &mut Vec<Vec<f64>>| -> usize {
        let key = (i.min(j), i.max(j));
        if let Some(&k) = midpoint.get(&key) {
            return k;
        }
        let m = vm::normalize(&vm::add(&verts[i], &verts[j])).unwrap();
        verts.push(m);
        let k = verts.len() - 1;
        midpoint.insert(key, k);
        k
    };
    for f in faces {
        let [a, b, c] = *f;
        let ab = mid(a, b, verts);
        let bc = mid(b, c, verts);
        let ca = mid(c, a, verts);
        new_faces.push([a, ab, ca]);
        new_faces.push([b, bc, ab]);
        new_faces.push([c, ca, bc]);
        new_faces.push([ab, bc, ca]);
    }
    new_faces
}

fn icosphere_grid(target_mesh: f64) -> DirectionGrid {
    let (mut verts, mut faces) = icosahedron();
    let mut mesh = icosphere_mesh(&verts, &faces);
    // Safety stop at ~2.6M vertices.
    for _ in 0..8 {
        if mesh <= target_mesh {
            break;
        }
        faces = subdivide(&mut verts, &faces);
        mesh = icosphere_mesh(&verts, &faces);
    }
    let dirs: Vec<Direction> = verts
        .iter()
        .map(|v| Direction::new(v).unwrap())
        .collect();
    let symmetric = DirectionGrid::check_symmetry(&dirs);
    debug_assert!(symmetric);
    DirectionGrid {
        dim: 3,
        dirs,
        mesh,
        symmetric,
        facets: Some(faces),
    }
}

/// Cross-polytope vertex set refined barycentrically; used for n >= 4 where
/// no acceptance-grade mesh is required.
fn cross_polytope_grid(dim: usize, target_mesh: f64) -> DirectionGrid {
    let mut verts: Vec<Vec<f64>> = Vec::new();
    for i in 0..dim {
        let mut plus = vec![0.0; dim];
        plus[i] = 1.0;
        let mut minus = vec![0.0; dim];
        minus[i] = -1.0;
        verts.push(plus);
        verts.push(minus);
    }
    // Facets of the cross polytope: one sign choice per axis.
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for mask in 0..(1usize << dim) {
        let facet: Vec<usize> = (0..dim)
            .map(|i| 2 * i + usize::from(mask >> i & 1 == 1))
            .collect();
        facets.push(facet);
    }
    let facet_diameter = |verts: &[Vec<f64>], f: &[usize]| -> f64 {
        let mut d = 0.0f64;
        for (a, &i) in f.iter().enumerate() {
            for &j in &f[a + 1..] {
                d = d.max(vm::angle_between(&verts[i], &verts[j]));
            }
        }
        d
    };
    let mesh_of = |verts: &[Vec<f64>], facets: &[Vec<usize>]| {
        facets
            .iter()
            .map(|f| facet_diameter(verts, f))
            .fold(0.0, f64::max)
    };
    let mut mesh = mesh_of(&verts, &facets);
    for _ in 0..6 {
        if mesh <= target_mesh {
            break;
        }
        // Barycentric subdivision: vertices of the new complex are the
        // normalized barycenters of all nonempty faces; facets are the flags.
        let mut new_verts = verts.clone();
        let mut new_facets: Vec<Vec<usize>> = Vec::new();
        for f in &facets {
            let k = f.len();
            for subset_order in permutations(k) {
                let mut flag: Vec<usize> = Vec::with_capacity(k);
                let mut chain: Vec<usize> = Vec::new();
                for &idx in &subset_order {
                    chain.push(f[idx]);
                    let mut bary = vec![0.0; dim];
                    for &v in &chain {
                        bary = vm::add(&bary, &verts[v]);
                    }
                    let bary = vm::normalize(&bary).unwrap();
                    let pos = new_verts
                        .iter()
                        .position(|v| vm::dist(v, &bary) < 1e-12)
                        .unwrap_or_else(|| {
                            new_verts.push(bary.clone());
                            new_verts.len() - 1
                        });
                    flag.push(pos);
                }
                new_facets.push(flag);
            }
        }
        verts = new_verts;
        facets = new_facets;
        mesh = mesh_of(&verts, &facets);
    }
    let dirs: Vec<Direction> = verts.iter().map(|v| Direction::new(v).unwrap()).collect();
    let symmetric = DirectionGrid::check_symmetry(&dirs);
    DirectionGrid {
        dim,
        dirs,
        mesh,
        symmetric,
        facets: None,
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for slot in 0..k {
            let mut q: Vec<usize> = p.iter().map(|&x| if x >= slot { x + 1 } else { x }).collect();
            q.insert(0, slot);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_grid_eight_directions_for_quarter_pi() {
        let g = make_direction_grid(2, std::f64::consts::PI / 4.0).unwrap();
        assert_eq!(g.len(), 8);
        assert!(g.is_symmetric());
        assert!(g.mesh() <= std::f64::consts::PI / 4.0 + 1e-15);
    }

    #[test]
    fn planar_grid_2048_directions() {
        let g = make_direction_grid(2, std::f64::consts::PI / 1024.0).unwrap();
        assert_eq!(g.len(), 2048);
        assert!((g.mesh() - std::f64::consts::PI / 1024.0).abs() < 1e-15);
    }

    #[test]
    fn icosahedron_suffices_for_mesh_1_2() {
        let g = make_direction_grid(3, 1.2).unwrap();
        assert_eq!(g.len(), 12);
        assert!(g.mesh() <= 1.2);
        assert!(g.is_symmetric());
    }

    #[test]
    fn grid_is_hierarchical_in_2d() {
        let coarse = make_direction_grid(2, std::f64::consts::PI / 8.0).unwrap();
        let fine = make_direction_grid(2, std::f64::consts::PI / 16.0).unwrap();
        for d in coarse.dirs() {
            assert!(fine.dirs().iter().any(|e| e.dot(d) > 1.0 - 1e-12));
        }
    }

    #[test]
    fn icosphere_refinement_contains_coarser_grid() {
        let coarse = make_direction_grid(3, 0.7).unwrap();
        let fine = make_direction_grid(3, 0.35).unwrap();
        assert!(fine.len() > coarse.len());
        for d in coarse.dirs() {
            assert!(fine.dirs().iter().any(|e| e.dot(d) > 1.0 - 1e-12));
        }
    }

    #[test]
    fn rejects_dimension_below_two() {
        assert!(make_direction_grid(1, 0.5).is_err());
    }

    #[test]
    fn four_dimensional_grid_exists() {
        let g = make_direction_grid(4, 2.0).unwrap();
        assert_eq!(g.dim(), 4);
        assert!(g.len() >= 8);
        assert!(g.is_symmetric());
    }
}
