//! Explicit angle systems and triangulations: Euclidean tetrahedra from
//! coordinates, and cones over triangulated surfaces.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Vector3;

use crate::simplex::{complement, flip, validate_angle_system, AngleSystem, SimplexError, EDGES};
use crate::triangulation::{Gluing, GluingSpec, Perm4, TriangulationError};

/// Boundary of the tetrahedron: 4 triangles, every vertex of degree 3.
pub const TETRAHEDRON_SURFACE: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];

/// Boundary of the octahedron on `±x, ±y, ±z` (labels 0..6 in pairs):
/// 8 triangles, every vertex of degree 4.
pub const OCTAHEDRON_SURFACE: [[usize; 3]; 8] = [
    [0, 2, 4],
    [0, 2, 5],
    [0, 3, 4],
    [0, 3, 5],
    [1, 2, 4],
    [1, 2, 5],
    [1, 3, 4],
    [1, 3, 5],
];

/// The six-vertex projective plane: 10 triangles, every vertex of degree 5.
pub const PROJECTIVE_PLANE_SURFACE: [[usize; 3]; 10] = [
    [0, 1, 2],
    [0, 2, 3],
    [0, 3, 4],
    [0, 4, 5],
    [0, 1, 5],
    [1, 2, 4],
    [2, 3, 5],
    [1, 3, 4],
    [2, 4, 5],
    [1, 3, 5],
];

/// Interior dihedral angles of the Euclidean tetrahedron with the given
/// vertices, in edge-index order.
pub fn dihedral_angles(points: [[f64; 3]; 4]) -> [f64; 6] {
    let p: Vec<Vector3<f64>> = points.iter().map(|&x| Vector3::from(x)).collect();
    // outward unit normal of the face opposite k
    let normal = |k: usize| {
        let idx: Vec<usize> = (0..4).filter(|&i| i != k).collect();
        let n = (p[idx[1]] - p[idx[0]]).cross(&(p[idx[2]] - p[idx[0]])).normalize();
        if n.dot(&(p[k] - p[idx[0]])) > 0.0 {
            -n
        } else {
            n
        }
    };
    let normals: Vec<Vector3<f64>> = (0..4).map(normal).collect();
    let mut out = [0.0; 6];
    for (e, &(i, j)) in EDGES.iter().enumerate() {
        let (k, l) = complement(i, j);
        out[e] = PI - normals[k].angle(&normals[l]);
    }
    out
}

/// Angle system of a Euclidean tetrahedron given by coordinates.
pub fn euclidean_tetrahedron(points: [[f64; 3]; 4]) -> Result<AngleSystem, SimplexError> {
    validate_angle_system(dihedral_angles(points))
}

/// The Euclidean pyramid over an equilateral triangle whose three lateral
/// edges (at vertex 0) carry dihedral angle `apex_angle`.
pub fn regular_pyramid(apex_angle: f64) -> Result<AngleSystem, SimplexError> {
    // the link at the apex is an equilateral spherical triangle with
    // angles A and sides c, cos c = cos A / (1 − cos A)
    let ca = apex_angle.cos();
    let cos_c = ca / (1.0 - ca);
    let r2 = (1.0 - cos_c) / 1.5;
    let (r, h) = (r2.sqrt(), (1.0 - r2).sqrt());
    let mut points = [[0.0; 3]; 4];
    for m in 0..3 {
        let phi = 2.0 * PI * m as f64 / 3.0;
        points[m + 1] = [r * phi.cos(), r * phi.sin(), -h];
    }
    euclidean_tetrahedron(points)
}

/// The pyramid with apex angle `2π / degree`, flipped at its apex. Its
/// flipped edges are the three edges at vertex 0.
pub fn flipped_cone_simplex(degree: usize) -> Result<AngleSystem, SimplexError> {
    flip(&regular_pyramid(2.0 * PI / degree as f64)?, 0)
}

/// Cone over a closed triangulated surface: one tetrahedron per triangle,
/// vertex 0 the cone point and vertices 1..4 the triangle's vertices in
/// ascending order. Faces through the cone point are glued along the
/// surface's edges; the faces opposite the cone point stay unglued.
pub fn cone_over_surface(triangles: &[[usize; 3]]) -> Result<GluingSpec, TriangulationError> {
    let sorted: Vec<[usize; 3]> = triangles
        .iter()
        .map(|t| {
            let mut s = *t;
            s.sort_unstable();
            s
        })
        .collect();
    let mut by_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, t) in sorted.iter().enumerate() {
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            by_edge.entry((a, b)).or_default().push(i);
        }
    }
    let local = |tri: usize, x: usize| 1 + sorted[tri].iter().position(|&y| y == x).unwrap();
    let mut gluings = Vec::new();
    for (&(x, y), tris) in &by_edge {
        let &[t1, t2] = tris.as_slice() else {
            // not a closed surface: leave the faces unmatched so the
            // triangulation check reports them
            continue;
        };
        let third = |t: usize| *sorted[t].iter().find(|&&z| z != x && z != y).unwrap();
        let (z1, z2) = (third(t1), third(t2));
        let mut images = [0; 4];
        images[local(t1, x)] = local(t2, x);
        images[local(t1, y)] = local(t2, y);
        images[local(t1, z1)] = local(t2, z2);
        gluings.push(Gluing {
            tet: t1,
            face: local(t1, z1),
            to_tet: t2,
            to_face: local(t2, z2),
            perm: Perm4::new(images).expect("cone gluing is a permutation"),
        });
    }
    GluingSpec::new(triangles.len(), &gluings, true)
}

/// Wedge angles putting [`flipped_cone_simplex`] in every tetrahedron of a
/// cone whose cone-point edges all have the given degree.
pub fn flipped_cone_angles(tet_count: usize, degree: usize) -> Result<Vec<f64>, SimplexError> {
    let a = flipped_cone_simplex(degree)?;
    Ok((0..tet_count).flat_map(|_| a.angles()).collect())
}
