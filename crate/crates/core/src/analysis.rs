//! Interpretation of a critical point: edge-length consistency, the induced
//! structure, and the surface traced by flipped edges.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geomlib::CoarseType;
use crate::simplex::{
    classify_simplex, edge_index, edge_lengths_unchecked, AngleSystem, SimplexError, SimplexType,
};
use crate::triangulation::Triangulation;
use crate::volume::{simplex_systems, VolumeError};

pub const ANGLE_SUM_TOL: f64 = 1e-9;
pub const AREA_TOL: f64 = 1e-8;
pub const QUANTIZATION_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error("tetrahedron {tet}: {source}")]
    Simplex { tet: usize, source: SimplexError },
    #[error("mixed coarse types: tetrahedron {first} is {first_type:?} but tetrahedron {second} is {second_type:?}")]
    MixedTypes {
        first: usize,
        first_type: CoarseType,
        second: usize,
        second_type: CoarseType,
    },
    #[error("face {face} of tetrahedron {tet} has two flipped edges but its neighbour (tetrahedron {neighbour}) carries no matching surface side")]
    UnmatchedSide {
        tet: usize,
        face: usize,
        neighbour: usize,
    },
    #[error("surface side ({face}, {side}) is glued more than once")]
    SideReused { face: usize, side: usize },
    #[error("surface side ({face}, {side}) does not exist")]
    NoSuchSide { face: usize, side: usize },
    #[error("surface face {0} has fewer than three corners")]
    DegenerateFace(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeConsistency {
    pub pass: bool,
    pub tolerance: f64,
    /// Per edge orbit, the spread (max − min) of the per-wedge cosh values.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// Compares, for every edge of `t`, the cosh of its length computed in each
/// tetrahedron containing it.
pub fn check_edge_consistency(
    t: &Triangulation,
    theta: &[f64],
    length_tol: f64,
    eps_class: f64,
) -> Result<EdgeConsistency, AnalysisError> {
    let systems = simplex_systems(t, theta)?;
    let mut cosh = Vec::with_capacity(t.wedge_count());
    for (tet, a) in systems.iter().enumerate() {
        let l = edge_lengths_unchecked(a, eps_class).map_err(|source| AnalysisError::Simplex { tet, source })?;
        cosh.extend_from_slice(&l.cosh_values());
    }
    let residuals: Vec<f64> = t
        .edge_orbits()
        .iter()
        .map(|orbit| {
            let (lo, hi) = orbit
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &w| {
                    (lo.min(cosh[w]), hi.max(cosh[w]))
                });
            hi - lo
        })
        .collect();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(EdgeConsistency {
        pass: residuals.iter().all(|&r| r <= length_tol),
        tolerance: length_tol,
        residuals,
        max_residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StructureTag {
    SphericalMetric,
    HyperbolicMetric,
    HSStructure,
    EuclideanType,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureClass {
    pub tag: StructureTag,
    pub flip_present: bool,
    pub per_simplex_types: Vec<SimplexType>,
}

fn classify_all(systems: &[AngleSystem], eps_class: f64) -> Result<Vec<SimplexType>, AnalysisError> {
    systems
        .iter()
        .enumerate()
        .map(|(tet, a)| classify_simplex(a, eps_class).map_err(|source| AnalysisError::Simplex { tet, source }))
        .collect()
}

/// Per-tetrahedron types under the wedge angles `theta`.
pub fn classify_simplices(
    t: &Triangulation,
    theta: &[f64],
    eps_class: f64,
) -> Result<Vec<SimplexType>, AnalysisError> {
    classify_all(&simplex_systems(t, theta)?, eps_class)
}

/// Combines per-tetrahedron types, which must share a coarse type.
pub fn structure_from_types(types: Vec<SimplexType>) -> Result<StructureClass, AnalysisError> {
    let coarse = types[0].coarse;
    if let Some(second) = types.iter().position(|ty| ty.coarse != coarse) {
        return Err(AnalysisError::MixedTypes {
            first: 0,
            first_type: coarse,
            second,
            second_type: types[second].coarse,
        });
    }
    let flip_present = types.iter().any(|ty| ty.kind.flip_count() > 0);
    let tag = match coarse {
        CoarseType::SphericalType => StructureTag::SphericalMetric,
        CoarseType::HyperbolicType if flip_present => StructureTag::HSStructure,
        CoarseType::HyperbolicType => StructureTag::HyperbolicMetric,
        CoarseType::EuclideanType => StructureTag::EuclideanType,
    };
    Ok(StructureClass {
        tag,
        flip_present,
        per_simplex_types: types,
    })
}

pub fn classify_structure(
    t: &Triangulation,
    theta: &[f64],
    eps_class: f64,
) -> Result<StructureClass, AnalysisError> {
    structure_from_types(classify_simplices(t, theta, eps_class)?)
}

/// A polygon of the flip surface. Side `s` runs from corner `s` to corner
/// `s + 1` (cyclically).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceFace {
    /// Source tetrahedron, when extracted from a triangulation.
    pub tet: Option<usize>,
    pub angles: Vec<f64>,
    /// Edge of the triangulation at each corner, when extracted.
    pub corner_edges: Vec<Option<usize>>,
}

impl SurfaceFace {
    pub fn sides(&self) -> usize {
        self.angles.len()
    }

    /// Gauss–Bonnet area of a spherical polygon with these angles.
    pub fn area(&self) -> f64 {
        self.angles.iter().sum::<f64>() - PI * (self.sides() as f64 - 2.0)
    }
}

/// Identification of side `first` with side `second`. With `reversed` the
/// start of one side meets the end of the other (the orientable case).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideGluing {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub reversed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceComponent {
    pub faces: Vec<usize>,
    pub vertices: usize,
    pub edges: usize,
    pub euler_characteristic: i64,
    pub area: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlipSurface {
    pub faces: Vec<SurfaceFace>,
    pub gluings: Vec<SideGluing>,
    /// Sides with no partner (only on triangulations with boundary).
    pub unpaired_sides: Vec<(usize, usize)>,
    /// `vertex_of_corner[f][k]` is the surface vertex at corner `k` of face `f`.
    pub vertex_of_corner: Vec<Vec<usize>>,
    pub vertex_angle_sums: Vec<f64>,
    pub components: Vec<SurfaceComponent>,
    /// For extracted surfaces: each vertex lies on a single flipped edge of
    /// the triangulation and distinct vertices lie on distinct edges.
    pub vertices_match_flipped_edges: Option<bool>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }

    /// Dense labels `0..k` in order of first appearance.
    fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.0.len();
        let mut label_of_root = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            if label_of_root[r] == usize::MAX {
                label_of_root[r] = next;
                next += 1;
            }
            out.push(label_of_root[r]);
        }
        (out, next)
    }
}

impl FlipSurface {
    /// Assembles a surface from polygons and side identifications.
    pub fn from_faces(faces: Vec<SurfaceFace>, gluings: Vec<SideGluing>) -> Result<Self, AnalysisError> {
        let offsets: Vec<usize> = faces
            .iter()
            .scan(0, |acc, f| {
                let start = *acc;
                *acc += f.sides();
                Some(start)
            })
            .collect();
        for (i, f) in faces.iter().enumerate() {
            if f.sides() < 3 {
                return Err(AnalysisError::DegenerateFace(i));
            }
        }
        let corner_count: usize = faces.iter().map(|f| f.sides()).sum();
        let corner = |f: usize, k: usize| offsets[f] + k % faces[f].sides();

        let mut used = BTreeSet::new();
        let mut corners = UnionFind::new(corner_count);
        let mut components = UnionFind::new(faces.len());
        for g in &gluings {
            for &(f, s) in &[g.first, g.second] {
                if f >= faces.len() || s >= faces[f].sides() {
                    return Err(AnalysisError::NoSuchSide { face: f, side: s });
                }
                if !used.insert((f, s)) {
                    return Err(AnalysisError::SideReused { face: f, side: s });
                }
            }
            let ((f1, s1), (f2, s2)) = (g.first, g.second);
            let (a0, a1) = (corner(f1, s1), corner(f1, s1 + 1));
            let (b0, b1) = (corner(f2, s2), corner(f2, s2 + 1));
            if g.reversed {
                corners.union(a0, b1);
                corners.union(a1, b0);
            } else {
                corners.union(a0, b0);
                corners.union(a1, b1);
            }
            components.union(f1, f2);
        }
        let unpaired_sides: Vec<(usize, usize)> = faces
            .iter()
            .enumerate()
            .flat_map(|(f, face)| (0..face.sides()).map(move |s| (f, s)))
            .filter(|fs| !used.contains(fs))
            .collect();

        let (vertex_labels, vertex_count) = corners.labels();
        let vertex_of_corner: Vec<Vec<usize>> = faces
            .iter()
            .enumerate()
            .map(|(f, face)| (0..face.sides()).map(|k| vertex_labels[corner(f, k)]).collect())
            .collect();
        let mut vertex_angle_sums = vec![0.0; vertex_count];
        for (f, face) in faces.iter().enumerate() {
            for (k, &angle) in face.angles.iter().enumerate() {
                vertex_angle_sums[vertex_of_corner[f][k]] += angle;
            }
        }

        let (component_of_face, component_count) = components.labels();
        let mut comps: Vec<SurfaceComponent> = (0..component_count)
            .map(|_| SurfaceComponent {
                faces: Vec::new(),
                vertices: 0,
                edges: 0,
                euler_characteristic: 0,
                area: 0.0,
            })
            .collect();
        let mut vertex_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); component_count];
        for (f, face) in faces.iter().enumerate() {
            let c = component_of_face[f];
            comps[c].faces.push(f);
            comps[c].area += face.area();
            vertex_sets[c].extend(vertex_of_corner[f].iter().copied());
        }
        for g in &gluings {
            comps[component_of_face[g.first.0]].edges += 1;
        }
        for &(f, _) in &unpaired_sides {
            comps[component_of_face[f]].edges += 1;
        }
        for (c, comp) in comps.iter_mut().enumerate() {
            comp.vertices = vertex_sets[c].len();
            comp.euler_characteristic =
                comp.vertices as i64 - comp.edges as i64 + comp.faces.len() as i64;
        }

        let vertices_match_flipped_edges = if faces.iter().all(|f| f.corner_edges.iter().all(|e| e.is_some())) && !faces.is_empty() {
            let mut edge_of_vertex: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); vertex_count];
            for (f, face) in faces.iter().enumerate() {
                for (k, e) in face.corner_edges.iter().enumerate() {
                    edge_of_vertex[vertex_of_corner[f][k]].insert(e.unwrap());
                }
            }
            let distinct: BTreeSet<usize> = edge_of_vertex.iter().flatten().copied().collect();
            Some(edge_of_vertex.iter().all(|s| s.len() == 1) && distinct.len() == vertex_count)
        } else {
            None
        };

        Ok(FlipSurface {
            faces,
            gluings,
            unpaired_sides,
            vertex_of_corner,
            vertex_angle_sums,
            components: comps,
            vertices_match_flipped_edges,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn total_area(&self) -> f64 {
        self.faces.iter().map(|f| f.area()).sum()
    }

    /// Sum of the flipped-Euclidean closed forms over the faces, `(π/2)` times
    /// the total area. Equals the volume when every source simplex is of
    /// Euclidean type.
    pub fn implied_volume(&self) -> f64 {
        0.5 * PI * self.total_area()
    }
}

/// Corners (as local edges) and the face of the tetrahedron carrying each
/// side, for a flipped simplex.
fn surface_polygon(ty: &SimplexType) -> Option<(Vec<(usize, usize)>, Vec<usize>)> {
    match ty.kind.flip_count() {
        1 => {
            let v = ty.flipped_vertices[0];
            let others: Vec<usize> = (0..4).filter(|&u| u != v).collect();
            let corners: Vec<(usize, usize)> = others.iter().map(|&u| (v, u)).collect();
            // side (v,a)–(v,b) lies on the face {v, a, b}, opposite the third
            let sides = (0..3).map(|s| others[(s + 2) % 3]).collect();
            Some((corners, sides))
        }
        2 => {
            let (p, q) = (ty.flipped_vertices[0], ty.flipped_vertices[1]);
            let rest: Vec<usize> = (0..4).filter(|&u| u != p && u != q).collect();
            let (r, s) = (rest[0], rest[1]);
            let corners = vec![(p, r), (p, s), (q, s), (q, r)];
            let sides = vec![q, r, p, s];
            Some((corners, sides))
        }
        _ => None,
    }
}

/// Builds the surface made of one triangle per singly flipped simplex and one
/// quadrilateral per doubly flipped simplex, glued across the faces of the
/// triangulation that carry two flipped edges.
pub fn extract_flip_surface(
    t: &Triangulation,
    theta: &[f64],
    eps_class: f64,
) -> Result<FlipSurface, AnalysisError> {
    let systems = simplex_systems(t, theta)?;
    let types = classify_all(&systems, eps_class)?;

    let mut faces = Vec::new();
    // per tetrahedron: surface face index and, per tetrahedron face, the side
    let mut face_of_tet: Vec<Option<usize>> = vec![None; t.tet_count()];
    let mut side_on: Vec<[Option<usize>; 4]> = vec![[None; 4]; t.tet_count()];
    let mut corners_of: Vec<Vec<(usize, usize)>> = vec![Vec::new(); t.tet_count()];
    for (tet, ty) in types.iter().enumerate() {
        let Some((corners, sides)) = surface_polygon(ty) else {
            continue;
        };
        face_of_tet[tet] = Some(faces.len());
        for (s, &f) in sides.iter().enumerate() {
            side_on[tet][f] = Some(s);
        }
        faces.push(SurfaceFace {
            tet: Some(tet),
            angles: corners.iter().map(|&(a, b)| systems[tet].angle(a, b)).collect(),
            corner_edges: corners
                .iter()
                .map(|&(a, b)| Some(t.edge_of_wedge(6 * tet + edge_index(a, b))))
                .collect(),
        });
        corners_of[tet] = corners;
    }

    let mut gluings = Vec::new();
    for tet in 0..t.tet_count() {
        let Some(f_here) = face_of_tet[tet] else {
            continue;
        };
        for face in 0..4 {
            let Some(s_here) = side_on[tet][face] else {
                continue;
            };
            let Some(g) = t.spec().gluing(tet, face) else {
                continue;
            };
            if (g.to_tet, g.to_face) < (tet, face) {
                continue;
            }
            let unmatched = AnalysisError::UnmatchedSide {
                tet,
                face,
                neighbour: g.to_tet,
            };
            let (Some(f_there), Some(s_there)) = (face_of_tet[g.to_tet], side_on[g.to_tet][g.to_face]) else {
                return Err(unmatched);
            };
            let n_here = corners_of[tet].len();
            let n_there = corners_of[g.to_tet].len();
            let map = |(a, b): (usize, usize)| {
                let (x, y) = (g.perm.apply(a), g.perm.apply(b));
                (x.min(y), x.max(y))
            };
            let norm = |(a, b): (usize, usize)| (a.min(b), a.max(b));
            let start_here = map(corners_of[tet][s_here]);
            let end_here = map(corners_of[tet][(s_here + 1) % n_here]);
            let start_there = norm(corners_of[g.to_tet][s_there]);
            let end_there = norm(corners_of[g.to_tet][(s_there + 1) % n_there]);
            let reversed = if start_here == start_there && end_here == end_there {
                false
            } else if start_here == end_there && end_here == start_there {
                true
            } else {
                return Err(unmatched);
            };
            gluings.push(SideGluing {
                first: (f_here, s_here),
                second: (f_there, s_there),
                reversed,
            });
        }
    }
    FlipSurface::from_faces(faces, gluings)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentClaim {
    pub euler_characteristic: i64,
    pub area: f64,
    pub expected_area: f64,
    pub area_deviation: f64,
    pub sphere_or_projective_plane: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    /// Largest |vertex angle sum − 2π| over the surface vertices.
    pub max_angle_sum_deviation: f64,
    pub angle_sums_pass: bool,
    pub components: Vec<ComponentClaim>,
    pub components_pass: bool,
    pub volume: f64,
    pub total_area: f64,
    /// `|V − (π/2)·area|`.
    pub volume_area_deviation: f64,
    pub volume_area_pass: bool,
    /// `V / π²`, an integer (the total Euler characteristic) when the claims hold.
    pub volume_over_pi_squared: f64,
    pub quantized_pi_squared: bool,
    /// `V / 2π²`; integral only when every component is a sphere.
    pub volume_over_two_pi_squared: f64,
    pub quantized_two_pi_squared: bool,
    /// Angle sums, components, volume–area relation and `π²` quantization.
    pub pass: bool,
}

fn near_integer(x: f64, tol: f64) -> bool {
    x >= -tol && (x - x.round()).abs() <= tol
}

/// Checks the Gauss–Bonnet bookkeeping of a flip surface against the volume.
pub fn verify_claims(surface: &FlipSurface, volume: f64) -> ClaimReport {
    let max_angle_sum_deviation = surface
        .vertex_angle_sums
        .iter()
        .map(|s| (s - 2.0 * PI).abs())
        .fold(0.0, f64::max);
    let components: Vec<ComponentClaim> = surface
        .components
        .iter()
        .map(|c| {
            let expected_area = 2.0 * PI * c.euler_characteristic as f64;
            let area_deviation = (c.area - expected_area).abs();
            let sphere_or_projective_plane = matches!(c.euler_characteristic, 1 | 2);
            ComponentClaim {
                euler_characteristic: c.euler_characteristic,
                area: c.area,
                expected_area,
                area_deviation,
                sphere_or_projective_plane,
                pass: sphere_or_projective_plane && area_deviation <= AREA_TOL,
            }
        })
        .collect();
    let total_area = surface.total_area();
    let volume_area_deviation = (volume - 0.5 * PI * total_area).abs();
    let volume_over_pi_squared = volume / (PI * PI);
    let volume_over_two_pi_squared = volume / (2.0 * PI * PI);

    let angle_sums_pass = max_angle_sum_deviation <= ANGLE_SUM_TOL;
    let components_pass = components.iter().all(|c| c.pass);
    let volume_area_pass = volume_area_deviation <= AREA_TOL * (1.0 + volume.abs());
    let quantized_pi_squared = near_integer(volume_over_pi_squared, QUANTIZATION_TOL);
    ClaimReport {
        max_angle_sum_deviation,
        angle_sums_pass,
        components,
        components_pass,
        volume,
        total_area,
        volume_area_deviation,
        volume_area_pass,
        volume_over_pi_squared,
        quantized_pi_squared,
        volume_over_two_pi_squared,
        quantized_two_pi_squared: near_integer(volume_over_two_pi_squared, QUANTIZATION_TOL),
        pass: angle_sums_pass && components_pass && volume_area_pass && quantized_pi_squared,
    }
}
