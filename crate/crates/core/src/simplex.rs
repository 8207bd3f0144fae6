//! Angle systems on a single tetrahedron.
//!
//! Vertices are labelled `0..4`. The six edges are indexed in lexicographic
//! order of their sorted vertex pair, see [`EDGES`]. Face `l` is the face
//! opposite vertex `l`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geomlib::{
    classify_triangle, cosine_rule, triangle_edge_lengths, CoarseType, GeneralizedLength,
    LengthClass, MobiusTriangle, TriangleType,
};

/// Sorted vertex pairs in edge-index order.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Relative tolerance on the agreement of the two per-face computations of
/// an edge length.
pub const WELL_DEFINED_TOL: f64 = 1e-9;

/// Cosh band used when cross-checking face-derived edge classes against the
/// raw cosh values.
const CROSS_CHECK_BAND: f64 = 1e-6;

pub fn edge_index(a: usize, b: usize) -> usize {
    debug_assert!(a != b && a < 4 && b < 4);
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        _ => 5,
    }
}

/// The two vertices not in `{a, b}`, ascending.
pub fn complement(a: usize, b: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&v| v != a && v != b);
    (rest.next().unwrap(), rest.next().unwrap())
}

/// The three vertices of the face opposite `l`, ascending.
pub fn face_vertices(l: usize) -> [usize; 3] {
    let mut out = [0; 3];
    for (slot, v) in out.iter_mut().zip((0..4).filter(|&v| v != l)) {
        *slot = v;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    /// Angle outside `(0, π)` (or non-finite).
    OutOfRange { edge: (usize, usize), value: f64 },
    /// The three angles at `vertex` sum to at most π.
    VertexSum { vertex: usize, sum: f64 },
    /// At `vertex`, the inequality `α_edge + π > (sum of the other two)` fails.
    TriangleInequality {
        vertex: usize,
        edge: (usize, usize),
        residual: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange { edge, value } => {
                write!(f, "angle at edge {edge:?} is {value}, outside (0, π)")
            }
            Violation::VertexSum { vertex, sum } => {
                write!(f, "angles at vertex {vertex} sum to {sum} ≤ π")
            }
            Violation::TriangleInequality {
                vertex,
                edge,
                residual,
            } => write!(
                f,
                "triangle inequality at vertex {vertex} for edge {edge:?} fails (residual {residual})"
            ),
        }
    }
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimplexError {
    #[error("invalid angle system: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("face angle quotient {quotient} at vertex {apex} (face opposite {face}) is outside [−1, 1]")]
    FaceAngle {
        apex: usize,
        face: usize,
        quotient: f64,
    },
    #[error("edge {edge:?}: per-face cosh values {first} and {second} disagree")]
    LengthMismatch {
        edge: (usize, usize),
        first: f64,
        second: f64,
    },
    #[error("inconsistent classification: {0}")]
    Inconsistent(String),
}

/// Six dihedral angles satisfying the spherical vertex-link conditions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleSystem {
    angles: [f64; 6],
}

impl AngleSystem {
    pub fn angles(&self) -> [f64; 6] {
        self.angles
    }

    pub fn angle(&self, a: usize, b: usize) -> f64 {
        self.angles[edge_index(a, b)]
    }

    /// Angles at the edges `(v, w)`, `w ≠ v` ascending.
    pub fn vertex_angles(&self, v: usize) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (slot, w) in out.iter_mut().zip((0..4).filter(|&w| w != v)) {
            *slot = self.angle(v, w);
        }
        out
    }

    /// Smallest slack over all strict inequalities (range, vertex sums,
    /// triangle inequalities). Positive iff the system is valid.
    pub fn min_slack(&self) -> f64 {
        let mut slack = f64::INFINITY;
        for &a in &self.angles {
            slack = slack.min(a).min(PI - a);
        }
        for v in 0..4 {
            let [x, y, z] = self.vertex_angles(v);
            slack = slack
                .min(x + y + z - PI)
                .min(x + PI - y - z)
                .min(y + PI - x - z)
                .min(z + PI - x - y);
        }
        slack
    }
}

pub fn validate_angle_system(angles: [f64; 6]) -> Result<AngleSystem, SimplexError> {
    let mut violations = Vec::new();
    for (i, &value) in angles.iter().enumerate() {
        if !value.is_finite() || value <= 0.0 || value >= PI {
            violations.push(Violation::OutOfRange {
                edge: EDGES[i],
                value,
            });
        }
    }
    if violations.is_empty() {
        let system = AngleSystem { angles };
        for v in 0..4 {
            let others: Vec<usize> = (0..4).filter(|&w| w != v).collect();
            let vals = system.vertex_angles(v);
            let sum: f64 = vals.iter().sum();
            if sum <= PI {
                violations.push(Violation::VertexSum { vertex: v, sum });
            }
            for i in 0..3 {
                let residual = vals[i] + PI - vals[(i + 1) % 3] - vals[(i + 2) % 3];
                if residual <= 0.0 {
                    violations.push(Violation::TriangleInequality {
                        vertex: v,
                        edge: (v.min(others[i]), v.max(others[i])),
                        residual,
                    });
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(AngleSystem { angles })
    } else {
        Err(SimplexError::Invalid(violations))
    }
}

/// Face angles `β^i_{jk}`: the angle at vertex `i` of the face `{i, j, k}`,
/// i.e. the side of the link triangle at `i` opposite the edge `(i, l)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaceAngles {
    // indexed [apex][opposite face]; diagonal unused
    angle: [[f64; 4]; 4],
    cos: [[f64; 4]; 4],
}

impl FaceAngles {
    /// Angle at `apex` in the face opposite `face`.
    pub fn angle(&self, apex: usize, face: usize) -> f64 {
        debug_assert!(apex != face);
        self.angle[apex][face]
    }

    pub fn cos(&self, apex: usize, face: usize) -> f64 {
        self.cos[apex][face]
    }

    /// `β^i_{jk}` in the usual notation.
    pub fn beta(&self, i: usize, j: usize, k: usize) -> f64 {
        let l = (0..4).find(|&l| l != i && l != j && l != k).unwrap();
        self.angle[i][l]
    }

    /// The face opposite `l` as a Möbius triangle, vertices ascending.
    pub fn face_triangle(&self, l: usize) -> MobiusTriangle {
        let vs = face_vertices(l);
        let angles = vs.map(|v| self.angle[v][l]);
        MobiusTriangle::new(angles).expect("face angles lie in (0, π)")
    }
}

/// Face angles from the dual cosine rule on each vertex link. A quotient
/// within `eps_class` of ±1 is clamped; further out is an error.
pub fn face_angles(a: &AngleSystem, eps_class: f64) -> Result<FaceAngles, SimplexError> {
    let mut angle = [[0.0; 4]; 4];
    let mut cos = [[0.0; 4]; 4];
    for i in 0..4 {
        for l in 0..4 {
            if l == i {
                continue;
            }
            let (j, k) = complement(i, l);
            let rule = cosine_rule(a.angle(i, l), a.angle(i, j), a.angle(i, k));
            let one_minus = -rule.minus_one;
            let one_plus = rule.plus_one;
            if one_minus < -eps_class || one_plus < -eps_class {
                return Err(SimplexError::FaceAngle {
                    apex: i,
                    face: l,
                    quotient: rule.value,
                });
            }
            let sin = (one_minus.max(0.0) * one_plus.max(0.0)).sqrt();
            let q = rule.value.clamp(-1.0, 1.0);
            angle[i][l] = sin.atan2(q);
            cos[i][l] = q;
        }
    }
    Ok(FaceAngles { angle, cos })
}

/// Per-edge lengths with the discrepancy between the two faces through the
/// edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexLengths {
    pub lengths: [GeneralizedLength; 6],
    /// `|c₁ − c₂| / max(1, |c₁|)` per edge.
    pub discrepancy: [f64; 6],
}

impl SimplexLengths {
    pub fn cosh_values(&self) -> [f64; 6] {
        self.lengths.map(|l| l.cosh())
    }
}

/// Cosh of edge `{i, j}` computed inside the face opposite `l`.
fn face_edge_cosh(faces: &FaceAngles, l: usize, i: usize, j: usize) -> f64 {
    let vs = face_vertices(l);
    let lengths = triangle_edge_lengths(&faces.face_triangle(l));
    // edge {i, j} is opposite the remaining vertex of the face
    let pos = vs.iter().position(|&v| v != i && v != j).unwrap();
    lengths[pos].cosh()
}

/// Edge lengths computed in both adjacent faces without the agreement check.
pub fn edge_lengths_unchecked(a: &AngleSystem, eps_class: f64) -> Result<SimplexLengths, SimplexError> {
    let faces = face_angles(a, eps_class)?;
    let mut lengths = [GeneralizedLength::from_cosh(0.0).unwrap(); 6];
    let mut discrepancy = [0.0; 6];
    for (e, &(i, j)) in EDGES.iter().enumerate() {
        let (k, l) = complement(i, j);
        // first face omits the smaller remaining label
        let first = face_edge_cosh(&faces, k, i, j);
        let second = face_edge_cosh(&faces, l, i, j);
        lengths[e] = GeneralizedLength::from_cosh(first).map_err(|err| {
            SimplexError::Inconsistent(format!("edge {:?}: {err}", (i, j)))
        })?;
        discrepancy[e] = (first - second).abs() / first.abs().max(1.0);
    }
    Ok(SimplexLengths {
        lengths,
        discrepancy,
    })
}

/// Edge lengths, requiring both faces through each edge to agree to
/// [`WELL_DEFINED_TOL`].
pub fn edge_lengths(a: &AngleSystem, eps_class: f64) -> Result<SimplexLengths, SimplexError> {
    let out = edge_lengths_unchecked(a, eps_class)?;
    for (e, &d) in out.discrepancy.iter().enumerate() {
        if !(d <= WELL_DEFINED_TOL) {
            let (i, j) = EDGES[e];
            let (k, l) = complement(i, j);
            let faces = face_angles(a, eps_class)?;
            return Err(SimplexError::LengthMismatch {
                edge: (i, j),
                first: face_edge_cosh(&faces, k, i, j),
                second: face_edge_cosh(&faces, l, i, j),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SimplexKind {
    Spherical,
    Hyperbolic,
    FlippedHyperbolic,
    DoublyFlippedHyperbolic,
    Euclidean,
    FlippedEuclidean,
    DoublyFlippedEuclidean,
}

impl SimplexKind {
    pub fn coarse(self) -> CoarseType {
        match self {
            SimplexKind::Spherical => CoarseType::SphericalType,
            SimplexKind::Hyperbolic
            | SimplexKind::FlippedHyperbolic
            | SimplexKind::DoublyFlippedHyperbolic => CoarseType::HyperbolicType,
            SimplexKind::Euclidean
            | SimplexKind::FlippedEuclidean
            | SimplexKind::DoublyFlippedEuclidean => CoarseType::EuclideanType,
        }
    }

    pub fn flip_count(self) -> usize {
        match self {
            SimplexKind::FlippedHyperbolic | SimplexKind::FlippedEuclidean => 1,
            SimplexKind::DoublyFlippedHyperbolic | SimplexKind::DoublyFlippedEuclidean => 2,
            _ => 0,
        }
    }
}

/// Seven-way type of an angled simplex.
///
/// For doubly flipped kinds the flipped pair is ambiguous (flipping `{p, q}`
/// or its complement gives the same angles); we report the pair containing
/// vertex 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplexType {
    pub kind: SimplexKind,
    pub flipped_vertices: Vec<usize>,
    pub coarse: CoarseType,
    pub edge_classes: [LengthClass; 6],
}

impl SimplexType {
    /// Edges whose class is `IPi` or `IPiPlusPositive`.
    pub fn flipped_edges(&self) -> Vec<usize> {
        (0..6).filter(|&e| self.edge_classes[e].is_flipped()).collect()
    }
}

/// Whether a face-derived class and a raw cosh class can describe the same
/// edge, allowing disagreement inside the Euclidean bands.
fn classes_compatible(derived: LengthClass, raw: LengthClass) -> bool {
    use LengthClass::*;
    derived == raw
        || matches!(
            (derived, raw),
            (Zero, NegativeReal | ImaginaryOpen)
                | (NegativeReal | ImaginaryOpen, Zero)
                | (IPi, IPiPlusPositive | ImaginaryOpen)
                | (IPiPlusPositive | ImaginaryOpen, IPi)
        )
}

/// Types of the four faces (face `l` opposite vertex `l`).
pub fn face_types(a: &AngleSystem, eps_class: f64) -> Result<[TriangleType; 4], SimplexError> {
    let faces = face_angles(a, eps_class)?;
    Ok([0, 1, 2, 3].map(|l| classify_triangle(&faces.face_triangle(l), eps_class)))
}

pub fn classify_simplex(a: &AngleSystem, eps_class: f64) -> Result<SimplexType, SimplexError> {
    let types = face_types(a, eps_class)?;

    let mut classes: [Option<LengthClass>; 6] = [None; 6];
    for (l, ty) in types.iter().enumerate() {
        let vs = face_vertices(l);
        for (pos, class) in ty.length_pattern().into_iter().enumerate() {
            let (x, y) = match pos {
                0 => (vs[1], vs[2]),
                1 => (vs[0], vs[2]),
                _ => (vs[0], vs[1]),
            };
            let e = edge_index(x, y);
            match classes[e] {
                None => classes[e] = Some(class),
                Some(prev) if prev == class => {}
                Some(prev) => {
                    return Err(SimplexError::Inconsistent(format!(
                        "edge {:?} is {prev:?} in one face and {class:?} in face opposite {l}",
                        EDGES[e]
                    )))
                }
            }
        }
    }
    let edge_classes = classes.map(|c| c.expect("every edge lies in two faces"));

    let coarse = edge_classes[0].coarse();
    if let Some(e) = edge_classes.iter().position(|c| c.coarse() != coarse) {
        return Err(SimplexError::Inconsistent(format!(
            "edge {:?} has class {:?} but edge (0, 1) is {:?}",
            EDGES[e], edge_classes[e], edge_classes[0]
        )));
    }

    let lengths = edge_lengths_unchecked(a, eps_class)?;
    for (e, l) in lengths.lengths.iter().enumerate() {
        let raw = l.class_with_tolerance(CROSS_CHECK_BAND);
        if !classes_compatible(edge_classes[e], raw) {
            return Err(SimplexError::Inconsistent(format!(
                "edge {:?}: faces give {:?} but cosh = {} gives {raw:?}",
                EDGES[e],
                edge_classes[e],
                l.cosh()
            )));
        }
    }

    let flipped: Vec<usize> = (0..6).filter(|&e| edge_classes[e].is_flipped()).collect();
    let (kind_index, flipped_vertices) = match flipped.len() {
        0 => (0, Vec::new()),
        3 => {
            let apex = (0..4).find(|&v| {
                flipped
                    .iter()
                    .all(|&e| EDGES[e].0 == v || EDGES[e].1 == v)
            });
            match apex {
                Some(v) => (1, vec![v]),
                None => {
                    return Err(SimplexError::Inconsistent(
                        "three flipped edges do not share a vertex".into(),
                    ))
                }
            }
        }
        4 => {
            let unflipped: Vec<usize> = (0..6).filter(|e| !flipped.contains(e)).collect();
            let (p, q) = EDGES[unflipped[0]];
            let (r, s) = EDGES[unflipped[1]];
            if [p, q, r, s].iter().collect::<std::collections::BTreeSet<_>>().len() != 4 {
                return Err(SimplexError::Inconsistent(
                    "unflipped edges of a doubly flipped simplex must be opposite".into(),
                ));
            }
            // unflipped[0] is the edge containing vertex 0
            (2, vec![p, q])
        }
        n => {
            return Err(SimplexError::Inconsistent(format!(
                "{n} flipped edges match no simplex type"
            )))
        }
    };

    let kind = match (coarse, kind_index) {
        (CoarseType::SphericalType, 0) => SimplexKind::Spherical,
        (CoarseType::HyperbolicType, 0) => SimplexKind::Hyperbolic,
        (CoarseType::HyperbolicType, 1) => SimplexKind::FlippedHyperbolic,
        (CoarseType::HyperbolicType, 2) => SimplexKind::DoublyFlippedHyperbolic,
        (CoarseType::EuclideanType, 0) => SimplexKind::Euclidean,
        (CoarseType::EuclideanType, 1) => SimplexKind::FlippedEuclidean,
        (CoarseType::EuclideanType, 2) => SimplexKind::DoublyFlippedEuclidean,
        _ => {
            return Err(SimplexError::Inconsistent(
                "spherical simplex with flipped edges".into(),
            ))
        }
    };

    Ok(SimplexType {
        kind,
        flipped_vertices,
        coarse,
        edge_classes,
    })
}

/// Replaces vertex `v` by its antipode: angles on edges away from `v` become
/// their supplements.
pub fn flip(a: &AngleSystem, v: usize) -> Result<AngleSystem, SimplexError> {
    assert!(v < 4, "vertex label {v} out of range");
    let mut angles = a.angles;
    for (e, &(i, j)) in EDGES.iter().enumerate() {
        if i != v && j != v {
            angles[e] = PI - angles[e];
        }
    }
    validate_angle_system(angles)
}

/// Determinant of the Gram matrix of the faces, `G_kk = 1` and
/// `G_kl = −cos α_ij` where edge `{i, j}` is where faces `k` and `l` meet.
/// Positive for spherical simplices, negative for hyperbolic type, zero on
/// the Euclidean-type locus.
pub fn gram_determinant(a: &AngleSystem) -> f64 {
    let mut g = Matrix4::<f64>::identity();
    for (e, &(i, j)) in EDGES.iter().enumerate() {
        let (k, l) = complement(i, j);
        let c = -a.angles[e].cos();
        g[(k, l)] = c;
        g[(l, k)] = c;
    }
    g.determinant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomlib::DEFAULT_EPS_CLASS as EPS;
    use std::f64::consts::FRAC_PI_2;

    fn regular(alpha: f64) -> AngleSystem {
        validate_angle_system([alpha; 6]).unwrap()
    }

    fn euclid() -> f64 {
        (1.0f64 / 3.0).acos()
    }

    #[test]
    fn validation_examples() {
        assert!(validate_angle_system([FRAC_PI_2; 6]).is_ok());
        let a = regular(euclid());
        assert!((3.0 * euclid() - 3.6929).abs() < 1e-4);
        assert!(a.min_slack() > 0.0);
        match validate_angle_system([PI / 6.0; 6]) {
            Err(SimplexError::Invalid(v)) => {
                assert_eq!(v.len(), 4);
                assert!(v.iter().all(|x| matches!(x, Violation::VertexSum { .. })));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validation_reports_range_and_triangle_inequality() {
        let mut angles = [FRAC_PI_2; 6];
        angles[0] = 0.0;
        assert!(matches!(
            validate_angle_system(angles),
            Err(SimplexError::Invalid(v)) if v == vec![Violation::OutOfRange { edge: (0, 1), value: 0.0 }]
        ));
        // at vertex 0: 0.3 + π − 3.0 − 3.0 < 0
        let angles = [0.3, 3.0, 3.0, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2];
        let Err(SimplexError::Invalid(v)) = validate_angle_system(angles) else {
            panic!()
        };
        assert!(v.contains(&Violation::TriangleInequality {
            vertex: 0,
            edge: (0, 1),
            residual: 0.3 + PI - 6.0
        }));
    }

    #[test]
    fn face_angle_examples() {
        let f = face_angles(&regular(euclid()), EPS).unwrap();
        for i in 0..4 {
            for l in 0..4 {
                if i != l {
                    assert!((f.angle(i, l) - PI / 3.0).abs() < 1e-14);
                }
            }
        }
        let f = face_angles(&regular(FRAC_PI_2), EPS).unwrap();
        assert!((f.beta(0, 1, 2) - FRAC_PI_2).abs() < 1e-15);
        let f = face_angles(&regular(2.0 * PI / 3.0), EPS).unwrap();
        let expected = (-1.0f64 / 3.0).acos();
        assert!((expected - 1.91063).abs() < 1e-5);
        assert!((f.beta(2, 0, 3) - expected).abs() < 1e-14);
        assert!((f.cos(1, 3) + 1.0 / 3.0).abs() < 1e-15);
    }

    fn flipped_regular_euclidean() -> AngleSystem {
        flip(&regular(euclid()), 0).unwrap()
    }

    #[test]
    fn edge_length_examples() {
        let l = edge_lengths(&regular(euclid()), EPS).unwrap();
        assert!(l.lengths.iter().all(|x| (x.cosh() - 1.0).abs() < 1e-14));

        let l = edge_lengths(&regular(FRAC_PI_2), EPS).unwrap();
        assert!(l
            .lengths
            .iter()
            .all(|x| (x.im() - FRAC_PI_2).abs() < 1e-14 && x.re() == 0.0));

        let l = edge_lengths(&flipped_regular_euclidean(), EPS).unwrap();
        for (e, &(i, _)) in EDGES.iter().enumerate() {
            let expected = if i == 0 { -1.0 } else { 1.0 };
            assert!((l.lengths[e].cosh() - expected).abs() < 1e-14, "edge {e}");
        }
    }

    #[test]
    fn classification_examples() {
        let ty = classify_simplex(&regular(2.0 * PI / 3.0), EPS).unwrap();
        assert_eq!(ty.kind, SimplexKind::Spherical);
        assert!(ty.flipped_vertices.is_empty());

        let ty = classify_simplex(&regular(euclid()), EPS).unwrap();
        assert_eq!(ty.kind, SimplexKind::Euclidean);
        assert_eq!(ty.coarse, CoarseType::EuclideanType);

        let a = flipped_regular_euclidean();
        let ty = classify_simplex(&a, EPS).unwrap();
        assert_eq!(ty.kind, SimplexKind::FlippedEuclidean);
        assert_eq!(ty.flipped_vertices, vec![0]);

        let b = flip(&a, 1).unwrap();
        let ty = classify_simplex(&b, EPS).unwrap();
        assert_eq!(ty.kind, SimplexKind::DoublyFlippedEuclidean);
        assert_eq!(ty.flipped_vertices, vec![0, 1]);
        assert_eq!(ty.edge_classes[0], LengthClass::Zero);
        assert_eq!(ty.edge_classes[5], LengthClass::Zero);
        assert_eq!(ty.flipped_edges(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn flip_examples() {
        let right = regular(FRAC_PI_2);
        assert_eq!(flip(&right, 0).unwrap(), right);

        let a = flipped_regular_euclidean();
        let e = euclid();
        for (k, &(i, _)) in EDGES.iter().enumerate() {
            let expected = if i == 0 { e } else { PI - e };
            assert!((a.angles()[k] - expected).abs() < 1e-15);
        }
        assert_eq!(flip(&a, 0).unwrap().angles(), regular(e).angles());
    }

    #[test]
    fn gram_determinant_signs() {
        assert!(gram_determinant(&regular(2.0 * PI / 3.0)) > 0.0);
        assert!(gram_determinant(&regular(euclid())).abs() < 1e-15);
        assert!(gram_determinant(&regular(1.1)) < 0.0);
    }

    #[test]
    fn helpers() {
        assert_eq!(complement(1, 3), (0, 2));
        assert_eq!(face_vertices(2), [0, 1, 3]);
        for (e, &(a, b)) in EDGES.iter().enumerate() {
            assert_eq!(edge_index(a, b), e);
            assert_eq!(edge_index(b, a), e);
        }
    }
}
