//! The Schläfli 1-form and its primitive, the generalized volume.
//!
//! `2ω = Σ (Re l_e + Im l_e) dα_e`. The volume of an angle system is the
//! integral of ω along the straight segment from the regular Euclidean
//! point, where it vanishes. On spherical simplices this is the spherical
//! volume; on hyperbolic simplices it is the (positive) hyperbolic volume.

use std::f64::consts::PI;

use thiserror::Error;

use crate::geomlib::{schlafli_weight, CoarseType, DEFAULT_EPS_CLASS};
use crate::quadrature::{integrate, QuadratureError, QuadratureOptions};
use crate::simplex::{
    classify_simplex, edge_lengths, edge_lengths_unchecked, gram_determinant, validate_angle_system,
    AngleSystem, SimplexError, SimplexKind, SimplexType, EDGES,
};
use crate::triangulation::Triangulation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VolumeError {
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("expected a {expected:?} simplex, got {actual:?}")]
    WrongType {
        expected: SimplexKind,
        actual: SimplexKind,
    },
    #[error("angle vector has length {actual}, expected {expected}")]
    WrongLength { expected: usize, actual: usize },
    #[error("tetrahedron {tet}: {source}")]
    InTetrahedron {
        tet: usize,
        #[source]
        source: Box<VolumeError>,
    },
}

/// Partial derivatives `∂V/∂α_e` in edge-index order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchlafliCovector {
    pub weights: [f64; 6],
}

pub fn schlafli_form(a: &AngleSystem) -> Result<SchlafliCovector, SimplexError> {
    let lengths = edge_lengths(a, DEFAULT_EPS_CLASS)?;
    Ok(SchlafliCovector {
        weights: lengths.lengths.map(|l| 0.5 * schlafli_weight(&l)),
    })
}

/// Like [`schlafli_form`] but without the two-face agreement check, for use
/// inside quadrature where points close to a type transition lose a few
/// digits.
fn schlafli_form_unchecked(a: &AngleSystem) -> Result<[f64; 6], SimplexError> {
    let lengths = edge_lengths_unchecked(a, DEFAULT_EPS_CLASS)?;
    Ok(lengths.lengths.map(|l| 0.5 * schlafli_weight(&l)))
}

/// The regular Euclidean simplex, all angles `arccos(1/3)`.
pub fn base_euclidean_point() -> AngleSystem {
    validate_angle_system([(1.0f64 / 3.0).acos(); 6]).expect("regular Euclidean simplex is valid")
}

fn lerp(p: &[f64; 6], q: &[f64; 6], t: f64) -> [f64; 6] {
    let mut out = [0.0; 6];
    for e in 0..6 {
        out[e] = p[e] + t * (q[e] - p[e]);
    }
    out
}

/// A point of the open segment. Valid by convexity; rounding can only push
/// it out when an endpoint is itself on the boundary, which callers exclude.
fn point_on(p: &[f64; 6], q: &[f64; 6], t: f64) -> Result<AngleSystem, SimplexError> {
    validate_angle_system(lerp(p, q, t))
}

const SCAN_POINTS: usize = 32;

/// Parameters in `(0, 1)` where the Gram determinant changes sign along the
/// segment, i.e. where the simplex changes coarse type.
fn type_crossings(p: &[f64; 6], q: &[f64; 6]) -> Vec<f64> {
    let det = |t: f64| match point_on(p, q, t) {
        Ok(a) => gram_determinant(&a),
        Err(_) => 0.0,
    };
    let sign = |d: f64| {
        if d > 0.0 {
            1
        } else if d < 0.0 {
            -1
        } else {
            0
        }
    };
    // stay off the endpoints, which may lie on the Euclidean locus
    let ts: Vec<f64> = (0..=SCAN_POINTS)
        .map(|k| (k as f64 / SCAN_POINTS as f64).clamp(1e-9, 1.0 - 1e-9))
        .collect();
    let mut crossings = Vec::new();
    let mut prev_t = ts[0];
    let mut prev_s = sign(det(prev_t));
    for &t in &ts[1..] {
        let s = sign(det(t));
        if s != 0 && prev_s != 0 && s != prev_s {
            let (mut lo, mut hi) = (prev_t, t);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sign(det(mid)) == prev_s {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            crossings.push(0.5 * (lo + hi));
        }
        if s != 0 {
            prev_t = t;
            prev_s = s;
        }
    }
    crossings
}

/// `∫ ω` along the straight segment from `p` to `q`.
///
/// The segment is split where the coarse type changes; each piece is
/// integrated after the substitution `t = a + (b − a)(3s² − 2s³)`, which
/// removes the square-root behaviour of the weights at the piece ends.
pub fn integrate_form(
    p: &AngleSystem,
    q: &AngleSystem,
    opts: &QuadratureOptions,
) -> Result<f64, VolumeError> {
    opts.validate()?;
    let (pa, qa) = (p.angles(), q.angles());
    let delta: [f64; 6] = std::array::from_fn(|e| qa[e] - pa[e]);
    if delta.iter().all(|&d| d == 0.0) {
        return Ok(0.0);
    }
    let mut knots = vec![0.0];
    knots.extend(type_crossings(&pa, &qa));
    knots.push(1.0);

    let pieces = knots.len() - 1;
    let piece_opts = QuadratureOptions {
        abs_tol: opts.abs_tol / pieces as f64,
        max_subdivisions: opts.max_subdivisions,
    };
    let mut failure: Option<SimplexError> = None;
    let mut total = 0.0;
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let integrand = |s: f64| {
            let t = a + (b - a) * s * s * (3.0 - 2.0 * s);
            let jac = (b - a) * 6.0 * s * (1.0 - s);
            let point = match point_on(&pa, &qa, t) {
                Ok(x) => x,
                Err(e) => {
                    failure.get_or_insert(e);
                    return f64::NAN;
                }
            };
            match schlafli_form_unchecked(&point) {
                Ok(weights) => jac * (0..6).map(|e| weights[e] * delta[e]).sum::<f64>(),
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        };
        match integrate(integrand, 0.0, 1.0, &piece_opts) {
            Ok(r) => total += r.value,
            Err(e) => {
                return Err(match failure.take() {
                    Some(inner) => VolumeError::Simplex(inner),
                    None => VolumeError::Quadrature(e),
                })
            }
        }
    }
    Ok(total)
}

/// The volume by quadrature alone, with no closed-form dispatch.
pub fn simplex_volume_quadrature(a: &AngleSystem, opts: &QuadratureOptions) -> Result<f64, VolumeError> {
    integrate_form(&base_euclidean_point(), a, opts)
}

/// Generalized volume. Euclidean-type simplices use closed forms; everything
/// else is integrated.
pub fn simplex_volume(a: &AngleSystem, opts: &QuadratureOptions) -> Result<f64, VolumeError> {
    match classify_simplex(a, DEFAULT_EPS_CLASS) {
        Ok(ty) if ty.coarse == CoarseType::EuclideanType => Ok(euclidean_type_volume(a, &ty)),
        // classification fails only within rounding of a transition; the
        // integral is still well defined there
        _ => simplex_volume_quadrature(a, opts),
    }
}

fn euclidean_type_volume(a: &AngleSystem, ty: &SimplexType) -> f64 {
    match ty.kind {
        SimplexKind::FlippedEuclidean => flipped_formula(a, ty.flipped_vertices[0]),
        SimplexKind::DoublyFlippedEuclidean => {
            doubly_flipped_formula(a, ty.flipped_vertices[0], ty.flipped_vertices[1])
        }
        _ => 0.0,
    }
}

/// `(π/2)·area` of the link triangle at the flipped vertex: the simplex is
/// the limit of a spherical lune between that vertex and its antipode.
fn flipped_formula(a: &AngleSystem, v: usize) -> f64 {
    0.5 * PI * (a.vertex_angles(v).iter().sum::<f64>() - PI)
}

fn doubly_flipped_formula(a: &AngleSystem, p: usize, q: usize) -> f64 {
    // the iπ edges join {p, q} to its complement
    let sum: f64 = EDGES
        .iter()
        .enumerate()
        .filter(|(_, &(i, j))| (i == p || i == q) != (j == p || j == q))
        .map(|(e, _)| a.angles()[e])
        .sum();
    0.5 * PI * (sum - 2.0 * PI)
}

pub fn volume_flipped_euclidean(a: &AngleSystem) -> Result<f64, VolumeError> {
    let ty = classify_simplex(a, DEFAULT_EPS_CLASS)?;
    if ty.kind != SimplexKind::FlippedEuclidean {
        return Err(VolumeError::WrongType {
            expected: SimplexKind::FlippedEuclidean,
            actual: ty.kind,
        });
    }
    Ok(flipped_formula(a, ty.flipped_vertices[0]))
}

pub fn volume_doubly_flipped_euclidean(a: &AngleSystem) -> Result<f64, VolumeError> {
    let ty = classify_simplex(a, DEFAULT_EPS_CLASS)?;
    if ty.kind != SimplexKind::DoublyFlippedEuclidean {
        return Err(VolumeError::WrongType {
            expected: SimplexKind::DoublyFlippedEuclidean,
            actual: ty.kind,
        });
    }
    Ok(doubly_flipped_formula(a, ty.flipped_vertices[0], ty.flipped_vertices[1]))
}

/// Angle systems of every tetrahedron of `t` under the wedge angles `theta`.
pub fn simplex_systems(t: &Triangulation, theta: &[f64]) -> Result<Vec<AngleSystem>, VolumeError> {
    if theta.len() != t.wedge_count() {
        return Err(VolumeError::WrongLength {
            expected: t.wedge_count(),
            actual: theta.len(),
        });
    }
    theta
        .chunks_exact(6)
        .enumerate()
        .map(|(tet, c)| {
            validate_angle_system([c[0], c[1], c[2], c[3], c[4], c[5]]).map_err(|e| {
                VolumeError::InTetrahedron {
                    tet,
                    source: Box::new(e.into()),
                }
            })
        })
        .collect()
}

pub fn simplex_volumes(
    t: &Triangulation,
    theta: &[f64],
    opts: &QuadratureOptions,
) -> Result<Vec<f64>, VolumeError> {
    simplex_systems(t, theta)?
        .iter()
        .enumerate()
        .map(|(tet, a)| {
            simplex_volume(a, opts).map_err(|e| VolumeError::InTetrahedron {
                tet,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Sum of the simplex volumes, in tetrahedron order.
pub fn total_volume(t: &Triangulation, theta: &[f64], opts: &QuadratureOptions) -> Result<f64, VolumeError> {
    Ok(simplex_volumes(t, theta, opts)?.iter().sum())
}

/// `∂V/∂θ(w)` for every wedge `w`.
pub fn total_gradient(t: &Triangulation, theta: &[f64]) -> Result<Vec<f64>, VolumeError> {
    let mut out = Vec::with_capacity(theta.len());
    for (tet, a) in simplex_systems(t, theta)?.iter().enumerate() {
        let w = schlafli_form(a).map_err(|e| VolumeError::InTetrahedron {
            tet,
            source: Box::new(e.into()),
        })?;
        out.extend_from_slice(&w.weights);
    }
    Ok(out)
}
