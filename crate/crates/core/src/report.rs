//! Machine-readable report of an angle structure: volume, structure, edge
//! consistency and flip surface.
//!
//! Field order is fixed by declaration order. Floats are written with 17
//! significant digits; non-finite values become `null`.

use serde::ser::{Serialize, Serializer};
use serde::Serialize as DeriveSerialize;

use crate::analysis::{
    check_edge_consistency, classify_simplices, extract_flip_surface, structure_from_types,
    verify_claims, AnalysisError, ClaimReport, FlipSurface, StructureTag,
};
use crate::geomlib::{CoarseType, DEFAULT_EPS_CLASS};
use crate::quadrature::QuadratureOptions;
use crate::simplex::{SimplexKind, SimplexType};
use crate::triangulation::{edge_orbit_report, OrbitReport, Triangulation};
use crate::volume::simplex_volumes;

/// A float serialized with 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = serde_json::value::RawValue::from_string(format!("{:.16e}", self.0))
            .map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

fn reals(xs: &[f64]) -> Vec<Real> {
    xs.iter().copied().map(Real).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportOptions {
    pub length_tol: f64,
    pub eps_class: f64,
    pub quadrature: QuadratureOptions,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            length_tol: 1e-7,
            eps_class: DEFAULT_EPS_CLASS,
            quadrature: QuadratureOptions::default(),
        }
    }
}

#[derive(Clone, Debug, DeriveSerialize)]
pub struct OptimizationSummary {
    pub converged: bool,
    pub stalled: bool,
    pub iterations: usize,
    pub projected_gradient_norm: Real,
    pub grad_tol: Real,
}

#[derive(Clone, Debug, DeriveSerialize)]
pub struct SimplexSummary {
    pub tet: usize,
    pub kind: SimplexKind,
    pub coarse: CoarseType,
    pub flipped_vertices: Vec<usize>,
    pub volume: Real,
}

#[derive(Clone, Debug, DeriveSerialize)]
pub struct StructureSummary {
    pub tag: Option<StructureTag>,
    pub flip_present: bool,
    /// Set when the simplices do not share a coarse type.
    pub error: Option<String>,
    pub simplices: Vec<SimplexSummary>,
}

#[derive(Clone, Debug, DeriveSerialize)]
pub struct EdgeConsistencySummary {
    pub pass: bool,
    pub tolerance: Real,
    pub max_residual: Real,
    pub residuals: Vec<Real>,
}

#[derive(Clone, Debug, DeriveSerialize)]
pub struct ComponentSummary {
    pub faces: usize,
    pub vertices: usize,
    pub edges: usize,
    pub euler_characteristic: i64,
    pub area: Real,
}

#[derive(Clone, Debug, DeriveSerialize)]
pub struct FlipSurfaceSummary {
    pub triangles: usize,
    pub quadrilaterals: usize,
    pub unpaired_sides: usize,
    pub vertex_angle_sums: Vec<Real>,
    pub vertices_match_flipped_edges: Option<bool>,
    pub components: Vec<ComponentSummary>,
}

impl From<&FlipSurface> for FlipSurfaceSummary {
    fn from(s: &FlipSurface) -> Self {
        Self {
            triangles: s.faces.iter().filter(|f| f.sides() == 3).count(),
            quadrilaterals: s.faces.iter().filter(|f| f.sides() == 4).count(),
            unpaired_sides: s.unpaired_sides.len(),
            vertex_angle_sums: reals(&s.vertex_angle_sums),
            vertices_match_flipped_edges: s.vertices_match_flipped_edges,
            components: s
                .components
                .iter()
                .map(|c| ComponentSummary {
                    faces: c.faces.len(),
                    vertices: c.vertices,
                    edges: c.edges,
                    euler_characteristic: c.euler_characteristic,
                    area: Real(c.area),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, DeriveSerialize)]
pub struct ClaimSummary {
    pub pass: bool,
    pub max_angle_sum_deviation: Real,
    pub angle_sums_pass: bool,
    pub components_pass: bool,
    pub total_area: Real,
    pub volume_area_deviation: Real,
    pub volume_area_pass: bool,
    pub volume_over_pi_squared: Real,
    pub quantized_pi_squared: bool,
    pub volume_over_two_pi_squared: Real,
    pub quantized_two_pi_squared: bool,
}

impl From<&ClaimReport> for ClaimSummary {
    fn from(c: &ClaimReport) -> Self {
        Self {
            pass: c.pass,
            max_angle_sum_deviation: Real(c.max_angle_sum_deviation),
            angle_sums_pass: c.angle_sums_pass,
            components_pass: c.components_pass,
            total_area: Real(c.total_area),
            volume_area_deviation: Real(c.volume_area_deviation),
            volume_area_pass: c.volume_area_pass,
            volume_over_pi_squared: Real(c.volume_over_pi_squared),
            quantized_pi_squared: c.quantized_pi_squared,
            volume_over_two_pi_squared: Real(c.volume_over_two_pi_squared),
            quantized_two_pi_squared: c.quantized_two_pi_squared,
        }
    }
}

#[derive(Clone, Debug, DeriveSerialize)]
pub struct CriticalReport {
    pub command: String,
    pub test_mode: bool,
    pub triangulation: OrbitReport,
    pub theta: Vec<Real>,
    pub optimization: Option<OptimizationSummary>,
    pub volume: Real,
    pub abs_volume: Real,
    pub structure: StructureSummary,
    pub edge_consistency: EdgeConsistencySummary,
    pub flip_surface: Option<FlipSurfaceSummary>,
    pub claims: Option<ClaimSummary>,
}

impl CriticalReport {
    /// Analyzes `theta`, which must be an angle structure on `t`.
    pub fn build(
        command: &str,
        test_mode: bool,
        t: &Triangulation,
        theta: &[f64],
        optimization: Option<OptimizationSummary>,
        opts: &ReportOptions,
    ) -> Result<Self, AnalysisError> {
        let volumes = simplex_volumes(t, theta, &opts.quadrature)?;
        let volume: f64 = volumes.iter().sum();
        let consistency = check_edge_consistency(t, theta, opts.length_tol, opts.eps_class)?;

        let types = classify_simplices(t, theta, opts.eps_class)?;
        let simplices = summarize(&types, &volumes);
        let any_flip = types.iter().any(|ty| ty.kind.flip_count() > 0);
        let (structure, flip_surface, claims) = match structure_from_types(types) {
            Ok(class) => {
                // an unflipped Euclidean-type structure has an empty surface
                let (surface, claims) = if class.flip_present || class.tag == StructureTag::EuclideanType {
                    let surface = extract_flip_surface(t, theta, opts.eps_class)?;
                    let claims = verify_claims(&surface, volume);
                    (Some(FlipSurfaceSummary::from(&surface)), Some(ClaimSummary::from(&claims)))
                } else {
                    (None, None)
                };
                let summary = StructureSummary {
                    tag: Some(class.tag),
                    flip_present: class.flip_present,
                    error: None,
                    simplices,
                };
                (summary, surface, claims)
            }
            Err(err @ AnalysisError::MixedTypes { .. }) => {
                let summary = StructureSummary {
                    tag: None,
                    flip_present: any_flip,
                    error: Some(err.to_string()),
                    simplices,
                };
                (summary, None, None)
            }
            Err(e) => return Err(e),
        };

        Ok(CriticalReport {
            command: command.to_string(),
            test_mode,
            triangulation: edge_orbit_report(t),
            theta: reals(theta),
            optimization,
            volume: Real(volume),
            abs_volume: Real(volume.abs()),
            structure,
            edge_consistency: EdgeConsistencySummary {
                pass: consistency.pass,
                tolerance: Real(consistency.tolerance),
                max_residual: Real(consistency.max_residual),
                residuals: reals(&consistency.residuals),
            },
            flip_surface,
            claims,
        })
    }

    /// Consistent edge lengths and a single coarse type.
    pub fn is_consistent(&self) -> bool {
        self.edge_consistency.pass && self.structure.tag.is_some()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn summarize(types: &[SimplexType], volumes: &[f64]) -> Vec<SimplexSummary> {
    types
        .iter()
        .zip(volumes)
        .enumerate()
        .map(|(tet, (ty, &v))| SimplexSummary {
            tet,
            kind: ty.kind,
            coarse: ty.coarse,
            flipped_vertices: ty.flipped_vertices.clone(),
            volume: Real(v),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::boundary_of_four_simplex;
    use std::f64::consts::PI;

    #[test]
    fn seventeen_digits() {
        let json = serde_json::to_string(&vec![Real(2.0 * PI * PI), Real(f64::NAN), Real(0.0)]).unwrap();
        assert_eq!(json, "[1.9739208802178716e1,null,0.0000000000000000e0]");
        let back: Vec<Option<f64>> = serde_json::from_str(&json).unwrap();
        assert_eq!(back[0], Some(2.0 * PI * PI));
    }

    #[test]
    fn symmetric_four_simplex_report() {
        let t = Triangulation::build(boundary_of_four_simplex());
        let theta = vec![2.0 * PI / 3.0; 30];
        let r = CriticalReport::build("classify", false, &t, &theta, None, &ReportOptions::default()).unwrap();
        assert!(r.is_consistent());
        assert_eq!(r.structure.tag, Some(StructureTag::SphericalMetric));
        assert!((r.volume.0 - 2.0 * PI * PI).abs() < 1e-8);
        let json = r.to_json();
        assert!(json.contains("\"tag\": \"SphericalMetric\""));
        assert_eq!(json, r.to_json());
    }
}
