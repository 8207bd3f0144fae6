//! Regenerates the JSON fixtures under `fixtures/`.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use hsvol_core::constructions::{cone_over_surface, flipped_cone_angles, flipped_cone_simplex, PROJECTIVE_PLANE_SURFACE};
use hsvol_core::optimizer::project;
use hsvol_core::triangulation::{
    boundary_of_four_simplex, identity_double, single_tetrahedron, GluingSpec, Triangulation,
};

fn with_theta(spec: &GluingSpec, theta: &[f64]) -> String {
    let mut v: serde_json::Value = serde_json::from_str(&spec.to_json()).unwrap();
    v["theta"] = serde_json::json!(theta);
    serde_json::to_string_pretty(&v).unwrap() + "\n"
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, text: String| fs::write(dir.join(name), text).unwrap();

    let four = boundary_of_four_simplex();
    write("boundary_4simplex.json", four.to_json() + "\n");
    write("boundary_4simplex_symmetric.json", with_theta(&four, &[2.0 * PI / 3.0; 30]));
    // moves angle between the two wedges of one edge inside each of tetrahedra 0 and 1
    let mut bent = vec![2.0 * PI / 3.0; 30];
    bent[0] += 0.05;
    bent[1] -= 0.05;
    write("boundary_4simplex_edge_sum_broken.json", with_theta(&four, &bent));
    // a tangent move off the symmetric point: still an angle structure, not critical
    let t = Triangulation::build(four.clone());
    let mut step: Vec<f64> = (0..30).map(|i| ((i * 7 % 11) as f64 - 5.0) / 5.0).collect();
    project(&t, &mut step);
    let scale = 0.1 / step.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let moved: Vec<f64> = step.iter().map(|d| 2.0 * PI / 3.0 + scale * d).collect();
    write("boundary_4simplex_perturbed.json", with_theta(&four, &moved));
    write("identity_double.json", identity_double().to_json() + "\n");
    write("single_tetrahedron.json", single_tetrahedron().to_json() + "\n");
    write(
        "single_flipped_euclidean.json",
        with_theta(&single_tetrahedron(), &flipped_cone_simplex(3).unwrap().angles()),
    );
    let rp2 = cone_over_surface(&PROJECTIVE_PLANE_SURFACE).unwrap();
    write(
        "cone_projective_plane.json",
        with_theta(&rp2, &flipped_cone_angles(PROJECTIVE_PLANE_SURFACE.len(), 5).unwrap()),
    );
}
