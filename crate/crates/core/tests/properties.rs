use std::f64::consts::PI;

use proptest::prelude::*;

use hsvol_core::constructions::{cone_over_surface, OCTAHEDRON_SURFACE, PROJECTIVE_PLANE_SURFACE};
use hsvol_core::geomlib::{
    angles_from_lengths, classify_triangle, triangle_edge_lengths, CoarseType, LengthClass, MobiusTriangle,
    TriangleKind, DEFAULT_EPS_CLASS,
};
use hsvol_core::optimizer::{polytope_constraints, starting_point};
use hsvol_core::quadrature::QuadratureOptions;
use hsvol_core::simplex::{
    classify_simplex, edge_lengths, flip, gram_determinant, validate_angle_system, AngleSystem, SimplexKind,
};
use hsvol_core::triangulation::{
    boundary_of_four_simplex, edge_orbit_report, parse_input, parse_triangulation, GluingSpec, Triangulation,
};
use hsvol_core::volume::simplex_volume;

const BAND: f64 = 1e-6;

fn angle() -> impl Strategy<Value = f64> {
    0.001..PI - 0.001
}

fn angle_system() -> impl Strategy<Value = AngleSystem> {
    prop::array::uniform6(angle()).prop_filter_map("vertex links", |a| validate_angle_system(a).ok())
}

fn family(c: LengthClass) -> CoarseType {
    match c {
        LengthClass::Zero | LengthClass::IPi => CoarseType::EuclideanType,
        LengthClass::NegativeReal | LengthClass::IPiPlusPositive => CoarseType::HyperbolicType,
        LengthClass::ImaginaryOpen => CoarseType::SphericalType,
    }
}

/// Sorted orbits, so different processing orders can be compared.
fn canonical_orbits(t: &Triangulation) -> Vec<Vec<usize>> {
    let mut orbits: Vec<Vec<usize>> = t
        .edge_orbits()
        .iter()
        .map(|o| {
            let mut o = o.clone();
            o.sort_unstable();
            o
        })
        .collect();
    orbits.sort();
    orbits
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    // the inequality classification and the length classes are two routes to
    // the same type
    #[test]
    fn triangle_type_matches_lengths(a in prop::array::uniform3(angle())) {
        let t = MobiusTriangle::new(a).unwrap();
        let ty = classify_triangle(&t, DEFAULT_EPS_CLASS);
        let residuals = t.ti_residuals();
        prop_assume!(residuals.iter().all(|r| r.abs() > BAND) && (t.angle_sum() - PI).abs() > BAND);
        let lengths = triangle_edge_lengths(&t);
        prop_assert_eq!(lengths.map(|l| l.class()), ty.length_pattern());
    }

    #[test]
    fn triangle_lengths_round_trip(a in prop::array::uniform3(0.05..PI - 0.05)) {
        let t = MobiusTriangle::new(a).unwrap();
        let ty = classify_triangle(&t, DEFAULT_EPS_CLASS);
        prop_assume!(matches!(ty.kind, TriangleKind::Spherical | TriangleKind::Hyperbolic));
        prop_assume!((t.angle_sum() - PI).abs() > 1e-3);
        let back = angles_from_lengths(triangle_edge_lengths(&t), DEFAULT_EPS_CLASS).unwrap();
        for (x, y) in a.iter().zip(back.angles()) {
            prop_assert!((x - y).abs() < 1e-7, "{a:?} -> {:?}", back.angles());
        }
    }

    #[test]
    fn edge_lengths_are_well_defined(a in angle_system()) {
        let l = edge_lengths(&a, DEFAULT_EPS_CLASS);
        prop_assert!(l.is_ok(), "{:?}: {:?}", a.angles(), l);
    }

    #[test]
    fn simplex_edges_share_one_family(a in angle_system()) {
        prop_assume!(gram_determinant(&a).abs() > BAND);
        let ty = classify_simplex(&a, DEFAULT_EPS_CLASS).unwrap();
        for c in ty.edge_classes {
            prop_assert_eq!(family(c), ty.coarse);
        }
        prop_assert_eq!(ty.kind.coarse(), ty.coarse);
        prop_assert_eq!(ty.flipped_vertices.len(), ty.kind.flip_count());
        prop_assert_eq!(ty.flipped_edges().len(), [0, 3, 4][ty.kind.flip_count()]);
    }

    #[test]
    fn flip_is_an_involution_preserving_coarse_type(a in angle_system(), v in 0usize..4) {
        let f = flip(&a, v).unwrap();
        let back = flip(&f, v).unwrap();
        for (x, y) in a.angles().iter().zip(back.angles()) {
            prop_assert!((x - y).abs() < 1e-15);
        }
        prop_assume!(gram_determinant(&a).abs() > BAND);
        let (t1, t2) = (classify_simplex(&a, DEFAULT_EPS_CLASS).unwrap(), classify_simplex(&f, DEFAULT_EPS_CLASS).unwrap());
        prop_assert_eq!(t1.coarse, t2.coarse);
    }

    // a spherical simplex and its flip at v tile the lune from v to −v over
    // the link of v, whose volume is (π/2)·(angle sum at v − π)
    #[test]
    fn spherical_flip_fills_the_lune(a in angle_system(), v in 0usize..4) {
        let f = flip(&a, v).unwrap();
        prop_assume!(gram_determinant(&a) > 1e-3);
        prop_assert_eq!(classify_simplex(&a, DEFAULT_EPS_CLASS).unwrap().kind, SimplexKind::Spherical);
        let opts = QuadratureOptions::default();
        let total = simplex_volume(&a, &opts).unwrap() + simplex_volume(&f, &opts).unwrap();
        let link: f64 = a.vertex_angles(v).iter().sum();
        prop_assert!((total - 0.5 * PI * (link - PI)).abs() < 1e-8, "{total}");
    }
}

fn shuffled(n: usize, keys: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| keys[i % keys.len()].wrapping_mul(i as u64 + 1) ^ i as u64);
    order
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbits_do_not_depend_on_gluing_order(keys in prop::collection::vec(any::<u64>(), 1..40)) {
        for spec in [
            boundary_of_four_simplex(),
            cone_over_surface(&OCTAHEDRON_SURFACE).unwrap(),
            cone_over_surface(&PROJECTIVE_PLANE_SURFACE).unwrap(),
        ] {
            let reference = Triangulation::build(spec.clone());
            let order = shuffled(spec.gluings().len(), &keys);
            let other = Triangulation::build_in_order(spec, Some(&order));
            prop_assert_eq!(canonical_orbits(&reference), canonical_orbits(&other));
            prop_assert_eq!(edge_orbit_report(&reference), edge_orbit_report(&other));
        }
    }

    #[test]
    fn parsing_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..256)) {
        let _ = parse_triangulation(&bytes);
        let _ = parse_input(&bytes, true);
    }

    #[test]
    fn seeded_starts_are_strictly_feasible(seed in any::<u64>()) {
        let t = Triangulation::build(boundary_of_four_simplex());
        let p = starting_point(&t, Some(seed)).unwrap();
        let c = polytope_constraints(&t);
        prop_assert!(c.min_slack(p.theta()) > 0.0);
        prop_assert!(c.max_equality_residual(p.theta()) < 1e-9);
        let q = starting_point(&t, Some(seed)).unwrap();
        prop_assert_eq!(p.theta(), q.theta());
    }
}

#[test]
fn gluing_json_round_trips() {
    for spec in [boundary_of_four_simplex(), cone_over_surface(&PROJECTIVE_PLANE_SURFACE).unwrap()] {
        let text = spec.to_json();
        let back: GluingSpec = parse_input(text.as_bytes(), spec.allows_boundary()).unwrap().spec;
        assert_eq!(back, spec);
    }
}

#[test]
fn checked_in_fixture_matches_builder() {
    let text = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/boundary_4simplex.json")).unwrap();
    assert_eq!(parse_triangulation(&text).unwrap(), boundary_of_four_simplex());
}

#[test]
fn fuzz_corpus_seeds_parse_as_expected() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let read = |dir: &str| {
        let mut files: Vec<_> = std::fs::read_dir(root.join(dir)).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        files.into_iter().map(|p| (p.clone(), std::fs::read(p).unwrap())).collect::<Vec<_>>()
    };
    let mut accepted = 0;
    for (path, bytes) in read("parse_triangulation") {
        if let Ok(spec) = parse_triangulation(&bytes) {
            accepted += 1;
            assert_eq!(parse_triangulation(spec.to_json().as_bytes()).unwrap(), spec, "{path:?}");
        }
    }
    assert!(accepted >= 2);
    for (path, bytes) in read("parse_input") {
        assert!(parse_input(&bytes, true).is_ok(), "{path:?}");
    }
    for (path, bytes) in read("parse_config") {
        assert!(hsvol_core::config::parse_config(&bytes).is_ok(), "{path:?}");
    }
}
