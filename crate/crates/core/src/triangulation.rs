//! Combinatorics of a triangulated closed 3-manifold.
//!
//! Tetrahedra are numbered `0..tet_count` with vertex labels `0..4`. Face `f`
//! of a tetrahedron is the face opposite vertex `f`. A gluing
//! `(tet, face) → (to_tet, to_face)` carries a permutation `perm` of the
//! labels with `perm[face] = to_face`; it identifies source vertex `v` with
//! target vertex `perm[v]`.
//!
//! A wedge is a pair (tetrahedron, edge of that tetrahedron before
//! identification). Wedge `w` has index `6 * tet + edge` with the edge index
//! of [`crate::simplex::EDGES`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::simplex::{complement, edge_index, EDGES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TriangulationError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("tet_count must be at least 1")]
    Empty,
    #[error("gluing {gluing}: {field} = {value} is out of range")]
    OutOfRange {
        gluing: usize,
        field: &'static str,
        value: usize,
    },
    #[error("gluing {gluing}: perm {perm:?} {reason}")]
    BadPerm {
        gluing: usize,
        perm: Vec<usize>,
        reason: &'static str,
    },
    #[error("gluing {gluing}: face {face} of tet {tet} is glued to itself")]
    SelfGluing { gluing: usize, tet: usize, face: usize },
    #[error("duplicate face: face {face} of tet {tet} is glued twice (gluing {gluing})")]
    DuplicateFace { gluing: usize, tet: usize, face: usize },
    #[error("non-involutive pairing: gluing {gluing} and its reverse on face {face} of tet {tet} do not compose to the identity")]
    NonInvolutive { gluing: usize, tet: usize, face: usize },
    #[error("unmatched face: face {face} of tet {tet} is not glued")]
    UnmatchedFace { tet: usize, face: usize },
}

/// A permutation of the vertex labels `{0, 1, 2, 3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Perm4([usize; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [usize; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &i in &images {
            if i >= 4 || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm4(images))
    }

    pub fn apply(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn images(&self) -> [usize; 4] {
        self.0
    }

    pub fn inverse(&self) -> Perm4 {
        let mut inv = [0; 4];
        for (v, &w) in self.0.iter().enumerate() {
            inv[w] = v;
        }
        Perm4(inv)
    }

    pub fn compose(&self, then: &Perm4) -> Perm4 {
        Perm4(self.0.map(|v| then.0[v]))
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gluing {
    pub tet: usize,
    pub face: usize,
    pub to_tet: usize,
    pub to_face: usize,
    pub perm: Perm4,
}

impl Gluing {
    pub fn reverse(&self) -> Gluing {
        Gluing {
            tet: self.to_tet,
            face: self.to_face,
            to_tet: self.tet,
            to_face: self.face,
            perm: self.perm.inverse(),
        }
    }
}

/// Validated face-pairing data: every face is matched at most once, and
/// exactly once unless boundary faces were explicitly allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct GluingSpec {
    tet_count: usize,
    /// `pairing[tet][face]` is the gluing leaving that face.
    pairing: Vec<[Option<Gluing>; 4]>,
    allow_boundary: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGluing {
    tet: usize,
    face: usize,
    to_tet: usize,
    to_face: usize,
    perm: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    tet_count: usize,
    gluings: Vec<RawGluing>,
    #[serde(default)]
    #[allow(dead_code)]
    theta: Option<Vec<f64>>,
}

/// A triangulation file, optionally carrying an angle assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangulationInput {
    pub spec: GluingSpec,
    pub theta: Option<Vec<f64>>,
}

/// Parses a closed triangulation. Every face must be glued.
pub fn parse_triangulation(text: &[u8]) -> Result<GluingSpec, TriangulationError> {
    parse_triangulation_with(text, false)
}

/// Parses a triangulation, optionally allowing unglued (boundary) faces.
pub fn parse_triangulation_with(
    text: &[u8],
    allow_boundary: bool,
) -> Result<GluingSpec, TriangulationError> {
    parse_input(text, allow_boundary).map(|input| input.spec)
}

/// Parses a triangulation file together with its optional `theta` array.
pub fn parse_input(text: &[u8], allow_boundary: bool) -> Result<TriangulationInput, TriangulationError> {
    let raw: RawInput =
        serde_json::from_slice(text).map_err(|e| TriangulationError::Syntax(e.to_string()))?;
    let mut gluings = Vec::with_capacity(raw.gluings.len());
    for (idx, g) in raw.gluings.into_iter().enumerate() {
        if g.perm.len() != 4 {
            return Err(TriangulationError::BadPerm {
                gluing: idx,
                perm: g.perm,
                reason: "must have exactly 4 entries",
            });
        }
        let images = [g.perm[0], g.perm[1], g.perm[2], g.perm[3]];
        let perm = Perm4::new(images).ok_or_else(|| TriangulationError::BadPerm {
            gluing: idx,
            perm: g.perm.clone(),
            reason: "is not a bijection of {0, 1, 2, 3}",
        })?;
        gluings.push((
            idx,
            RawGluingChecked {
                tet: g.tet,
                face: g.face,
                to_tet: g.to_tet,
                to_face: g.to_face,
                perm,
            },
        ));
    }
    let spec = GluingSpec::from_indexed(raw.tet_count, gluings, allow_boundary)?;
    Ok(TriangulationInput {
        spec,
        theta: raw.theta,
    })
}

struct RawGluingChecked {
    tet: usize,
    face: usize,
    to_tet: usize,
    to_face: usize,
    perm: Perm4,
}

impl GluingSpec {
    /// Validates a list of gluings. Either direction of a pair may be given;
    /// consistent duplicates are accepted.
    pub fn new(
        tet_count: usize,
        gluings: &[Gluing],
        allow_boundary: bool,
    ) -> Result<Self, TriangulationError> {
        let indexed = gluings
            .iter()
            .enumerate()
            .map(|(i, g)| {
                (
                    i,
                    RawGluingChecked {
                        tet: g.tet,
                        face: g.face,
                        to_tet: g.to_tet,
                        to_face: g.to_face,
                        perm: g.perm,
                    },
                )
            })
            .collect();
        Self::from_indexed(tet_count, indexed, allow_boundary)
    }

    fn from_indexed(
        tet_count: usize,
        gluings: Vec<(usize, RawGluingChecked)>,
        allow_boundary: bool,
    ) -> Result<Self, TriangulationError> {
        if tet_count == 0 {
            return Err(TriangulationError::Empty);
        }
        let mut checked = Vec::with_capacity(gluings.len());
        for (idx, g) in gluings {
            for (field, value, bound) in [
                ("tet", g.tet, tet_count),
                ("to_tet", g.to_tet, tet_count),
                ("face", g.face, 4),
                ("to_face", g.to_face, 4),
            ] {
                if value >= bound {
                    return Err(TriangulationError::OutOfRange {
                        gluing: idx,
                        field,
                        value,
                    });
                }
            }
            if g.perm.apply(g.face) != g.to_face {
                return Err(TriangulationError::BadPerm {
                    gluing: idx,
                    perm: g.perm.images().to_vec(),
                    reason: "does not map face to to_face",
                });
            }
            if g.tet == g.to_tet && g.face == g.to_face {
                return Err(TriangulationError::SelfGluing {
                    gluing: idx,
                    tet: g.tet,
                    face: g.face,
                });
            }
            checked.push((
                idx,
                Gluing {
                    tet: g.tet,
                    face: g.face,
                    to_tet: g.to_tet,
                    to_face: g.to_face,
                    perm: g.perm,
                },
            ));
        }

        // explicit entries first, so a stated reverse wins over an inferred one
        let mut explicit: BTreeMap<(usize, usize), (usize, Gluing)> = BTreeMap::new();
        for &(idx, g) in &checked {
            match explicit.get(&(g.tet, g.face)) {
                Some((_, prev)) if *prev == g => {}
                Some(_) => {
                    return Err(TriangulationError::DuplicateFace {
                        gluing: idx,
                        tet: g.tet,
                        face: g.face,
                    })
                }
                None => {
                    explicit.insert((g.tet, g.face), (idx, g));
                }
            }
        }

        let mut pairing: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; tet_count];
        for (&(t, f), &(_, g)) in &explicit {
            pairing[t][f] = Some(g);
        }
        for (_, &(idx, g)) in &explicit {
            let rev = g.reverse();
            match explicit.get(&(rev.tet, rev.face)) {
                Some((_, stated)) => {
                    if *stated != rev {
                        // the target face is glued, but not back to us by the inverse
                        let err = if stated.to_tet != g.tet || stated.to_face != g.face {
                            TriangulationError::DuplicateFace {
                                gluing: idx,
                                tet: rev.tet,
                                face: rev.face,
                            }
                        } else {
                            TriangulationError::NonInvolutive {
                                gluing: idx,
                                tet: rev.tet,
                                face: rev.face,
                            }
                        };
                        return Err(err);
                    }
                }
                None => match pairing[rev.tet][rev.face] {
                    Some(prev) if prev != rev => {
                        return Err(TriangulationError::DuplicateFace {
                            gluing: idx,
                            tet: rev.tet,
                            face: rev.face,
                        })
                    }
                    _ => pairing[rev.tet][rev.face] = Some(rev),
                },
            }
        }

        if !allow_boundary {
            for (t, faces) in pairing.iter().enumerate() {
                if let Some(f) = faces.iter().position(|g| g.is_none()) {
                    return Err(TriangulationError::UnmatchedFace { tet: t, face: f });
                }
            }
        }
        Ok(GluingSpec {
            tet_count,
            pairing,
            allow_boundary,
        })
    }

    pub fn tet_count(&self) -> usize {
        self.tet_count
    }

    pub fn allows_boundary(&self) -> bool {
        self.allow_boundary
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Option<&Gluing> {
        self.pairing[tet][face].as_ref()
    }

    /// One gluing per glued face pair, the direction with the smaller
    /// `(tet, face)` first.
    pub fn gluings(&self) -> Vec<Gluing> {
        let mut out = Vec::new();
        for faces in &self.pairing {
            for g in faces.iter().flatten() {
                if (g.tet, g.face) < (g.to_tet, g.to_face) {
                    out.push(*g);
                }
            }
        }
        out
    }

    /// Serializes to the JSON input format.
    pub fn to_json(&self) -> String {
        let gluings: Vec<serde_json::Value> = self
            .gluings()
            .iter()
            .map(|g| {
                serde_json::json!({
                    "tet": g.tet,
                    "face": g.face,
                    "to_tet": g.to_tet,
                    "to_face": g.to_face,
                    "perm": g.perm.images(),
                })
            })
            .collect();
        let value = serde_json::json!({
            "tet_count": self.tet_count,
            "gluings": gluings,
        });
        serde_json::to_string_pretty(&value).expect("JSON values serialize")
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins, so representatives are deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Classes ordered by smallest member, members ascending.
    fn classes(&mut self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let n = self.parent.len();
        let mut index_of_root = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = vec![0; n];
        for x in 0..n {
            let r = self.find(x);
            if index_of_root[r] == usize::MAX {
                index_of_root[r] = classes.len();
                classes.push(Vec::new());
            }
            class_of[x] = index_of_root[r];
            classes[index_of_root[r]].push(x);
        }
        (classes, class_of)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Wedge {
    pub tet: usize,
    pub edge: usize,
}

impl Wedge {
    pub fn index(&self) -> usize {
        6 * self.tet + self.edge
    }

    pub fn from_index(w: usize) -> Wedge {
        Wedge {
            tet: w / 6,
            edge: w % 6,
        }
    }

    pub fn vertices(&self) -> (usize, usize) {
        EDGES[self.edge]
    }
}

/// A triangulation with its derived wedge, edge and vertex data. Immutable
/// after [`Triangulation::build`].
#[derive(Clone, Debug)]
pub struct Triangulation {
    spec: GluingSpec,
    edge_orbits: Vec<Vec<usize>>,
    edge_of_wedge: Vec<usize>,
    edge_closed: Vec<bool>,
    vertex_orbits: Vec<Vec<(usize, usize)>>,
    face_count: usize,
}

impl Triangulation {
    pub fn build(spec: GluingSpec) -> Triangulation {
        Self::build_in_order(spec, None)
    }

    /// Builds with the gluings processed in the given order (a permutation
    /// of the glued face pairs). The result does not depend on the order.
    pub fn build_in_order(spec: GluingSpec, order: Option<&[usize]>) -> Triangulation {
        let n = spec.tet_count;
        let gluings = spec.gluings();
        let order: Vec<usize> = match order {
            Some(o) => o.to_vec(),
            None => (0..gluings.len()).collect(),
        };

        let mut wedges = UnionFind::new(6 * n);
        let mut verts = UnionFind::new(4 * n);
        for &k in &order {
            let g = gluings[k];
            for v in (0..4).filter(|&v| v != g.face) {
                verts.union(4 * g.tet + v, 4 * g.to_tet + g.perm.apply(v));
            }
            for (e, &(a, b)) in EDGES.iter().enumerate() {
                if a == g.face || b == g.face {
                    continue;
                }
                let image = edge_index(g.perm.apply(a), g.perm.apply(b));
                wedges.union(6 * g.tet + e, 6 * g.to_tet + image);
            }
        }
        let (edge_orbits, edge_of_wedge) = wedges.classes();
        let (vclasses, _) = verts.classes();
        let vertex_orbits = vclasses
            .into_iter()
            .map(|c| c.into_iter().map(|x| (x / 4, x % 4)).collect())
            .collect();

        // an edge is interior iff both faces through each of its wedges are glued
        let edge_closed = edge_orbits
            .iter()
            .map(|orbit| {
                orbit.iter().all(|&w| {
                    let wedge = Wedge::from_index(w);
                    let (a, b) = wedge.vertices();
                    let (c, d) = complement(a, b);
                    spec.gluing(wedge.tet, c).is_some() && spec.gluing(wedge.tet, d).is_some()
                })
            })
            .collect();

        let glued_faces: usize = spec
            .pairing
            .iter()
            .map(|f| f.iter().filter(|g| g.is_some()).count())
            .sum();
        let face_count = glued_faces / 2 + (4 * n - glued_faces);

        Triangulation {
            spec,
            edge_orbits,
            edge_of_wedge,
            edge_closed,
            vertex_orbits,
            face_count,
        }
    }

    pub fn spec(&self) -> &GluingSpec {
        &self.spec
    }

    pub fn tet_count(&self) -> usize {
        self.spec.tet_count
    }

    pub fn wedge_count(&self) -> usize {
        6 * self.spec.tet_count
    }

    pub fn wedges(&self) -> impl Iterator<Item = Wedge> + '_ {
        (0..self.wedge_count()).map(Wedge::from_index)
    }

    /// Edge orbits as sorted lists of wedge indices, ordered by smallest
    /// wedge.
    pub fn edge_orbits(&self) -> &[Vec<usize>] {
        &self.edge_orbits
    }

    pub fn edge_of_wedge(&self, w: usize) -> usize {
        self.edge_of_wedge[w]
    }

    /// Whether edge `e` is interior (all faces around it glued). Only
    /// interior edges carry an angle-sum condition.
    pub fn edge_is_closed(&self, e: usize) -> bool {
        self.edge_closed[e]
    }

    pub fn vertex_orbits(&self) -> &[Vec<(usize, usize)>] {
        &self.vertex_orbits
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_orbits.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_orbits.len()
    }

    pub fn face_count(&self) -> usize {
        self.face_count
    }

    pub fn is_closed(&self) -> bool {
        self.spec
            .pairing
            .iter()
            .all(|f| f.iter().all(|g| g.is_some()))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count as i64
            - self.tet_count() as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub tetrahedra: usize,
    pub faces: usize,
    pub edges: usize,
    pub vertices: usize,
    pub closed: bool,
    pub edge_orbit_sizes: Vec<usize>,
    pub vertex_orbit_sizes: Vec<usize>,
    pub euler_characteristic: i64,
}

impl fmt::Display for OrbitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // run-length encode the orbit sizes: [3×10] or [2×3, 4×1]
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for &s in &self.edge_orbit_sizes {
            match runs.last_mut() {
                Some((size, count)) if *size == s => *count += 1,
                _ => runs.push((s, 1)),
            }
        }
        let sizes: Vec<String> = runs.iter().map(|(s, c)| format!("{s}×{c}")).collect();
        write!(
            f,
            "{} tets, {} edges, orbit sizes [{}]",
            self.tetrahedra,
            self.edges,
            sizes.join(", ")
        )
    }
}

pub fn edge_orbit_report(t: &Triangulation) -> OrbitReport {
    let mut edge_orbit_sizes: Vec<usize> = t.edge_orbits.iter().map(|o| o.len()).collect();
    edge_orbit_sizes.sort_unstable_by(|a, b| b.cmp(a));
    OrbitReport {
        tetrahedra: t.tet_count(),
        faces: t.face_count(),
        edges: t.edge_count(),
        vertices: t.vertex_count(),
        closed: t.is_closed(),
        edge_orbit_sizes,
        vertex_orbit_sizes: t.vertex_orbits.iter().map(|o| o.len()).collect(),
        euler_characteristic: t.euler_characteristic(),
    }
}

/// The boundary of the 4-simplex: tetrahedron `i` is the 4-subset of
/// `{0, …, 4}` omitting `i`, with local labels in ascending order.
pub fn boundary_of_four_simplex() -> GluingSpec {
    let subset = |omit: usize| -> Vec<usize> { (0..5).filter(|&x| x != omit).collect() };
    let mut gluings = Vec::new();
    for t in 0..5 {
        let mine = subset(t);
        for face in 0..4 {
            let other = mine[face];
            if other < t {
                continue;
            }
            let theirs = subset(other);
            let mut images = [0; 4];
            for (v, &g) in mine.iter().enumerate() {
                let target = if g == other { t } else { g };
                images[v] = theirs.iter().position(|&x| x == target).unwrap();
            }
            gluings.push(Gluing {
                tet: t,
                face,
                to_tet: other,
                to_face: images[face],
                perm: Perm4::new(images).unwrap(),
            });
        }
    }
    GluingSpec::new(5, &gluings, false).expect("the 4-simplex boundary is a closed triangulation")
}

/// Two tetrahedra glued face-to-face by the identity. Every edge has two
/// wedges, so no angle structure exists.
pub fn identity_double() -> GluingSpec {
    let gluings: Vec<Gluing> = (0..4)
        .map(|f| Gluing {
            tet: 0,
            face: f,
            to_tet: 1,
            to_face: f,
            perm: Perm4::IDENTITY,
        })
        .collect();
    GluingSpec::new(2, &gluings, false).expect("the identity double is closed")
}

/// A single unglued tetrahedron (boundary allowed).
pub fn single_tetrahedron() -> GluingSpec {
    GluingSpec::new(1, &[], true).expect("one tetrahedron")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_simplex_boundary_counts() {
        let spec = boundary_of_four_simplex();
        assert_eq!(spec.tet_count(), 5);
        assert_eq!(spec.gluings().len(), 10);
        let t = Triangulation::build(spec);
        assert_eq!(t.face_count(), 10);
        assert_eq!(t.edge_count(), 10);
        assert_eq!(t.vertex_count(), 5);
        assert!(t.edge_orbits().iter().all(|o| o.len() == 3));
        let r = edge_orbit_report(&t);
        assert_eq!(r.euler_characteristic, 0);
        assert_eq!(r.to_string(), "5 tets, 10 edges, orbit sizes [3×10]");
    }

    #[test]
    fn four_simplex_orbits_match_pairs_of_labels() {
        // independent count: edges of ∂Δ⁴ are 2-subsets of {0..4}, each in the
        // three tetrahedra omitting one of the other three labels
        let t = Triangulation::build(boundary_of_four_simplex());
        let global = |tet: usize, v: usize| (0..5).filter(|&x| x != tet).nth(v).unwrap();
        for orbit in t.edge_orbits() {
            let names: std::collections::BTreeSet<(usize, usize)> = orbit
                .iter()
                .map(|&w| {
                    let wedge = Wedge::from_index(w);
                    let (a, b) = wedge.vertices();
                    (global(wedge.tet, a), global(wedge.tet, b))
                })
                .collect();
            assert_eq!(names.len(), 1);
        }
    }

    #[test]
    fn single_tetrahedron_orbits() {
        let t = Triangulation::build(single_tetrahedron());
        assert_eq!(t.edge_count(), 6);
        assert!(t.edge_orbits().iter().all(|o| o.len() == 1));
        assert!((0..6).all(|e| !t.edge_is_closed(e)));
        assert_eq!(t.face_count(), 4);
        assert_eq!(edge_orbit_report(&t).vertex_orbit_sizes, vec![1; 4]);
    }

    #[test]
    fn identity_double_orbits() {
        let t = Triangulation::build(identity_double());
        assert_eq!(t.edge_count(), 6);
        assert!(t.edge_orbits().iter().all(|o| o.len() == 2));
        assert_eq!(t.vertex_count(), 4);
        assert_eq!(t.euler_characteristic(), 0);
    }

    #[test]
    fn parse_rejects_duplicate_and_unmatched_faces() {
        let dup = br#"{"tet_count": 2, "gluings": [
            {"tet":0,"face":0,"to_tet":1,"to_face":0,"perm":[0,1,2,3]},
            {"tet":0,"face":0,"to_tet":1,"to_face":1,"perm":[1,0,2,3]}]}"#;
        assert!(matches!(
            parse_triangulation_with(dup, true),
            Err(TriangulationError::DuplicateFace { tet: 0, face: 0, .. })
        ));
        assert!(matches!(
            parse_triangulation(br#"{"tet_count": 1, "gluings": []}"#),
            Err(TriangulationError::UnmatchedFace { tet: 0, face: 0 })
        ));
    }

    #[test]
    fn parse_rejects_bad_perms_and_syntax() {
        let not_bijective = br#"{"tet_count": 2, "gluings": [
            {"tet":0,"face":0,"to_tet":1,"to_face":0,"perm":[0,1,1,3]}]}"#;
        assert!(matches!(
            parse_triangulation_with(not_bijective, true),
            Err(TriangulationError::BadPerm { gluing: 0, .. })
        ));
        let wrong_face = br#"{"tet_count": 2, "gluings": [
            {"tet":0,"face":0,"to_tet":1,"to_face":1,"perm":[0,1,2,3]}]}"#;
        assert!(matches!(
            parse_triangulation_with(wrong_face, true),
            Err(TriangulationError::BadPerm { gluing: 0, .. })
        ));
        assert!(matches!(
            parse_triangulation(b"{\"tet_count\": 1, "),
            Err(TriangulationError::Syntax(_))
        ));
        assert!(matches!(
            parse_triangulation(br#"{"tet_count": 0, "gluings": []}"#),
            Err(TriangulationError::Empty)
        ));
        let out_of_range = br#"{"tet_count": 1, "gluings": [
            {"tet":0,"face":0,"to_tet":3,"to_face":0,"perm":[0,1,2,3]}]}"#;
        assert!(matches!(
            parse_triangulation_with(out_of_range, true),
            Err(TriangulationError::OutOfRange { field: "to_tet", value: 3, .. })
        ));
        let self_glued = br#"{"tet_count": 1, "gluings": [
            {"tet":0,"face":0,"to_tet":0,"to_face":0,"perm":[0,2,1,3]}]}"#;
        assert!(matches!(
            parse_triangulation_with(self_glued, true),
            Err(TriangulationError::SelfGluing { .. })
        ));
    }

    #[test]
    fn both_directions_may_be_given() {
        let both = br#"{"tet_count": 2, "gluings": [
            {"tet":0,"face":0,"to_tet":1,"to_face":0,"perm":[0,2,1,3]},
            {"tet":1,"face":0,"to_tet":0,"to_face":0,"perm":[0,2,1,3]}]}"#;
        let spec = parse_triangulation_with(both, true).unwrap();
        assert_eq!(spec.gluings().len(), 1);

        let inconsistent = br#"{"tet_count": 2, "gluings": [
            {"tet":0,"face":0,"to_tet":1,"to_face":0,"perm":[0,2,1,3]},
            {"tet":1,"face":0,"to_tet":0,"to_face":0,"perm":[0,1,3,2]}]}"#;
        assert!(matches!(
            parse_triangulation_with(inconsistent, true),
            Err(TriangulationError::NonInvolutive { .. })
        ));
    }

    #[test]
    fn perm_algebra() {
        let p = Perm4::new([2, 0, 3, 1]).unwrap();
        assert_eq!(p.compose(&p.inverse()), Perm4::IDENTITY);
        assert!(Perm4::new([0, 0, 1, 2]).is_none());
        assert!(Perm4::new([0, 1, 2, 4]).is_none());
    }

    #[test]
    fn json_round_trip() {
        let spec = boundary_of_four_simplex();
        let back = parse_triangulation(spec.to_json().as_bytes()).unwrap();
        assert_eq!(back, spec);
    }
}
