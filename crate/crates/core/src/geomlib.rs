//! Generalized edge lengths and Möbius triangles.
//!
//! A generalized length `l` lives in `ℝ_{<0} ∪ [0, iπ] ∪ (iπ + ℝ_{>0})`, the
//! domain on which `cosh` is a bijection onto `ℝ`. We store the real number
//! `cosh(l)` and recover the complex representative on demand.
//!
//! A Möbius triangle is any triple of angles in `(0, π)³`. Its edge lengths
//! are given by the dual cosine rule
//!
//! ```text
//! cosh(a₁) = (cos α₁ + cos α₂ cos α₃) / (sin α₂ sin α₃)
//! ```
//!
//! and the triple falls in exactly one of five regimes (spherical, hyperbolic,
//! Euclidean, flipped hyperbolic, flipped Euclidean).

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default tolerance on angle-sum and triangle-inequality residuals (radians).
pub const DEFAULT_EPS_CLASS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("non-finite value {0} where a finite real was expected")]
    NonFinite(f64),
    #[error("angle {index} = {value} is outside (0, π)")]
    AngleOutOfRange { index: usize, value: f64 },
    #[error("lengths are of Euclidean type (edge {index} has cosh = {cosh}); angles are not determined")]
    EuclideanLengths { index: usize, cosh: f64 },
    #[error("lengths are inconsistent: {0}")]
    InconsistentLengths(String),
}

/// The five regimes a generalized length can fall in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LengthClass {
    /// `l ∈ ℝ_{<0}`, `cosh(l) > 1`.
    NegativeReal,
    /// `l = 0`, `cosh(l) = 1`.
    Zero,
    /// `l ∈ i(0, π)`, `cosh(l) ∈ (−1, 1)`.
    ImaginaryOpen,
    /// `l = iπ`, `cosh(l) = −1`.
    IPi,
    /// `l ∈ iπ + ℝ_{>0}`, `cosh(l) < −1`.
    IPiPlusPositive,
}

/// Coarse geometric type shared by every edge of an angled simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoarseType {
    SphericalType,
    HyperbolicType,
    EuclideanType,
}

impl LengthClass {
    pub fn coarse(self) -> CoarseType {
        match self {
            LengthClass::ImaginaryOpen => CoarseType::SphericalType,
            LengthClass::NegativeReal | LengthClass::IPiPlusPositive => CoarseType::HyperbolicType,
            LengthClass::Zero | LengthClass::IPi => CoarseType::EuclideanType,
        }
    }

    /// True for the two classes carried by edges at a flipped vertex.
    pub fn is_flipped(self) -> bool {
        matches!(self, LengthClass::IPi | LengthClass::IPiPlusPositive)
    }
}

/// `sinh(l)` for a generalized length. Real for the hyperbolic family,
/// purely imaginary for the spherical family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SinhValue {
    Real(f64),
    Imaginary(f64),
}

/// An edge length in the extended domain, stored by its `cosh`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedLength {
    cosh_value: f64,
}

impl GeneralizedLength {
    pub fn from_cosh(c: f64) -> Result<Self, GeomError> {
        if !c.is_finite() {
            return Err(GeomError::NonFinite(c));
        }
        Ok(Self { cosh_value: c })
    }

    /// Rebuilds a length from its representative `re + i·im`.
    ///
    /// Only meaningful on the extended domain: `im = 0` with `re ≤ 0`,
    /// `re = 0` with `im ∈ [0, π]`, or `im = π` with `re ≥ 0`.
    pub fn from_components(re: f64, im: f64) -> Result<Self, GeomError> {
        Self::from_cosh(re.cosh() * im.cos())
    }

    pub fn cosh(&self) -> f64 {
        self.cosh_value
    }

    /// Class decided by the sign of `cosh ∓ 1`, with no tolerance band.
    pub fn class(&self) -> LengthClass {
        self.class_with_tolerance(0.0)
    }

    /// Class with closed bands `|cosh ∓ 1| ≤ tol` mapped to `Zero` / `IPi`.
    pub fn class_with_tolerance(&self, tol: f64) -> LengthClass {
        let c = self.cosh_value;
        if (c - 1.0).abs() <= tol {
            LengthClass::Zero
        } else if (c + 1.0).abs() <= tol {
            LengthClass::IPi
        } else if c > 1.0 {
            LengthClass::NegativeReal
        } else if c < -1.0 {
            LengthClass::IPiPlusPositive
        } else {
            LengthClass::ImaginaryOpen
        }
    }

    /// The representative `(re, im)` with `l = re + i·im`.
    pub fn components(&self) -> (f64, f64) {
        let c = self.cosh_value;
        if c > 1.0 {
            (-c.acosh(), 0.0)
        } else if c < -1.0 {
            ((-c).acosh(), PI)
        } else {
            (0.0, c.acos())
        }
    }

    pub fn re(&self) -> f64 {
        self.components().0
    }

    pub fn im(&self) -> f64 {
        self.components().1
    }

    /// `sinh(l)` on the extended domain. Negative reals have negative sinh,
    /// and `sinh(iπ + r) = −sinh(r)`.
    pub fn sinh(&self) -> SinhValue {
        let c = self.cosh_value;
        let sq = (c - 1.0) * (c + 1.0);
        if sq > 0.0 {
            SinhValue::Real(-sq.sqrt())
        } else {
            SinhValue::Imaginary((-sq).sqrt())
        }
    }
}

impl fmt::Display for GeneralizedLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.components();
        write!(f, "{re} + {im}i")
    }
}

/// `Re(l) + Im(l)`, the coefficient of `dα` in the doubled Schläfli form.
///
/// Continuous in `cosh(l)`: it passes through 0 at `cosh = 1` and through π at
/// `cosh = −1`.
pub fn schlafli_weight(l: &GeneralizedLength) -> f64 {
    let (re, im) = l.components();
    re + im
}

/// `q = (cos x + cos y cos z) / (sin y sin z)` together with `q − 1` and
/// `q + 1`, the latter two in product form so that they keep full relative
/// precision near the degenerate loci.
#[derive(Clone, Copy, Debug)]
pub(crate) struct CosineRule {
    pub value: f64,
    pub minus_one: f64,
    pub plus_one: f64,
}

pub(crate) fn cosine_rule(x: f64, y: f64, z: f64) -> CosineRule {
    let den = y.sin() * z.sin();
    let s = x + y + z;
    // cos x + cos(y + z) = −2 sin((s − π)/2) cos((y + z − x)/2)
    let minus_one = -2.0 * ((s - PI) / 2.0).sin() * ((y + z - x) / 2.0).cos() / den;
    // cos x + cos(y − z) = 2 cos((x + y − z)/2) cos((x − y + z)/2)
    let plus_one = 2.0 * ((x + y - z) / 2.0).cos() * ((x - y + z) / 2.0).cos() / den;
    let value = if minus_one.abs() <= plus_one.abs() {
        1.0 + minus_one
    } else {
        plus_one - 1.0
    };
    CosineRule {
        value,
        minus_one,
        plus_one,
    }
}

/// A triple of angles in `(0, π)³`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobiusTriangle {
    angles: [f64; 3],
}

impl MobiusTriangle {
    pub fn new(angles: [f64; 3]) -> Result<Self, GeomError> {
        for (index, &value) in angles.iter().enumerate() {
            if !value.is_finite() {
                return Err(GeomError::NonFinite(value));
            }
            if value <= 0.0 || value >= PI {
                return Err(GeomError::AngleOutOfRange { index, value });
            }
        }
        Ok(Self { angles })
    }

    pub fn angles(&self) -> [f64; 3] {
        self.angles
    }

    pub fn angle_sum(&self) -> f64 {
        self.angles.iter().sum()
    }

    /// `αᵢ + π − αⱼ − α_k` for each `i`; positive iff the i-th triangle
    /// inequality holds strictly.
    pub fn ti_residuals(&self) -> [f64; 3] {
        let [a, b, c] = self.angles;
        [a + PI - b - c, b + PI - a - c, c + PI - a - b]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriangleKind {
    Spherical,
    Hyperbolic,
    Euclidean,
    FlippedHyperbolic,
    FlippedEuclidean,
}

/// Classification of a Möbius triangle. `flip_apex` is the 0-based index `i`
/// with `αⱼ + α_k ≥ αᵢ + π`, present exactly for the flipped kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TriangleType {
    pub kind: TriangleKind,
    pub flip_apex: Option<usize>,
}

impl TriangleType {
    /// Length classes of the three edges (edge `i` opposite vertex `i`) that
    /// this type forces.
    pub fn length_pattern(&self) -> [LengthClass; 3] {
        use LengthClass::*;
        match (self.kind, self.flip_apex) {
            (TriangleKind::Spherical, _) => [ImaginaryOpen; 3],
            (TriangleKind::Hyperbolic, _) => [NegativeReal; 3],
            (TriangleKind::Euclidean, _) => [Zero; 3],
            (TriangleKind::FlippedHyperbolic, Some(i)) => {
                let mut p = [IPiPlusPositive; 3];
                p[i] = NegativeReal;
                p
            }
            (TriangleKind::FlippedEuclidean, Some(i)) => {
                let mut p = [IPi; 3];
                p[i] = Zero;
                p
            }
            _ => unreachable!("flipped triangle types always carry an apex"),
        }
    }
}

/// Edge lengths `aᵢ` (opposite `αᵢ`) from the dual cosine rule.
pub fn triangle_edge_lengths(t: &MobiusTriangle) -> [GeneralizedLength; 3] {
    let [a, b, c] = t.angles;
    [
        GeneralizedLength {
            cosh_value: cosine_rule(a, b, c).value,
        },
        GeneralizedLength {
            cosh_value: cosine_rule(b, a, c).value,
        },
        GeneralizedLength {
            cosh_value: cosine_rule(c, a, b).value,
        },
    ]
}

/// Five-way classification with closed equality bands of width `eps_class`.
pub fn classify_triangle(t: &MobiusTriangle, eps_class: f64) -> TriangleType {
    let residuals = t.ti_residuals();
    // At most one residual can be non-positive: rᵢ + rⱼ = 2π − 2α_k > 0.
    let (apex, &r) = residuals
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("three residuals");
    if r < -eps_class {
        return TriangleType {
            kind: TriangleKind::FlippedHyperbolic,
            flip_apex: Some(apex),
        };
    }
    if r <= eps_class {
        return TriangleType {
            kind: TriangleKind::FlippedEuclidean,
            flip_apex: Some(apex),
        };
    }
    let excess = t.angle_sum() - PI;
    let kind = if excess.abs() <= eps_class {
        TriangleKind::Euclidean
    } else if excess > 0.0 {
        TriangleKind::Spherical
    } else {
        TriangleKind::Hyperbolic
    };
    TriangleType {
        kind,
        flip_apex: None,
    }
}

/// Recovers the angles from three edge lengths through
/// `cos α₁ = (−cosh a₁ + cosh a₂ cosh a₃) / (sinh a₂ sinh a₃)`.
///
/// Lengths of Euclidean type (any `cosh` within `eps_class` of ±1) are
/// rejected since the rule degenerates there.
pub fn angles_from_lengths(
    lengths: [GeneralizedLength; 3],
    eps_class: f64,
) -> Result<MobiusTriangle, GeomError> {
    for (index, l) in lengths.iter().enumerate() {
        let c = l.cosh();
        if (c - 1.0).abs() <= eps_class || (c + 1.0).abs() <= eps_class {
            return Err(GeomError::EuclideanLengths { index, cosh: c });
        }
    }
    let sinh = lengths.map(|l| l.sinh());
    let mut angles = [0.0; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let den = match (sinh[j], sinh[k]) {
            (SinhValue::Real(x), SinhValue::Real(y)) => x * y,
            (SinhValue::Imaginary(x), SinhValue::Imaginary(y)) => -x * y,
            _ => {
                return Err(GeomError::InconsistentLengths(format!(
                    "edges {j} and {k} belong to different families"
                )))
            }
        };
        let num = -lengths[i].cosh() + lengths[j].cosh() * lengths[k].cosh();
        let mut cos = num / den;
        if cos.abs() > 1.0 + eps_class {
            return Err(GeomError::InconsistentLengths(format!(
                "cos α{i} = {cos} is outside [−1, 1]"
            )));
        }
        cos = cos.clamp(-1.0, 1.0);
        angles[i] = cos.acos();
    }
    MobiusTriangle::new(angles).map_err(|e| GeomError::InconsistentLengths(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    /// arccosh by bisection on `cosh`, independent of `f64::acosh`.
    fn acosh_bisect(c: f64) -> f64 {
        let (mut lo, mut hi) = (0.0_f64, 50.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid.cosh() < c {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn len(c: f64) -> GeneralizedLength {
        GeneralizedLength::from_cosh(c).unwrap()
    }

    #[test]
    fn from_cosh_examples() {
        let l = len(1.0);
        assert_eq!(l.class(), LengthClass::Zero);
        assert_eq!(l.components(), (0.0, 0.0));

        let l = len(0.0);
        assert_eq!(l.class(), LengthClass::ImaginaryOpen);
        assert!((l.im() - FRAC_PI_2).abs() < 1e-15);

        let l = len(-1.0);
        assert_eq!(l.class(), LengthClass::IPi);
        assert_eq!(l.components(), (0.0, PI));

        let a2 = acosh_bisect(2.0);
        assert!((a2 - 1.3169578969248166).abs() < 1e-13);
        let l = len(2.0);
        assert_eq!(l.class(), LengthClass::NegativeReal);
        assert!((l.re() + a2).abs() < 1e-13);
        assert_eq!(l.im(), 0.0);

        let l = len(-2.0);
        assert_eq!(l.class(), LengthClass::IPiPlusPositive);
        assert!((l.re() - a2).abs() < 1e-13);
        assert_eq!(l.im(), PI);
    }

    #[test]
    fn non_finite_cosh_is_rejected() {
        assert!(GeneralizedLength::from_cosh(f64::NAN).is_err());
        assert!(GeneralizedLength::from_cosh(f64::INFINITY).is_err());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(schlafli_weight(&len(1.0)), 0.0);
        assert_eq!(schlafli_weight(&len(-1.0)), PI);
        let w = schlafli_weight(&len(-2.0));
        assert!((w - (PI + acosh_bisect(2.0))).abs() < 1e-13);
    }

    #[test]
    fn weight_is_continuous_across_unit_cosh() {
        for center in [1.0_f64, -1.0] {
            let w0 = schlafli_weight(&len(center));
            let mut prev = f64::INFINITY;
            for k in 3..=8 {
                let d = 10f64.powi(-k);
                let gap = (schlafli_weight(&len(center + d)) - w0)
                    .abs()
                    .max((schlafli_weight(&len(center - d)) - w0).abs());
                // square-root modulus: gap ≈ √(2d)
                assert!(gap <= 2.0 * (2.0 * d).sqrt(), "c = {center}, d = {d}");
                assert!(gap < prev);
                prev = gap;
            }
        }
    }

    #[test]
    fn components_round_trip() {
        for c in [-5.0, -1.5, -1.0, -0.3, 0.0, 0.7, 1.0, 1.0001, 3.0, 40.0] {
            let l = len(c);
            let (re, im) = l.components();
            let back = GeneralizedLength::from_components(re, im).unwrap();
            assert!((back.cosh() - c).abs() <= 1e-12 * c.abs().max(1.0), "{c}");
        }
    }

    #[test]
    fn edge_length_examples() {
        let t = MobiusTriangle::new([FRAC_PI_2; 3]).unwrap();
        for l in triangle_edge_lengths(&t) {
            assert!(l.cosh().abs() < 1e-15);
            assert!((l.im() - FRAC_PI_2).abs() < 1e-15);
        }

        let t = MobiusTriangle::new([PI / 3.0; 3]).unwrap();
        for l in triangle_edge_lengths(&t) {
            assert!((l.cosh() - 1.0).abs() < 1e-15);
            assert_eq!(l.class_with_tolerance(1e-12), LengthClass::Zero);
        }

        let t = MobiusTriangle::new([PI / 6.0; 3]).unwrap();
        let expected = -acosh_bisect(3.0 + 2.0 * 3f64.sqrt());
        let c = 3.0 + 2.0 * 3f64.sqrt();
        assert!((expected + (c + (c * c - 1.0).sqrt()).ln()).abs() < 1e-12);
        for l in triangle_edge_lengths(&t) {
            assert!((l.re() - expected).abs() < 1e-12);
        }

        let t = MobiusTriangle::new([PI / 6.0, FRAC_PI_2, 2.0 * PI / 3.0]).unwrap();
        let [a1, a2, a3] = triangle_edge_lengths(&t);
        assert!((a1.cosh() - 1.0).abs() < 1e-14);
        assert!((a2.cosh() + 1.0).abs() < 1e-14);
        assert!((a3.cosh() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn classification_examples() {
        let eps = DEFAULT_EPS_CLASS;
        let t = MobiusTriangle::new([FRAC_PI_2; 3]).unwrap();
        assert_eq!(classify_triangle(&t, eps).kind, TriangleKind::Spherical);

        let t = MobiusTriangle::new([PI / 6.0, 5.0 * PI / 6.0, 5.0 * PI / 6.0]).unwrap();
        let ty = classify_triangle(&t, eps);
        assert_eq!(ty.kind, TriangleKind::FlippedHyperbolic);
        assert_eq!(ty.flip_apex, Some(0));

        let t = MobiusTriangle::new([PI / 3.0; 3]).unwrap();
        assert_eq!(classify_triangle(&t, eps).kind, TriangleKind::Euclidean);

        let t = MobiusTriangle::new([PI / 6.0, FRAC_PI_2, 2.0 * PI / 3.0]).unwrap();
        let ty = classify_triangle(&t, eps);
        assert_eq!(ty.kind, TriangleKind::FlippedEuclidean);
        assert_eq!(ty.flip_apex, Some(0));
        assert_eq!(
            ty.length_pattern(),
            [LengthClass::Zero, LengthClass::IPi, LengthClass::IPi]
        );
    }

    #[test]
    fn angles_from_lengths_examples() {
        let eps = DEFAULT_EPS_CLASS;
        for angles in [
            [PI / 6.0; 3],
            [PI / 6.0, 5.0 * PI / 6.0, 5.0 * PI / 6.0],
            [0.4, 2.9, 2.7],
        ] {
            let t = MobiusTriangle::new(angles).unwrap();
            let back = angles_from_lengths(triangle_edge_lengths(&t), eps).unwrap();
            for (a, b) in angles.iter().zip(back.angles()) {
                assert!((a - b).abs() < 1e-10, "{angles:?} -> {:?}", back.angles());
            }
        }

        let right = angles_from_lengths([len(0.0); 3], eps).unwrap();
        for a in right.angles() {
            assert!((a - FRAC_PI_2).abs() < 1e-15);
        }
    }

    #[test]
    fn angles_from_lengths_rejects_euclidean_and_mixed_input() {
        let eps = DEFAULT_EPS_CLASS;
        assert!(matches!(
            angles_from_lengths([len(1.0); 3], eps),
            Err(GeomError::EuclideanLengths { index: 0, .. })
        ));
        assert!(matches!(
            angles_from_lengths([len(0.5), len(2.0), len(0.2)], eps),
            Err(GeomError::InconsistentLengths(_))
        ));
        // three spherical sides of length 0.7π have perimeter above 2π
        let c = (0.7 * PI).cos();
        assert!(matches!(
            angles_from_lengths([len(c); 3], eps),
            Err(GeomError::InconsistentLengths(_))
        ));
    }

    #[test]
    fn triangle_angles_are_validated() {
        assert!(MobiusTriangle::new([0.0, 1.0, 1.0]).is_err());
        assert!(MobiusTriangle::new([PI, 1.0, 1.0]).is_err());
        assert!(MobiusTriangle::new([f64::NAN, 1.0, 1.0]).is_err());
    }
}
