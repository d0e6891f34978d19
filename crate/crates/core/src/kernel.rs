//! Projective model of hyperbolic 3-space.
//!
//! Points are homogeneous 4-vectors `(x⁰, x¹, x², x³)` and planes are linear
//! forms on them. The model carries the Lorentz form
//! `⟨x, y⟩ = −x⁰y⁰ + x¹y¹ + x²y² + x³y³`; proper points satisfy `⟨x, x⟩ < 0`,
//! the absolute (ideal boundary) is `⟨x, x⟩ = 0`, and everything else is an
//! outer point. In affine coordinates `x⁰ = 1` the proper points fill the open
//! unit ball.

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative band around the absolute for [`classify`].
pub const IDEAL_TOLERANCE: f64 = 1e-10;

/// The Lorentz form as a matrix.
pub fn lorentz_metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

#[inline]
pub(crate) fn lorentz(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn check_vector(v: &Vector4<f64>, what: &str) -> Result<()> {
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput(format!("{what} has non-finite coordinates")));
    }
    if v.iter().all(|&c| c == 0.0) {
        return Err(Error::InvalidInput(format!("{what} is the zero vector")));
    }
    Ok(())
}

/// A point of real projective 3-space, given by a homogeneous representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectivePoint(Vector4<f64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointClass {
    Interior,
    Ideal,
    Exterior,
}

impl ProjectivePoint {
    pub fn new(coords: [f64; 4]) -> Result<Self> {
        Self::from_vector(Vector4::from(coords))
    }

    pub fn from_vector(v: Vector4<f64>) -> Result<Self> {
        check_vector(&v, "point")?;
        Ok(Self(v))
    }

    /// The point with affine (ball) coordinates `(x, y, z)`.
    pub fn affine(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new([1.0, x, y, z])
    }

    /// Centre of the ball model.
    pub fn origin() -> Self {
        Self(Vector4::new(1.0, 0.0, 0.0, 0.0))
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    pub fn vector(&self) -> &Vector4<f64> {
        &self.0
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        if k == 0.0 || !k.is_finite() {
            return Err(Error::InvalidInput(format!("scale factor {k}")));
        }
        Ok(Self(self.0 * k))
    }

    /// Representative with `x⁰ = 1`.
    pub fn normalized(&self) -> Result<Self> {
        let w = self.0[0];
        if w == 0.0 || (w.abs() <= 1e-300) {
            return Err(Error::Domain(
                "point at infinity of the affine chart (x0 = 0)".into(),
            ));
        }
        Ok(Self(self.0 / w))
    }

    pub fn affine_coords(&self) -> Result<[f64; 3]> {
        let n = self.normalized()?;
        Ok([n.0[1], n.0[2], n.0[3]])
    }

    pub fn self_product(&self) -> f64 {
        lorentz(&self.0, &self.0)
    }

    pub fn classify(&self) -> PointClass {
        let q = self.self_product();
        let scale = self.0.norm_squared();
        if q < -IDEAL_TOLERANCE * scale {
            PointClass::Interior
        } else if q.abs() <= IDEAL_TOLERANCE * scale {
            PointClass::Ideal
        } else {
            PointClass::Exterior
        }
    }

    /// Representative on the upper sheet of the hyperboloid `⟨x, x⟩ = −1`.
    pub fn hyperboloid(&self) -> Result<Vector4<f64>> {
        let n = self.normalized()?;
        let q = n.self_product();
        if !(q < 0.0) {
            return Err(Error::Domain(format!(
                "point {:?} is not a proper point",
                self.coords()
            )));
        }
        Ok(n.0 / (-q).sqrt())
    }

    /// Image under `x¹ ↦ −x¹`, the symmetry plane of the tetrahedron family.
    pub fn mirrored(&self) -> Self {
        Self(Vector4::new(self.0[0], -self.0[1], self.0[2], self.0[3]))
    }

    /// Euclidean distance between the affine images of two points.
    pub fn affine_distance(&self, other: &ProjectivePoint) -> Result<f64> {
        let a = self.normalized()?;
        let b = other.normalized()?;
        Ok((a.0 - b.0).norm())
    }

    /// Whether two representatives describe the same projective point.
    pub fn same_as(&self, other: &ProjectivePoint, tol: f64) -> bool {
        let a = self.0.normalize();
        let b = other.0.normalize();
        (a - b).norm() <= tol || (a + b).norm() <= tol
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.normalized() {
            Ok(n) => n.coords().serialize(s),
            Err(_) => self.coords().serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let c = <[f64; 4]>::deserialize(d)?;
        ProjectivePoint::new(c).map_err(serde::de::Error::custom)
    }
}

/// The bilinear form of signature (1, 3) on representatives, without normalization.
pub fn lorentz_product(x: &ProjectivePoint, y: &ProjectivePoint) -> f64 {
    lorentz(&x.0, &y.0)
}

pub fn classify(x: &ProjectivePoint) -> PointClass {
    x.classify()
}

/// Hyperbolic distance (curvature −1) between two proper points.
///
/// Evaluated as `2·asinh(½·√⟨x̂ − ŷ, x̂ − ŷ⟩)` on hyperboloid representatives,
/// which equals `arccosh(−⟨x, y⟩ / √(⟨x, x⟩⟨y, y⟩))` but keeps full relative
/// accuracy for short segments.
pub fn hyperbolic_distance(x: &ProjectivePoint, y: &ProjectivePoint) -> Result<f64> {
    for p in [x, y] {
        if p.classify() != PointClass::Interior {
            return Err(Error::Domain(format!(
                "distance needs proper points, got {:?} ({:?})",
                p.coords(),
                p.classify()
            )));
        }
    }
    let hx = x.hyperboloid()?;
    let hy = y.hyperboloid()?;
    let d = hx - hy;
    let mut q = lorentz(&d, &d);
    if q < 0.0 {
        log::debug!("clamping negative chord form {q:e} to zero");
        q = 0.0;
    }
    Ok(2.0 * (0.5 * q.sqrt()).asinh())
}

/// A plane, as the linear form `u(x) = Σ uᵢ xⁱ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneCovector(Vector4<f64>);

impl PlaneCovector {
    pub fn new(coeffs: [f64; 4]) -> Result<Self> {
        let v = Vector4::from(coeffs);
        check_vector(&v, "plane covector")?;
        Ok(Self(v))
    }

    pub fn coeffs(&self) -> [f64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    pub fn value(&self, x: &ProjectivePoint) -> f64 {
        self.0.dot(&x.0)
    }

    /// Value at the normalized point, divided by the Euclidean norm of the
    /// spatial part: the signed Euclidean distance of the affine image.
    pub fn normalized_value(&self, x: &ProjectivePoint) -> Result<f64> {
        let n = x.normalized()?;
        let g = (self.0[1].powi(2) + self.0[2].powi(2) + self.0[3].powi(2)).sqrt();
        if g == 0.0 {
            return Err(Error::Degenerate("plane at infinity".into()));
        }
        Ok(self.0.dot(&n.0) / g)
    }

    /// The pole `u*` of the plane: `⟨u*, y⟩ = u(y)` for all `y`.
    pub fn pole(&self) -> ProjectivePoint {
        ProjectivePoint(Vector4::new(-self.0[0], self.0[1], self.0[2], self.0[3]))
    }

    /// Whether the plane cuts through the open ball (its pole is an outer point).
    pub fn meets_interior(&self) -> bool {
        self.pole().classify() == PointClass::Exterior
    }
}

/// The polar plane of `x` with respect to the absolute.
pub fn polar_plane(x: &ProjectivePoint) -> Result<PlaneCovector> {
    check_vector(&x.0, "point")?;
    let v = x.0;
    PlaneCovector::new([-v[0], v[1], v[2], v[3]])
}

/// Foot of the perpendicular dropped from `x` onto the plane `u`.
///
/// `x` may be proper or ideal; the result is normalized to `x⁰ = 1`.
pub fn foot_of_perpendicular(x: &ProjectivePoint, u: &PlaneCovector) -> Result<ProjectivePoint> {
    if x.classify() == PointClass::Exterior {
        return Err(Error::Domain("foot of perpendicular from an outer point".into()));
    }
    let xn = x.normalized()?;
    let p = u.pole();
    let pp = lorentz(&p.0, &p.0);
    let scale = p.0.norm_squared();
    if pp <= IDEAL_TOLERANCE * scale {
        return Err(Error::Domain(
            "plane does not meet the interior of the model".into(),
        ));
    }
    let y = xn.0 - p.0 * (lorentz(&xn.0, &p.0) / pp);
    ProjectivePoint::from_vector(y)?.normalized()
}

/// The plane through three projectively independent points.
pub fn plane_from_points(
    p: &ProjectivePoint,
    q: &ProjectivePoint,
    r: &ProjectivePoint,
) -> Result<PlaneCovector> {
    // Work with unit representatives so the degeneracy test is scale free.
    let a = p.0.normalize();
    let b = q.0.normalize();
    let c = r.0.normalize();
    let minor = |i: usize, j: usize, k: usize| {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
            + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    let u = Vector4::new(minor(1, 2, 3), -minor(0, 2, 3), minor(0, 1, 3), -minor(0, 1, 2));
    if u.norm() < 1e-12 {
        return Err(Error::Degenerate("points are collinear or coincident".into()));
    }
    PlaneCovector::new([u[0], u[1], u[2], u[3]])
}

/// A quadric surface `xᵀQx = 0` with symmetric `Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadric(Matrix4<f64>);

impl Quadric {
    /// Builds the quadric from any matrix; only the symmetric part is kept.
    pub fn new(m: Matrix4<f64>) -> Self {
        Self((m + m.transpose()) * 0.5)
    }

    /// The absolute `⟨x, x⟩ = 0`.
    pub fn absolute() -> Self {
        Self(lorentz_metric())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn eval(&self, x: &ProjectivePoint) -> f64 {
        self.bilinear(&x.0, &x.0)
    }

    pub(crate) fn bilinear(&self, a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
        (a.transpose() * self.0 * b)[(0, 0)]
    }

    /// Value at the normalized point; the sign is the side of the surface.
    pub fn eval_normalized(&self, x: &ProjectivePoint) -> Result<f64> {
        let n = x.normalized()?;
        Ok(self.eval(&n))
    }

    /// The quadric carried along by the projective map `x ↦ Tx`.
    pub fn transformed(&self, t: &Matrix4<f64>) -> Result<Self> {
        let inv = t
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("singular transform".into()))?;
        Ok(Self::new(inv.transpose() * self.0 * inv))
    }
}

/// One parameter value where a segment meets a quadric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SegmentRoot {
    pub t: f64,
    /// Double root: the segment's line touches the surface here.
    pub tangent: bool,
}

/// Parameters `t ∈ [0, 1]` where `a + t(b − a)` (both normalized) lies on `q`.
pub fn segment_quadric_intersection(
    a: &ProjectivePoint,
    b: &ProjectivePoint,
    q: &Quadric,
) -> Result<Vec<SegmentRoot>> {
    let a = a.normalized()?;
    let b = b.normalized()?;
    let d = b.0 - a.0;
    let span = d.norm();
    if span <= 1e-14 {
        return Err(Error::Degenerate("segment endpoints coincide".into()));
    }
    let qa = q.bilinear(&a.0, &a.0);
    let half_b = q.bilinear(&a.0, &d);
    let qd = q.bilinear(&d, &d);
    let scale = q.0.abs().max().max(f64::MIN_POSITIVE) * (a.0.norm_squared() + d.norm_squared());
    let mut roots = Vec::with_capacity(2);
    if qd.abs() <= 1e-14 * scale {
        if half_b.abs() > 1e-14 * scale {
            roots.push(SegmentRoot {
                t: -qa / (2.0 * half_b),
                tangent: false,
            });
        }
    } else {
        let disc = half_b * half_b - qd * qa;
        let disc_scale = half_b * half_b + (qd * qa).abs();
        if disc.abs() <= 1e-12 * disc_scale {
            roots.push(SegmentRoot {
                t: -half_b / qd,
                tangent: true,
            });
        } else if disc > 0.0 {
            let sq = disc.sqrt();
            let k = -(half_b + half_b.signum() * sq);
            let (t1, t2) = if k == 0.0 {
                (sq / qd, -sq / qd)
            } else {
                (k / qd, qa / k)
            };
            roots.push(SegmentRoot {
                t: t1,
                tangent: false,
            });
            roots.push(SegmentRoot {
                t: t2,
                tangent: false,
            });
        }
    }
    const EDGE: f64 = 1e-12;
    let mut out: Vec<SegmentRoot> = roots
        .into_iter()
        .filter(|r| r.t >= -EDGE && r.t <= 1.0 + EDGE)
        .map(|r| SegmentRoot {
            t: r.t.clamp(0.0, 1.0),
            tangent: r.tangent,
        })
        .collect();
    out.sort_by(|x, y| x.t.total_cmp(&y.t));
    Ok(out)
}

/// Point `a + t(b − a)` of the segment between the normalized endpoints.
pub fn segment_point(a: &ProjectivePoint, b: &ProjectivePoint, t: f64) -> Result<ProjectivePoint> {
    let a = a.normalized()?;
    let b = b.normalized()?;
    ProjectivePoint::from_vector(a.0 + (b.0 - a.0) * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: [f64; 4]) -> ProjectivePoint {
        ProjectivePoint::new(c).unwrap()
    }

    #[test]
    fn lorentz_product_examples() {
        assert_eq!(lorentz_product(&p([1., 0., 0., 1.]), &p([1., 0., 0., 1.])), 0.0);
        assert_eq!(lorentz_product(&p([1., 0., 0., 0.]), &p([1., 0., 0., 0.])), -1.0);
        assert_eq!(lorentz_product(&p([1., 0., 0., 0.]), &p([1., 0., 0., 1.])), -1.0);
    }

    #[test]
    fn classify_examples() {
        let s = 3f64.sqrt() / 2.0;
        assert_eq!(p([1., 0., 0., 0.]).classify(), PointClass::Interior);
        assert_eq!(p([1., s, 0., -0.5]).classify(), PointClass::Ideal);
        assert_eq!(p([1., 2., 0., 0.]).classify(), PointClass::Exterior);
        assert!(ProjectivePoint::new([0.0; 4]).is_err());
        assert!(ProjectivePoint::new([1.0, f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn distance_examples() {
        let o = ProjectivePoint::origin();
        assert_eq!(hyperbolic_distance(&o, &o).unwrap(), 0.0);
        let d = hyperbolic_distance(&o, &p([1., 0., 0., 0.5])).unwrap();
        assert!((d - (2.0 / 3f64.sqrt()).acosh()).abs() < 1e-15);
        assert!((d - 0.5493061443340549).abs() < 1e-12);
        assert!(matches!(
            hyperbolic_distance(&o, &p([1., 0., 0., 1.])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn polar_plane_examples() {
        let u = polar_plane(&ProjectivePoint::origin()).unwrap();
        assert_eq!(u.coeffs(), [-1.0, 0.0, 0.0, 0.0]);
        assert_eq!(u.value(&p([0., 1., 2., 3.])), 0.0);

        let e3 = p([1., 0., 0., 1.]);
        assert_eq!(polar_plane(&e3).unwrap().value(&e3), 0.0);

        // Polar of a proper point lies outside the closed ball: every incident
        // point is an outer point.
        let u = polar_plane(&p([1., 0., 0., 0.5])).unwrap();
        for (x, y) in [(0.0, 0.0), (0.3, -0.4), (-1.0, 2.0), (5.0, 0.1)] {
            // u = (-1, 0, 0, 0.5): affine plane z = 2.
            let y_pt = p([1., x, y, 2.0]);
            assert!(u.value(&y_pt).abs() < 1e-15);
            assert!(lorentz_product(&y_pt, &y_pt) > 0.0);
        }
        assert!(polar_plane(&ProjectivePoint::new([0.0, 0.0, 0.0, 1.0]).unwrap()).is_ok());
    }

    #[test]
    fn foot_examples() {
        let u = PlaneCovector::new([0., 0., 0., 1.]).unwrap();
        let y = foot_of_perpendicular(&p([1., 0., 0., 0.5]), &u).unwrap();
        assert!((y.coords()[3]).abs() < 1e-15 && (y.coords()[0] - 1.0).abs() < 1e-15);

        let on = p([1., 0.2, 0.1, 0.0]);
        let y = foot_of_perpendicular(&on, &u).unwrap();
        assert!(y.same_as(&on, 1e-15));

        // Plane through E0 E1 E2 of the regular member of the family.
        let s = 3f64.sqrt() / 2.0;
        let face = plane_from_points(
            &p([1., 0., 1., 0.]),
            &p([1., s, 0., -0.5]),
            &p([1., -s, 0., -0.5]),
        )
        .unwrap();
        let y = foot_of_perpendicular(&p([1., 0., 0., 1.]), &face).unwrap();
        let c = y.coords();
        assert!(c[1].abs() < 1e-15);
        assert!((c[2] - 3.0 / 7.0).abs() < 1e-14, "{c:?}");
        assert!((c[3] + 2.0 / 7.0).abs() < 1e-14, "{c:?}");

        // A plane missing the ball has no perpendicular foot.
        let outside = PlaneCovector::new([-2.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(foot_of_perpendicular(&ProjectivePoint::origin(), &outside).is_err());
    }

    #[test]
    fn plane_from_points_examples() {
        let u = plane_from_points(&p([1., 0., 0., 0.]), &p([1., 1., 0., 0.]), &p([1., 0., 1., 0.])).unwrap();
        let c = u.coeffs();
        assert!(c[0].abs() < 1e-15 && c[1].abs() < 1e-15 && c[2].abs() < 1e-15);
        assert!(c[3].abs() > 0.1);

        let err = plane_from_points(&p([1., 0., 0., 0.]), &p([1., 1., 0., 0.]), &p([1., 2., 0., 0.]));
        assert!(matches!(err, Err(Error::Degenerate(_))));
        let err = plane_from_points(&p([1., 0., 0., 0.]), &p([2., 0., 0., 0.]), &p([1., 0., 1., 0.]));
        assert!(matches!(err, Err(Error::Degenerate(_))));
    }

    #[test]
    fn plane_permutation_changes_only_scale() {
        let s = 3f64.sqrt() / 2.0;
        let pts = [p([1., s, 0., -0.5]), p([1., -s, 0., -0.5]), p([1., 0., 0., 1.])];
        let u = plane_from_points(&pts[0], &pts[1], &pts[2])
            .unwrap()
            .0
            .normalize();
        for perm in [[1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0]] {
            let v = plane_from_points(&pts[perm[0]], &pts[perm[1]], &pts[perm[2]])
                .unwrap()
                .0
                .normalize();
            assert!((u - v).norm() < 1e-14 || (u + v).norm() < 1e-14);
        }
        for q in &pts {
            let w = plane_from_points(&pts[0], &pts[1], &pts[2]).unwrap();
            assert!(w.value(q).abs() < 1e-12);
        }
    }

    #[test]
    fn segment_against_absolute() {
        let roots = segment_quadric_intersection(
            &ProjectivePoint::origin(),
            &p([1., 0., 0., 1.]),
            &Quadric::absolute(),
        )
        .unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0].t - 1.0).abs() < 1e-15);

        // Tangent line at the ideal point (0, 0, 1).
        let roots =
            segment_quadric_intersection(&p([1., -1., 0., 1.]), &p([1., 1., 0., 1.]), &Quadric::absolute())
                .unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].tangent);
        assert!((roots[0].t - 0.5).abs() < 1e-12);

        // Interior segment does not reach the absolute.
        let roots = segment_quadric_intersection(
            &p([1., 0.1, 0., 0.]),
            &p([1., -0.2, 0.3, 0.1]),
            &Quadric::absolute(),
        )
        .unwrap();
        assert!(roots.is_empty());

        let a = p([1., 0.1, 0., 0.]);
        assert!(matches!(
            segment_quadric_intersection(&a, &a.scaled(3.0).unwrap(), &Quadric::absolute()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn quadric_is_symmetrized() {
        let mut m = Matrix4::zeros();
        m[(0, 3)] = 2.0;
        let q = Quadric::new(m);
        assert_eq!(q.matrix()[(3, 0)], 1.0);
        assert_eq!(q.matrix()[(0, 3)], 1.0);
        assert_eq!(q.eval(&p([1., 0., 0., 1.])), 2.0);
    }
}
