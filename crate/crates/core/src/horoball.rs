//! Horoballs of the ball model.
//!
//! A horoball is stored as its ideal centre together with the size parameter
//! `s ∈ (−1, 1)`: after rotating the centre to `E₃ = (1, 0, 0, 1)` the bounding
//! horosphere is
//!
//! ```text
//! −2s x⁰x⁰ − 2x³x³ + 2(s + 1)x⁰x³ + (s − 1)(x¹x¹ + x²x²) = 0,
//! ```
//!
//! an ellipsoid meeting the axis at heights `s` and `1`. Larger `s` means a
//! smaller horoball. On the hyperboloid this is `{x : −⟨x, c·N⟩ ≤ 1}` with
//! `N = (1, n)` the centre and `c = √((1 + s)/(1 − s))`.

use nalgebra::{Matrix3, Matrix4, Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::kernel::{
    foot_of_perpendicular, hyperbolic_distance, lorentz, plane_from_points, segment_point,
    segment_quadric_intersection, PlaneCovector, PointClass, ProjectivePoint, Quadric,
};
use crate::{Error, Result};

/// Residual above which a point is not considered to lie on a horosphere.
pub const SURFACE_TOLERANCE: f64 = 1e-8;

/// Default contact tolerance (length units) used by the packing predicates.
pub const CONTACT_TOLERANCE: f64 = 1e-9;

fn check_s(s: f64) -> Result<()> {
    if !(s > -1.0 && s < 1.0) {
        return Err(Error::Domain(format!(
            "horoball parameter s = {s} outside (−1, 1)"
        )));
    }
    Ok(())
}

/// Quadric of the horosphere centred at `E₃` with parameter `s`.
pub fn canonical_horosphere_quadric(s: f64) -> Result<Quadric> {
    check_s(s)?;
    let mut m = Matrix4::zeros();
    m[(0, 0)] = -2.0 * s;
    m[(3, 3)] = -2.0;
    m[(0, 3)] = s + 1.0;
    m[(3, 0)] = s + 1.0;
    m[(1, 1)] = s - 1.0;
    m[(2, 2)] = s - 1.0;
    Ok(Quadric::new(m))
}

/// A rotation of the ball model, acting on homogeneous coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelIsometry(Matrix4<f64>);

impl ModelIsometry {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    fn from_rotation(r: &Matrix3<f64>) -> Self {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(r);
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        ProjectivePoint::from_vector(self.0 * p.vector()).expect("isometries are invertible")
    }

    /// Inverse map; rotations are orthogonal.
    pub fn inverse(&self) -> Self {
        Self(self.0.transpose())
    }
}

/// The rotation of the model taking `E₃` to the ideal point `center`.
pub fn transport_to_center(center: &ProjectivePoint) -> Result<ModelIsometry> {
    if center.classify() != PointClass::Ideal {
        return Err(Error::Domain(format!(
            "horoball centre {:?} is not an ideal point",
            center.coords()
        )));
    }
    let a = center.affine_coords()?;
    let n = Vector3::new(a[0], a[1], a[2]).normalize();
    let e3 = Vector3::z();
    let cos = n.dot(&e3);
    let r = if (n - e3).norm() < 1e-15 {
        Matrix3::identity()
    } else if cos < -1.0 + 1e-12 {
        *Rotation3::from_axis_angle(&Vector3::x_axis(), std::f64::consts::PI).matrix()
    } else {
        let axis = Unit::new_normalize(e3.cross(&n));
        *Rotation3::from_axis_angle(&axis, cos.clamp(-1.0, 1.0).acos()).matrix()
    };
    Ok(ModelIsometry::from_rotation(&r))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horoball {
    center: ProjectivePoint,
    s: f64,
    frame: ModelIsometry,
}

impl Horoball {
    pub fn new(center: ProjectivePoint, s: f64) -> Result<Self> {
        check_s(s)?;
        let frame = transport_to_center(&center)?;
        Ok(Self {
            center: center.normalized()?,
            s,
            frame,
        })
    }

    fn with_frame(center: ProjectivePoint, s: f64, frame: ModelIsometry) -> Self {
        Self { center, s, frame }
    }

    /// The horoball centred at `center` whose horosphere passes through `p`.
    pub fn through_point(center: ProjectivePoint, p: &ProjectivePoint) -> Result<Self> {
        let frame = transport_to_center(&center)?;
        let s = s_through_point(&frame, p)?;
        Ok(Self::with_frame(center.normalized()?, s, frame))
    }

    pub fn center(&self) -> &ProjectivePoint {
        &self.center
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// The isometry taking `E₃` to this horoball's centre.
    pub fn frame(&self) -> &ModelIsometry {
        &self.frame
    }

    /// The null-vector scale `c`: the horoball is `−⟨x, c·N⟩ ≤ 1` on the hyperboloid.
    pub fn null_scale(&self) -> f64 {
        ((1.0 + self.s) / (1.0 - self.s)).sqrt()
    }

    pub fn quadric(&self) -> Quadric {
        let q = canonical_horosphere_quadric(self.s).expect("s validated on construction");
        q.transformed(self.frame.matrix())
            .expect("rotations are invertible")
    }

    /// Scaled quadric value at `p`; zero on the horosphere, positive inside.
    pub fn residual(&self, p: &ProjectivePoint) -> Result<f64> {
        let q = self.quadric();
        let scale = q.matrix().abs().max();
        Ok(q.eval_normalized(p)? / scale)
    }

    pub fn contains(&self, p: &ProjectivePoint) -> Result<bool> {
        Ok(self.residual(p)? > 0.0)
    }

    /// Parameter `t` of the second horosphere crossing on the line from the
    /// centre through `toward` (`t = 1` at `toward`); not restricted to `[0, 1]`.
    pub(crate) fn crossing_toward(&self, toward: &ProjectivePoint) -> Result<f64> {
        let a = self.center;
        let b = toward.normalized()?;
        let d = b.vector() - a.vector();
        if d.norm() < 1e-14 {
            return Err(Error::Degenerate(
                "direction point coincides with the centre".into(),
            ));
        }
        let q = self.quadric();
        let qd = q.bilinear(&d, &d);
        if qd == 0.0 {
            return Err(Error::Degenerate("line is tangent to the horosphere".into()));
        }
        // q(a) = 0 exactly at the centre; deflate that root.
        Ok(-2.0 * q.bilinear(a.vector(), &d) / qd)
    }
}

impl Serialize for Horoball {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Horoball", 2)?;
        st.serialize_field("center", self.center())?;
        st.serialize_field("s", &self.s())?;
        st.end()
    }
}

fn s_through_point(frame: &ModelIsometry, p: &ProjectivePoint) -> Result<f64> {
    if p.classify() != PointClass::Interior {
        return Err(Error::Domain(
            "horosphere must pass through a proper point".into(),
        ));
    }
    let c = frame.inverse().apply(p).affine_coords()?;
    let rho2 = c[0] * c[0] + c[1] * c[1];
    let z = c[2];
    // The horosphere equation is linear in s.
    let num = 2.0 * z * z - 2.0 * z + rho2;
    let den = -2.0 * (1.0 - z) + rho2;
    let s = num / den;
    check_s(s)?;
    Ok(s)
}

/// An intersection of an edge with a horosphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub point: ProjectivePoint,
    /// Parameter along the segment from its first endpoint.
    pub t: f64,
    pub tangent: bool,
}

/// Intersections of the segment `ab` with the bounding horosphere of `h`.
///
/// On an edge issuing from the centre only the crossing away from the centre
/// is returned; otherwise every crossing in `[0, 1]`.
pub fn surface_points_on_edge(
    h: &Horoball,
    a: &ProjectivePoint,
    b: &ProjectivePoint,
) -> Result<Vec<SurfacePoint>> {
    if a.same_as(b, 1e-14) {
        return Err(Error::Degenerate("edge endpoints coincide".into()));
    }
    let at_center = |p: &ProjectivePoint| p.same_as(&h.center, 1e-12);
    let from_center = |far: &ProjectivePoint, reversed: bool| -> Result<Vec<SurfacePoint>> {
        let t = h.crossing_toward(far)?;
        if !(t > 0.0 && t <= 1.0 + 1e-12) {
            return Ok(Vec::new());
        }
        let t = t.min(1.0);
        let point = segment_point(&h.center, far, t)?.normalized()?;
        Ok(vec![SurfacePoint {
            point,
            t: if reversed { 1.0 - t } else { t },
            tangent: false,
        }])
    };
    if at_center(a) {
        return from_center(b, false);
    }
    if at_center(b) {
        return from_center(a, true);
    }
    segment_quadric_intersection(a, b, &h.quadric())?
        .into_iter()
        .map(|r| {
            Ok(SurfacePoint {
                point: segment_point(a, b, r.t)?.normalized()?,
                t: r.t,
                tangent: r.tangent,
            })
        })
        .collect()
}

/// Signed hyperbolic distance between two horospheres along the line joining
/// their centres: positive when separated, negative when overlapping.
///
/// Evaluated as `ln(−⟨c_a N_a, c_b N_b⟩ / 2)`, which stays accurate when the
/// horoballs are small or their centres close.
pub fn pair_gap(a: &Horoball, b: &Horoball) -> Result<f64> {
    if a.center.same_as(&b.center, 1e-12) {
        return Err(Error::Degenerate("horoballs share their centre".into()));
    }
    let w = -lorentz(a.center.vector(), b.center.vector()) / 2.0;
    Ok(w.ln() + a.s.atanh() + b.s.atanh())
}

/// [`pair_gap`] measured directly: the distance between the two horosphere
/// crossings of the segment joining the centres.
pub fn pair_gap_along_axis(a: &Horoball, b: &Horoball) -> Result<f64> {
    if a.center.same_as(&b.center, 1e-12) {
        return Err(Error::Degenerate("horoballs share their centre".into()));
    }
    let ta = a.crossing_toward(&b.center)?;
    let tb = 1.0 - b.crossing_toward(&a.center)?;
    let pa = segment_point(&a.center, &b.center, ta)?;
    let pb = segment_point(&a.center, &b.center, tb)?;
    let d = hyperbolic_distance(&pa, &pb)?;
    Ok(if tb >= ta { d } else { -d })
}

/// Signed distance from the horosphere of `h` to `plane`, measured along the
/// perpendicular from the centre; negative when the horoball crosses the plane.
///
/// Evaluated as `ln(c·|⟨N, n⟩|)` with `n` the unit normal of the plane.
pub fn plane_margin(h: &Horoball, plane: &PlaneCovector) -> Result<f64> {
    Ok(normal_component(&h.center, plane)?.ln() + h.s.atanh())
}

/// `|⟨N, n⟩|` for the centre `N` (scaled to `x⁰ = 1`) and the unit normal `n`.
fn normal_component(center: &ProjectivePoint, plane: &PlaneCovector) -> Result<f64> {
    let norm2 = plane.pole().self_product();
    if !(norm2 > 0.0) {
        return Err(Error::Domain("plane does not meet the interior".into()));
    }
    let along = plane.value(&center.normalized()?).abs() / norm2.sqrt();
    if along < 1e-12 {
        return Err(Error::Degenerate("horoball centre lies on the plane".into()));
    }
    Ok(along)
}

/// [`plane_margin`] measured directly along the perpendicular.
pub fn plane_margin_along_perpendicular(h: &Horoball, plane: &PlaneCovector) -> Result<f64> {
    let foot = foot_of_perpendicular(&h.center, plane)?;
    let t = h.crossing_toward(&foot)?;
    let p = segment_point(&h.center, &foot, t)?;
    let d = hyperbolic_distance(&p, &foot)?;
    Ok(if t <= 1.0 { d } else { -d })
}

/// The horoball at `center` touching `plane`, and the touch point (the foot
/// of the perpendicular from the centre).
pub fn tangent_s_to_plane(center: &ProjectivePoint, plane: &PlaneCovector) -> Result<(f64, ProjectivePoint)> {
    let along = normal_component(center, plane)?;
    if center.classify() != PointClass::Ideal {
        return Err(Error::Domain("horoball centre must be ideal".into()));
    }
    let foot = foot_of_perpendicular(center, plane)?;
    // The tangent ball has c = 1/|⟨N, n⟩|, i.e. s = tanh(−ln |⟨N, n⟩|).
    let a2 = along * along;
    let s = (1.0 - a2) / (1.0 + a2);
    check_s(s)?;
    Ok((s, foot))
}

/// The unique horoball at `center_b` externally tangent to the horoball
/// `(center_a, s_a)`, found by bisection on `s_b`; returns it with the touch point.
pub fn tangent_s_to_horoball(
    center_a: &ProjectivePoint,
    s_a: f64,
    center_b: &ProjectivePoint,
) -> Result<(f64, ProjectivePoint)> {
    let a = Horoball::new(*center_a, s_a)?;
    let frame_b = transport_to_center(center_b)?;
    let center_b = center_b.normalized()?;
    if a.center.same_as(&center_b, 1e-12) {
        return Err(Error::Degenerate("tangency between coincident centres".into()));
    }
    let gap = |s: f64| pair_gap(&a, &Horoball::with_frame(center_b, s, frame_b));

    // The gap increases with s_b.
    let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-17 {
            break;
        }
    }
    let s_b = if hi < 1.0 { hi } else { lo };
    let t = a.crossing_toward(&center_b)?;
    let touch = segment_point(&a.center, &center_b, t)?.normalized()?;
    Ok((s_b, touch))
}

/// How a hyperbolic chord between two horosphere points is turned into the
/// intrinsic (Euclidean) distance on the horosphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ChordConvention {
    /// `ℓ = 2 sinh(d/2)`: the horocycle arc subtending a chord of length `d`.
    #[default]
    HalfChord,
    /// `ℓ = sinh(d)`, the alternative reading.
    FullChord,
}

impl ChordConvention {
    pub fn arc_length(self, chord: f64) -> f64 {
        match self {
            ChordConvention::HalfChord => 2.0 * (0.5 * chord).sinh(),
            ChordConvention::FullChord => chord.sinh(),
        }
    }
}

/// Intrinsic distance between two points of the horosphere bounding `h`.
pub fn intrinsic_length(h: &Horoball, p: &ProjectivePoint, q: &ProjectivePoint) -> Result<f64> {
    intrinsic_length_with(h, p, q, ChordConvention::default())
}

pub fn intrinsic_length_with(
    h: &Horoball,
    p: &ProjectivePoint,
    q: &ProjectivePoint,
    convention: ChordConvention,
) -> Result<f64> {
    for x in [p, q] {
        let r = h.residual(x)?;
        if r.abs() > SURFACE_TOLERANCE {
            return Err(Error::Domain(format!(
                "point {:?} is off the horosphere (residual {r:e})",
                x.coords()
            )));
        }
    }
    Ok(convention.arc_length(hyperbolic_distance(p, q)?))
}

/// Heron's formula in the cancellation-free ordering.
pub fn heron_area(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.25 * p.max(0.0).sqrt()
}

/// A triangle on a horosphere, measured in its intrinsic Euclidean geometry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HorosphericalTriangle {
    pub points: [ProjectivePoint; 3],
    /// `sides[k]` is opposite `points[k]`.
    pub sides: [f64; 3],
    pub area: f64,
}

impl HorosphericalTriangle {
    pub fn new(h: &Horoball, points: [ProjectivePoint; 3], convention: ChordConvention) -> Result<Self> {
        let side = |i: usize, j: usize| intrinsic_length_with(h, &points[i], &points[j], convention);
        let sides = [side(1, 2)?, side(0, 2)?, side(0, 1)?];
        let area = heron_area(sides[0], sides[1], sides[2]);
        Ok(Self { points, sides, area })
    }

    pub fn circumradius(&self) -> f64 {
        self.sides.iter().product::<f64>() / (4.0 * self.area)
    }
}

/// Trihedral angle at an ideal vertex, spanned by the edges to three other vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trihedron {
    pub apex: ProjectivePoint,
    pub ends: [ProjectivePoint; 3],
}

impl Trihedron {
    pub fn new(apex: ProjectivePoint, ends: [ProjectivePoint; 3]) -> Self {
        Self { apex, ends }
    }

    /// Plane through the three edge ends (the face opposite the apex).
    pub fn opposite_plane(&self) -> Result<PlaneCovector> {
        plane_from_points(&self.ends[0], &self.ends[1], &self.ends[2])
    }
}

/// The horospherical triangle cut from `h` by the trihedron at its centre.
pub fn sector_triangle(
    h: &Horoball,
    trihedron: &Trihedron,
    convention: ChordConvention,
) -> Result<HorosphericalTriangle> {
    if !trihedron.apex.same_as(&h.center, 1e-12) {
        return Err(Error::InvalidInput(
            "trihedron apex is not the horoball centre".into(),
        ));
    }
    let mut pts = Vec::with_capacity(3);
    for end in &trihedron.ends {
        let hit = surface_points_on_edge(h, &h.center, end)?;
        let p = hit
            .first()
            .ok_or_else(|| Error::Degenerate(format!("edge to {:?} misses the horosphere", end.coords())))?;
        pts.push(p.point);
    }
    HorosphericalTriangle::new(h, [pts[0], pts[1], pts[2]], convention)
}

/// Volume of the horoball sector `h ∩ trihedron`: half the area of its
/// horospherical triangle. Fails if the horoball crosses the opposite face.
pub fn sector_volume(h: &Horoball, trihedron: &Trihedron) -> Result<f64> {
    sector_volume_with(h, trihedron, ChordConvention::default(), true)
}

pub fn sector_volume_with(
    h: &Horoball,
    trihedron: &Trihedron,
    convention: ChordConvention,
    check_face: bool,
) -> Result<f64> {
    if check_face {
        let plane = trihedron.opposite_plane()?;
        let margin = plane_margin(h, &plane)?;
        if margin < -CONTACT_TOLERANCE {
            return Err(Error::PackingViolation(format!(
                "horoball at {:?} crosses its opposite face {:?} by {:e}",
                h.center.coords(),
                plane.coeffs(),
                -margin
            )));
        }
    }
    let tri = sector_triangle(h, trihedron, convention)?;
    Ok(0.5 * crate::volumes::CURVATURE_K * tri.area)
}
