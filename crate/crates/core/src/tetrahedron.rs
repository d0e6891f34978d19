//! The one-parameter family of plane-symmetric ideal tetrahedra.
//!
//! ```text
//! E₀ = (1, 0, √(1 − z²), z)    E₁ = (1,  √3/2, 0, −1/2)
//! E₃ = (1, 0, 0, 1)            E₂ = (1, −√3/2, 0, −1/2)
//! ```
//!
//! The mirror `x¹ ↦ −x¹` swaps `E₁` and `E₂` and fixes `E₀`, `E₃`. The
//! dihedral angle is `α` at the four edges `E₀E₁, E₀E₂, E₁E₃, E₂E₃` and
//! `π − 2α` at `E₀E₃` and `E₁E₂`; `z = 0` is the regular tetrahedron.

use serde::Serialize;

use crate::horoball::Trihedron;
use crate::kernel::{plane_from_points, PlaneCovector, ProjectivePoint};
use crate::volumes::{alpha_from_z, symmetric_tet_volume};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricTetrahedron {
    z: f64,
    vertices: [ProjectivePoint; 4],
    alpha: f64,
    volume: f64,
}

/// The three vertex indices other than `i`, in increasing order.
pub fn others(i: usize) -> [usize; 3] {
    match i {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        _ => [0, 1, 2],
    }
}

/// Vertex index under the mirror `x¹ ↦ −x¹`.
pub fn mirror_index(i: usize) -> usize {
    match i {
        1 => 2,
        2 => 1,
        other => other,
    }
}

impl SymmetricTetrahedron {
    pub fn new(z: f64) -> Result<Self> {
        let alpha = alpha_from_z(z)?;
        let volume = symmetric_tet_volume(alpha)?;
        let h = 3f64.sqrt() / 2.0;
        let vertices = [
            ProjectivePoint::new([1.0, 0.0, (1.0 - z * z).sqrt(), z])?,
            ProjectivePoint::new([1.0, h, 0.0, -0.5])?,
            ProjectivePoint::new([1.0, -h, 0.0, -0.5])?,
            ProjectivePoint::new([1.0, 0.0, 0.0, 1.0])?,
        ];
        Ok(Self {
            z,
            vertices,
            alpha,
            volume,
        })
    }

    pub fn regular() -> Self {
        Self::new(0.0).expect("z = 0 is in range")
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn vertices(&self) -> &[ProjectivePoint; 4] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &ProjectivePoint {
        &self.vertices[i]
    }

    /// Plane of the face opposite vertex `i`.
    pub fn opposite_face(&self, i: usize) -> Result<PlaneCovector> {
        let [a, b, c] = others(i);
        plane_from_points(&self.vertices[a], &self.vertices[b], &self.vertices[c])
    }

    /// The trihedral angle at vertex `i`.
    pub fn trihedron(&self, i: usize) -> Trihedron {
        let [a, b, c] = others(i);
        Trihedron::new(
            self.vertices[i],
            [self.vertices[a], self.vertices[b], self.vertices[c]],
        )
    }

    /// The point of edge `E_aE_b` fixed by the mirror; requires `b` to be the
    /// mirror image of `a`.
    pub fn mirror_fixed_point(&self, a: usize, b: usize) -> Option<ProjectivePoint> {
        if mirror_index(a) != b || a == b {
            return None;
        }
        ProjectivePoint::from_vector(self.vertices[a].vector() + self.vertices[b].vector()).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{lorentz_product, PointClass};
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn regular_case() {
        let t = SymmetricTetrahedron::regular();
        assert!((t.alpha() - FRAC_PI_3).abs() < 1e-15);
        assert!((t.volume() - 1.014_941_606_409_653_6).abs() < 1e-12);
    }

    #[test]
    fn vertices_are_ideal() {
        for z in [-0.9, -0.3, 0.0, 0.5, 0.99] {
            let t = SymmetricTetrahedron::new(z).unwrap();
            for v in t.vertices() {
                assert_eq!(v.classify(), PointClass::Ideal);
                assert!(lorentz_product(v, v).abs() < 1e-15);
            }
            assert!(t.volume() > 0.0);
        }
        let t = SymmetricTetrahedron::new(0.5).unwrap();
        let e0 = t.vertex(0).coords();
        assert!((e0[2] - 0.75f64.sqrt()).abs() < 1e-15 && e0[3] == 0.5);
        assert!(SymmetricTetrahedron::new(1.0).is_err());
        assert!(SymmetricTetrahedron::new(-1.0).is_err());
    }

    #[test]
    fn mirror_swaps_side_vertices() {
        let t = SymmetricTetrahedron::new(0.3).unwrap();
        for i in 0..4 {
            assert!(t.vertex(i).mirrored().same_as(t.vertex(mirror_index(i)), 1e-15));
        }
        let m = t.mirror_fixed_point(1, 2).unwrap();
        assert!(m.same_as(&ProjectivePoint::new([1.0, 0.0, 0.0, -0.5]).unwrap(), 1e-15));
        assert!(t.mirror_fixed_point(0, 3).is_none());
    }

    #[test]
    fn faces_contain_their_vertices() {
        let t = SymmetricTetrahedron::new(-0.4).unwrap();
        for i in 0..4 {
            let f = t.opposite_face(i).unwrap();
            for j in others(i) {
                assert!(f.normalized_value(t.vertex(j)).unwrap().abs() < 1e-14);
            }
            assert!(f.normalized_value(t.vertex(i)).unwrap().abs() > 0.1);
        }
    }
}
