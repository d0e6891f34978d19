//! Volume of horoball sectors by direct integration of the model's volume
//! element `dx dy dz / (1 − |x|²)²`.
//!
//! The region is swept by rays from the apex. Ray directions run over the
//! spherical triangle spanned by the three edge directions, parametrized
//! through the flat triangle they span (collapsed onto a square), and the
//! volume element is integrated along each ray up to the horosphere. Every
//! level is adaptive Gauss–Kronrod, so results are deterministic.

use std::cell::RefCell;

use nalgebra::{Vector3, Vector4};

use crate::horoball::{Horoball, Trihedron};
use crate::quadrature::{integrate, Tolerance};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Default accuracy of the outer integration.
pub fn default_tolerance() -> Tolerance {
    Tolerance {
        abs: 1e-15,
        rel: 1e-10,
        max_intervals: 4000,
    }
}

/// Closed-form volume of a metric ball of radius `r`.
pub fn hyperbolic_ball_volume(r: f64) -> f64 {
    std::f64::consts::PI * ((2.0 * r).sinh() - 2.0 * r)
}

/// Integrates `radial(u)` (the volume along the ray in unit direction `u`)
/// against solid angle over the spherical triangle spanned by `dirs`.
fn cone_integral<R>(dirs: [Vector3<f64>; 3], radial: R, tol: Tolerance) -> Result<OracleEstimate>
where
    R: Fn(&Vector3<f64>) -> Result<f64>,
{
    let [u0, u1, u2] = dirs;
    let e1 = u1 - u0;
    let e2 = u2 - u0;
    // dΩ = D / |P|³ dα dβ for P = u0 + α e1 + β e2.
    let d = e1.cross(&e2).dot(&u0).abs();
    if d < 1e-300 {
        return Ok(OracleEstimate {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner_tol = Tolerance {
        abs: 1e-16,
        rel: tol.rel * 1e-2,
        max_intervals: tol.max_intervals,
    };
    let mut evaluations = 0usize;
    let outer = integrate(
        |p: f64| {
            // Duffy collapse: α = p(1 − q), β = p q, Jacobian p.
            let inner = integrate(
                |q: f64| {
                    let pt = u0 + e1 * (p * (1.0 - q)) + e2 * (p * q);
                    let n = pt.norm();
                    match radial(&(pt / n)) {
                        Ok(v) => v * d / (n * n * n),
                        Err(e) => {
                            failure.borrow_mut().get_or_insert(e);
                            f64::NAN
                        }
                    }
                },
                0.0,
                1.0,
                inner_tol,
            );
            match inner {
                Ok(r) => {
                    evaluations += r.evaluations;
                    p * r.value
                }
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        },
        0.0,
        1.0,
        tol,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    Ok(OracleEstimate {
        value: outer.value,
        error: outer.error,
        evaluations,
    })
}

/// Volume of `h ∩ trihedron` by direct integration; the apex must be the
/// centre of `h`.
pub fn oracle_sector_volume(h: &Horoball, trihedron: &Trihedron) -> Result<OracleEstimate> {
    oracle_sector_volume_with(h, trihedron, default_tolerance())
}

pub fn oracle_sector_volume_with(
    h: &Horoball,
    trihedron: &Trihedron,
    tol: Tolerance,
) -> Result<OracleEstimate> {
    if !trihedron.apex.same_as(h.center(), 1e-12) {
        return Err(Error::InvalidInput(
            "trihedron apex is not the horoball centre".into(),
        ));
    }
    let a = Vector3::from(h.center().affine_coords()?);
    let mut dirs = [Vector3::zeros(); 3];
    for (dir, end) in dirs.iter_mut().zip(&trihedron.ends) {
        let v = Vector3::from(end.affine_coords()?) - a;
        if v.norm() < 1e-14 {
            return Err(Error::Degenerate("trihedron edge of zero length".into()));
        }
        *dir = v.normalize();
    }
    let quadric = h.quadric();
    let apex = Vector4::new(1.0, a[0], a[1], a[2]);
    let radial = |u: &Vector3<f64>| -> Result<f64> {
        let c = -a.dot(u);
        if c <= 0.0 {
            return Ok(0.0);
        }
        let du = Vector4::new(0.0, u[0], u[1], u[2]);
        // The apex is a root of the horosphere quadric; the ray leaves the
        // horoball at the other root.
        let extent = -2.0 * quadric.bilinear(&apex, &du) / quadric.bilinear(&du, &du);
        if !(extent > 0.0) {
            return Ok(0.0);
        }
        // With |a| = 1, 1 − |a + λu|² = λ(2c − λ), so λ² dλ / (1 − |x|²)² = dλ / (2c − λ)².
        let r = integrate(
            |lam: f64| 1.0 / (2.0 * c - lam).powi(2),
            0.0,
            extent.min(2.0 * c),
            Tolerance::new(1e-18, 1e-14),
        )?;
        Ok(r.value)
    };
    cone_integral(dirs, radial, tol)
}

/// Volume of the metric ball of radius `r` about the model centre, integrated
/// over the eight coordinate octants with the same machinery.
pub fn oracle_ball_volume(r: f64) -> Result<OracleEstimate> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("ball radius {r} must be positive")));
    }
    let extent = r.tanh();
    let radial = |_: &Vector3<f64>| -> Result<f64> {
        Ok(integrate(
            |rho: f64| (rho / (1.0 - rho * rho)).powi(2),
            0.0,
            extent,
            Tolerance::new(1e-18, 1e-14),
        )?
        .value)
    };
    let mut total = OracleEstimate {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
    };
    for sx in [-1.0, 1.0] {
        for sy in [-1.0, 1.0] {
            for sz in [-1.0, 1.0] {
                let dirs = [
                    Vector3::new(sx, 0.0, 0.0),
                    Vector3::new(0.0, sy, 0.0),
                    Vector3::new(0.0, 0.0, sz),
                ];
                let part = cone_integral(dirs, radial, default_tolerance())?;
                total.value += part.value;
                total.error += part.error;
                total.evaluations += part.evaluations;
            }
        }
    }
    Ok(total)
}
