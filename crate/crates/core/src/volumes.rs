//! Lobachevsky function and volumes of ideal tetrahedra.
//!
//! Curvature is fixed to `K = −1` throughout. Angles are radians.

#![allow(clippy::excessive_precision)]

use std::f64::consts::{FRAC_PI_2, PI};

use crate::{Error, Result};

/// The constant `k` of `K = −k²`.
pub const CURVATURE_K: f64 = 1.0;

// ζ(2k) / (k (2k+1) (2π)^{2k}), k = 1..30: coefficients of the expansion
// Cl₂(θ) = θ − θ ln|θ| + Σ c_k θ^{2k+1}, valid for |θ| < 2π.
const CLAUSEN_COEFFS: [f64; 30] = [
    1.38888888888888889e-2,
    6.94444444444444444e-5,
    7.87351977828168304e-7,
    1.14822163433274544e-8,
    1.89788699889709991e-10,
    3.38730137095352127e-12,
    6.3726364431831804e-14,
    1.24620599129506723e-15,
    2.51054446089995455e-17,
    5.17825880609062351e-19,
    1.08873573683008488e-20,
    2.32574411430208722e-22,
    5.03519521314738956e-24,
    1.10264992943812153e-25,
    2.43865855090073447e-27,
    5.44014267885625232e-29,
    1.22283401312173521e-30,
    2.76726346896795058e-32,
    6.30009059183201395e-34,
    1.44208683884184752e-35,
    3.3170939991595428e-37,
    7.66391355792065789e-39,
    1.77787147338306579e-40,
    4.13960589823413734e-42,
    9.67155703608110179e-44,
    2.26671870167661237e-45,
    5.32795631132825397e-47,
    1.25572483895643357e-48,
    2.96700054224709419e-50,
    7.02678731760074249e-52,
];

/// Clausen's function Cl₂(θ) = −∫₀^θ ln|2 sin(t/2)| dt.
pub fn clausen2(theta: f64) -> f64 {
    if !theta.is_finite() {
        return f64::NAN;
    }
    // Reduce to [−π, π] by 2π-periodicity.
    let t = theta - 2.0 * PI * (theta / (2.0 * PI)).round();
    if t == 0.0 {
        return 0.0;
    }
    let t2 = t * t;
    let mut sum = 0.0;
    let mut power = t2;
    for &c in CLAUSEN_COEFFS.iter() {
        let term = c * power;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        power *= t2;
    }
    t * (1.0 - t.abs().ln() + sum)
}

/// The Lobachevsky function 𝓛(x) = −∫₀ˣ ln|2 sin t| dt.
///
/// Odd and π-periodic; 𝓛(x) = ½ Cl₂(2x).
pub fn lobachevsky(x: f64) -> f64 {
    let r = x - PI * (x / PI).round();
    0.5 * clausen2(2.0 * r)
}

fn check_angle(name: &str, a: f64, lo: f64, hi: f64) -> Result<()> {
    if !(a.is_finite() && a >= lo && a <= hi) {
        return Err(Error::Domain(format!("{name} = {a} outside [{lo}, {hi}]")));
    }
    Ok(())
}

/// Volume of a hyperbolic orthoscheme with essential dihedral angles
/// `a01`, `a12`, `a23` (Lobachevsky's formula).
pub fn orthoscheme_volume(a01: f64, a12: f64, a23: f64) -> Result<f64> {
    check_angle("a01", a01, 0.0, FRAC_PI_2)?;
    check_angle("a12", a12, 0.0, FRAC_PI_2)?;
    check_angle("a23", a23, 0.0, FRAC_PI_2)?;
    let radicand = a12.cos().powi(2) - (a01.sin() * a23.sin()).powi(2);
    if radicand < -1e-14 {
        return Err(Error::Domain(format!(
            "angles ({a01}, {a12}, {a23}) do not bound a hyperbolic orthoscheme"
        )));
    }
    let theta = radicand.max(0.0).sqrt().atan2(a01.cos() * a23.cos());
    let l = lobachevsky;
    let v = 0.25
        * (l(a01 + theta) - l(a01 - theta)
            + l(FRAC_PI_2 + a12 - theta)
            + l(FRAC_PI_2 - a12 - theta)
            + l(a23 + theta)
            - l(a23 - theta)
            + 2.0 * l(FRAC_PI_2 - theta));
    Ok(v.max(0.0))
}

/// Volume of the ideal tetrahedron with dihedral angles α, β, γ = π − α − β.
pub fn milnor_tet_volume(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0 && alpha + beta < PI) {
        return Err(Error::Domain(format!(
            "ideal tetrahedron needs α, β > 0 and α + β < π, got ({alpha}, {beta})"
        )));
    }
    let gamma = PI - alpha - beta;
    Ok(lobachevsky(alpha) + lobachevsky(beta) + lobachevsky(gamma))
}

/// Volume of the plane-symmetric ideal tetrahedron with angles (α, α, π − 2α),
/// via the duplication law: 2𝓛(α) − 𝓛(2α).
pub fn symmetric_tet_volume(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < FRAC_PI_2) {
        return Err(Error::Domain(format!("α = {alpha} outside (0, π/2)")));
    }
    Ok(2.0 * lobachevsky(alpha) - lobachevsky(2.0 * alpha))
}

/// The second closed form, −2𝓛(α + π/2).
pub fn symmetric_tet_volume_shifted(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < FRAC_PI_2) {
        return Err(Error::Domain(format!("α = {alpha} outside (0, π/2)")));
    }
    Ok(-2.0 * lobachevsky(alpha + FRAC_PI_2))
}

fn check_z(z: f64) -> Result<()> {
    if !(z > -1.0 && z < 1.0) {
        return Err(Error::Domain(format!("shape parameter z = {z} outside (−1, 1)")));
    }
    Ok(())
}

/// Dihedral angle α of the tetrahedron with apex parameter `z`:
/// cos 2α = −(1 + 2z)/(z + 2).
pub fn alpha_from_z(z: f64) -> Result<f64> {
    check_z(z)?;
    let c = (-(1.0 + 2.0 * z) / (z + 2.0)).clamp(-1.0, 1.0);
    Ok(0.5 * c.acos())
}

/// The same map with the denominator `(z − 2)`, as it appears in print.
/// Kept only as a negative control; it does not describe the family.
pub fn alpha_from_z_printed(z: f64) -> Result<f64> {
    check_z(z)?;
    let c = -(1.0 + 2.0 * z) / (z - 2.0);
    if c.abs() > 1.0 {
        return Err(Error::Domain(format!("cos 2α = {c} at z = {z}")));
    }
    Ok(0.5 * c.acos())
}

pub fn tet_volume_from_z(z: f64) -> Result<f64> {
    symmetric_tet_volume(alpha_from_z(z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, Tolerance};
    use std::f64::consts::FRAC_PI_3;

    /// Direct quadrature of the defining integral.
    fn lob_quad(x: f64) -> f64 {
        let r = integrate(
            |t: f64| (2.0 * t.sin()).abs().ln(),
            0.0,
            x,
            Tolerance {
                abs: 1e-15,
                rel: 1e-14,
                max_intervals: 5000,
            },
        )
        .unwrap();
        -r.value
    }

    #[test]
    fn lobachevsky_against_quadrature() {
        for &x in &[0.01, 0.2, PI / 6.0, 0.7, FRAC_PI_3, 1.2, 1.5, FRAC_PI_2, 2.0, 3.0] {
            let q = lob_quad(x);
            assert!(
                (lobachevsky(x) - q).abs() < 1e-12,
                "x = {x}: {} vs {q}",
                lobachevsky(x)
            );
        }
    }

    #[test]
    fn lobachevsky_examples() {
        assert_eq!(lobachevsky(0.0), 0.0);
        assert!(lobachevsky(PI).abs() < 1e-15);
        assert!((lobachevsky(PI / 6.0) - 0.507_470_803_204_826_8).abs() < 1e-13);
        assert!(lobachevsky(FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn orthoscheme_examples() {
        let degenerate = orthoscheme_volume(0.0, FRAC_PI_2, 0.0).unwrap();
        assert!(degenerate.abs() < 1e-14, "{degenerate}");
        let v = orthoscheme_volume(FRAC_PI_3, PI / 6.0, FRAC_PI_3).unwrap();
        assert!((v - 0.5 * lobachevsky(FRAC_PI_3)).abs() < 1e-13);
        assert!((v - 0.169_156_934_401_608_9).abs() < 1e-12);
        // Characteristic orthoscheme of the {3,3,6} honeycomb; 24 copies fill a
        // regular ideal tetrahedron.
        let c = orthoscheme_volume(FRAC_PI_3, FRAC_PI_3, PI / 6.0).unwrap();
        let reg = milnor_tet_volume(FRAC_PI_3, FRAC_PI_3).unwrap();
        assert!((24.0 * c - reg).abs() < 1e-12, "{} vs {reg}", 24.0 * c);
        assert!(matches!(
            orthoscheme_volume(FRAC_PI_2 - 0.1, FRAC_PI_2 - 0.05, FRAC_PI_2 - 0.1),
            Err(Error::Domain(_))
        ));
        assert!(orthoscheme_volume(-0.1, 0.5, 0.5).is_err());
    }

    #[test]
    fn milnor_examples() {
        let reg = milnor_tet_volume(FRAC_PI_3, FRAC_PI_3).unwrap();
        assert!((reg - 3.0 * lob_quad(FRAC_PI_3)).abs() < 1e-12);
        assert!((reg - 1.014_941_606_409_653_6).abs() < 1e-13);
        let v = milnor_tet_volume(FRAC_PI_2, PI / 4.0).unwrap();
        assert!((v - 0.915_965_594_177_219).abs() < 1e-13);
        assert!((v - 2.0 * lobachevsky(PI / 4.0)).abs() < 1e-15);
        assert_eq!(
            milnor_tet_volume(0.4, 1.1).unwrap(),
            milnor_tet_volume(1.1, 0.4).unwrap()
        );
        assert!(milnor_tet_volume(2.0, 1.2).is_err());
        assert!(milnor_tet_volume(0.0, 1.2).is_err());
    }

    #[test]
    fn symmetric_volume_examples() {
        let v = symmetric_tet_volume(FRAC_PI_3).unwrap();
        assert!((v - milnor_tet_volume(FRAC_PI_3, FRAC_PI_3).unwrap()).abs() < 1e-14);
        assert!(symmetric_tet_volume(FRAC_PI_2 - 1e-9).unwrap() < 1e-7);
        for i in 1..50 {
            let a = i as f64 * FRAC_PI_2 / 50.0;
            let d = symmetric_tet_volume(a).unwrap() - symmetric_tet_volume_shifted(a).unwrap();
            assert!(d.abs() < 1e-12);
        }
        assert!(symmetric_tet_volume(FRAC_PI_2).is_err());
    }

    #[test]
    fn alpha_from_z_examples() {
        assert!((alpha_from_z(0.0).unwrap() - FRAC_PI_3).abs() < 1e-15);
        let zb = -2.0 / 13.0 + 6.0 * 3f64.sqrt() / 13.0;
        assert!((alpha_from_z(zb).unwrap() - 1.308_996_94).abs() < 1e-8);
        assert!((alpha_from_z(zb).unwrap() - 5.0 * PI / 12.0).abs() < 1e-14);
        assert!((alpha_from_z(0.906_177_449_4).unwrap() - 1.443_401_17).abs() < 1e-8);
        assert!(alpha_from_z(1.0).is_err());
        assert!(alpha_from_z(-1.0).is_err());
        // The printed denominator gives π/6 at z = 0 instead.
        assert!((alpha_from_z_printed(0.0).unwrap() - PI / 6.0).abs() < 1e-15);
        assert!(alpha_from_z_printed(0.9).is_err());
    }

    #[test]
    fn tet_volume_from_z_examples() {
        assert!((tet_volume_from_z(0.0).unwrap() - 1.014_941_606_409_653_6).abs() < 1e-13);
        assert!(tet_volume_from_z(1.0 - 1e-12).unwrap() < 1e-4);
        let a = alpha_from_z(-0.5).unwrap();
        assert!((tet_volume_from_z(-0.5).unwrap() - milnor_tet_volume(a, a).unwrap()).abs() < 1e-12);
    }
}
