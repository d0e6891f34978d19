//! Density as a function of the shape parameter: sampling, one-dimensional
//! maximization and the search over all scenarios.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{feasible_intervals, solve_scenario, FeasibleInterval, DOMAIN_INSET, INTERVAL_GRID};
use crate::scenario::{Scenario, ScenarioId};
use crate::volumes::{alpha_from_z, tet_volume_from_z};
use crate::{Error, Result};

/// Inward offset from a located feasibility boundary at which it is evaluated.
pub const BOUNDARY_INSET: f64 = 1e-10;

/// Densities closer than this are treated as equal in [`global_search`].
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensitySample {
    pub z: f64,
    pub alpha: f64,
    pub tet_volume: f64,
    /// `None` where the scenario is infeasible.
    pub sector_sum: Option<f64>,
    pub density: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub scenario: ScenarioId,
    pub z_lo: f64,
    pub z_hi: f64,
    pub samples: Vec<DensitySample>,
}

impl DensityCurve {
    /// Feasible samples as `(z, density)`.
    pub fn feasible(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.samples.iter().filter_map(|s| s.density.map(|d| (s.z, d)))
    }

    pub fn max_sample(&self) -> Option<(f64, f64)> {
        self.feasible().fold(None, |best, (z, d)| match best {
            Some((_, bd)) if bd >= d => best,
            _ => Some((z, d)),
        })
    }

    pub fn gaps(&self) -> usize {
        self.samples.iter().filter(|s| s.density.is_none()).count()
    }
}

/// `n` uniform samples of the density on `[z_lo, z_hi]`, computed in parallel.
pub fn scan(scn: &Scenario, z_lo: f64, z_hi: f64, n: usize) -> Result<DensityCurve> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 samples, got {n}")));
    }
    if !(z_lo < z_hi) || z_lo <= -1.0 || z_hi >= 1.0 {
        return Err(Error::InvalidInput(format!(
            "scan interval [{z_lo}, {z_hi}] must be increasing and inside (−1, 1)"
        )));
    }
    let samples: Vec<DensitySample> = (0..n)
        .into_par_iter()
        .map(|k| {
            let z = if k == n - 1 {
                z_hi
            } else {
                z_lo + (z_hi - z_lo) * k as f64 / (n - 1) as f64
            };
            let alpha = alpha_from_z(z)?;
            let tet_volume = tet_volume_from_z(z)?;
            let (sector_sum, density) = match solve_scenario(scn, z) {
                Ok(arr) => (Some(arr.sector_sum), Some(arr.density)),
                Err(Error::Infeasible { .. }) => (None, None),
                Err(e) => return Err(e),
            };
            Ok(DensitySample {
                z,
                alpha,
                tet_volume,
                sector_sum,
                density,
            })
        })
        .collect::<Result<_>>()?;
    let curve = DensityCurve {
        scenario: scn.id,
        z_lo,
        z_hi,
        samples,
    };
    if curve.feasible().next().is_none() {
        return Err(Error::Infeasible {
            scenario: scn.id.to_string(),
            z: z_lo,
            constraint: format!("no feasible sample in [{z_lo}, {z_hi}]"),
        });
    }
    Ok(curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryFlag {
    Interior,
    LowerEndpoint,
    UpperEndpoint,
}

impl BoundaryFlag {
    pub fn is_endpoint(self) -> bool {
        self != BoundaryFlag::Interior
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumResult {
    pub scenario: ScenarioId,
    pub z_star: f64,
    pub delta_star: f64,
    pub alpha_star: f64,
    pub boundary_flag: BoundaryFlag,
    /// Whether the maximizing endpoint belongs to the scenario's interval.
    pub closed_endpoint: bool,
    pub interval: FeasibleInterval,
}

fn density_at(scn: &Scenario, z: f64) -> Result<f64> {
    Ok(solve_scenario(scn, z)?.density)
}

/// Points at which the two ends of an interval are evaluated.
pub fn evaluation_ends(iv: &FeasibleInterval) -> (f64, f64) {
    let lo = match (iv.lo_is_domain_end, iv.lo_closed) {
        (true, true) => iv.lo,
        (true, false) => iv.lo + DOMAIN_INSET,
        (false, _) => iv.lo + BOUNDARY_INSET,
    };
    let hi = match (iv.hi_is_domain_end, iv.hi_closed) {
        (true, true) => iv.hi,
        (true, false) => iv.hi - DOMAIN_INSET,
        (false, _) => iv.hi - BOUNDARY_INSET,
    };
    (lo, hi)
}

/// Golden-section search for the maximum on `interval`, refined to `tol`
/// in `z`, compared against both endpoint values.
pub fn maximize(scn: &Scenario, interval: &FeasibleInterval, tol: f64) -> Result<OptimumResult> {
    if !(tol >= 1e-10) {
        return Err(Error::InvalidInput(format!("tolerance {tol} below 1e−10")));
    }
    let (lo, hi) = evaluation_ends(interval);
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!("empty interval [{lo}, {hi}]")));
    }
    let f_lo = density_at(scn, lo)?;
    let f_hi = density_at(scn, hi)?;

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = density_at(scn, x1)?;
    let mut f2 = density_at(scn, x2)?;
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = density_at(scn, x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = density_at(scn, x1)?;
        }
    }
    let (z_in, f_in) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };

    let near = 2.0 * tol;
    let (z_star, delta_star, boundary_flag) = if f_lo >= f_in.max(f_hi) || (z_in - lo <= near && f_lo >= f_hi)
    {
        (lo, f_lo, BoundaryFlag::LowerEndpoint)
    } else if f_hi >= f_in || hi - z_in <= near {
        (hi, f_hi, BoundaryFlag::UpperEndpoint)
    } else {
        (z_in, f_in, BoundaryFlag::Interior)
    };
    let closed_endpoint = match boundary_flag {
        BoundaryFlag::LowerEndpoint => interval.lo_closed,
        BoundaryFlag::UpperEndpoint => interval.hi_closed,
        BoundaryFlag::Interior => false,
    };
    Ok(OptimumResult {
        scenario: scn.id,
        z_star,
        delta_star,
        alpha_star: alpha_from_z(z_star)?,
        boundary_flag,
        closed_endpoint,
        interval: *interval,
    })
}

/// Maximum over every feasible interval of the scenario.
pub fn maximize_scenario(scn: &Scenario, tol: f64) -> Result<OptimumResult> {
    let intervals = feasible_intervals(scn, INTERVAL_GRID)?;
    let mut best: Option<OptimumResult> = None;
    for iv in &intervals {
        let r = maximize(scn, iv, tol)?;
        best = Some(match best {
            Some(b) if !prefer(&r, &b) => b,
            _ => r,
        });
    }
    best.ok_or_else(|| Error::Infeasible {
        scenario: scn.id.to_string(),
        z: f64::NAN,
        constraint: "nowhere feasible in the search domain".into(),
    })
}

/// Whether `candidate` should replace `incumbent`.
fn prefer(candidate: &OptimumResult, incumbent: &OptimumResult) -> bool {
    let diff = candidate.delta_star - incumbent.delta_star;
    if diff > TIE_TOLERANCE {
        return true;
    }
    diff.abs() <= TIE_TOLERANCE && candidate.closed_endpoint && !incumbent.closed_endpoint
}

/// The root of the cubic bounding the S3 interval, in trigonometric form.
pub fn z3_closed_form() -> f64 {
    let s3 = 3f64.sqrt();
    4.0 / 73.0 * s3 * 178f64.sqrt() * ((73.0 / 8001.0 * s3 * 229f64.sqrt()).atan() / 3.0).cos() - 26.0 / 73.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalResult {
    pub best: OptimumResult,
    pub candidates: Vec<OptimumResult>,
}

/// Maximizes every scenario and returns the overall optimum.
///
/// Candidates within [`TIE_TOLERANCE`] of each other are resolved in favour
/// of one attained at an endpoint its scenario includes.
pub fn global_search(tol: f64) -> Result<GlobalResult> {
    let results: Vec<Result<OptimumResult>> = Scenario::all()
        .par_iter()
        .map(|scn| maximize_scenario(scn, tol))
        .collect();
    let mut candidates = Vec::new();
    for r in results {
        match r {
            Ok(c) => candidates.push(c),
            Err(Error::Infeasible { scenario, .. }) => {
                log::warn!("scenario {scenario} is nowhere feasible");
            }
            Err(e) => return Err(e),
        }
    }
    let mut best: Option<OptimumResult> = None;
    for c in &candidates {
        best = Some(match best {
            Some(b) if !prefer(c, &b) => b,
            _ => *c,
        });
    }
    let best = best.ok_or_else(|| Error::Infeasible {
        scenario: "all".into(),
        z: f64::NAN,
        constraint: "no scenario is feasible".into(),
    })?;
    Ok(GlobalResult { best, candidates })
}
