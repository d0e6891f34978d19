//! Horoball arrangements in the symmetric tetrahedron: constraint solving,
//! packing verification and density.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::horoball::{
    pair_gap, plane_margin, sector_volume_with, tangent_s_to_horoball, tangent_s_to_plane, ChordConvention,
    Horoball, CONTACT_TOLERANCE,
};
use crate::kernel::{segment_point, PointClass, ProjectivePoint};
use crate::scenario::{Constraint, Scenario, ScenarioId};
use crate::tetrahedron::SymmetricTetrahedron;
use crate::{Error, Result};

/// Largest residual accepted for a constraint that should bind exactly.
pub const BINDING_TOLERANCE: f64 = 1e-10;

/// Packing tolerance used when locating feasibility boundaries.
pub const STRICT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub convention: ChordConvention,
    /// Allowed overlap (negative gap) in the packing check.
    pub tolerance: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            convention: ChordConvention::HalfChord,
            tolerance: CONTACT_TOLERANCE,
        }
    }
}

impl SolveOptions {
    pub fn strict() -> Self {
        Self {
            tolerance: STRICT_TOLERANCE,
            ..Self::default()
        }
    }
}

/// A constraint that binds in a solved arrangement, with its contact point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub constraint: Constraint,
    pub description: String,
    pub touch_point: ProjectivePoint,
    /// Parameter of the touch point on the segment between the two centres
    /// (first ball at 0); absent for face contacts.
    pub edge_t: Option<f64>,
    /// |gap| or |margin| of the contact after all balls are fixed.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairMargin {
    pub i: usize,
    pub j: usize,
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaceMargin {
    pub ball: usize,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingReport {
    pub pairs: Vec<PairMargin>,
    pub faces: Vec<FaceMargin>,
    pub tolerance: f64,
    pub pass: bool,
}

impl PackingReport {
    /// Description of the first violated inequality, if any.
    pub fn first_violation(&self) -> Option<String> {
        if let Some(p) = self.pairs.iter().find(|p| p.gap < -self.tolerance) {
            return Some(format!("B{} and B{} overlap by {:e}", p.i, p.j, -p.gap));
        }
        self.faces
            .iter()
            .find(|f| f.margin < -self.tolerance)
            .map(|f| format!("B{} crosses its opposite face by {:e}", f.ball, -f.margin))
    }

    /// Number of pairs in contact to within `tol`.
    pub fn tangencies(&self, tol: f64) -> usize {
        self.pairs.iter().filter(|p| p.gap.abs() <= tol).count()
    }
}

/// Checks pairwise non-overlap and that no horoball crosses its opposite face.
pub fn verify_packing(
    tetra: &SymmetricTetrahedron,
    balls: &[Horoball; 4],
    tol: f64,
) -> Result<PackingReport> {
    let mut pairs = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            pairs.push(PairMargin {
                i,
                j,
                gap: pair_gap(&balls[i], &balls[j])?,
            });
        }
    }
    let mut faces = Vec::with_capacity(4);
    for (i, b) in balls.iter().enumerate() {
        faces.push(FaceMargin {
            ball: i,
            margin: plane_margin(b, &tetra.opposite_face(i)?)?,
        });
    }
    let pass = pairs.iter().all(|p| p.gap >= -tol) && faces.iter().all(|f| f.margin >= -tol);
    Ok(PackingReport {
        pairs,
        faces,
        tolerance: tol,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arrangement {
    pub scenario: ScenarioId,
    pub tetra: SymmetricTetrahedron,
    pub horoballs: [Horoball; 4],
    pub certificates: Vec<Certificate>,
    pub sectors: [f64; 4],
    pub sector_sum: f64,
    pub density: f64,
    pub packing: PackingReport,
    pub convention: ChordConvention,
}

pub fn density(arr: &Arrangement) -> f64 {
    arr.density
}

/// Sizes fixed so far, with the contact data of each constraint.
struct Partial {
    s: [Option<f64>; 4],
    contacts: Vec<(Constraint, ProjectivePoint)>,
}

fn ball(tetra: &SymmetricTetrahedron, s: &[Option<f64>; 4], i: usize) -> Result<Horoball> {
    let s = s[i].ok_or_else(|| Error::InvalidInput(format!("B{i} used before it is fixed")))?;
    Horoball::new(*tetra.vertex(i), s)
}

fn resolve(scn: &Scenario, tetra: &SymmetricTetrahedron, free: Option<f64>) -> Result<Partial> {
    let mut p = Partial {
        s: [None; 4],
        contacts: Vec::new(),
    };
    for c in &scn.constraints {
        match *c {
            Constraint::SymmetricSeed { a, b } => {
                let m = tetra
                    .mirror_fixed_point(a, b)
                    .ok_or_else(|| Error::InvalidInput(format!("B{a}, B{b} are not mirror images")))?;
                let h = Horoball::through_point(*tetra.vertex(a), &m)?;
                p.s[a] = Some(h.s());
                p.s[b] = Some(h.s());
                p.contacts.push((*c, m.normalized()?));
            }
            Constraint::SymmetricFree { a, b } => {
                let t = free.ok_or_else(|| Error::InvalidInput("free size not supplied".into()))?;
                p.s[a] = Some(t);
                p.s[b] = Some(t);
            }
            Constraint::FaceTangent { ball: i } => {
                let (s, foot) = tangent_s_to_plane(tetra.vertex(i), &tetra.opposite_face(i)?)?;
                p.s[i] = Some(s);
                p.contacts.push((*c, foot));
            }
            Constraint::PairTangent { from, to } => {
                let s_from = p.s[from].ok_or_else(|| Error::InvalidInput(format!("B{from} not fixed")))?;
                let (s, touch) = tangent_s_to_horoball(tetra.vertex(from), s_from, tetra.vertex(to))?;
                p.s[to] = Some(s);
                p.contacts.push((*c, touch));
            }
            Constraint::Closure { a, b } => {
                let ha = ball(tetra, &p.s, a)?;
                let t = ha.crossing_toward(tetra.vertex(b))?;
                let touch = segment_point(tetra.vertex(a), tetra.vertex(b), t)?.normalized()?;
                p.contacts.push((*c, touch));
            }
        }
    }
    Ok(p)
}

fn closure_pair(scn: &Scenario) -> Option<(usize, usize)> {
    scn.constraints.iter().find_map(|c| match *c {
        Constraint::Closure { a, b } => Some((a, b)),
        _ => None,
    })
}

/// Chooses the free symmetric size so that the closure pair touches.
fn solve_free_size(scn: &Scenario, tetra: &SymmetricTetrahedron, pair: (usize, usize)) -> Result<f64> {
    let gap = |t: f64| -> Result<f64> {
        let p = resolve(scn, tetra, Some(t))?;
        pair_gap(&ball(tetra, &p.s, pair.0)?, &ball(tetra, &p.s, pair.1)?)
    };
    let infeasible = |why: &str| Error::Infeasible {
        scenario: scn.id.to_string(),
        z: tetra.z(),
        constraint: format!("B{} touches B{}: {why}", pair.0, pair.1),
    };
    // Near ±1 the dependent balls degenerate before the gap changes sign.
    let (mut lo, mut hi) = (-1.0 + 1e-4, 1.0 - 1e-4);
    let g_lo = gap(lo)?;
    let g_hi = gap(hi)?;
    if g_lo.signum() == g_hi.signum() {
        return Err(infeasible("no sign change of the gap"));
    }
    let rising = g_hi > g_lo;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (gap(mid)? < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

impl Arrangement {
    fn from_sizes(
        scn: &Scenario,
        tetra: SymmetricTetrahedron,
        partial: Partial,
        opts: SolveOptions,
    ) -> Result<Self> {
        let mut horoballs = Vec::with_capacity(4);
        for i in 0..4 {
            horoballs.push(ball(&tetra, &partial.s, i)?);
        }
        let horoballs: [Horoball; 4] = horoballs.try_into().expect("four balls");
        let packing = verify_packing(&tetra, &horoballs, opts.tolerance)?;
        let infeasible = |constraint: String| Error::Infeasible {
            scenario: scn.id.to_string(),
            z: tetra.z(),
            constraint,
        };
        if let Some(v) = packing.first_violation() {
            return Err(infeasible(v));
        }
        let margin = |i: usize, j: usize| -> f64 {
            let (i, j) = (i.min(j), i.max(j));
            packing
                .pairs
                .iter()
                .find(|p| p.i == i && p.j == j)
                .map(|p| p.gap)
                .unwrap_or(f64::NAN)
        };
        let mut certificates = Vec::new();
        for (c, touch) in partial.contacts {
            let (residual, edge_t) = match c {
                Constraint::SymmetricSeed { a, b } | Constraint::Closure { a, b } => {
                    (margin(a, b).abs(), Some(edge_parameter(&tetra, a, b, &touch)?))
                }
                Constraint::PairTangent { from, to } => (
                    margin(from, to).abs(),
                    Some(edge_parameter(&tetra, from, to, &touch)?),
                ),
                Constraint::FaceTangent { ball } => (packing.faces[ball].margin.abs(), None),
                Constraint::SymmetricFree { .. } => continue,
            };
            if !(residual < BINDING_TOLERANCE) {
                return Err(infeasible(format!(
                    "{} does not bind (residual {residual:e})",
                    c.describe()
                )));
            }
            certificates.push(Certificate {
                constraint: c,
                description: c.describe(),
                touch_point: touch,
                edge_t,
                residual,
            });
        }
        let mut sectors = [0.0; 4];
        for (i, v) in sectors.iter_mut().enumerate() {
            *v = sector_volume_with(&horoballs[i], &tetra.trihedron(i), opts.convention, false)?;
        }
        let sector_sum: f64 = sectors.iter().sum();
        let density = sector_sum / tetra.volume();
        Ok(Self {
            scenario: scn.id,
            tetra,
            horoballs,
            certificates,
            sectors,
            sector_sum,
            density,
            packing,
            convention: opts.convention,
        })
    }

    pub fn verify(&self, tol: f64) -> Result<PackingReport> {
        verify_packing(&self.tetra, &self.horoballs, tol)
    }

    pub fn s_values(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.horoballs[i].s())
    }

    pub fn report(&self) -> ArrangementReport {
        ArrangementReport {
            scenario: self.scenario,
            z: self.tetra.z(),
            alpha: self.tetra.alpha(),
            tet_volume: self.tetra.volume(),
            balls: (0..4)
                .map(|i| BallReport {
                    index: i,
                    center: self.horoballs[i].center().normalized().expect("ideal").coords(),
                    s: self.horoballs[i].s(),
                    sector_volume: self.sectors[i],
                })
                .collect(),
            contacts: self
                .certificates
                .iter()
                .map(|c| ContactReport {
                    constraint: c.description.clone(),
                    touch_point: c.touch_point.normalized().expect("contact point").coords(),
                    edge_t: c.edge_t,
                    residual: c.residual,
                })
                .collect(),
            pair_gaps: self.packing.pairs.clone(),
            face_margins: self.packing.faces.clone(),
            sector_sum: self.sector_sum,
            density: self.density,
            packing_ok: self.packing.pass,
        }
    }
}

fn edge_parameter(tetra: &SymmetricTetrahedron, a: usize, b: usize, p: &ProjectivePoint) -> Result<f64> {
    let pa = tetra.vertex(a).affine_coords()?;
    let pb = tetra.vertex(b).affine_coords()?;
    let pp = p.affine_coords()?;
    let (mut num, mut den) = (0.0, 0.0);
    for k in 0..3 {
        num += (pp[k] - pa[k]) * (pb[k] - pa[k]);
        den += (pb[k] - pa[k]).powi(2);
    }
    Ok(num / den)
}

/// Solves the scenario at `z` and verifies the resulting packing.
pub fn solve_scenario(scn: &Scenario, z: f64) -> Result<Arrangement> {
    solve_scenario_with(scn, z, SolveOptions::default())
}

pub fn solve_scenario_with(scn: &Scenario, z: f64, opts: SolveOptions) -> Result<Arrangement> {
    scn.validate()?;
    let tetra = SymmetricTetrahedron::new(z)?;
    let free = match closure_pair(scn) {
        Some(pair) => Some(solve_free_size(scn, &tetra, pair)?),
        None => None,
    };
    let partial = resolve(scn, &tetra, free)?;
    Arrangement::from_sizes(scn, tetra, partial, opts)
}

/// Arrangement from explicitly given sizes, verified but without binding
/// constraints.
pub fn arrangement_from_sizes(z: f64, s: [f64; 4], opts: SolveOptions) -> Result<Arrangement> {
    let scn = Scenario {
        id: ScenarioId::S1,
        constraints: Vec::new(),
        closed_ends: (true, true),
    };
    let tetra = SymmetricTetrahedron::new(z)?;
    let partial = Partial {
        s: s.map(Some),
        contacts: Vec::new(),
    };
    Arrangement::from_sizes(&scn, tetra, partial, opts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallReport {
    pub index: usize,
    pub center: [f64; 4],
    pub s: f64,
    pub sector_volume: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactReport {
    pub constraint: String,
    pub touch_point: [f64; 4],
    pub edge_t: Option<f64>,
    pub residual: f64,
}

/// Serializable summary of a solved arrangement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrangementReport {
    pub scenario: ScenarioId,
    pub z: f64,
    pub alpha: f64,
    pub tet_volume: f64,
    pub balls: Vec<BallReport>,
    pub contacts: Vec<ContactReport>,
    pub pair_gaps: Vec<PairMargin>,
    pub face_margins: Vec<FaceMargin>,
    pub sector_sum: f64,
    pub density: f64,
    pub packing_ok: bool,
}

/// Combined volume of two sectors whose horoballs touch at displacement `x`
/// from the equal-volume position: `V(x) = (V₀/2)(e^{2x} + e^{−2x})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub v0: f64,
    pub x: f64,
}

pub fn growth_value(profile: &GrowthProfile) -> f64 {
    0.5 * profile.v0 * ((2.0 * profile.x).exp() + (-2.0 * profile.x).exp())
}

/// `½V₀e^{−2(x−x₁)} + ¼V₀e^{2x} + ¼V₀e^{−2x}`.
pub fn two_sector_profile(v0: f64, x1: f64, x: f64) -> f64 {
    0.5 * v0 * (-2.0 * (x - x1)).exp() + 0.25 * v0 * (2.0 * x).exp() + 0.25 * v0 * (-2.0 * x).exp()
}

/// Point of the geodesic between ideal points `a` and `b` at signed distance
/// `x` from the base point `ã + b̃` (both scaled to `x⁰ = 1`), toward `b`.
pub fn geodesic_point(a: &ProjectivePoint, b: &ProjectivePoint, x: f64) -> Result<ProjectivePoint> {
    for p in [a, b] {
        if p.classify() != PointClass::Ideal {
            return Err(Error::Domain("geodesic endpoints must be ideal".into()));
        }
    }
    let (a, b) = (a.normalized()?, b.normalized()?);
    ProjectivePoint::from_vector(a.vector() * (-x).exp() + b.vector() * x.exp())
}

/// Sector volumes of the horoballs at `E_a` and `E_b` touching at
/// `geodesic_point(E_a, E_b, x)`. Faces are not checked.
pub fn edge_sector_pair(
    tetra: &SymmetricTetrahedron,
    a: usize,
    b: usize,
    x: f64,
    convention: ChordConvention,
) -> Result<(f64, f64)> {
    let p = geodesic_point(tetra.vertex(a), tetra.vertex(b), x)?;
    let ha = Horoball::through_point(*tetra.vertex(a), &p)?;
    let hb = Horoball::through_point(*tetra.vertex(b), &p)?;
    Ok((
        sector_volume_with(&ha, &tetra.trihedron(a), convention, false)?,
        sector_volume_with(&hb, &tetra.trihedron(b), convention, false)?,
    ))
}

/// Displacement along `E_aE_b` at which touching horoballs have equal
/// sector volumes (the same-type position), to 1e−11 in volume ratio.
pub fn same_type_offset(tetra: &SymmetricTetrahedron, a: usize, b: usize) -> Result<f64> {
    let log_ratio = |x: f64| -> Result<f64> {
        let (va, vb) = edge_sector_pair(tetra, a, b, x, ChordConvention::HalfChord)?;
        Ok((va / vb).ln())
    };
    let (mut lo, mut hi) = (-1.0, 1.0);
    for _ in 0..8 {
        if log_ratio(lo)? < 0.0 && log_ratio(hi)? > 0.0 {
            break;
        }
        lo *= 2.0;
        hi *= 2.0;
    }
    if !(log_ratio(lo)? < 0.0 && log_ratio(hi)? > 0.0) {
        return Err(Error::NonConvergence {
            message: "no equal-volume position on the edge".into(),
            estimate: 0.0,
            error: f64::INFINITY,
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let r = log_ratio(mid)?;
        if r.abs() < 1e-12 {
            return Ok(mid);
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A maximal `z`-range on which a scenario is feasible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibleInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    /// Whether each end is the end of the search domain rather than a located boundary.
    pub lo_is_domain_end: bool,
    pub hi_is_domain_end: bool,
}

impl FeasibleInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, z: f64) -> bool {
        let above = if self.lo_closed { z >= self.lo } else { z > self.lo };
        let below = if self.hi_closed { z <= self.hi } else { z < self.hi };
        above && below
    }
}

/// Inset used for open ends of a search domain.
pub const DOMAIN_INSET: f64 = 1e-6;

/// Feasibility predicate used for interval location: solve succeeds under the
/// strict packing tolerance with every required tangency binding.
pub fn is_feasible(scn: &Scenario, z: f64) -> bool {
    solve_scenario_with(scn, z, SolveOptions::strict()).is_ok()
}

/// Feasible sub-intervals of the scenario's search domain: a uniform grid of
/// `grid` cells, then bisection of each feasibility change to 1e−12.
pub fn feasible_intervals(scn: &Scenario, grid: usize) -> Result<Vec<FeasibleInterval>> {
    let dom = scn.search_domain();
    let lo_end = if dom.lo_closed {
        dom.lo
    } else {
        dom.lo + DOMAIN_INSET
    };
    let hi_end = if dom.hi_closed {
        dom.hi
    } else {
        dom.hi - DOMAIN_INSET
    };
    let grid = grid.max(2);
    let zs: Vec<f64> = (0..=grid)
        .map(|k| {
            if k == 0 {
                lo_end
            } else if k == grid {
                hi_end
            } else {
                dom.lo + (dom.hi - dom.lo) * k as f64 / grid as f64
            }
        })
        .collect();
    let ok: Vec<bool> = zs.par_iter().map(|&z| is_feasible(scn, z)).collect();
    let boundary = |a: f64, b: f64| -> f64 {
        // Feasibility differs at a and b; shrink towards the change.
        let fa = is_feasible(scn, a);
        let (mut a, mut b) = (a, b);
        while b - a > 1e-12 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if is_feasible(scn, m) == fa {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    };
    let mut out = Vec::new();
    let mut k = 0;
    while k < zs.len() {
        if !ok[k] {
            k += 1;
            continue;
        }
        let start = k;
        while k + 1 < zs.len() && ok[k + 1] {
            k += 1;
        }
        let (lo, lo_is_domain_end, lo_closed) = if start == 0 {
            (dom.lo, true, dom.lo_closed)
        } else {
            (boundary(zs[start - 1], zs[start]), false, scn.closed_ends.0)
        };
        let (hi, hi_is_domain_end, hi_closed) = if k == zs.len() - 1 {
            (dom.hi, true, dom.hi_closed)
        } else {
            (boundary(zs[k], zs[k + 1]), false, scn.closed_ends.1)
        };
        out.push(FeasibleInterval {
            lo,
            hi,
            lo_closed,
            hi_closed,
            lo_is_domain_end,
            hi_is_domain_end,
        });
        k += 1;
    }
    Ok(out)
}

/// Grid resolution used by [`scenario_interval`].
pub const INTERVAL_GRID: usize = 200;

/// The widest feasible interval of the scenario within its search domain.
pub fn scenario_interval(scn: &Scenario) -> Result<FeasibleInterval> {
    feasible_intervals(scn, INTERVAL_GRID)?
        .into_iter()
        .max_by(|a, b| a.width().total_cmp(&b.width()))
        .ok_or_else(|| Error::Infeasible {
            scenario: scn.id.to_string(),
            z: f64::NAN,
            constraint: "nowhere feasible in the search domain".into(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::hyperbolic_distance;

    #[test]
    fn regular_arrangement() {
        let arr = solve_scenario(&Scenario::new(ScenarioId::S1), 0.0).unwrap();
        // The model centre is not the barycentre, so the s values differ
        // (1/2 at E0, 1/7 elsewhere) while all sectors agree.
        let s = arr.s_values();
        assert!(
            (s[0] - 0.5).abs() < 1e-12 && (s[3] - 1.0 / 7.0).abs() < 1e-12,
            "{s:?}"
        );
        assert_eq!(arr.packing.tangencies(1e-10), 6);
        assert!((arr.density - 0.853_276_09).abs() < 1e-8, "{}", arr.density);
        for v in arr.sectors {
            assert!((v - 3f64.sqrt() / 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn side_balls_are_symmetric() {
        for id in [ScenarioId::S1, ScenarioId::S2] {
            let arr = solve_scenario(&Scenario::new(id), 0.3).unwrap();
            let s = arr.s_values();
            assert!((s[1] - s[2]).abs() < 1e-11, "{id}: {s:?}");
            for c in &arr.certificates {
                if matches!(c.constraint, Constraint::SymmetricSeed { .. }) {
                    assert!(c.touch_point.coords()[1].abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn inflated_ball_fails_verification() {
        let arr = solve_scenario(&Scenario::new(ScenarioId::S1), 0.3).unwrap();
        let mut balls = arr.horoballs;
        balls[3] = Horoball::new(*balls[3].center(), balls[3].s() - 0.01).unwrap();
        let rep = verify_packing(&arr.tetra, &balls, CONTACT_TOLERANCE).unwrap();
        assert!(!rep.pass);
        assert!(rep.pairs.iter().any(|p| p.gap < 0.0 && (p.i == 3 || p.j == 3)));
    }

    #[test]
    fn infeasible_configuration_is_reported() {
        let err = solve_scenario(&Scenario::new(ScenarioId::S1), 0.8).unwrap_err();
        assert!(matches!(err, Error::Infeasible { .. }), "{err:?}");
    }

    #[test]
    fn growth_functions() {
        let p = GrowthProfile { v0: 0.7, x: 0.0 };
        assert_eq!(growth_value(&p), 0.7);
        let a = growth_value(&GrowthProfile { v0: 0.7, x: 0.4 });
        let b = growth_value(&GrowthProfile { v0: 0.7, x: -0.4 });
        assert!((a - b).abs() < 1e-15 && a > 0.7);
        assert!((two_sector_profile(1.0, 0.0, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn geodesic_point_is_arclength() {
        let t = SymmetricTetrahedron::new(0.2).unwrap();
        let p = geodesic_point(t.vertex(0), t.vertex(3), 0.3).unwrap();
        let q = geodesic_point(t.vertex(0), t.vertex(3), -0.45).unwrap();
        assert!((hyperbolic_distance(&p, &q).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn same_type_position_balances_volumes() {
        let t = SymmetricTetrahedron::new(0.4).unwrap();
        let x0 = same_type_offset(&t, 0, 3).unwrap();
        let (a, b) = edge_sector_pair(&t, 0, 3, x0, ChordConvention::HalfChord).unwrap();
        assert!((a / b - 1.0).abs() < 1e-11);
    }
}
