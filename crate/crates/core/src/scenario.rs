//! Tangency-constraint scenarios.
//!
//! A scenario is an ordered list of constraints, each of which fixes the size
//! of one or two horoballs from data fixed by earlier constraints. Four of
//! them (`S1`–`S4`) describe arrangements for `z ≥ 0`; the mirrored family
//! (`M1`–`M6`) repeats the case analysis for `z ≤ 0` with the roles of the
//! vertex pairs `{0, 3}` and `{1, 2}` exchanged.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::tetrahedron::mirror_index;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScenarioId {
    S1,
    S2,
    S3,
    S4,
    M1,
    M2,
    M3,
    M4,
    M5,
    M6,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 10] = [
        ScenarioId::S1,
        ScenarioId::S2,
        ScenarioId::S3,
        ScenarioId::S4,
        ScenarioId::M1,
        ScenarioId::M2,
        ScenarioId::M3,
        ScenarioId::M4,
        ScenarioId::M5,
        ScenarioId::M6,
    ];

    pub fn is_mirrored(self) -> bool {
        !matches!(
            self,
            ScenarioId::S1 | ScenarioId::S2 | ScenarioId::S3 | ScenarioId::S4
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::S1 => "S1",
            ScenarioId::S2 => "S2",
            ScenarioId::S3 => "S3",
            ScenarioId::S4 => "S4",
            ScenarioId::M1 => "M1",
            ScenarioId::M2 => "M2",
            ScenarioId::M3 => "M3",
            ScenarioId::M4 => "M4",
            ScenarioId::M5 => "M5",
            ScenarioId::M6 => "M6",
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown scenario '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    /// Mirror-image balls `a`, `b` with equal size, tangent at the mirror-fixed point of their edge.
    SymmetricSeed { a: usize, b: usize },
    /// Mirror-image balls `a`, `b` with a common size left free until a [`Constraint::Closure`].
    SymmetricFree { a: usize, b: usize },
    /// `ball` touches the face opposite its centre.
    FaceTangent { ball: usize },
    /// `to` is sized to touch the already fixed `from`.
    PairTangent { from: usize, to: usize },
    /// Balls `a`, `b` must touch; this pins the free symmetric size.
    Closure { a: usize, b: usize },
}

impl Constraint {
    /// Balls whose size this constraint sets.
    pub fn fixes(&self) -> Vec<usize> {
        match *self {
            Constraint::SymmetricSeed { a, b } | Constraint::SymmetricFree { a, b } => vec![a, b],
            Constraint::FaceTangent { ball } => vec![ball],
            Constraint::PairTangent { to, .. } => vec![to],
            Constraint::Closure { .. } => Vec::new(),
        }
    }

    /// Balls that must already be fixed.
    pub fn needs(&self) -> Vec<usize> {
        match *self {
            Constraint::PairTangent { from, .. } => vec![from],
            Constraint::Closure { a, b } => vec![a, b],
            _ => Vec::new(),
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Constraint::SymmetricSeed { a, b } => {
                format!("B{a}, B{b} equal and tangent at the mirror point of E{a}E{b}")
            }
            Constraint::SymmetricFree { a, b } => format!("B{a}, B{b} equal"),
            Constraint::FaceTangent { ball } => format!("B{ball} touches its opposite face"),
            Constraint::PairTangent { from, to } => format!("B{to} touches B{from}"),
            Constraint::Closure { a, b } => format!("B{a} touches B{b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchDomain {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub id: ScenarioId,
    pub constraints: Vec<Constraint>,
    /// Whether the scenario's feasibility interval includes its lower and
    /// upper boundary points.
    pub closed_ends: (bool, bool),
}

impl Scenario {
    pub fn new(id: ScenarioId) -> Self {
        use Constraint::*;
        let (constraints, closed_ends) = match id {
            ScenarioId::S1 => (
                vec![
                    SymmetricSeed { a: 1, b: 2 },
                    PairTangent { from: 1, to: 3 },
                    PairTangent { from: 3, to: 0 },
                ],
                (true, true),
            ),
            ScenarioId::S2 => (
                vec![
                    FaceTangent { ball: 3 },
                    PairTangent { from: 3, to: 0 },
                    PairTangent { from: 3, to: 1 },
                    PairTangent { from: 3, to: 2 },
                ],
                (true, true),
            ),
            ScenarioId::S3 => (
                vec![
                    FaceTangent { ball: 3 },
                    PairTangent { from: 3, to: 0 },
                    PairTangent { from: 3, to: 2 },
                    PairTangent { from: 2, to: 1 },
                ],
                (false, true),
            ),
            ScenarioId::S4 => (
                vec![
                    FaceTangent { ball: 3 },
                    FaceTangent { ball: 2 },
                    PairTangent { from: 3, to: 0 },
                    PairTangent { from: 2, to: 1 },
                ],
                (false, false),
            ),
            ScenarioId::M1 => (
                vec![
                    SymmetricFree { a: 1, b: 2 },
                    PairTangent { from: 1, to: 0 },
                    PairTangent { from: 1, to: 3 },
                    Closure { a: 0, b: 3 },
                ],
                (true, true),
            ),
            ScenarioId::M2 => (
                vec![
                    FaceTangent { ball: 0 },
                    PairTangent { from: 0, to: 1 },
                    PairTangent { from: 0, to: 2 },
                    PairTangent { from: 0, to: 3 },
                ],
                (true, true),
            ),
            ScenarioId::M3 => (
                vec![
                    FaceTangent { ball: 3 },
                    PairTangent { from: 3, to: 1 },
                    PairTangent { from: 3, to: 2 },
                    PairTangent { from: 3, to: 0 },
                ],
                (true, true),
            ),
            ScenarioId::M4 => (
                vec![
                    SymmetricSeed { a: 1, b: 2 },
                    PairTangent { from: 1, to: 0 },
                    PairTangent { from: 1, to: 3 },
                ],
                (true, true),
            ),
            ScenarioId::M5 => (
                vec![
                    FaceTangent { ball: 0 },
                    PairTangent { from: 0, to: 1 },
                    PairTangent { from: 0, to: 2 },
                    PairTangent { from: 1, to: 3 },
                ],
                (true, true),
            ),
            ScenarioId::M6 => (
                vec![
                    FaceTangent { ball: 3 },
                    PairTangent { from: 3, to: 1 },
                    PairTangent { from: 3, to: 2 },
                    PairTangent { from: 1, to: 0 },
                ],
                (true, true),
            ),
        };
        let scn = Self {
            id,
            constraints,
            closed_ends,
        };
        debug_assert!(scn.validate().is_ok());
        scn
    }

    pub fn all() -> Vec<Scenario> {
        ScenarioId::ALL.into_iter().map(Scenario::new).collect()
    }

    /// Range of `z` searched for this scenario.
    pub fn search_domain(&self) -> SearchDomain {
        if self.id.is_mirrored() {
            SearchDomain {
                lo: -1.0,
                hi: 0.0,
                lo_closed: false,
                hi_closed: true,
            }
        } else {
            SearchDomain {
                lo: 0.0,
                hi: 1.0,
                lo_closed: true,
                hi_closed: false,
            }
        }
    }

    /// Checks that constraints only use already fixed balls, fix every ball
    /// exactly once, and that a free symmetric size is eventually closed.
    pub fn validate(&self) -> Result<()> {
        let mut fixed = [false; 4];
        let mut open_free = false;
        for c in &self.constraints {
            for n in c.needs() {
                if n > 3 || !fixed[n] {
                    return Err(Error::InvalidInput(format!(
                        "{}: '{}' uses B{n} before it is fixed",
                        self.id,
                        c.describe()
                    )));
                }
            }
            match *c {
                Constraint::SymmetricSeed { a, b } | Constraint::SymmetricFree { a, b } => {
                    if a > 3 || mirror_index(a) != b || a == b {
                        return Err(Error::InvalidInput(format!(
                            "{}: B{a}, B{b} are not mirror images",
                            self.id
                        )));
                    }
                    if matches!(c, Constraint::SymmetricFree { .. }) {
                        if open_free {
                            return Err(Error::InvalidInput(format!("{}: two free sizes", self.id)));
                        }
                        open_free = true;
                    }
                }
                Constraint::Closure { .. } => {
                    if !open_free {
                        return Err(Error::InvalidInput(format!(
                            "{}: closure without a free size",
                            self.id
                        )));
                    }
                    open_free = false;
                }
                Constraint::PairTangent { from, to } if from == to => {
                    return Err(Error::InvalidInput(format!("{}: B{to} touching itself", self.id)));
                }
                _ => {}
            }
            for f in c.fixes() {
                if f > 3 || fixed[f] {
                    return Err(Error::InvalidInput(format!("{}: B{f} is fixed twice", self.id)));
                }
                fixed[f] = true;
            }
        }
        if open_free {
            return Err(Error::InvalidInput(format!(
                "{}: free size never closed",
                self.id
            )));
        }
        if fixed.iter().any(|f| !f) {
            return Err(Error::InvalidInput(format!(
                "{}: not every ball is fixed",
                self.id
            )));
        }
        Ok(())
    }
}
