//! Area patches of a Lagrangian diagram, their inequalities, and the flooding
//! algorithm that turns them into heights.

use std::collections::BTreeSet;

use crate::algebra::{AlgebraError, GenId, HeightAssignment};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("patch has no corners")]
    EmptyPatch,
    #[error("corner coefficient {coeff} on generator {id} is not one of -2, -1, 1, 2")]
    BadCoefficient { id: GenId, coeff: i64 },
    #[error("generator {0} appears twice in one patch")]
    DuplicateCorner(GenId),
    #[error("generator {0} is not a crossing of the diagram")]
    UnknownCrossing(GenId),
    #[error("flooding failed; no heights can be assigned")]
    FloodingFailed,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A sparse integer linear form `Σ c_i h(q_i)`, terms sorted by generator id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm(Vec<(GenId, i64)>);

impl LinearForm {
    /// Corners must be nonempty, distinct, with coefficients in {-2,-1,1,2}.
    pub fn new(mut terms: Vec<(GenId, i64)>) -> Result<Self, DiagramError> {
        if terms.is_empty() {
            return Err(DiagramError::EmptyPatch);
        }
        terms.sort_unstable();
        for w in terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(DiagramError::DuplicateCorner(w[0].0));
            }
        }
        if let Some(&(id, coeff)) = terms.iter().find(|(_, c)| !matches!(c, -2 | -1 | 1 | 2)) {
            return Err(DiagramError::BadCoefficient { id, coeff });
        }
        Ok(LinearForm(terms))
    }

    pub fn terms(&self) -> &[(GenId, i64)] {
        &self.0
    }

    pub fn coefficient(&self, id: GenId) -> i64 {
        self.0
            .binary_search_by_key(&id, |&(g, _)| g)
            .map_or(0, |pos| self.0[pos].1)
    }

    pub fn evaluate(&self, heights: &HeightAssignment) -> Result<Rational, AlgebraError> {
        let mut total = int(0);
        for &(id, c) in &self.0 {
            total += heights.get(id)? * int(c);
        }
        Ok(total)
    }
}

/// A bounded region of the diagram, described by its signed corners.
pub type AreaPatch = LinearForm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangianDiagramData {
    crossings: Vec<GenId>,
    patches: Vec<AreaPatch>,
    ng_resolved: bool,
}

impl LagrangianDiagramData {
    pub fn new(crossings: Vec<GenId>, patches: Vec<AreaPatch>, ng_resolved: bool) -> Result<Self, DiagramError> {
        let known: BTreeSet<GenId> = crossings.iter().copied().collect();
        for patch in &patches {
            if let Some(&(id, _)) = patch.terms().iter().find(|(id, _)| !known.contains(id)) {
                return Err(DiagramError::UnknownCrossing(id));
            }
        }
        Ok(LagrangianDiagramData { crossings, patches, ng_resolved })
    }

    pub fn crossings(&self) -> &[GenId] {
        &self.crossings
    }

    pub fn patches(&self) -> &[AreaPatch] {
        &self.patches
    }

    pub fn ng_resolved(&self) -> bool {
        self.ng_resolved
    }
}

/// Strict inequalities `f_i > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InequalitySystem {
    inequalities: Vec<LinearForm>,
}

impl InequalitySystem {
    pub fn new(inequalities: Vec<LinearForm>) -> Self {
        InequalitySystem { inequalities }
    }

    pub fn inequalities(&self) -> &[LinearForm] {
        &self.inequalities
    }

    pub fn len(&self) -> usize {
        self.inequalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inequalities.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<GenId> {
        self.inequalities.iter().flat_map(|f| f.terms().iter().map(|&(id, _)| id)).collect()
    }
}

pub fn area_inequalities(diagram: &LagrangianDiagramData) -> InequalitySystem {
    InequalitySystem::new(diagram.patches.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FloodStatus {
    Success,
    Failure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tiering {
    pub tiers: Vec<Vec<GenId>>,
    pub status: FloodStatus,
    pub unassigned: Vec<GenId>,
}

impl Tiering {
    pub fn succeeded(&self) -> bool {
        self.status == FloodStatus::Success
    }
}

/// Peels off tiers of generators that never appear with a negative
/// coefficient in the inequalities still standing.
pub fn flood(sys: &InequalitySystem, crossings: &[GenId]) -> Result<Tiering, DiagramError> {
    let mut untiered: BTreeSet<GenId> = crossings.iter().copied().collect();
    if let Some(&stray) = sys.variables().iter().find(|id| !untiered.contains(id)) {
        return Err(DiagramError::UnknownCrossing(stray));
    }
    let mut remaining: Vec<&LinearForm> = sys.inequalities.iter().collect();
    let mut tiers = Vec::new();
    let bound = untiered.len() + 1;

    loop {
        debug_assert!(tiers.len() <= bound, "flooding exceeded {bound} rounds");
        if remaining.is_empty() {
            tiers.push(std::mem::take(&mut untiered).into_iter().collect());
            return Ok(Tiering { tiers, status: FloodStatus::Success, unassigned: Vec::new() });
        }
        let tier: Vec<GenId> = untiered
            .iter()
            .copied()
            .filter(|&g| remaining.iter().all(|f| f.coefficient(g) >= 0))
            .collect();
        if tier.is_empty() {
            return Ok(Tiering {
                tiers,
                status: FloodStatus::Failure,
                unassigned: untiered.into_iter().collect(),
            });
        }
        remaining.retain(|f| !tier.iter().any(|&g| f.coefficient(g) > 0));
        for g in &tier {
            untiered.remove(g);
        }
        tiers.push(tier);
    }
}

/// `h_M = 1` and `h_k = 1 + Σ_{i>k} 2 h_i |T_i|`; every generator in `T_k`
/// gets `h_k`.
pub fn assign_heights(tiering: &Tiering) -> Result<HeightAssignment, DiagramError> {
    if !tiering.succeeded() {
        return Err(DiagramError::FloodingFailed);
    }
    let m = tiering.tiers.len();
    let mut levels = vec![int(1); m];
    let mut tail = int(0);
    for k in (0..m).rev() {
        levels[k] = int(1) + &tail;
        tail += int(2) * &levels[k] * int(tiering.tiers[k].len() as i64);
    }
    let mut heights = HeightAssignment::default();
    for (tier, level) in tiering.tiers.iter().zip(levels) {
        for &g in tier {
            heights.insert(g, level.clone())?;
        }
    }
    Ok(heights)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightCheck {
    pub violations: Vec<usize>,
}

impl HeightCheck {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Indices of the inequalities that do not evaluate strictly positive.
pub fn validate_heights(heights: &HeightAssignment, sys: &InequalitySystem) -> Result<HeightCheck, DiagramError> {
    let mut violations = Vec::new();
    for (i, f) in sys.inequalities.iter().enumerate() {
        if f.evaluate(heights)? <= int(0) {
            violations.push(i);
        }
    }
    Ok(HeightCheck { violations })
}
