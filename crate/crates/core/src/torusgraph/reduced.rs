//! Move-reducedness, invariant reports and the equivalence decision.

use serde::Serialize;
use thiserror::Error;

use super::labels::{Analysis, ERegionLabeling, LabelError};
use super::polygon::{StrongPolygon, WeakPolygon};
use super::Embedding;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReducedStatus {
    Reduced,
    NotReduced,
    /// Single simple null-homologous strand; move-reduced without perfect matchings.
    ExceptionalMonogon,
    /// No perfect matching and not the exceptional pattern: undecided.
    NoPerfectMatching,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReducedError {
    #[error("graph is not move-reduced ({0:?})")]
    NotReduced(ReducedStatus),
    #[error(transparent)]
    Label(#[from] LabelError),
}

/// Everything computed about a graph.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub homologies: Vec<(i64, i64)>,
    pub weak: WeakPolygon,
    pub twice_area: i64,
    pub excess: u64,
    pub contractible_faces: usize,
    pub perfect_matching: bool,
    pub contractible_component: bool,
    pub leaf: bool,
    pub status: ReducedStatus,
    pub strong: Option<StrongPolygon>,
    /// `(μ, d)` for reduced graphs.
    pub modular: Option<(u64, u64)>,
    pub labelings: Vec<ERegionLabeling>,
    pub warnings: Vec<String>,
}

impl Embedding {
    pub fn is_move_reduced(&self) -> ReducedStatus {
        self.status_with(&self.newton_polygon_weak(), self.count_contractible_faces()).0
    }

    fn status_with(&self, weak: &WeakPolygon, faces: usize) -> (ReducedStatus, Vec<String>) {
        let mut warnings = Vec::new();
        if !self.perfect_matching_exists() {
            let strands = self.strands();
            let st = if strands.len() == 1 && strands[0].homology == (0, 0) && self.strand_lift_is_simple(&strands[0]) {
                ReducedStatus::ExceptionalMonogon
            } else {
                ReducedStatus::NoPerfectMatching
            };
            return (st, warnings);
        }
        if weak.is_point() {
            warnings.push("Newton polygon is a single point; the face-count criterion is applied with target 0".into());
        }
        let target = weak.twice_area() as u64 + weak.excess();
        let ok = faces as u64 == target && !self.has_contractible_component() && !self.has_leaf();
        (if ok { ReducedStatus::Reduced } else { ReducedStatus::NotReduced }, warnings)
    }

    pub fn strong_decoration(&self) -> Result<StrongPolygon, ReducedError> {
        self.require_reduced()?;
        Ok(Analysis::new(self).strong_polygon()?.0)
    }

    /// `(μ, d(bfcc))`.
    pub fn modular_invariant(&self) -> Result<(u64, u64), ReducedError> {
        self.require_reduced()?;
        let a = Analysis::new(self);
        let (strong, labs) = a.strong_polygon()?;
        Ok(a.modular_invariant(&strong, &labs)?)
    }

    fn require_reduced(&self) -> Result<(), ReducedError> {
        match self.is_move_reduced() {
            ReducedStatus::Reduced => Ok(()),
            s => Err(ReducedError::NotReduced(s)),
        }
    }

    pub fn report(&self) -> Result<InvariantReport, ReducedError> {
        let a = Analysis::new(self);
        let weak = WeakPolygon::from_strands(&a.strands);
        let contractible_faces = a.faces.num_contractible();
        let (status, warnings) = self.status_with(&weak, contractible_faces);
        let (strong, modular, labelings) = if status == ReducedStatus::Reduced && !weak.is_point() {
            let (s, l) = a.strong_polygon()?;
            let mu = a.modular_invariant(&s, &l)?;
            (Some(s), Some(mu), l)
        } else {
            (None, None, Vec::new())
        };
        Ok(InvariantReport {
            homologies: a.strands.iter().map(|s| s.homology).collect(),
            twice_area: weak.twice_area(),
            excess: weak.excess(),
            weak,
            contractible_faces,
            perfect_matching: self.perfect_matching_exists(),
            contractible_component: self.has_contractible_component(),
            leaf: self.has_leaf(),
            status,
            strong,
            modular,
            labelings,
            warnings,
        })
    }
}

/// Decides move-equivalence of two reduced graphs from `(N̈, μ)`.
pub fn move_equivalent(a: &Embedding, b: &Embedding) -> Result<bool, ReducedError> {
    let ra = a.report()?;
    let rb = b.report()?;
    for r in [&ra, &rb] {
        if r.status != ReducedStatus::Reduced {
            return Err(ReducedError::NotReduced(r.status));
        }
    }
    Ok(ra.strong == rb.strong && ra.modular == rb.modular)
}
