use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::instance::{InstanceClass, PiecewiseInstance};

/// Which reduction a step applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionRule {
    Discretize,
    Translate,
    Layer,
    Polarize,
    Slice,
    Collapse,
    Halve,
    AscendDescend,
}

/// Which candidate a branching reduction returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Floor,
    Ceiling,
    Left,
    Right,
    Ascended,
    Descended,
}

/// One applied reduction with its potential/ratio/class accounting.
///
/// The potential is defined only for floor/ceiling classes, so preprocessing
/// steps carry `None` there. Branching rules record the ratio of *both*
/// candidates in `candidate_poas` even though only one is kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub rule: ReductionRule,
    pub branch: Option<Branch>,
    pub psi_before: Option<u32>,
    pub psi_after: Option<u32>,
    pub poa_before: f64,
    pub poa_after: f64,
    pub class_before: InstanceClass,
    pub class_after: InstanceClass,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidate_poas: Vec<(Branch, f64)>,
}

/// Ordered record of a pipeline run with input/output snapshots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub input: PiecewiseInstance,
    pub output: PiecewiseInstance,
    /// Input ratio was within tolerance of one; the run short-circuited to
    /// the trivial twin-ceiling normalization without rule steps.
    pub degenerate: bool,
    /// Linear bound on accumulated floating-point slack: one ratio epsilon
    /// per recorded step.
    pub accumulated_slack: f64,
}

impl ReductionTrace {
    /// Steps drawn from the main loop's rule set.
    pub fn main_loop_steps(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| {
                matches!(
                    s.rule,
                    ReductionRule::Slice
                        | ReductionRule::Collapse
                        | ReductionRule::Halve
                        | ReductionRule::AscendDescend
                )
            })
            .count()
    }
}
