use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::types::{BidderId, PiecewiseInstance};
use crate::{math, Error, EPS_CLASS, EPS_PROB};

/// One named invariant violation with its location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ValidationIssue {
    /// Partition points not finite / not strictly increasing / negative infimum.
    Partition { index: usize },
    /// Table entry not finite or negative.
    EntryRange { row: BidderId, column: usize },
    /// `φ_{σ,j} > φ_{σ,j+1}` breaks row monotonicity (reported at `j+1`).
    RowMonotonicity { row: BidderId, column: usize },
    /// `φ_{σ,j} <= λ_{j+1}` for `j >= 1`, or `φ_{σ,0} < λ_0`.
    Rationality { row: BidderId, column: usize },
    /// A real row dips below the pseudo row, so its reconstructed bid CDF
    /// would decrease.
    PseudoDominance { row: BidderId, column: usize },
    /// Column feasibility sum below the bidder count at a piece endpoint.
    Feasibility { column: usize, at_right_endpoint: bool },
    /// Conditional value atom outside `[γ, φ_{H,0}]`, or a negative weight.
    CondValueSupport { atom: usize },
    /// Conditional value probabilities do not sum to one.
    CondValueMass { total: f64 },
}

impl core::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ValidationIssue::Partition { index } => {
                write!(f, "partition not finite/ascending at point {index}")
            }
            ValidationIssue::EntryRange { row, column } => {
                write!(f, "entry ({row}, {column}) not finite or negative")
            }
            ValidationIssue::RowMonotonicity { row, column } => {
                write!(f, "row-monotonicity violated at ({row}, {column})")
            }
            ValidationIssue::Rationality { row, column } => {
                write!(f, "rationality violated at ({row}, {column})")
            }
            ValidationIssue::PseudoDominance { row, column } => {
                write!(f, "row ({row}) dips below the pseudo row at column {column}")
            }
            ValidationIssue::Feasibility { column, at_right_endpoint } => {
                let end = if *at_right_endpoint { "right" } else { "left" };
                write!(f, "feasibility sum below bidder count at column {column} ({end} endpoint)")
            }
            ValidationIssue::CondValueSupport { atom } => {
                write!(f, "conditional value atom {atom} outside [infimum bid, ceiling value]")
            }
            ValidationIssue::CondValueMass { total } => {
                write!(f, "conditional value mass {total} != 1")
            }
        }
    }
}

/// Everything `validate` found; empty report ⇔ valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl core::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

/// Column feasibility sum `Σ_{real σ} (φ_{L,j} - b) / (φ_{σ,j} - b)`.
///
/// Rows whose entry collapses onto the pseudo entry contribute exactly one;
/// that keeps the check meaningful when `φ = b` at a piece boundary.
pub(crate) fn feasibility_sum(inst: &PiecewiseInstance, col: usize, b: f64) -> f64 {
    let table = inst.table();
    let ell = table.value(BidderId::Pseudo, col);
    let mut sum = 0.0;
    for id in table.real_ids() {
        let phi = table.value(id, col);
        if math::close_rel(phi, ell, EPS_CLASS, 1.0) {
            sum += 1.0;
        } else {
            sum += (ell - b) / (phi - b);
        }
    }
    sum
}

/// Checks every instance invariant and reports each violation by name with
/// the offending row/column. Dimension mismatches never reach this point
/// (`PiecewiseInstance::new` rejects them as structural errors).
pub fn validate(inst: &PiecewiseInstance) -> Result<ValidationReport, Error> {
    let mut issues = Vec::new();
    let pts = inst.partition().points();
    let table = inst.table();
    let cols = table.columns();

    if !(pts[0] >= 0.0) || !pts[0].is_finite() {
        issues.push(ValidationIssue::Partition { index: 0 });
    }
    for i in 1..pts.len() {
        if !pts[i].is_finite() || !(pts[i] > pts[i - 1]) {
            issues.push(ValidationIssue::Partition { index: i });
        }
    }

    for id in table.bidder_ids() {
        let row = table.row(id);
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                issues.push(ValidationIssue::EntryRange { row: id, column: j });
            }
        }
        for j in 1..cols {
            if row[j] < row[j - 1] {
                issues.push(ValidationIssue::RowMonotonicity { row: id, column: j });
            }
        }
        // Rationality: strictly above the right piece endpoint on every piece
        // except piece 0, where the entry may sit anywhere at or above γ.
        if row[0] < pts[0] {
            issues.push(ValidationIssue::Rationality { row: id, column: 0 });
        }
        for j in 1..cols {
            if !(row[j] > pts[j + 1]) {
                issues.push(ValidationIssue::Rationality { row: id, column: j });
            }
        }
    }

    // The pseudo row must be the pointwise minimum; otherwise some
    // reconstructed bid CDF decreases.
    for id in table.real_ids() {
        let row = table.row(id);
        let pseudo = table.row(BidderId::Pseudo);
        for j in 0..cols {
            if row[j] < pseudo[j] * (1.0 - EPS_CLASS) - EPS_CLASS {
                issues.push(ValidationIssue::PseudoDominance { row: id, column: j });
            }
        }
    }

    // Feasibility at both piece endpoints. The summands are monotone in b on
    // each piece (given pseudo dominance), so endpoint checks cover the piece.
    let n = inst.n() as f64;
    let slack = 1e-9 * (n + 1.0);
    for j in 0..cols {
        for (b, right) in [(pts[j], false), (pts[j + 1], true)] {
            let s = feasibility_sum(inst, j, b);
            if !(s >= n - slack) {
                issues.push(ValidationIssue::Feasibility { column: j, at_right_endpoint: right });
            }
        }
    }

    let ceiling = table.ceiling_value();
    let gamma = inst.gamma();
    for (i, (v, p)) in inst.cond_value().atoms().enumerate() {
        let tol = EPS_CLASS * ceiling.max(1.0);
        if !(p >= 0.0) || !v.is_finite() || v < gamma - tol || v > ceiling + tol {
            issues.push(ValidationIssue::CondValueSupport { atom: i });
        }
    }
    let total = inst.cond_value().total_mass();
    if math::abs(total - 1.0) > EPS_PROB {
        issues.push(ValidationIssue::CondValueMass { total });
    }

    Ok(ValidationReport { issues })
}
