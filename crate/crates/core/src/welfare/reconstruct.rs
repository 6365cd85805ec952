use alloc::vec::Vec;

use crate::instance::{BidderId, PiecewiseInstance};
use crate::{math, Error};

/// Tolerated negative mass from rounding before reconstruction errors out.
const OMEGA_SLACK: f64 = 1e-12;

/// Bid CDFs reconstructed from the partition-table pair.
///
/// Within piece `j` the closed forms are, with `ℓ = φ_{L,j}`:
/// real row: `B(b) = B(λ_{j+1}) · (ℓ-λ_{j+1})/(ℓ-b) · (φ-b)/(φ-λ_{j+1})`;
/// pseudo row: `L(b) = L(λ_{j+1}) · ((ℓ-b)/(ℓ-λ_{j+1}))^n · Π_real (φ_σ-λ_{j+1})/(φ_σ-b)`,
/// `n` counting the real rows (monopolist included) minus one. Real rows whose
/// entry equals the pseudo entry bitwise cancel one pseudo power exactly, so
/// dummy bidders leave every number bit-identical.
#[derive(Debug, Clone)]
pub struct ReconstructedBids {
    inst: PiecewiseInstance,
    /// `B_σ(λ_j)` per row (bidder order), `j = 0..=m+1`.
    cdf_at_partition: Vec<Vec<f64>>,
    /// `ω_{σ,j} = 1 - B_σ(λ_j)/B_σ(λ_{j+1})` per row per piece.
    omega: Vec<Vec<f64>>,
}

fn row_index(inst: &PiecewiseInstance, id: BidderId) -> usize {
    match id {
        BidderId::Monopolist => 0,
        BidderId::Real(i) => 1 + i,
        BidderId::Pseudo => 1 + inst.n(),
    }
}

impl ReconstructedBids {
    pub fn instance(&self) -> &PiecewiseInstance {
        &self.inst
    }

    /// `B_σ(λ_j)`.
    pub fn cdf_at(&self, id: BidderId, point: usize) -> f64 {
        self.cdf_at_partition[row_index(&self.inst, id)][point]
    }

    /// `ω_{σ,j}`.
    pub fn omega(&self, id: BidderId, piece: usize) -> f64 {
        self.omega[row_index(&self.inst, id)][piece]
    }

    /// `B_σ(γ)`.
    pub fn mass_at_infimum(&self, id: BidderId) -> f64 {
        self.cdf_at(id, 0)
    }

    /// Within-piece closed-form CDF evaluation.
    pub fn cdf(&self, id: BidderId, b: f64) -> f64 {
        let pts = self.inst.partition().points();
        if b < pts[0] {
            return 0.0;
        }
        if b >= self.inst.lambda() {
            return 1.0;
        }
        let j = self.inst.partition().piece_of(b);
        let table = self.inst.table();
        let ell = table.value(BidderId::Pseudo, j);
        let right = pts[j + 1];
        let at_right = self.cdf_at(id, j + 1);
        match id {
            BidderId::Pseudo => {
                let mut v = at_right;
                let mut active = 0i32;
                for rid in table.real_ids() {
                    let phi = table.value(rid, j);
                    if phi != ell {
                        v *= (phi - right) / (phi - b);
                        active += 1;
                    }
                }
                v * math::powf((ell - b) / (ell - right), (active - 1) as f64)
            }
            _ => {
                let phi = table.value(id, j);
                if phi == ell {
                    at_right
                } else {
                    at_right * ((ell - right) / (ell - b)) * ((phi - b) / (phi - right))
                }
            }
        }
    }

    /// `B'_σ(b) / B_σ(b)` within the piece containing `b`.
    pub fn log_deriv(&self, id: BidderId, b: f64) -> f64 {
        let j = self.inst.partition().piece_of(b);
        let table = self.inst.table();
        let ell = table.value(BidderId::Pseudo, j);
        match id {
            BidderId::Pseudo => {
                let mut s = 0.0;
                let mut active = 0i32;
                for rid in table.real_ids() {
                    let phi = table.value(rid, j);
                    if phi != ell {
                        s += 1.0 / (phi - b);
                        active += 1;
                    }
                }
                s - (active - 1) as f64 / (ell - b)
            }
            _ => {
                let phi = table.value(id, j);
                if phi == ell {
                    0.0
                } else {
                    1.0 / (ell - b) - 1.0 / (phi - b)
                }
            }
        }
    }

    /// First-order CDF `𝓑(b) = Π_σ B_σ(b)`, strictly increasing on the
    /// support with the per-piece closed form `𝓑(λ_{j+1})·(ℓ-λ_{j+1})/(ℓ-b)`.
    pub fn first_order(&self, b: f64) -> f64 {
        let pts = self.inst.partition().points();
        if b < pts[0] {
            return 0.0;
        }
        if b >= self.inst.lambda() {
            return 1.0;
        }
        let j = self.inst.partition().piece_of(b);
        let ell = self.inst.table().value(BidderId::Pseudo, j);
        self.first_order_at_point(j + 1) * (ell - pts[j + 1]) / (ell - b)
    }

    /// `𝓑(λ_j)`.
    pub fn first_order_at_point(&self, point: usize) -> f64 {
        self.cdf_at_partition.iter().map(|row| row[point]).product()
    }
}

/// Reconstructs the bid CDFs. Fails with a reconstruction error naming the
/// row and column whenever some `ω` falls outside `[0, 1]` (a feasibility or
/// dominance breach) or a table entry puts a pole inside its piece.
pub fn reconstruct_bids(inst: &PiecewiseInstance) -> Result<ReconstructedBids, Error> {
    let pts = inst.partition().points();
    let table = inst.table();
    let cols = table.columns();
    let rows = table.rows();
    let mut ratios: Vec<Vec<f64>> = alloc::vec![alloc::vec![1.0; cols]; rows];

    for j in 0..cols {
        let (a, c) = (pts[j], pts[j + 1]);
        let ell = table.value(BidderId::Pseudo, j);
        let mut real_product = 1.0;
        let mut active = 0i32;
        for id in table.real_ids() {
            let phi = table.value(id, j);
            let r = if phi == ell {
                1.0
            } else if phi == a && j == 0 {
                // Value pinned at the infimum bid: this row's CDF reaches
                // zero here, which forces the pseudo row to diverge below.
                real_product = f64::INFINITY;
                active += 1;
                0.0
            } else if phi <= c {
                return Err(Error::Reconstruction { row: id, column: j });
            } else {
                real_product *= (phi - c) / (phi - a);
                active += 1;
                ((ell - c) / (ell - a)) * ((phi - a) / (phi - c))
            };
            if !r.is_finite() || !(-OMEGA_SLACK..=1.0 + OMEGA_SLACK).contains(&r) {
                return Err(Error::Reconstruction { row: id, column: j });
            }
            ratios[row_index(inst, id)][j] = r.clamp(0.0, 1.0);
        }
        if ell <= c && active > 0 {
            return Err(Error::Reconstruction { row: BidderId::Pseudo, column: j });
        }
        let r_l = real_product * math::powf((ell - a) / (ell - c), (active - 1) as f64);
        if !r_l.is_finite() || !(-OMEGA_SLACK..=1.0 + OMEGA_SLACK).contains(&r_l) {
            return Err(Error::Reconstruction { row: BidderId::Pseudo, column: j });
        }
        ratios[row_index(inst, BidderId::Pseudo)][j] = r_l.clamp(0.0, 1.0);
    }

    let mut cdf_at_partition: Vec<Vec<f64>> = alloc::vec![alloc::vec![1.0; cols + 1]; rows];
    let mut omega: Vec<Vec<f64>> = alloc::vec![alloc::vec![0.0; cols]; rows];
    for row in 0..rows {
        for j in (0..cols).rev() {
            cdf_at_partition[row][j] = cdf_at_partition[row][j + 1] * ratios[row][j];
            omega[row][j] = 1.0 - ratios[row][j];
        }
    }

    Ok(ReconstructedBids { inst: inst.clone(), cdf_at_partition, omega })
}

/// Per-bidder discrete value distributions implied by an instance.
#[derive(Debug, Clone)]
pub struct ReconstructedValues {
    /// Sorted `(value, probability)` per row in bidder order.
    pub per_bidder: Vec<Vec<(f64, f64)>>,
}

impl ReconstructedValues {
    pub fn bidder(&self, inst: &PiecewiseInstance, id: BidderId) -> &[(f64, f64)] {
        &self.per_bidder[row_index(inst, id)]
    }
}

/// Pushes the bid masses through the table: bidder `σ` holds mass
/// `B_σ(λ_{j+1}) - B_σ(λ_j)` at value `φ_{σ,j}` plus its boundary mass at
/// `γ` (for the monopolist, spread over the conditional value atoms).
pub fn reconstruct_values(inst: &PiecewiseInstance, bids: &ReconstructedBids) -> ReconstructedValues {
    let table = inst.table();
    let cols = table.columns();
    let gamma = inst.gamma();
    let mut per_bidder = Vec::with_capacity(table.rows());
    for id in table.bidder_ids() {
        let mut atoms: Vec<(f64, f64)> = Vec::new();
        let boundary = bids.mass_at_infimum(id);
        if id == BidderId::Monopolist {
            for (v, p) in inst.cond_value().atoms() {
                push_atom(&mut atoms, v, boundary * p);
            }
        } else {
            push_atom(&mut atoms, gamma, boundary);
        }
        for j in 0..cols {
            let mass = bids.cdf_at(id, j + 1) - bids.cdf_at(id, j);
            push_atom(&mut atoms, table.value(id, j), mass);
        }
        atoms.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        // merge equal values
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (v, p) in atoms {
            match merged.last_mut() {
                Some((lv, lp)) if *lv == v => *lp += p,
                _ => merged.push((v, p)),
            }
        }
        per_bidder.push(merged);
    }
    ReconstructedValues { per_bidder }
}

fn push_atom(atoms: &mut Vec<(f64, f64)>, v: f64, p: f64) {
    if p > 0.0 {
        atoms.push((v, p));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{BidToValueTable, ConditionalValue, Partition};
    use crate::num::adaptive_gk;
    use alloc::vec;

    fn two_piece_pseudo_only() -> PiecewiseInstance {
        PiecewiseInstance::new(
            Partition::new(vec![0.0, 0.5, 0.9]).unwrap(),
            BidToValueTable::new(vec![2.0, 2.0], vec![], vec![1.0, 1.5]),
            ConditionalValue::point(2.0),
        )
        .unwrap()
    }

    #[test]
    fn identical_rows_give_zero_mass() {
        // Single piece with φ_H = φ_L: the monopolist row is a dummy, ω_H = 0.
        let inst = PiecewiseInstance::new(
            Partition::new(vec![0.0, 0.5]).unwrap(),
            BidToValueTable::new(vec![1.0], vec![], vec![1.0]),
            ConditionalValue::point(1.0),
        )
        .unwrap();
        let bids = reconstruct_bids(&inst).unwrap();
        assert_eq!(bids.omega(BidderId::Monopolist, 0), 0.0);
        assert_eq!(bids.cdf_at(BidderId::Monopolist, 0), 1.0);
    }

    #[test]
    fn omegas_match_numeric_integration_of_log_derivative() {
        // Cross-check the closed-form ω against adaptive quadrature of the
        // defining log-derivative integral, to 1e-10.
        let inst = two_piece_pseudo_only();
        let bids = reconstruct_bids(&inst).unwrap();
        let pts = inst.partition().points().to_vec();
        for id in [BidderId::Monopolist, BidderId::Pseudo] {
            for j in 0..2 {
                let integral = adaptive_gk(
                    |b| bids.log_deriv(id, b.min(pts[j + 1] - 1e-13).max(pts[j])),
                    pts[j],
                    pts[j + 1],
                    1e-12,
                    1e-14,
                    4000,
                )
                .unwrap()
                .value;
                let ratio = math::exp(-integral);
                let omega_quad = 1.0 - ratio;
                assert!(
                    math::abs(omega_quad - bids.omega(id, j)) < 1e-10,
                    "row {id} piece {j}: {} vs {}",
                    omega_quad,
                    bids.omega(id, j)
                );
            }
        }
    }

    #[test]
    fn cdf_is_nondecreasing_and_hits_one() {
        let inst = two_piece_pseudo_only();
        let bids = reconstruct_bids(&inst).unwrap();
        for id in [BidderId::Monopolist, BidderId::Pseudo] {
            let mut prev = 0.0;
            for i in 0..=100 {
                let b = 0.9 * i as f64 / 100.0;
                let v = bids.cdf(id, b);
                assert!(v >= prev - 1e-12);
                assert!((0.0..=1.0 + 1e-12).contains(&v));
                prev = v;
            }
            assert_eq!(bids.cdf(id, 0.9), 1.0);
        }
        // first-order CDF consistency with the product of rows
        for i in 0..=50 {
            let b = 0.9 * i as f64 / 50.0;
            let prod = bids.cdf(BidderId::Monopolist, b) * bids.cdf(BidderId::Pseudo, b);
            assert!(math::abs(prod - bids.first_order(b)) < 1e-12);
        }
    }

    #[test]
    fn value_masses_sum_to_one() {
        let inst = two_piece_pseudo_only();
        let bids = reconstruct_bids(&inst).unwrap();
        let values = reconstruct_values(&inst, &bids);
        for id in [BidderId::Monopolist, BidderId::Pseudo] {
            let total: f64 = values.bidder(&inst, id).iter().map(|a| a.1).sum();
            assert!(math::abs(total - 1.0) < 1e-12, "{id}: {total}");
        }
    }

    #[test]
    fn dummy_bidder_leaves_cdfs_bit_identical() {
        let inst = two_piece_pseudo_only();
        let with_dummy = inst.with_dummy_bidder().unwrap();
        let a = reconstruct_bids(&inst).unwrap();
        let b = reconstruct_bids(&with_dummy).unwrap();
        for point in 0..=2 {
            assert_eq!(a.cdf_at(BidderId::Monopolist, point), b.cdf_at(BidderId::Monopolist, point));
            assert_eq!(a.cdf_at(BidderId::Pseudo, point), b.cdf_at(BidderId::Pseudo, point));
            assert_eq!(b.cdf_at(BidderId::Real(0), point), 1.0);
        }
    }

    #[test]
    fn non_dominant_row_reports_reconstruction_error() {
        // Real row dips below the pseudo row: its CDF would decrease.
        let inst = PiecewiseInstance::new(
            Partition::new(vec![0.0, 0.4]).unwrap(),
            BidToValueTable::new(vec![3.0], vec![vec![1.0]], vec![2.0]),
            ConditionalValue::point(3.0),
        )
        .unwrap();
        let err = reconstruct_bids(&inst).unwrap_err();
        assert!(matches!(err, Error::Reconstruction { row: BidderId::Real(0), column: 0 }));
    }
}
