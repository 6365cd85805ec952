use alloc::format;
use alloc::vec::Vec;

use crate::instance::{
    classify, jump_entry, BidderId, ConditionalValue, InstanceClass, JumpKind, PiecewiseInstance,
};
use crate::welfare::{poa, WelfareReport};
use crate::Error;

/// Result of [`halve`]: both sub-instances with their reports, plus the
/// chosen (ratio-worse) one.
#[derive(Debug, Clone)]
pub struct HalveOutcome {
    pub chosen: PiecewiseInstance,
    pub chosen_branch: super::Branch,
    /// Ceiling candidate on the before-jump pieces (CDFs renormalized at the
    /// jump bid).
    pub left: (PiecewiseInstance, WelfareReport),
    /// Floor candidate on the after-jump pieces, shifted down by the jump bid.
    pub right: (PiecewiseInstance, WelfareReport),
    pub lambda_star: f64,
}

/// Splits a strong-ceiling instance with a pseudo jump at the jump bid.
///
/// Left candidate: pieces before the jump with every CDF renormalized by its
/// value at the jump bid (`B^L = min(B/B(λ*), 1)`), ceiling form — on the
/// table level just the before-jump columns. Right candidate: the after-jump
/// pieces shifted by `-λ*`, floor form. Returns the ratio-worse candidate,
/// ties to the left.
pub fn halve(inst: &PiecewiseInstance) -> Result<HalveOutcome, Error> {
    let class = classify(inst);
    if !class.at_least(InstanceClass::StrongCeiling) {
        return Err(Error::UnsupportedClass {
            operation: "halve",
            required: "strong ceiling",
            actual: class,
        });
    }
    let jump = jump_entry(inst)?.ok_or_else(|| {
        Error::Domain(alloc::string::String::from("halve needs an above-ceiling entry, potential is zero"))
    })?;
    if jump.kind != JumpKind::PseudoJump {
        return Err(Error::Domain(format!(
            "halve requires a pseudo jump, found a real jump at bidder {}",
            jump.sigma_star
        )));
    }
    let j_star = jump.j_star;
    let lambda_star = jump.lambda_star;
    let pts = inst.partition().points();
    let table = inst.table();

    let left_points: Vec<f64> = pts[..=j_star].to_vec();
    let slice_row = |id: BidderId, from: usize, to: usize, shift: f64| -> Vec<f64> {
        table.row(id)[from..to].iter().map(|v| v - shift).collect()
    };
    let left = super::rebuild(
        left_points,
        slice_row(BidderId::Monopolist, 0, j_star, 0.0),
        (0..inst.n()).map(|i| slice_row(BidderId::Real(i), 0, j_star, 0.0)).collect(),
        slice_row(BidderId::Pseudo, 0, j_star, 0.0),
        ConditionalValue::point(table.ceiling_value()),
    )?;

    let cols = table.columns();
    let mut right_points = Vec::with_capacity(pts.len() - j_star);
    right_points.push(0.0);
    for &p in &pts[j_star + 1..] {
        right_points.push(p - lambda_star);
    }
    let right = super::rebuild(
        right_points,
        slice_row(BidderId::Monopolist, j_star, cols, lambda_star),
        (0..inst.n()).map(|i| slice_row(BidderId::Real(i), j_star, cols, lambda_star)).collect(),
        slice_row(BidderId::Pseudo, j_star, cols, lambda_star),
        ConditionalValue::point(0.0),
    )?;

    let left_report = poa(&left)?;
    let right_report = poa(&right)?;
    let (chosen, chosen_branch) = if right_report.poa < left_report.poa {
        (right.clone(), super::Branch::Right)
    } else {
        (left.clone(), super::Branch::Left)
    };
    Ok(HalveOutcome {
        chosen,
        chosen_branch,
        left: (left, left_report),
        right: (right, right_report),
        lambda_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{potential, BidToValueTable, Partition};
    use crate::math;
    use crate::welfare::reconstruct_bids;
    use alloc::vec;

    fn pseudo_jump_fixture() -> PiecewiseInstance {
        PiecewiseInstance::new(
            Partition::new(vec![0.0, 0.1, 0.2, 0.4]).unwrap(),
            BidToValueTable::new(vec![1.0, 1.0, 1.4], vec![], vec![0.6, 0.8, 1.2]),
            ConditionalValue::point(1.0),
        )
        .unwrap()
    }

    #[test]
    fn halve_splits_at_the_jump_and_decreases_potential() {
        let inst = pseudo_jump_fixture();
        let psi = potential(&inst).unwrap();
        let out = halve(&inst).unwrap();
        assert_eq!(out.lambda_star, 0.2);
        assert!(classify(&out.left.0).is_ceiling());
        assert_eq!(classify(&out.right.0), InstanceClass::Floor);
        for candidate in [&out.left.0, &out.right.0] {
            let p = potential(candidate).unwrap();
            assert!(p < psi, "candidate potential {p} vs input {psi}");
        }
        let before = poa(&inst).unwrap().poa;
        let chosen = poa(&out.chosen).unwrap().poa;
        assert!(chosen <= before * (1.0 + crate::EPS_POA));
    }

    #[test]
    fn welfare_decomposition_identities() {
        let inst = pseudo_jump_fixture();
        let bids = reconstruct_bids(&inst).unwrap();
        let out = halve(&inst).unwrap();
        let j_star = 2;
        let b_star = bids.first_order_at_point(j_star);
        let whole = poa(&inst).unwrap();
        let fpa_sum = out.left.1.fpa * b_star + out.right.1.fpa + out.lambda_star * (1.0 - b_star);
        let opt_sum = out.left.1.opt * b_star + out.right.1.opt + out.lambda_star * (1.0 - b_star);
        assert!(
            math::abs(fpa_sum - whole.fpa) <= 1e-9 * whole.fpa,
            "fpa {} vs {}",
            fpa_sum,
            whole.fpa
        );
        assert!(
            math::abs(opt_sum - whole.opt) <= 1e-9 * whole.opt,
            "opt {} vs {}",
            opt_sum,
            whole.opt
        );
        // left candidate of a strong ceiling with pseudo jump is twin ceiling
        assert_eq!(classify(&out.left.0), InstanceClass::TwinCeiling);
        assert!(math::abs(out.left.1.opt - 1.0) < 1e-12);
    }

    #[test]
    fn single_after_jump_column_gives_one_piece_floor() {
        let inst = PiecewiseInstance::new(
            Partition::new(vec![0.0, 0.1, 0.3]).unwrap(),
            BidToValueTable::new(vec![1.0, 1.4], vec![], vec![0.6, 1.2]),
            ConditionalValue::point(1.0),
        )
        .unwrap();
        let out = halve(&inst).unwrap();
        assert_eq!(out.right.0.partition().pieces(), 1);
        assert_eq!(classify(&out.right.0), InstanceClass::Floor);
    }

    #[test]
    fn real_jump_is_rejected() {
        let inst = PiecewiseInstance::new(
            Partition::new(vec![0.0, 0.1, 0.2, 0.4]).unwrap(),
            BidToValueTable::new(
                vec![1.0, 1.0, 1.4],
                vec![vec![0.6, 0.9, 1.2]],
                vec![0.6, 0.9, 1.0],
            ),
            ConditionalValue::point(1.0),
        )
        .unwrap();
        assert!(matches!(halve(&inst), Err(Error::Domain(_))));
    }
}
