use super::types::{BidderId, InstanceClass, JumpEntry, JumpKind, PiecewiseInstance};
use super::{is_above_ceiling, validate};
use crate::{math, Error, EPS_CLASS};

/// True when the conditional value is a single atom at `v` (all mass within
/// the classification tolerance of `v`).
fn cond_value_is_point(inst: &PiecewiseInstance, v: f64) -> bool {
    let scale = inst.table().ceiling_value().max(1.0);
    inst.cond_value()
        .atoms()
        .all(|(av, ap)| ap <= EPS_CLASS || math::abs(av - v) <= EPS_CLASS * scale)
}

fn is_layered(inst: &PiecewiseInstance) -> bool {
    let table = inst.table();
    let tol = |a: f64, b: f64| a >= b - EPS_CLASS * a.max(b).max(1.0);
    for j in 0..table.columns() {
        let mut prev = table.value(BidderId::Monopolist, j);
        for i in 0..inst.n() {
            let v = table.value(BidderId::Real(i), j);
            if !tol(prev, v) {
                return false;
            }
            prev = v;
        }
        if !tol(prev, table.value(BidderId::Pseudo, j)) {
            return false;
        }
    }
    true
}

/// Effective jump column: the first column whose monopolist entry rises above
/// the ceiling value, or `columns()` (one past the last) when none does.
pub(crate) fn effective_jump_column(inst: &PiecewiseInstance) -> usize {
    let table = inst.table();
    let ceiling = table.ceiling_value();
    (0..table.columns())
        .find(|&j| is_above_ceiling(table.value(BidderId::Monopolist, j), ceiling))
        .unwrap_or(table.columns())
}

/// Non-monopoly rows collapse onto the pseudo row on every column before
/// `j_star`.
fn collapsed_before(inst: &PiecewiseInstance, j_star: usize) -> bool {
    let table = inst.table();
    for j in 0..j_star.min(table.columns()) {
        let ell = table.value(BidderId::Pseudo, j);
        for i in 0..inst.n() {
            let v = table.value(BidderId::Real(i), j);
            if !math::close_rel(v, ell, EPS_CLASS, 1.0) {
                return false;
            }
        }
    }
    true
}

/// Returns the most specific class of the instance.
///
/// Classification equalities use the relative tolerance [`crate::EPS_CLASS`];
/// instances failing [`validate`] classify as `Invalid`. Every in-range valid
/// instance is at least `Discretized` (the representation is finite by
/// construction).
pub fn classify(inst: &PiecewiseInstance) -> InstanceClass {
    match validate(inst) {
        Ok(report) if report.is_valid() => {}
        _ => return InstanceClass::Invalid,
    }
    if inst.gamma() > 0.0 {
        return InstanceClass::Discretized;
    }
    if !is_layered(inst) {
        return InstanceClass::Translated;
    }
    let ceiling = inst.table().ceiling_value();
    let floor = cond_value_is_point(inst, 0.0) && ceiling > EPS_CLASS;
    let ceilinged = !floor && cond_value_is_point(inst, ceiling);
    if floor {
        return InstanceClass::Floor;
    }
    if !ceilinged {
        return InstanceClass::Layered;
    }
    let j_star = effective_jump_column(inst);
    if !collapsed_before(inst, j_star) {
        return InstanceClass::Ceiling;
    }
    if j_star < inst.table().columns() {
        // Strong ceiling with entries still above the ceiling.
        return InstanceClass::StrongCeiling;
    }
    InstanceClass::TwinCeiling
}

/// Potential of a floor/ceiling instance: the number of table entries
/// strictly above the ceiling value, plus one on the floor branch.
pub fn potential(inst: &PiecewiseInstance) -> Result<u32, Error> {
    let class = classify(inst);
    if !(class.is_floor() || class.is_ceiling()) {
        return Err(Error::UnsupportedClass {
            operation: "potential",
            required: "floor or ceiling",
            actual: class,
        });
    }
    let table = inst.table();
    let ceiling = table.ceiling_value();
    let mut count = 0u32;
    for id in table.bidder_ids() {
        for &v in table.row(id) {
            if is_above_ceiling(v, ceiling) {
                count += 1;
            }
        }
    }
    Ok(count + u32::from(class.is_floor()))
}

/// Leftmost-then-lowest above-ceiling entry of a ceiling instance, or `None`
/// when the potential is zero.
pub fn jump_entry(inst: &PiecewiseInstance) -> Result<Option<JumpEntry>, Error> {
    let class = classify(inst);
    if !class.is_ceiling() {
        return Err(Error::UnsupportedClass {
            operation: "jump_entry",
            required: "ceiling",
            actual: class,
        });
    }
    let table = inst.table();
    let ceiling = table.ceiling_value();
    let j_star = effective_jump_column(inst);
    if j_star >= table.columns() {
        return Ok(None);
    }
    // Lowest bidder in the order H < 1 < ... < n < L still above the ceiling.
    let sigma_star = table
        .bidder_ids()
        .filter(|&id| is_above_ceiling(table.value(id, j_star), ceiling))
        .max()
        .ok_or_else(|| {
            Error::InternalInvariant(alloc::string::String::from(
                "jump column found but no above-ceiling entry in it",
            ))
        })?;
    let kind = if sigma_star == BidderId::Pseudo { JumpKind::PseudoJump } else { JumpKind::RealJump };
    Ok(Some(JumpEntry {
        sigma_star,
        j_star,
        lambda_star: inst.partition().points()[j_star],
        phi_star: table.value(sigma_star, j_star),
        kind,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::types::{BidToValueTable, ConditionalValue, Partition};
    use alloc::vec;
    use alloc::vec::Vec;

    fn make(
        points: Vec<f64>,
        h: Vec<f64>,
        real: Vec<Vec<f64>>,
        l: Vec<f64>,
        p: ConditionalValue,
    ) -> PiecewiseInstance {
        PiecewiseInstance::new(
            Partition::new(points).unwrap(),
            BidToValueTable::new(h, real, l),
            p,
        )
        .unwrap()
    }

    #[test]
    fn twin_ceiling_classifies_and_has_zero_potential() {
        let inst = make(
            vec![0.0, 0.2, 0.45],
            vec![1.0, 1.0],
            vec![],
            vec![0.5, 0.8],
            ConditionalValue::point(1.0),
        );
        assert_eq!(classify(&inst), InstanceClass::TwinCeiling);
        assert_eq!(potential(&inst).unwrap(), 0);
        assert_eq!(jump_entry(&inst).unwrap(), None);
    }

    #[test]
    fn twin_ceiling_with_collapsed_real_rows() {
        // Non-monopoly row equal to the pseudo row, constant monopolist row.
        let inst = make(
            vec![0.0, 0.2, 0.45],
            vec![1.0, 1.0],
            vec![vec![0.5, 0.8]],
            vec![0.5, 0.8],
            ConditionalValue::point(1.0),
        );
        assert_eq!(classify(&inst), InstanceClass::TwinCeiling);
    }

    #[test]
    fn floor_instance_adds_one_to_potential() {
        // Ceiling counterpart has 3 above-ceiling entries (H and L rows rise
        // above φ_H0 = 1 in the last column, plus one more in the H row).
        let points = vec![0.0, 0.2, 0.4, 0.6];
        let h = vec![1.0, 1.3, 1.5];
        let real: Vec<Vec<f64>> = vec![];
        let l = vec![0.5, 0.9, 1.2];
        let ceil = make(
            points.clone(),
            h.clone(),
            real.clone(),
            l.clone(),
            ConditionalValue::point(1.0),
        );
        // n = 0, so the collapse condition is vacuous and the ceiling branch
        // is already strong.
        assert_eq!(classify(&ceil), InstanceClass::StrongCeiling);
        assert_eq!(potential(&ceil).unwrap(), 3);
        let floor = make(points, h, real, l, ConditionalValue::point(0.0));
        assert_eq!(classify(&floor), InstanceClass::Floor);
        assert_eq!(potential(&floor).unwrap(), 4);
    }

    #[test]
    fn five_entry_upper_right_block() {
        // 2 real bidders + pseudo row, 4 pieces, exactly the upper-right 5
        // entries exceed the ceiling value 1: H row columns 2,3; row 1
        // columns 2,3 (one of them at the ceiling stays out); counted by hand.
        let inst = make(
            vec![0.0, 0.1, 0.2, 0.3, 0.5],
            vec![1.0, 1.0, 1.2, 1.4],
            vec![vec![0.9, 1.0, 1.1, 1.3], vec![0.8, 0.9, 1.0, 1.1]],
            vec![0.7, 0.8, 0.9, 1.0],
            ConditionalValue::point(1.0),
        );
        assert_eq!(classify(&inst), InstanceClass::Ceiling);
        assert_eq!(potential(&inst).unwrap(), 5);
        let j = jump_entry(&inst).unwrap().unwrap();
        assert_eq!(j.j_star, 2);
        assert_eq!(j.sigma_star, BidderId::Real(0));
        assert_eq!(j.kind, JumpKind::RealJump);
    }

    #[test]
    fn pseudo_jump_detected_when_l_entry_exceeds_ceiling() {
        let inst = make(
            vec![0.0, 0.1, 0.2, 0.4],
            vec![1.0, 1.0, 1.4],
            vec![],
            vec![0.6, 0.8, 1.2],
            ConditionalValue::point(1.0),
        );
        let j = jump_entry(&inst).unwrap().unwrap();
        assert_eq!(j.j_star, 2);
        assert_eq!(j.sigma_star, BidderId::Pseudo);
        assert_eq!(j.kind, JumpKind::PseudoJump);
        assert_eq!(j.lambda_star, 0.2);
        assert_eq!(j.phi_star, 1.2);
    }

    #[test]
    fn ceiling_but_not_strong_when_rows_differ_before_jump() {
        // φ_{1,0} = φ_L,0 + 0.2 and the jump sits at column 2.
        let inst = make(
            vec![0.0, 0.1, 0.2, 0.4],
            vec![1.0, 1.0, 1.4],
            vec![vec![0.8, 0.9, 1.0]],
            vec![0.6, 0.9, 1.0],
            ConditionalValue::point(1.0),
        );
        assert_eq!(effective_jump_column(&inst), 2);
        assert_eq!(classify(&inst), InstanceClass::Ceiling);
    }

    #[test]
    fn strong_ceiling_when_collapsed_before_jump() {
        let inst = make(
            vec![0.0, 0.1, 0.2, 0.4],
            vec![1.0, 1.0, 1.4],
            vec![vec![0.6, 0.9, 1.2]],
            vec![0.6, 0.9, 1.0],
            ConditionalValue::point(1.0),
        );
        assert_eq!(classify(&inst), InstanceClass::StrongCeiling);
        let j = jump_entry(&inst).unwrap().unwrap();
        assert_eq!(j.sigma_star, BidderId::Real(0));
    }

    #[test]
    fn floor_requires_zero_atom_and_translated_gamma() {
        let inst = make(
            vec![0.0, 0.2, 0.45],
            vec![1.0, 1.0],
            vec![],
            vec![0.5, 0.8],
            ConditionalValue::point(0.0),
        );
        assert_eq!(classify(&inst), InstanceClass::Floor);
    }

    #[test]
    fn untranslated_instance_stops_at_discretized() {
        let inst = make(
            vec![0.1, 0.3, 0.55],
            vec![1.1, 1.1],
            vec![],
            vec![0.6, 0.9],
            ConditionalValue::point(1.1),
        );
        assert_eq!(classify(&inst), InstanceClass::Discretized);
    }

    #[test]
    fn unlayered_instance_stops_at_translated() {
        let inst = make(
            vec![0.0, 0.2, 0.45],
            vec![1.0, 1.0],
            vec![vec![1.2, 1.2]],
            vec![0.9, 0.95],
            ConditionalValue::point(1.0),
        );
        assert_eq!(classify(&inst), InstanceClass::Translated);
    }

    #[test]
    fn potential_on_layered_is_unsupported() {
        // Mixed conditional value: neither floor nor ceiling.
        let inst = make(
            vec![0.0, 0.2, 0.45],
            vec![1.0, 1.0],
            vec![],
            vec![0.5, 0.8],
            ConditionalValue::new(vec![(0.0, 0.5), (1.0, 0.5)]),
        );
        assert_eq!(classify(&inst), InstanceClass::Layered);
        assert!(matches!(potential(&inst), Err(Error::UnsupportedClass { .. })));
    }
}
