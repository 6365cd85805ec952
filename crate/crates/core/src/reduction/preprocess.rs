use alloc::vec::Vec;

use crate::instance::{classify, BidderId, ConditionalValue, InstanceClass, PiecewiseInstance};
use crate::welfare::{poa, WelfareReport};
use crate::Error;

fn require_class(
    inst: &PiecewiseInstance,
    operation: &'static str,
    required: InstanceClass,
    required_name: &'static str,
) -> Result<InstanceClass, Error> {
    let class = classify(inst);
    if !class.at_least(required) {
        return Err(Error::UnsupportedClass { operation, required: required_name, actual: class });
    }
    Ok(class)
}

/// Shifts bids, values and conditional atoms by `-γ`, so the infimum bid
/// becomes zero. Exact identity when `γ = 0`.
pub fn translate(inst: &PiecewiseInstance) -> Result<PiecewiseInstance, Error> {
    require_class(inst, "translate", InstanceClass::Discretized, "discretized")?;
    let gamma = inst.gamma();
    if gamma == 0.0 {
        return Ok(inst.clone());
    }
    let table = inst.table();
    let shift_row = |id: BidderId| table.row(id).iter().map(|v| v - gamma).collect::<Vec<f64>>();
    super::rebuild(
        inst.partition().points().iter().map(|p| p - gamma).collect(),
        shift_row(BidderId::Monopolist),
        (0..inst.n()).map(|i| shift_row(BidderId::Real(i))).collect(),
        shift_row(BidderId::Pseudo),
        ConditionalValue::new(inst.cond_value().atoms().map(|(v, p)| (v - gamma, p)).collect()),
    )
}

/// Sorts the real rows (monopolist included) descending within each column;
/// the pseudo row is untouched. Welfare is preserved because both formulas
/// are symmetric in the real rows.
pub fn layer(inst: &PiecewiseInstance) -> Result<PiecewiseInstance, Error> {
    require_class(inst, "layer", InstanceClass::Translated, "translated")?;
    let table = inst.table();
    let cols = table.columns();
    let n = inst.n();
    let mut stacked: Vec<Vec<f64>> = alloc::vec![Vec::with_capacity(cols); n + 1];
    for j in 0..cols {
        let mut column: Vec<f64> = table.real_ids().map(|id| table.value(id, j)).collect();
        column.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (row, v) in column.into_iter().enumerate() {
            stacked[row].push(v);
        }
    }
    let monopolist = stacked.remove(0);
    super::rebuild(
        inst.partition().points().to_vec(),
        monopolist,
        stacked,
        table.row(BidderId::Pseudo).to_vec(),
        inst.cond_value().clone(),
    )
}

/// Result of [`polarize`]: both candidates with their reports, plus the
/// chosen (ratio-worse) one.
#[derive(Debug, Clone)]
pub struct PolarizeOutcome {
    pub chosen: PiecewiseInstance,
    pub chosen_branch: super::Branch,
    pub floor: (PiecewiseInstance, WelfareReport),
    pub ceiling: (PiecewiseInstance, WelfareReport),
}

/// Derandomizes the conditional value to the floor (`P ≡ 0`) or ceiling
/// (`P ≡ φ_{H,0}`) candidate, returning the one with the smaller ratio;
/// ties go to the ceiling candidate.
pub fn polarize(inst: &PiecewiseInstance) -> Result<PolarizeOutcome, Error> {
    require_class(inst, "polarize", InstanceClass::Layered, "layered")?;
    let partition = inst.partition().clone();
    let table = inst.table().clone();
    let ceiling_value = table.ceiling_value();
    let floor_inst =
        PiecewiseInstance::new(partition.clone(), table.clone(), ConditionalValue::point(0.0))?;
    let ceiling_inst =
        PiecewiseInstance::new(partition, table, ConditionalValue::point(ceiling_value))?;
    let floor_report = poa(&floor_inst)?;
    let ceiling_report = poa(&ceiling_inst)?;
    let (chosen, chosen_branch) = if floor_report.poa < ceiling_report.poa {
        (floor_inst.clone(), super::Branch::Floor)
    } else {
        (ceiling_inst.clone(), super::Branch::Ceiling)
    };
    Ok(PolarizeOutcome {
        chosen,
        chosen_branch,
        floor: (floor_inst, floor_report),
        ceiling: (ceiling_inst, ceiling_report),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{BidToValueTable, Partition};
    use crate::math;
    use crate::welfare::{fpa, opt};
    use alloc::vec;

    fn layered_fixture(p: ConditionalValue) -> PiecewiseInstance {
        PiecewiseInstance::new(
            Partition::new(vec![0.0, 0.25, 0.6]).unwrap(),
            BidToValueTable::new(vec![2.0, 2.3], vec![vec![1.3, 1.6]], vec![1.1, 1.4]),
            p,
        )
        .unwrap()
    }

    #[test]
    fn translate_is_identity_at_zero_gamma() {
        let inst = layered_fixture(ConditionalValue::point(2.0));
        assert_eq!(translate(&inst).unwrap(), inst);
    }

    #[test]
    fn translate_strictly_worsens_ratio_when_gamma_positive() {
        let shifted = PiecewiseInstance::new(
            Partition::new(vec![0.1, 0.35, 0.7]).unwrap(),
            BidToValueTable::new(vec![2.1, 2.4], vec![vec![1.4, 1.7]], vec![1.2, 1.5]),
            ConditionalValue::new(vec![(1.1, 0.5), (2.1, 0.5)]),
        )
        .unwrap();
        let out = translate(&shifted).unwrap();
        assert_eq!(out.gamma(), 0.0);
        let before = poa(&shifted).unwrap().poa;
        let after = poa(&out).unwrap().poa;
        assert!(before < 1.0);
        assert!(after < before, "{after} vs {before}");
        // welfare drops by exactly γ on both sides
        assert!(math::abs(fpa(&out).unwrap() - (fpa(&shifted).unwrap() - 0.1)) < 1e-12);
        assert!(math::abs(opt(&out).unwrap() - (opt(&shifted).unwrap() - 0.1)) < 1e-12);
    }

    #[test]
    fn layer_identity_on_layered_input() {
        let inst = layered_fixture(ConditionalValue::point(2.0));
        assert_eq!(layer(&inst).unwrap(), inst);
    }

    #[test]
    fn layer_sorts_columns_and_preserves_welfare() {
        // Two real rows swapped relative to the monopolist in one column.
        let unlayered = PiecewiseInstance::new(
            Partition::new(vec![0.0, 0.25, 0.6]).unwrap(),
            BidToValueTable::new(
                vec![1.4, 1.5],
                vec![vec![1.6, 1.9], vec![1.2, 1.45]],
                vec![1.1, 1.3],
            ),
            ConditionalValue::point(1.4),
        )
        .unwrap();
        assert_eq!(classify(&unlayered), InstanceClass::Translated);
        let out = layer(&unlayered).unwrap();
        assert!(classify(&out) >= InstanceClass::Layered);
        assert!(math::abs(fpa(&out).unwrap() - fpa(&unlayered).unwrap()) < 1e-12);
        assert!(math::abs(opt(&out).unwrap() - opt(&unlayered).unwrap()) < 1e-12);
    }

    #[test]
    fn polarize_chooses_weakly_worse_candidate() {
        let inst = layered_fixture(ConditionalValue::new(vec![(0.0, 0.5), (2.0, 0.5)]));
        let before = poa(&inst).unwrap().poa;
        let out = polarize(&inst).unwrap();
        let chosen = poa(&out.chosen).unwrap().poa;
        assert!(chosen <= before + crate::EPS_POA);
        assert!(math::abs(out.floor.1.poa.min(out.ceiling.1.poa) - chosen) < 1e-15);
        let floor_class = classify(&out.floor.0);
        assert_eq!(floor_class, InstanceClass::Floor);
        assert!(classify(&out.ceiling.0).is_ceiling());
    }

    #[test]
    fn polarize_on_floor_input_keeps_floor_candidate_equal() {
        let inst = layered_fixture(ConditionalValue::point(0.0));
        let out = polarize(&inst).unwrap();
        assert_eq!(out.floor.0, inst);
        assert!(poa(&out.chosen).unwrap().poa <= poa(&inst).unwrap().poa + crate::EPS_POA);
    }

    #[test]
    fn polarize_on_ceiling_input_keeps_ceiling_candidate_equal() {
        let inst = layered_fixture(ConditionalValue::point(2.0));
        let out = polarize(&inst).unwrap();
        assert_eq!(out.ceiling.0, inst);
    }
}
