
use crate::instance::{
    classify, jump_entry, BidderId, ConditionalValue, InstanceClass, JumpKind, PiecewiseInstance,
};
use crate::welfare::{poa, WelfareReport};
use crate::Error;

/// Result of [`ascend_descend`]: both candidates with their reports, plus
/// the chosen (ratio-worse) one.
#[derive(Debug, Clone)]
pub struct AscendDescendOutcome {
    pub chosen: PiecewiseInstance,
    pub chosen_branch: super::Branch,
    /// Monopolist row raised to the jump value before the jump column.
    pub ascended: (PiecewiseInstance, WelfareReport),
    /// Jump entry lowered to the ceiling value.
    pub descended: (PiecewiseInstance, WelfareReport),
}

/// Resolves a real jump of a strong-ceiling instance by a win-win choice:
/// either ascend the monopolist's before-jump entries to the jump value
/// (raising the ceiling) or descend the jump entry to the ceiling value.
/// Both candidates are ceiling instances with strictly smaller potential;
/// the ratio-worse one is returned, ties to the ascended candidate.
pub fn ascend_descend(inst: &PiecewiseInstance) -> Result<AscendDescendOutcome, Error> {
    let class = classify(inst);
    if !class.at_least(InstanceClass::StrongCeiling) {
        return Err(Error::UnsupportedClass {
            operation: "ascend_descend",
            required: "strong ceiling",
            actual: class,
        });
    }
    let jump = jump_entry(inst)?.ok_or_else(|| {
        Error::Domain(alloc::string::String::from("ascend_descend needs an above-ceiling entry, potential is zero"))
    })?;
    if jump.kind != JumpKind::RealJump {
        return Err(Error::Domain(alloc::string::String::from("ascend_descend requires a real jump, found a pseudo jump")));
    }
    let ceiling = inst.table().ceiling_value();

    let mut ascended_table = inst.table().clone();
    for j in 0..jump.j_star {
        ascended_table.row_mut(BidderId::Monopolist)[j] = jump.phi_star;
    }
    let ascended = PiecewiseInstance::new(
        inst.partition().clone(),
        ascended_table,
        ConditionalValue::point(jump.phi_star),
    )?;

    let mut descended_table = inst.table().clone();
    descended_table.row_mut(jump.sigma_star)[jump.j_star] = ceiling;
    let descended = PiecewiseInstance::new(
        inst.partition().clone(),
        descended_table,
        ConditionalValue::point(ceiling),
    )?;

    let ascended_report = poa(&ascended)?;
    let descended_report = poa(&descended)?;
    let (chosen, chosen_branch) = if descended_report.poa < ascended_report.poa {
        (descended.clone(), super::Branch::Descended)
    } else {
        (ascended.clone(), super::Branch::Ascended)
    };
    Ok(AscendDescendOutcome {
        chosen,
        chosen_branch,
        ascended: (ascended, ascended_report),
        descended: (descended, descended_report),
    })
}
