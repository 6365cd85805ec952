use alloc::format;
use alloc::vec::Vec;

use super::step::{Branch, ReductionRule, ReductionStep, ReductionTrace};
use crate::instance::{classify, jump_entry, potential, InstanceClass, JumpKind, PiecewiseInstance};
use crate::welfare::poa;
use crate::{Error, EPS_POA};

fn record(
    steps: &mut Vec<ReductionStep>,
    rule: ReductionRule,
    branch: Option<Branch>,
    candidates: Vec<(Branch, f64)>,
    before: &PiecewiseInstance,
    after: &PiecewiseInstance,
) -> Result<(), Error> {
    steps.push(ReductionStep {
        rule,
        branch,
        psi_before: potential(before).ok(),
        psi_after: potential(after).ok(),
        poa_before: poa(before)?.poa,
        poa_after: poa(after)?.poa,
        class_before: classify(before),
        class_after: classify(after),
        candidate_poas: candidates,
    });
    Ok(())
}

/// The main loop: slice floors, collapse non-strong ceilings, halve pseudo
/// jumps, ascend-descend real jumps, until the instance is twin ceiling.
///
/// Terminates within `1 + 2Ψ` rule applications (the potential strictly
/// drops on every rule except collapse, which cannot run twice in a row);
/// exceeding the budget plus a safety margin is reported as an internal
/// invariant error. Inputs with ratio within tolerance of one short-circuit
/// to the trivial twin-ceiling normalization.
pub fn run_main(inst: &PiecewiseInstance) -> Result<(PiecewiseInstance, ReductionTrace), Error> {
    let class0 = classify(inst);
    if !(class0.is_floor() || class0.is_ceiling()) {
        return Err(Error::UnsupportedClass {
            operation: "run_main",
            required: "floor or ceiling",
            actual: class0,
        });
    }
    let mut steps: Vec<ReductionStep> = Vec::new();
    let mut degenerate = false;
    let input_ratio = poa(inst)?.poa;
    let mut current = inst.clone();

    if input_ratio >= 1.0 - EPS_POA {
        current = super::trivial_twin_ceiling(inst.table().ceiling_value())?;
        degenerate = true;
    } else {
        let psi0 = potential(inst)?;
        let budget = 1 + 2 * psi0 as usize + 2;
        let mut iterations = 0usize;
        loop {
            let class = classify(&current);
            if class == InstanceClass::TwinCeiling {
                break;
            }
            if iterations >= budget {
                return Err(Error::InternalInvariant(format!(
                    "main loop exceeded its iteration budget {budget} (input potential {psi0})"
                )));
            }
            iterations += 1;
            match class {
                InstanceClass::Floor => {
                    let out = super::slice(&current)?;
                    if out.degenerate {
                        current = super::trivial_twin_ceiling(current.table().ceiling_value())?;
                        degenerate = true;
                        break;
                    }
                    record(&mut steps, ReductionRule::Slice, None, Vec::new(), &current, &out.output)?;
                    current = out.output;
                }
                InstanceClass::Ceiling => {
                    let out = super::collapse(&current)?;
                    record(&mut steps, ReductionRule::Collapse, None, Vec::new(), &current, &out)?;
                    current = out;
                }
                InstanceClass::StrongCeiling => {
                    let jump = jump_entry(&current)?.ok_or_else(|| {
                        Error::InternalInvariant(alloc::string::String::from("strong ceiling below twin ceiling must carry a jump entry"))
                    })?;
                    match jump.kind {
                        JumpKind::PseudoJump => {
                            let out = super::halve(&current)?;
                            let cands = alloc::vec![
                                (Branch::Left, out.left.1.poa),
                                (Branch::Right, out.right.1.poa),
                            ];
                            record(
                                &mut steps,
                                ReductionRule::Halve,
                                Some(out.chosen_branch),
                                cands,
                                &current,
                                &out.chosen,
                            )?;
                            current = out.chosen;
                        }
                        JumpKind::RealJump => {
                            let out = super::ascend_descend(&current)?;
                            let cands = alloc::vec![
                                (Branch::Ascended, out.ascended.1.poa),
                                (Branch::Descended, out.descended.1.poa),
                            ];
                            record(
                                &mut steps,
                                ReductionRule::AscendDescend,
                                Some(out.chosen_branch),
                                cands,
                                &current,
                                &out.chosen,
                            )?;
                            current = out.chosen;
                        }
                    }
                }
                other => {
                    return Err(Error::InternalInvariant(format!(
                        "main loop reached class {other} mid-run"
                    )));
                }
            }
        }
    }

    let slack = EPS_POA * steps.len() as f64;
    Ok((
        current.clone(),
        ReductionTrace {
            steps,
            input: inst.clone(),
            output: current,
            degenerate,
            accumulated_slack: slack,
        },
    ))
}

/// Full pipeline for arbitrary valid instances: translate, layer and
/// polarize as needed, then the main loop, in one trace.
pub fn reduce_full(inst: &PiecewiseInstance) -> Result<(PiecewiseInstance, ReductionTrace), Error> {
    let class = classify(inst);
    if class == InstanceClass::Invalid {
        let report = crate::validate(inst)?;
        return Err(Error::Domain(format!("input instance is invalid: {report}")));
    }
    let mut steps: Vec<ReductionStep> = Vec::new();
    let mut current = inst.clone();

    if current.gamma() > 0.0 {
        let out = super::translate(&current)?;
        record(&mut steps, ReductionRule::Translate, None, Vec::new(), &current, &out)?;
        current = out;
    }
    if !classify(&current).at_least(InstanceClass::Layered) {
        let out = super::layer(&current)?;
        record(&mut steps, ReductionRule::Layer, None, Vec::new(), &current, &out)?;
        current = out;
    }
    let class = classify(&current);
    if !(class.is_floor() || class.is_ceiling()) {
        let out = super::polarize(&current)?;
        let cands = alloc::vec![
            (Branch::Floor, out.floor.1.poa),
            (Branch::Ceiling, out.ceiling.1.poa),
        ];
        record(
            &mut steps,
            ReductionRule::Polarize,
            Some(out.chosen_branch),
            cands,
            &current,
            &out.chosen,
        )?;
        current = out.chosen;
    }

    let (output, main_trace) = run_main(&current)?;
    steps.extend(main_trace.steps);
    let slack = EPS_POA * steps.len() as f64;
    Ok((
        output.clone(),
        ReductionTrace {
            steps,
            input: inst.clone(),
            output,
            degenerate: main_trace.degenerate,
            accumulated_slack: slack,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{BidToValueTable, ConditionalValue, Partition};
    use crate::worstcase;
    use alloc::vec;

    #[test]
    fn twin_ceiling_input_is_identity_with_zero_iterations() {
        let inst = PiecewiseInstance::new(
            Partition::new(vec![0.0, 0.2, 0.45]).unwrap(),
            BidToValueTable::new(vec![1.0, 1.0], vec![], vec![0.5, 0.8]),
            ConditionalValue::point(1.0),
        )
        .unwrap();
        let (out, trace) = run_main(&inst).unwrap();
        assert_eq!(out, inst);
        assert!(trace.steps.is_empty());
        assert!(!trace.degenerate);
    }

    #[test]
    fn discretized_worst_case_needs_at_most_one_step() {
        let analytic =
            worstcase::twin_ceiling_analytic(worstcase::worst_lambda(), 1.0).unwrap();
        let inst = super::super::discretize(&analytic, 80).unwrap();
        let (_, trace) = run_main(&inst).unwrap();
        assert!(trace.steps.len() <= 1, "{} steps", trace.steps.len());
    }

    #[test]
    fn floor_fixture_reduces_to_twin_ceiling_with_monotone_ratio() {
        let inst = PiecewiseInstance::new(
            Partition::new(vec![0.0, 0.1, 0.25, 0.6]).unwrap(),
            BidToValueTable::new(
                vec![2.0, 2.1, 2.5],
                vec![vec![1.3, 1.5, 2.2]],
                vec![1.1, 1.4, 1.9],
            ),
            ConditionalValue::point(0.0),
        )
        .unwrap();
        let psi0 = potential(&inst).unwrap();
        let (out, trace) = run_main(&inst).unwrap();
        assert_eq!(classify(&out), InstanceClass::TwinCeiling);
        assert!(trace.main_loop_steps() <= 1 + 2 * psi0 as usize);
        for step in &trace.steps {
            assert!(
                step.poa_after <= step.poa_before * (1.0 + EPS_POA),
                "{:?}",
                step
            );
        }
        let final_ratio = poa(&out).unwrap().poa;
        assert!(final_ratio >= worstcase::tight_bound() - 1e-6, "{final_ratio}");
    }

    #[test]
    fn reduce_full_handles_untranslated_unlayered_mixed_input() {
        let inst = PiecewiseInstance::new(
            Partition::new(vec![0.1, 0.35, 0.7]).unwrap(),
            BidToValueTable::new(
                vec![1.5, 1.8],
                vec![vec![2.1, 2.4]],
                vec![1.2, 1.5],
            ),
            ConditionalValue::new(vec![(0.6, 0.5), (1.5, 0.5)]),
        )
        .unwrap();
        let (out, trace) = reduce_full(&inst).unwrap();
        assert_eq!(classify(&out), InstanceClass::TwinCeiling);
        let rules: Vec<ReductionRule> = trace.steps.iter().map(|s| s.rule).collect();
        assert!(rules.contains(&ReductionRule::Translate));
        assert!(rules.contains(&ReductionRule::Layer));
        assert!(rules.contains(&ReductionRule::Polarize));
    }
}
