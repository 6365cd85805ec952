use crate::instance::classify::effective_jump_column;
use crate::instance::{classify, BidderId, InstanceClass, PiecewiseInstance};
use crate::Error;

/// Collapses every non-monopoly row onto the pseudo row on all columns before
/// the jump column, yielding a strong-ceiling instance.
///
/// Equivalent to flattening each non-monopoly bid CDF below the jump bid
/// (`B̃_i(b) = max(B_i(b), B_i(λ*))` with the pseudo bidder absorbing the
/// released mass): the first-order CDF, the monopolist and the optimal
/// welfare are untouched while the auction welfare weakly drops. Already
/// strong-ceiling inputs pass through unchanged.
pub fn collapse(inst: &PiecewiseInstance) -> Result<PiecewiseInstance, Error> {
    let class = classify(inst);
    if !class.is_ceiling() {
        return Err(Error::UnsupportedClass {
            operation: "collapse",
            required: "ceiling",
            actual: class,
        });
    }
    if class.at_least(InstanceClass::StrongCeiling) {
        return Ok(inst.clone());
    }
    let j_star = effective_jump_column(inst);
    let mut table = inst.table().clone();
    for i in 0..inst.n() {
        for j in 0..j_star.min(table.columns()) {
            let ell = table.value(BidderId::Pseudo, j);
            table.row_mut(BidderId::Real(i))[j] = ell;
        }
    }
    PiecewiseInstance::new(inst.partition().clone(), table, inst.cond_value().clone())
}
