//! Module relations are satisfied by the lowering realization; a perturbed
//! realization is caught by a concrete word.

use std::sync::Arc;

use lieflow::coalgebra::{BandedOperator, Lowering, OperatorSum, RegularOperator};
use lieflow::multiindex::mi;
use lieflow::relations::{
    check_relation, check_relation_with, format_word, relations_summary, RelationWitness, WordSet,
};
use lieflow::tensor::Realization;
use lieflow::C64;

fn main() -> lieflow::Result<()> {
    let z = RelationWitness::module_relation(&mi(&[1]), &mi(&[2]))?;
    let ok = check_relation(&z)?;
    println!("lowering realization: ok {} max dev {:.1e}", ok.ok, ok.max_deviation);

    let eps = 1e-3;
    let mut bump = RegularOperator::new(1, 0);
    bump.insert(mi(&[2]), mi(&[2]), C64::new(eps, 0.0))?;
    let perturbed: Arc<dyn BandedOperator> = Arc::new(
        OperatorSum::new(1)
            .plus(C64::new(1.0, 0.0), Arc::new(Lowering::new(1, 1)?))?
            .plus(C64::new(1.0, 0.0), Arc::new(bump))?,
    );
    let x = Realization::new(1, vec![perturbed])?;
    let bad = check_relation_with(&x, &z, WordSet::All)?;
    println!(
        "perturbed by {eps}: ok {} max dev {:.1e} at word {}",
        bad.ok,
        bad.max_deviation,
        bad.worst_word.as_deref().map(format_word).unwrap_or_default()
    );

    let s = relations_summary(2, 3)?;
    println!("summary p=2 maxdeg=3: {} pairs, passed {}", s.pairs_checked, s.passed());
    Ok(())
}
