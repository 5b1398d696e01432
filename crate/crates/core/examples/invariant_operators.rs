//! Left and right invariant actions of banded operators on `F_a`.

use std::sync::Arc;

use lieflow::coalgebra::{
    counit, left_invariant_apply, right_invariant_apply, BandedOperator, BasisSymbol, FaVector,
    Lowering, OperatorSum,
};
use lieflow::multiindex::mi;
use lieflow::C64;

fn show(v: &FaVector) -> String {
    v.iter().map(|(s, c)| format!("({c})·{s:?}")).collect::<Vec<_>>().join(" + ")
}

fn main() -> lieflow::Result<()> {
    let f = |n: u32, m: u32| BasisSymbol::new(mi(&[n]), mi(&[m])).unwrap();
    let v = FaVector::from_terms([(f(3, 0), C64::new(1.0, 0.0)), (f(2, 2), C64::new(0.5, 0.0))]);
    println!("v = {}", show(&v));
    println!("eps(v) = {}", counit(&v));

    let low = Lowering::new(1, 1)?;
    println!("left(lowering) v  = {}", show(&left_invariant_apply(&low, &v)?));
    println!("right(lowering) v = {}", show(&right_invariant_apply(&low, &v)?));

    let sum = OperatorSum::new(1)
        .plus(C64::new(1.0, 0.0), Arc::new(low.clone()))?
        .plus(C64::new(2.0, 0.0), Arc::new(low))?;
    println!("band of sum = {}", sum.band());
    println!("(3 lowering) v = {}", show(&left_invariant_apply(&sum, &v)?));
    Ok(())
}
