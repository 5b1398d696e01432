//! Invariant maps between finite coalgebras and the duality of their
//! extended actions.

use lieflow::duality::{
    duality_check, pairing, random_instance, run_duality_trials, run_pairing_trials, FiniteCoalgebra,
    InvariantMap,
};
use lieflow::sampling::rng;
use nalgebra::DMatrix;
use lieflow::C64;

fn main() -> lieflow::Result<()> {
    let l = FiniteCoalgebra::leibnitz(1)?;
    let f = FiniteCoalgebra::truncated_poly(2)?;
    // l_0 ↦ e_0 and l_1 ↦ e_0 + e_1
    let one = C64::new(1.0, 0.0);
    let form = DMatrix::from_row_slice(2, 2, &[one, C64::new(0.0, 0.0), one, one]);
    let x = InvariantMap::from_form(l, f, form)?;
    println!("{} -> {}", x.source().name(), x.target().name());
    for (w, z) in [(vec![1], vec![1]), (vec![1], vec![0, 1]), (vec![1, 1], vec![1, 1]), (vec![0, 1], vec![1, 0])] {
        let (lhs, rhs) = duality_check(&x, &w, &z)?;
        println!("w {w:?} z {z:?}: {lhs} vs {rhs}, pairing {}", pairing(&x, &w, &z)?);
    }

    let mut r = rng(3);
    let y = random_instance(&mut r, 3);
    println!("random instance {} -> {}", y.source().name(), y.target().name());

    let report = run_duality_trials(100, 42)?;
    println!("{} trials, max |dev| {:.2e}, {} failures", report.trials, report.max_abs_deviation, report.failures.len());
    let p = run_pairing_trials(50, 42)?;
    println!("{} pairing cases, max |dev| {:.2e}", p.cases, p.max_abs_deviation);
    Ok(())
}
