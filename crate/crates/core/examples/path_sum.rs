//! ε of a chain of field derivations: direct evaluation, the layered path
//! sum, and the a priori bound.

use lieflow::field::VectorField;
use lieflow::lie::{chain_bound, default_cap, eps_chain_direct, eps_chain_pathsum, ChainSpec};
use lieflow::multiindex::mi;
use lieflow::C64;

fn main() -> lieflow::Result<()> {
    let a1 = VectorField::from_terms(
        2,
        [(1, mi(&[0, 0]), C64::new(1.0, 0.0)), (2, mi(&[1, 0]), C64::new(0.0, 2.0))],
    )?;
    let a2 = VectorField::from_terms(
        2,
        [(1, mi(&[0, 1]), C64::new(0.5, 0.0)), (2, mi(&[0, 0]), C64::new(-1.0, 0.0))],
    )?;
    let c = ChainSpec::new(vec![a1, a2.clone(), a2], mi(&[1, 0]), mi(&[1, 1]))?;
    let cap = default_cap(&c);
    println!("chain of {} fields, total band {}, cap {cap}", c.len(), c.total_band());
    println!("direct   = {}", eps_chain_direct(&c)?);
    println!("path sum = {}", eps_chain_pathsum(&c, cap)?);
    println!("bound    = {}", chain_bound(&c));
    match eps_chain_pathsum(&c, 0) {
        Err(e) => println!("cap 0: {e}"),
        Ok(v) => println!("cap 0 happened to suffice: {v}"),
    }
    Ok(())
}
