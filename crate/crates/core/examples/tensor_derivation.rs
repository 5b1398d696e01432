//! A field acting as a derivation of the tensor algebra, checked against the
//! realization's word action.

use lieflow::coalgebra::BasisSymbol;
use lieflow::field::VectorField;
use lieflow::multiindex::mi;
use lieflow::tensor::{counit_t, from_fa, product, Realization, TensorWord};
use lieflow::C64;

fn main() -> lieflow::Result<()> {
    let a = VectorField::from_terms(
        2,
        [(1, mi(&[0, 1]), C64::new(-1.0, 0.0)), (2, mi(&[1, 0]), C64::new(1.0, 0.0))],
    )?;
    let f = |n: &[u32]| BasisSymbol::row(mi(n));
    let u = from_fa(&lieflow::coalgebra::FaVector::single(f(&[1, 0])));
    let v = from_fa(&lieflow::coalgebra::FaVector::single(f(&[0, 1])));
    let uv = product(&u, &v)?;

    let d_uv = a.derivation_apply(&uv)?;
    let leibniz = product(&a.derivation_apply(&u)?, &v)?.add(&product(&u, &a.derivation_apply(&v)?)?);
    println!("D(uv)       = {:?}", d_uv.keys().collect::<Vec<_>>());
    println!("Du·v + u·Dv = {:?}", leibniz.keys().collect::<Vec<_>>());
    println!("difference is zero: {}", d_uv.sub(&leibniz).is_empty());

    let x = a.realization();
    let words = [vec![1], vec![2], vec![1, 2]];
    for w in &words {
        let e = x.apply_word(w, &uv)?;
        println!("eps(x({w:?}) uv) = {}", counit_t(&e));
    }
    let x0 = Realization::lowering(2);
    let ff = from_fa(&lieflow::coalgebra::FaVector::single(f(&[1, 1])));
    println!("lowering word [1,2] on f_(1,1): eps = {}", counit_t(&x0.apply_word(&[1, 2], &ff)?));
    println!("unit word counit = {}", TensorWord::unit().counit());
    Ok(())
}
