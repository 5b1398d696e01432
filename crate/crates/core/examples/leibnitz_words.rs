//! Words in the Leibnitz coalgebra and their coproducts.

use lieflow::leibnitz::{self, GeneratorWord, Letter};

fn show(w: &GeneratorWord) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.letters()
        .iter()
        .map(|l| if l.is_grouplike() { "l0".to_string() } else { format!("{}{}", l.tag(), l.index()) })
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> lieflow::Result<()> {
    let p = 2;
    for g in 0..=p {
        println!("Δ l_{g} = {:?}, ε = {}", leibnitz::coproduct(p, g)?, leibnitz::counit(p, g)?);
    }
    println!("Δ^(3) l_1 = {:?}", leibnitz::iterated_coproduct(p, 1, 3)?);

    let w = GeneratorWord::new(vec![Letter::new("A", 1), Letter::unit(), Letter::new("B", 2)]);
    println!("w = {}, ε(w) = {}", show(&w), w.counit());
    println!("stripped: {}", show(&w.strip_grouplike()));
    for ((a, b), c) in w.coproduct() {
        println!("  {c} · ({}) ⊗ ({})", show(&a), show(&b));
    }
    let sq = GeneratorWord::power("A", 1, 3);
    println!("l_1^3 has {} coproduct terms", sq.coproduct().len());
    Ok(())
}
