//! Shifting a field to a base point and reading off the certified radius.

use lieflow::field::VectorField;
use lieflow::lie::certified_radius;
use lieflow::C64;

fn main() -> lieflow::Result<()> {
    let a = VectorField::scalar_poly(&[0.0, 0.0, 1.0]); // z^2
    for x in [0.0, 0.25, 0.5, 1.0, 2.0] {
        let ax = a.shift(&[C64::new(x, 0.0)])?;
        println!(
            "x0 = {x:<4}  m(A_x) = {:<8}  radius = {:.6}  A_x(1) = {}",
            ax.m_norm(),
            certified_radius(&a, &[C64::new(x, 0.0)])?,
            ax.eval(&[C64::new(1.0, 0.0)])?[0]
        );
    }
    println!("band {}, max degree {}, affine {}", a.band(), a.max_degree(), a.is_affine());
    println!("{}", serde_json::to_string(&a).expect("field serializes"));
    Ok(())
}
