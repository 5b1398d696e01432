//! Exponential pairings: one field, and two fields composed, compared with
//! running the two flows one after another.

use lieflow::field::VectorField;
use lieflow::lie::{exp_pairing, exp_pairing_composed, flow, FlowRequest};
use lieflow::multiindex::mi;
use lieflow::C64;

fn main() -> lieflow::Result<()> {
    let a = VectorField::scalar_poly(&[1.0, 0.0, 0.5]);
    let b = VectorField::scalar_poly(&[0.2, -0.3]);
    let (t1, t2) = (C64::new(0.3, 0.0), C64::new(0.4, 0.0));
    let beta = mi(&[1]);

    let single = exp_pairing(&a, t1, &beta, 1e-12)?;
    println!("single:   value {} order {} tail {:.1e}", single.value, single.order, single.tail);

    let both = exp_pairing_composed(&b, t2, &a, t1, &beta, 1e-12)?;
    println!("composed: value {} order {} tail {:.1e}", both.value, both.order, both.tail);

    // Operators compose against points: D_A acting first on functions means
    // the point moves along B first, then along A.
    let y1 = flow(&FlowRequest::new(b, vec![C64::new(0.0, 0.0)], t2, 1e-13))?.y;
    let y2 = flow(&FlowRequest::new(a, y1, t1, 1e-13))?.y;
    println!("sequential flows: {}", y2[0]);
    Ok(())
}
