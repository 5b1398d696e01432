//! The rotation field (−y, x): flow from (1, 0) lands on (cos t, sin t).

use lieflow::field::VectorField;
use lieflow::lie::{flow, FlowRequest};
use lieflow::multiindex::mi;
use lieflow::C64;

fn main() -> lieflow::Result<()> {
    let a = VectorField::from_terms(
        2,
        [(1, mi(&[0, 1]), C64::new(-1.0, 0.0)), (2, mi(&[1, 0]), C64::new(1.0, 0.0))],
    )?;
    let x0 = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    for t in [0.1, 0.25, 0.45] {
        let r = flow(&FlowRequest::new(a.clone(), x0.clone(), C64::new(t, 0.0), 1e-12))?;
        println!(
            "t = {t}: ({:.12}, {:.12}) vs ({:.12}, {:.12}), radius {:.3}",
            r.y[0].re,
            r.y[1].re,
            t.cos(),
            t.sin(),
            r.radius
        );
    }
    Ok(())
}
