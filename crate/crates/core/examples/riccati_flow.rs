//! x' = x², x(0) = 0.5: the flow against x0 / (1 − t·x0).

use lieflow::field::VectorField;
use lieflow::lie::{flow, FlowRequest};
use lieflow::C64;

fn main() -> lieflow::Result<()> {
    let a = VectorField::scalar_poly(&[0.0, 0.0, 1.0]);
    let x0 = 0.5;
    for t in [0.1, 0.2, 0.3, 0.4] {
        let r = flow(&FlowRequest::new(a.clone(), vec![C64::new(x0, 0.0)], C64::new(t, 0.0), 1e-12))?;
        let exact = x0 / (1.0 - t * x0);
        println!(
            "t = {t}: y = {:.15}  exact = {exact:.15}  |err| = {:.1e}  order = {}  tail <= {:.1e}",
            r.y[0].re,
            (r.y[0].re - exact).abs(),
            r.truncation_order,
            r.tail_bound
        );
    }
    let t = C64::new(0.0, 0.3);
    let r = flow(&FlowRequest::new(a, vec![C64::new(x0, 0.0)], t, 1e-12))?;
    println!("complex time {t}: y = {}  exact = {}", r.y[0], C64::new(x0, 0.0) / (1.0 - t * x0));
    Ok(())
}
