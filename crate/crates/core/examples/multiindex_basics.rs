//! Multi-indices: arithmetic, norms and the enumerations used for caps.

use lieflow::multiindex::{mi, MultiIndex};

fn main() -> lieflow::Result<()> {
    let n = mi(&[3, 1]);
    let k = mi(&[1, 2]);
    println!("n = {n:?}, k = {k:?}");
    println!("|n| = {}, sup = {}, n! = {}", n.degree(), n.sup_norm(), n.factorial());
    println!("n + k = {:?}", n.add(&k)?);
    println!("n - k = {:?} (componentwise, None if negative)", n.sub_checked(&k)?);
    println!("band distance = {}", n.band_distance(&k));
    println!("unit(2, 2) = {:?}", MultiIndex::unit(2, 2)?);
    println!("box of side 1 in p=2: {:?}", MultiIndex::all_in_box(2, 1));
    println!("degree <= 2 in p=2: {} indices", MultiIndex::all_up_to_degree(2, 2).len());
    Ok(())
}
