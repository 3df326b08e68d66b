//! Cohomology of the crossed product with several coefficient groups, directly
//! and through the universal coefficient theorem.

use kgraphlab::crossed::crossed_product;
use kgraphlab::homology::{cohomology_uct, CoeffGroup};
use kgraphlab::kgraph::build_tower;

fn main() -> kgraphlab::Result<()> {
    let (t, beta) = build_tower(5)?;
    let cp = crossed_product(&t, &beta)?;
    let cx = cp.product();
    for coeff in ["Z", "Z/4", "Z/6", "Z + Z/2", "T"] {
        let a: CoeffGroup = coeff.parse()?;
        let row: Vec<String> = (0..=cx.top())
            .map(|r| {
                let direct = cx.cohomology(r, &a).expect("computes").describe();
                let uct = cohomology_uct(cx, r, &a).expect("computes").describe();
                assert_eq!(direct, uct);
                direct
            })
            .collect();
        println!("{coeff:<8} {}", row.join(" | "));
    }
    Ok(())
}
