//! The crossed product by an automorphism, its homology, and the long exact
//! sequence in cohomology under both connecting-map conventions.

use kgraphlab::crossed::{crossed_product, les_assemble, les_forced_homology, ConnectingConvention};
use kgraphlab::homology::CoeffGroup;
use kgraphlab::kgraph::{ftheta, ftheta_beta};

fn main() -> kgraphlab::Result<()> {
    let g = ftheta();
    let cp = crossed_product(&g, &ftheta_beta(&g))?;
    for r in 0..=3 {
        let f = les_forced_homology(&cp, r)?;
        println!("H_{r}: direct {}, forced {} (agree: {})", f.direct, f.split, f.agrees);
    }

    let coeff = CoeffGroup::zmod(6);
    for conv in [ConnectingConvention::DeltaE, ConnectingConvention::OneMinusBetaStar] {
        let les = les_assemble(&cp, &coeff, conv)?;
        println!("\nconnecting map {}:", conv.label());
        for node in &les.nodes {
            println!("  {:<12} {:<12} exact={}", node.label, node.group.describe(), node.verdict.exact);
        }
    }
    Ok(())
}
