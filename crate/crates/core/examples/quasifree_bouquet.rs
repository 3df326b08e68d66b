//! A 1-cocycle on the bouquet B_3 inflated to a 2-cocycle on B_3 x Z, and the
//! scalars of the automorphism it induces on generators.

use kgraphlab::crossed::crossed_product;
use kgraphlab::homology::build_complex;
use kgraphlab::kgraph::{build_bouquet, Automorphism};
use kgraphlab::twist::{cocycle_group, inflate, restrict, twist_data, Phase, PhaseCochain};

fn main() -> kgraphlab::Result<()> {
    let g = build_bouquet(3)?;
    let cx = build_complex(&g)?;
    println!("Z^1(B_3, T) = {}", cocycle_group(&cx, 1).describe());
    println!("automorphisms: {}", Automorphism::search_all(&g, 100).len());

    let c = PhaseCochain { degree: 1, values: vec![Phase::generator(1), Phase::ratio(1, 3), "1/2 + t2".parse()?] };
    let cp = crossed_product(&g, &Automorphism::identity(&g))?;
    let phi = inflate(&cp, &c)?;
    assert!(restrict(&cp, &phi)?.is_zero());

    for t in twist_data(&cp, &phi)?.forward {
        let order = match t.phase.order() {
            Some(n) => format!("order {n}"),
            None => "infinite order".into(),
        };
        println!("s_{} -> {}  ({order})", t.edge, t.display);
    }
    Ok(())
}
