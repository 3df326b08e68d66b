//! 1-cocycles on the truncated tower crossed product: the square relations
//! and the torsion relation at each internal level.

use kgraphlab::crossed::{crossed_product, loop_edge_id, zero_edge_id};
use kgraphlab::kgraph::build_tower;
use kgraphlab::twist::{cocycle_generators, PhaseGroup};
use num_traits::Zero;

fn main() -> kgraphlab::Result<()> {
    let levels = 5;
    let (t, beta) = build_tower(levels)?;
    let cp = crossed_product(&t, &beta.inverse())?;
    let cx = cp.product();
    let at = |id: String| {
        let c = cx.graph().parse_cube(&id).expect("known edge");
        cx.cube_index(1, &c).expect("an edge")
    };

    let gens = cocycle_generators(cx, 1, &PhaseGroup::new(2), 7);
    println!("{} generators of Z^1", gens.len());
    for phi in &gens {
        for n in 1..levels {
            let f = |n: usize| &phi.values[at(loop_edge_id(&format!("v{n}")))];
            let jump = f(n + 1) - f(n);
            for j in 1..=n {
                let e = |j: usize| &phi.values[at(zero_edge_id(&format!("e{n}_{j}")))];
                assert_eq!(e(j % n + 1) - e(j), jump);
            }
            assert!(jump.mul_int(&n.into()).is_zero());
        }
    }
    println!("square and torsion relations hold at levels 1..{}", levels - 1);
    Ok(())
}
