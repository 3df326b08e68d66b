//! Round-tripping skeletons and automorphisms through JSON, and rendering DOT.

use kgraphlab::crossed::crossed_product;
use kgraphlab::kgraph::{build_tower, AutomorphismSpec, SkeletonSpec};

fn main() -> kgraphlab::Result<()> {
    let (t, beta) = build_tower(3)?;
    let text = serde_json::to_string_pretty(&SkeletonSpec::from_graph(&t)).expect("serializable");
    println!("{text}");

    let back: SkeletonSpec = serde_json::from_str(&text).expect("valid json");
    let t2 = back.build()?;
    assert_eq!(t2.edge_count(), t.edge_count());

    let auto = AutomorphismSpec::from_automorphism(&t, &beta);
    println!("{}", serde_json::to_string(&auto).expect("serializable"));
    assert_eq!(auto.build(&t2)?, beta);

    let cp = crossed_product(&t, &beta)?;
    print!("{}", cp.product_graph().to_dot());
    Ok(())
}
