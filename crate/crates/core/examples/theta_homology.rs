//! Homology of the single-vertex 2-graph with six commuting squares,
//! and the action of its automorphism on H_2.

use kgraphlab::homology::build_complex;
use kgraphlab::kgraph::{ftheta, ftheta_beta};

fn main() -> kgraphlab::Result<()> {
    let g = ftheta();
    let cx = build_complex(&g)?;
    for r in 0..=2 {
        println!("H_{r} = {}", cx.homology(r)?);
    }

    let d2 = cx.boundary(2);
    let edges = cx.cube_ids(1);
    for (j, id) in cx.cube_ids(2).iter().enumerate() {
        let terms: Vec<String> = d2
            .column(j)
            .iter()
            .zip(&edges)
            .filter(|(c, _)| c.sign() != num_bigint::Sign::NoSign)
            .map(|(c, e)| format!("{c:+}{e}"))
            .collect();
        println!("d({id}) = {}", terms.join(" "));
    }

    let beta = ftheta_beta(&g);
    let b = cx.beta_lower_star(&beta, 2)?;
    println!("beta_* on H_2:\n{}", b.matrix);
    Ok(())
}
