//! Bounded aperiodicity and cofinality searches.

use kgraphlab::kgraph::{
    build_bouquet, build_theta_graph, check_aperiodicity, check_cofinality, ftheta, theta_from_fn,
};

fn main() -> kgraphlab::Result<()> {
    let g = ftheta();
    println!("F_theta aperiodicity: {:?}", check_aperiodicity(&g, &[4, 4])?.status);
    println!("F_theta cofinality:   {:?}", check_cofinality(&g, &[0, 0])?.status);

    // f g = g f: no path within the bound separates the shifted segments
    let flip = build_theta_graph(1, 1, &theta_from_fn(1, 1, |i, j| (i, j)))?;
    let v = check_aperiodicity(&flip, &[2, 2])?;
    println!("commuting square: {:?}, witness {}", v.status, v.witness.unwrap_or_default());

    let b = build_bouquet(1)?;
    println!("single loop: {:?}", check_aperiodicity(&b, &[3])?.status);
    Ok(())
}
