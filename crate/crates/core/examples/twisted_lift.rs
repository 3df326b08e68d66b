//! Lifting a fixed 2-cocycle from the base to the crossed product, then checking
//! the square identities the lift must satisfy.

use kgraphlab::crossed::crossed_product;
use kgraphlab::kgraph::{ftheta, ftheta_beta};
use kgraphlab::twist::{cor2_lift, is_cocycle, restrict, twist_data, verify_cohrel, Phase, PhaseCochain};

fn main() -> kgraphlab::Result<()> {
    let g = ftheta();
    let cp = crossed_product(&g, &ftheta_beta(&g))?;

    // constant on Q_2, hence fixed by beta
    let psi = PhaseCochain { degree: 2, values: vec![Phase::ratio(1, 5); cp.base().cube_count(2)] };
    let (phi, b) = cor2_lift(&cp, &psi)?;
    println!("b = {:?}", b.values);
    println!("cocycle: {}, restricts to psi: {}", is_cocycle(cp.product(), &phi), restrict(&cp, &phi)? == psi);

    let rep = verify_cohrel(&cp, &phi)?;
    for s in &rep.squares {
        println!("{:<8} residue {}  rewriting residue {}", s.square, s.residue, s.tg2_residue);
    }
    for t in twist_data(&cp, &phi)?.forward {
        println!("s_{} -> {}", t.edge, t.display);
    }

    let mut bad = phi.clone();
    bad.values[0] = &bad.values[0] + &Phase::generator(1);
    println!("perturbed: holds = {}", verify_cohrel(&cp, &bad)?.holds);
    Ok(())
}
