//! Smith normal form with transforms, and the groups it reads off.

use kgraphlab::intlinalg::{homology_of_pair, smith_normal_form, IntMatrix};

fn main() -> kgraphlab::Result<()> {
    let a = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
    let s = smith_normal_form(&a);
    println!("A =\n{a}D =\n{}", s.d);
    println!("invariant factors {:?}, rank {}", s.invariant_factors(), s.rank);
    assert_eq!(&(&s.u * &a) * &s.v, s.d);

    // one vertex, one loop, one disc glued along the loop twice: Z -2-> Z -0-> Z
    let d1 = IntMatrix::zeros(1, 1);
    let d2 = IntMatrix::from_rows(&[[2]]);
    println!("H_0 = {}", homology_of_pair(&IntMatrix::zeros(0, 1), &d1)?);
    println!("H_1 = {}", homology_of_pair(&d1, &d2)?);
    println!("H_2 = {}", homology_of_pair(&d2, &IntMatrix::zeros(1, 0))?);
    Ok(())
}
