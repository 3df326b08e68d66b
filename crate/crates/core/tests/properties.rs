mod common;

use common::{rank_mod_p, BIG_PRIME};
use kgraphlab::crossed::{crossed_product, CrossedProduct};
use kgraphlab::homology::{build_complex, cohomology_uct, homology_uct, CoeffGroup, Cohomology, CubicalComplex};
use kgraphlab::intlinalg::{kernel_lattice_mod, smith_normal_form, IntMatrix};
use kgraphlab::kgraph::{Automorphism, KGraph};
use kgraphlab::suite::{random_phase, random_theta_setup};
use kgraphlab::twist::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 200, ..ProptestConfig::default() }
}

fn phase() -> impl Strategy<Value = Phase> {
    (0i64..36, 1i64..13, prop::collection::vec(-3i64..=3, 0..3)).prop_map(|(p, q, free)| {
        let mut x = Phase::ratio(p, q);
        for (i, c) in free.into_iter().enumerate() {
            x = x + Phase::generator(i + 1).mul_int(&BigInt::from(c));
        }
        x
    })
}

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r).prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

struct Setup {
    g: KGraph,
    beta: Automorphism,
    cx: CubicalComplex,
    cp: CrossedProduct,
    rng: ChaCha8Rng,
}

fn setup(seed: u64) -> Setup {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (g, beta) = random_theta_setup(&mut rng).unwrap();
    let cx = build_complex(&g).unwrap();
    let cp = crossed_product(&g, &beta).unwrap();
    Setup { g, beta, cx, cp, rng }
}

fn random_cochain(rng: &mut ChaCha8Rng, cx: &CubicalComplex, r: usize) -> PhaseCochain {
    PhaseCochain { degree: r, values: (0..cx.cube_count(r)).map(|_| random_phase(rng)).collect() }
}

/// A random element of `Z^r` as an integer combination of generators.
fn random_cocycle(rng: &mut ChaCha8Rng, cx: &CubicalComplex, r: usize) -> PhaseCochain {
    let mut phi = PhaseCochain::zero(cx, r);
    for gen in cocycle_generators(cx, r, &PhaseGroup::new(2), 6) {
        let k = BigInt::from(rng.gen_range(-3..=3));
        phi = phi.add(&PhaseCochain { degree: r, values: gen.values.iter().map(|x| x.mul_int(&k)).collect() });
    }
    phi
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_i64_rows().unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn phase_group_laws(a in phase(), b in phase(), c in phase()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &Phase::zero(), a.clone());
        prop_assert_eq!(-(-a.clone()), a);
    }

    #[test]
    fn phase_text_round_trip(a in phase()) {
        let back: Phase = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn phase_integer_multiples(a in phase(), k in -6i64..=6) {
        let mut sum = Phase::zero();
        for _ in 0..k.abs() {
            sum = sum + a.clone();
        }
        if k < 0 {
            sum = -sum;
        }
        prop_assert_eq!(a.mul_int(&BigInt::from(k)), sum);
        match a.order() {
            Some(n) => {
                prop_assert!(!a.has_infinite_order());
                prop_assert!(a.mul_int(&n).is_zero());
            }
            None => prop_assert!(a.has_infinite_order()),
        }
    }

    #[test]
    fn smith_form_is_a_factorization(a in matrix()) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(a.rows()));
        prop_assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(a.cols()));
        let diag = s.diagonal();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
        prop_assert_eq!(s.rank, rank_mod_p(&to_rows(&a), BIG_PRIME));
    }

    #[test]
    fn kernel_lattice_mod_contains_exactly_solutions(a in matrix(), m in 2u64..8) {
        let m = BigInt::from(m);
        let lat = kernel_lattice_mod(&a, &m);
        prop_assert_eq!(lat.rows(), a.cols());
        for col in lat.columns() {
            prop_assert!(a.mul_vec(&col).iter().all(|x| x.is_multiple_of(&m)));
        }
        // m·e_i lies in the lattice, so |det| divides m^n
        let det = lat.determinant();
        prop_assert!(!det.is_zero());
        prop_assert!(num_traits::pow(m.clone(), a.cols()).is_multiple_of(&det));
    }

    #[test]
    fn boundaries_square_to_zero(seed in any::<u64>()) {
        let s = setup(seed);
        for c in [&s.cx, s.cp.product()] {
            for r in 1..c.top() {
                prop_assert!((&c.boundary(r) * &c.boundary(r + 1)).is_zero());
            }
            for r in 1..=c.top() {
                prop_assert!((&c.coboundary(r) * &c.coboundary(r - 1)).is_zero());
            }
        }
    }

    #[test]
    fn boundary_commutes_with_beta(seed in any::<u64>()) {
        let s = setup(seed);
        for r in 1..=s.cx.top() {
            let lhs = &s.cx.boundary(r) * &s.cx.cube_permutation(&s.beta, r);
            let rhs = &s.cx.cube_permutation(&s.beta, r - 1) * &s.cx.boundary(r);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn phase_delta_matches_integer_coboundary(seed in any::<u64>(), q in 1i64..10) {
        let mut s = setup(seed);
        let unit = Phase::ratio(1, q);
        let c = s.cp.product();
        for r in 0..c.top() {
            let v: Vec<BigInt> = (0..c.cube_count(r)).map(|_| BigInt::from(s.rng.gen_range(-5..=5))).collect();
            let lhs = delta(c, &PhaseCochain::from_integers(r, &v, &unit));
            let rhs = PhaseCochain::from_integers(r + 1, &c.coboundary(r).mul_vec(&v), &unit);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn coboundaries_have_witnesses(seed in any::<u64>()) {
        let mut s = setup(seed);
        for c in [&s.cx, s.cp.product()] {
            for r in 0..c.top() {
                let b = random_cochain(&mut s.rng, c, r);
                let db = delta(c, &b);
                let w = coboundary_witness(c, &db);
                prop_assert!(w.is_some());
                prop_assert_eq!(delta(c, &w.unwrap()), db);
            }
        }
    }

    #[test]
    fn generators_are_cocycles(seed in any::<u64>()) {
        let s = setup(seed);
        let c = s.cp.product();
        for r in 0..=c.top() {
            for gen in cocycle_generators(c, r, &PhaseGroup::new(1), 5) {
                prop_assert!(is_cocycle(c, &gen));
            }
        }
    }

    #[test]
    fn cohrel_holds_for_cocycles(seed in any::<u64>()) {
        let mut s = setup(seed);
        let phi = random_cocycle(&mut s.rng, s.cp.product(), 2);
        let rep = verify_cohrel(&s.cp, &phi).unwrap();
        prop_assert!(rep.holds);
        prop_assert!(rep.tg2_holds);
        for sq in &rep.squares {
            prop_assert_eq!(&sq.tg2_residue, &-sq.residue.clone());
        }
    }

    #[test]
    fn cohrel_detects_non_cocycles(seed in any::<u64>()) {
        let mut s = setup(seed);
        let phi = random_cochain(&mut s.rng, s.cp.product(), 2);
        let rep = verify_cohrel(&s.cp, &phi).unwrap();
        let three = delta(s.cp.product(), &phi);
        prop_assert_eq!(rep.holds, three.is_zero() || s.cx.cube_count(2) == 0);
    }

    #[test]
    fn cor2_lift_round_trip(seed in any::<u64>()) {
        let mut s = setup(seed);
        let phi = random_cocycle(&mut s.rng, s.cp.product(), 2);
        let psi = restrict(&s.cp, &phi).unwrap();
        let (lift, b) = cor2_lift(&s.cp, &psi).unwrap();
        prop_assert!(is_cocycle(s.cp.product(), &lift));
        prop_assert_eq!(restrict(&s.cp, &lift).unwrap(), psi);
        prop_assert_eq!(b.degree, 1);
    }

    #[test]
    fn inflated_cocycles_twist_by_their_values(seed in any::<u64>()) {
        let mut s = setup(seed);
        let c = random_cocycle(&mut s.rng, &s.cx, 1);
        let phi = inflate(&s.cp, &c).unwrap();
        prop_assert!(is_cocycle(s.cp.product(), &phi));
        prop_assert!(restrict(&s.cp, &phi).unwrap().is_zero());
        let td = twist_data(&s.cp, &phi).unwrap();
        for e in 0..s.g.edge_count() {
            prop_assert_eq!(&td.forward[e].phase, &c.values[s.beta.edge(e)]);
            prop_assert_eq!(&td.inverse[e].phase, &-c.values[e].clone());
        }
    }

    #[test]
    fn shuffles_are_reversible(seed in any::<u64>()) {
        let s = setup(seed);
        for cube in s.cx.cubes(2) {
            let swapped = s.g.shuffle(&cube.edges, &[2, 1]).unwrap();
            prop_assert_eq!(swapped.iter().map(|&e| s.g.color(e)).collect::<Vec<_>>(), vec![2, 1]);
            prop_assert_eq!(s.g.shuffle(&swapped, &[1, 2]).unwrap(), cube.edges.clone());
            prop_assert_eq!(s.g.shuffle(&cube.edges, &[1, 2]).unwrap(), cube.edges.clone());
        }
    }

    #[test]
    fn universal_coefficients_agree(seed in any::<u64>(), m in 2u64..7) {
        let s = setup(seed);
        let a = CoeffGroup::zmod(m);
        for c in [&s.cx, s.cp.product()] {
            for r in 0..=c.top() {
                prop_assert_eq!(c.homology_with(r, &a).unwrap(), homology_uct(c, r, &a).unwrap());
                let direct = c.cohomology_group(r, &a).unwrap();
                match cohomology_uct(c, r, &a).unwrap() {
                    Cohomology::Group(g) => prop_assert_eq!(direct, g),
                    other => prop_assert!(false, "unexpected {}", other.describe()),
                }
            }
        }
    }

    #[test]
    fn cohomology_ranks_match_homology(seed in any::<u64>()) {
        let s = setup(seed);
        for c in [&s.cx, s.cp.product()] {
            for r in 0..=c.top() {
                let h = c.homology(r).unwrap();
                let z = c.cohomology_group(r, &CoeffGroup::Z).unwrap();
                prop_assert_eq!(h.free_rank, z.free_rank);
                // torsion moves up one degree
                if r > 0 {
                    prop_assert_eq!(c.homology(r - 1).unwrap().invariant_factors, z.invariant_factors);
                }
            }
        }
    }
}

#[test]
fn witness_absent_for_nontrivial_class() {
    // every edge of a bouquet is a loop, so δ vanishes on 0-cochains
    let g = kgraphlab::kgraph::build_bouquet(2).unwrap();
    let cx = build_complex(&g).unwrap();
    let mut c = PhaseCochain::zero(&cx, 1);
    c.values[0] = Phase::ratio(1, 3);
    assert!(coboundary_witness(&cx, &c).is_none());
}
