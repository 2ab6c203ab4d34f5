use mahowald_core::f2linalg::{kernel_basis, rref, solve, BitMatrix, BitVector};
use mahowald_core::steenrod::{adem_normalize, basis, is_admissible, multiply, SteenrodElement};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_element(rng: &mut StdRng, degree: u32) -> SteenrodElement {
    let mut e = SteenrodElement::zero(degree);
    for m in basis(degree) {
        if rng.gen_bool(0.5) {
            e = e.add(&SteenrodElement::from_monomial(m)).unwrap();
        }
    }
    e
}

#[test]
fn associativity_on_random_triples() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 1200 {
        let a = rng.gen_range(0..=20u32);
        let b = rng.gen_range(0..=20 - a);
        let c = rng.gen_range(0..=20 - a - b);
        let (x, y, z) = (
            random_element(&mut rng, a),
            random_element(&mut rng, b),
            random_element(&mut rng, c),
        );
        assert_eq!(
            multiply(&multiply(&x, &y), &z),
            multiply(&x, &multiply(&y, &z)),
            "({x}) ({y}) ({z})"
        );
        checked += 1;
    }
}

fn compositions(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[test]
fn basis_matches_brute_force() {
    for n in 0..=20 {
        let brute = compositions(n).into_iter().filter(|w| is_admissible(w)).count();
        assert_eq!(basis(n).len(), brute, "degree {n}");
    }
}

#[test]
fn indecomposables_in_powers_of_two() {
    // Sq^n is decomposable iff it lies in the span of products of lower degrees.
    for n in 1..=16u32 {
        let mut decomposables = std::collections::BTreeSet::new();
        for i in 1..n {
            for a in basis(i) {
                for b in basis(n - i) {
                    let p = multiply(&SteenrodElement::from_monomial(a.clone()), &SteenrodElement::from_monomial(b));
                    decomposables.insert(p.terms().iter().cloned().collect::<Vec<_>>());
                }
            }
        }
        let index: Vec<_> = basis(n);
        let rows: Vec<BitVector> = decomposables
            .iter()
            .map(|terms| BitVector::from_bools(index.iter().map(|m| terms.contains(m))))
            .collect();
        let m = BitMatrix::from_rows(index.len(), rows).unwrap();
        let quotient = index.len() - rref(&m).rank;
        let expect = usize::from(n.is_power_of_two());
        assert_eq!(quotient, expect, "degree {n}");
    }
}

#[test]
fn normalize_is_idempotent() {
    for n in 0..=14 {
        for w in compositions(n) {
            let once = adem_normalize(&w);
            let mut again = SteenrodElement::zero(n);
            for m in once.terms() {
                again = again.add(&adem_normalize(m.exponents())).unwrap();
            }
            assert_eq!(again, once, "{w:?}");
        }
    }
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
    prop::collection::vec(prop::collection::vec(any::<bool>(), cols), rows).prop_map(move |rs| {
        BitMatrix::from_rows(cols, rs.into_iter().map(BitVector::from_bools).collect()).unwrap()
    })
}

fn sized_matrix() -> impl Strategy<Value = BitMatrix> {
    (0usize..24, 0usize..24).prop_flat_map(|(r, c)| matrix(r, c))
}

proptest! {
    #[test]
    fn rank_plus_nullity(m in sized_matrix()) {
        let rank = rref(&m).rank;
        prop_assert_eq!(rank + kernel_basis(&m).len(), m.num_cols());
        for k in kernel_basis(&m) {
            prop_assert!(m.mul_vec(&k).unwrap().is_zero());
        }
    }

    #[test]
    fn rref_is_idempotent(m in sized_matrix()) {
        let once = rref(&m);
        let twice = rref(&once.reduced);
        prop_assert_eq!(&twice.reduced, &once.reduced);
        prop_assert_eq!(twice.pivot_cols, once.pivot_cols);
    }

    #[test]
    fn solve_round_trip(m in sized_matrix(), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let x0 = BitVector::from_bools((0..m.num_cols()).map(|_| rng.gen_bool(0.5)));
        let b = m.mul_vec(&x0).unwrap();
        let x = solve(&m, &b).unwrap().expect("b lies in the image");
        prop_assert_eq!(m.mul_vec(&x).unwrap(), b);
    }
}

#[test]
fn full_rank_square_recovers_solution() {
    let mut rng = StdRng::seed_from_u64(20);
    let mut found = 0;
    while found < 50 {
        let rows: Vec<BitVector> = (0..20)
            .map(|_| BitVector::from_bools((0..20).map(|_| rng.gen_bool(0.5))))
            .collect();
        let m = BitMatrix::from_rows(20, rows).unwrap();
        if rref(&m).rank < 20 {
            continue;
        }
        let x0 = BitVector::from_bools((0..20).map(|_| rng.gen_bool(0.5)));
        let b = m.mul_vec(&x0).unwrap();
        assert_eq!(solve(&m, &b).unwrap(), Some(x0));
        found += 1;
    }
}
