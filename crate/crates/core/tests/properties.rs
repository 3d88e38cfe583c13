//! Property-based invariants: bilinearity and symmetry of the pairing,
//! grammar round-trips, reflection isometries, permutation invariance of
//! the inventories, and Smith-form stability under unimodular change of
//! basis.

use dpk3_core::curves::{enumerate_conic_classes, enumerate_minus_one_classes, enumerate_roots};
use dpk3_core::lattice::{ns_lattice_of, strictly_elliptic_pairs, GramMatrix};
use dpk3_core::picard::{canonical_class, format_class, parse_class, DivisorClass};
use dpk3_core::weyl::reflect;
use proptest::prelude::*;

fn class_strategy(p: usize) -> impl Strategy<Value = DivisorClass> {
    (
        -12i64..=12,
        proptest::collection::vec(-12i64..=12, p),
    )
        .prop_map(|(ell, coeffs)| DivisorClass::new(ell, coeffs))
}

fn arity_and_classes() -> impl Strategy<Value = (DivisorClass, DivisorClass, DivisorClass)> {
    (0usize..=8).prop_flat_map(|p| {
        (class_strategy(p), class_strategy(p), class_strategy(p))
    })
}

proptest! {
    #[test]
    fn intersection_is_symmetric_and_bilinear((x, y, z) in arity_and_classes()) {
        prop_assert_eq!(x.intersect(&y).unwrap(), y.intersect(&x).unwrap());
        let sum = x.add(&y).unwrap();
        prop_assert_eq!(
            sum.intersect(&z).unwrap(),
            x.intersect(&z).unwrap() + y.intersect(&z).unwrap()
        );
    }

    #[test]
    fn compact_form_round_trips((x, _, _) in arity_and_classes()) {
        let text = format_class(&x);
        prop_assert_eq!(parse_class(&text, x.num_points()).unwrap(), x);
    }

    #[test]
    fn symbolic_form_parses_back((x, _, _) in arity_and_classes()) {
        // build the symbolic spelling of x by hand
        let mut text = format!("{}L", x.ell());
        for (i, a) in x.coeffs().iter().enumerate() {
            // stored a_i is the negated E-coefficient
            let coefficient = -a;
            if coefficient != 0 {
                text.push_str(&format!("{:+}E{}", coefficient, i + 1));
            }
        }
        prop_assert_eq!(parse_class(&text, x.num_points()).unwrap(), x);
    }

    #[test]
    fn reflections_preserve_the_pairing(
        (x, y, _) in arity_and_classes(),
        root_index in 0usize..256,
    ) {
        let p = x.num_points();
        prop_assume!(p >= 2);
        let degree = 9 - p as i64;
        let roots = enumerate_roots(degree).unwrap().classes;
        let root = &roots[root_index % roots.len()];
        let sx = reflect(&x, root).unwrap();
        let sy = reflect(&y, root).unwrap();
        prop_assert_eq!(sx.intersect(&sy).unwrap(), x.intersect(&y).unwrap());
        prop_assert_eq!(reflect(&sx, root).unwrap(), x);
        let k = canonical_class(p).unwrap();
        prop_assert_eq!(reflect(&k, root).unwrap(), k);
    }

    #[test]
    fn inventories_are_permutation_invariant(
        degree in 1i64..=6,
        seed in proptest::collection::vec(0usize..1000, 8),
    ) {
        let p = (9 - degree) as usize;
        // build a permutation of 0..p from the seed by sorting
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by_key(|&i| (seed[i], i));
        for inventory in [
            enumerate_minus_one_classes(degree).unwrap(),
            enumerate_conic_classes(degree).unwrap(),
            enumerate_roots(degree).unwrap(),
        ] {
            let mut permuted: Vec<DivisorClass> = inventory
                .classes
                .iter()
                .map(|class| {
                    let coeffs = order.iter().map(|&i| class.coeffs()[i]).collect();
                    DivisorClass::new(class.ell(), coeffs)
                })
                .collect();
            permuted.sort();
            prop_assert_eq!(permuted, inventory.classes);
        }
    }
}

fn random_unimodular(n: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for &(from, to, scale) in ops {
        let (from, to) = (from % n, to % n);
        if from == to {
            continue;
        }
        let source = m[from].clone();
        for (cell, value) in m[to].iter_mut().zip(source) {
            *cell += scale * value;
        }
    }
    m
}

fn multiply(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..n).map(|t| a[i][t] * b[t][j]).sum();
        }
    }
    out
}

fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[j][i] = a[i][j];
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn smith_form_is_a_lattice_invariant(
        pair_index in 0usize..10,
        ops in proptest::collection::vec((0usize..8, 0usize..8, -2i64..=2), 0..8),
    ) {
        let pairs = strictly_elliptic_pairs();
        let (rank, delta) = pairs[pair_index % pairs.len()];
        let gram = ns_lattice_of(rank, delta).unwrap();
        let u = random_unimodular(rank, &ops);
        // conjugate: U^T G U is the Gram matrix of the same lattice in a
        // new basis
        let conjugated = multiply(&transpose(&u), &multiply(gram.entries(), &u));
        let transformed = GramMatrix::new(conjugated).unwrap();
        prop_assert_eq!(
            transformed.smith_normal_form().invariant_factors,
            gram.smith_normal_form().invariant_factors
        );
        prop_assert_eq!(transformed.determinant(), gram.determinant());
        prop_assert_eq!(transformed.signature(), gram.signature());
    }
}
