mod common;

use parahecke::decompose::{decompose, residue_character, Cell};
use parahecke::matrix::SeriesMatrix;
use parahecke::series::{SeriesError, Window};
use parahecke::whittaker::support_holds;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setup() -> impl Strategy<Value = (u64, usize, u32)> {
    (any::<u64>(), 1usize..=3, prop::sample::select(vec![2u32, 3, 5]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reconstruction((seed, n, p) in setup()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::prime(p);
        let g = common::matrix(&mut rng, p, n);
        let dec = match decompose(&g, Window::default()) {
            Err(SeriesError::NotInvertible) => return Ok(()),
            other => other.unwrap(),
        };
        prop_assert!(dec.u.is_unipotent_upper());
        prop_assert!(dec.k.iwahori_member().unwrap());
        prop_assert!(dec.reconstruct().unwrap().agrees_with(&g));
    }

    #[test]
    fn cell_is_a_double_coset_invariant((seed, n, p) in setup()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::prime(p);
        let c = common::cell(&mut rng, n, 2);
        let (_, g, _) = common::from_cell(&mut rng, p, &c);
        let dec = decompose(&g, Window::default()).unwrap();
        prop_assert_eq!(&dec.cell, &c);
        let u2 = common::unipotent(&mut rng, p, n, -2);
        let k2 = common::iwahori(&mut rng, p, n);
        let g2 = SeriesMatrix::product([&u2, &g, &k2]).unwrap();
        prop_assert_eq!(decompose(&g2, Window::default()).unwrap().cell, c);
    }

    #[test]
    fn widening_never_changes_answers((seed, n, p) in setup()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::prime(p);
        let c = common::cell(&mut rng, n, 2);
        let (_, g, _) = common::from_cell(&mut rng, p, &c);
        let w = Window::default();
        let narrow = decompose(&g, w).unwrap();
        let wide = decompose(&g, w.widened()).unwrap();
        prop_assert_eq!(&narrow.cell, &wide.cell);
        prop_assert_eq!(residue_character(&narrow.u).ok(), residue_character(&wide.u).ok());
        prop_assert!(narrow.u.agrees_with(&wide.u));
    }

    #[test]
    fn truncated_inputs_still_decompose((seed, n, p) in setup()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::prime(p);
        let c = common::cell(&mut rng, n, 2);
        let (_, g, _) = common::from_cell(&mut rng, p, &c);
        let w = Window::default();
        let fuzzy = SeriesMatrix::from_fn(p, n, |i, j| g.get(i, j).truncated(40));
        let dec = decompose(&fuzzy, w).unwrap();
        prop_assert_eq!(&dec.cell, &c);
        prop_assert!(dec.reconstruct().unwrap().agrees_with(&fuzzy));
        prop_assert!(dec.k.iwahori_member().unwrap());
    }

    #[test]
    fn coarse_inputs_fail_loudly_or_answer_correctly((seed, n, p) in setup()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::prime(p);
        let c = common::cell(&mut rng, n, 2);
        let (_, g, _) = common::from_cell(&mut rng, p, &c);
        let coarse = SeriesMatrix::from_fn(p, n, |i, j| g.get(i, j).truncated(4));
        match decompose(&coarse, Window::default()) {
            Ok(dec) => prop_assert_eq!(&dec.cell, &c),
            Err(e) => prop_assert!(matches!(e, SeriesError::InsufficientPrecision(_)), "{e}"),
        }
    }
}

#[test]
fn normal_forms_are_fixed() {
    let p = common::prime(3);
    for n in 1..=3 {
        for c in Cell::all_bounded(n, 2) {
            let dec = decompose(&c.matrix(p), Window::default()).unwrap();
            assert_eq!(dec.cell, c);
            assert_eq!(dec.u, SeriesMatrix::identity(p, n));
            assert_eq!(dec.k, SeriesMatrix::identity(p, n));
        }
    }
}

#[test]
fn residue_is_well_defined_on_the_support() {
    let p = common::prime(5);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..300 {
        let c = common::cell(&mut rng, 3, 2);
        let (u, g, _) = common::from_cell(&mut rng, p, &c);
        let dec = decompose(&g, Window::default()).unwrap();
        assert_eq!(dec.cell, c);
        if support_holds(&c) {
            assert_eq!(residue_character(&dec.u).unwrap(), residue_character(&u).unwrap(), "{c}");
            checked += 1;
        }
    }
    assert!(checked > 20);
}
