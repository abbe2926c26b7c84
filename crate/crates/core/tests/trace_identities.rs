use parahecke::scalars::Prime;
use parahecke::trace::{l_values, character_sums, verify_lemma54, verify_unweighted};

#[test]
fn table_is_symmetric() {
    for d in 1..=8 {
        let t = l_values(d);
        for tk in 0..=2 * d {
            assert_eq!(t.get(tk), t.get(2 * d - tk));
        }
    }
}

#[test]
fn difference_identity_up_to_eight() {
    for d in 1..=8 {
        let r = verify_lemma54(d);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.rows.len(), d as usize);
    }
}

#[test]
fn unweighted_sums_up_to_eight() {
    for d in 1..=8 {
        assert!(verify_unweighted(d).passed(), "d = {d}");
    }
}

#[test]
fn character_sums_match_at_small_primes() {
    for p in [2, 3] {
        let p = Prime::new(p).unwrap();
        for d in 1..=6 {
            for (k, lhs, rhs) in character_sums(d, p) {
                assert_eq!(lhs, rhs, "d = {d}, k = {k}, p = {p}");
            }
        }
    }
}
