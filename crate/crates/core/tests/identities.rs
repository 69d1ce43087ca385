use std::sync::Arc;

use burgess_core::modular::PrimeModulus;
use burgess_core::pipeline::{count_profile, s4_empirical};
use burgess_core::sums::{complete_sum, weil_report};
use burgess_core::vinogradov::{count_j_mitm, v_census};
use burgess_core::{DirichletCharacter, TupleAssignment};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn weil_holds_for_characters_of_every_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for q in [31u64, 61, 101] {
        let modulus = Arc::new(PrimeModulus::new(q).unwrap());
        for j in 1..q - 1 {
            let chi = DirichletCharacter::non_principal(modulus.clone(), j).unwrap();
            for _ in 0..5 {
                let entries: Vec<u64> = (0..6).map(|_| rng.random_range(1..=10)).collect();
                let x = TupleAssignment::new(entries, 10).unwrap();
                let rep = weil_report(&chi, &x).unwrap();
                assert!(rep.holds, "q={q} j={j} x={x:?} {rep:?}");
            }
        }
    }
}

#[test]
fn conjugate_tuple_gives_conjugate_complete_sum() {
    // Swapping the two halves of a pair conjugates every term.
    let chi = DirichletCharacter::for_prime(43, 6).unwrap();
    let a = complete_sum(&chi, &TupleAssignment::from_entries(vec![2, 5, 7, 9]).unwrap()).unwrap();
    let b = complete_sum(&chi, &TupleAssignment::from_entries(vec![5, 2, 9, 7]).unwrap()).unwrap();
    assert!((a.value - b.value.conj()).norm() < 1e-9);
}

#[test]
fn census_matches_mean_value() {
    for (r, d, tau) in [(1, 1, 9), (2, 1, 7), (2, 2, 7), (3, 2, 4)] {
        let census = v_census(r, d, tau).unwrap();
        assert_eq!(census.total(), count_j_mitm(r, d, tau).unwrap());
    }
}

#[test]
fn s4_expansion_identity() {
    let modulus = Arc::new(PrimeModulus::new(53).unwrap());
    for j in [1u64, 13, 26] {
        let chi = DirichletCharacter::non_principal(modulus.clone(), j).unwrap();
        let rep = s4_empirical(&chi, 2, 1, 2, 4).unwrap();
        assert!((rep.s4 - rep.s4_dual).abs() <= 1e-9 * rep.s4);
        assert!(rep.vin_shape <= rep.chang_shape);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn count_profile_invariants(n in -5000i64..5000, h in 1u64..60, p in 1u64..20, qi in 0usize..4) {
        let q = [1009u64, 2003, 4001, 10007][qi];
        let prof = count_profile(n, h, p, q).unwrap();
        prop_assert!(prof.support_within(2 * q));
        prop_assert!(prof.s1 <= prof.s2);
        let rows: u128 = prof.rows.iter().map(|r| r.count() as u128).sum();
        prop_assert_eq!(rows, prof.s1);
        for row in &prof.rows {
            prop_assert!(row.count() >= h / p && row.count() <= h.div_ceil(p));
        }
    }
}
