use burgess_core::verify::{criterion_ids, run_criterion, DEFAULT_SEED};

fn check(id: u8) {
    let outcome = run_criterion(id, DEFAULT_SEED).expect("known criterion");
    println!("{outcome}");
    assert!(outcome.passed, "{outcome}");
    assert!(outcome.within_budget(), "over budget: {outcome}");
}

macro_rules! criteria {
    ($($name:ident => $id:expr),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                check($id);
            }
        )*
    };
}

criteria! {
    c01_orthogonality => 1,
    c02_gauss_sum_sharpness => 2,
    c03_weil_inequality => 3,
    c04_vinogradov_oracle_equivalence => 4,
    c05_bad_tuple_count => 5,
    c06_grid_identity => 6,
    c07_count_profile_moments => 7,
    c08_bound_formula_consistency => 8,
    c09_delta_asymptotics => 9,
    c10_empirical_nontriviality => 10,
}

#[test]
fn suite_covers_every_criterion() {
    assert_eq!(criterion_ids().count(), 10);
}
