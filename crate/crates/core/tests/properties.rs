mod common;

use acyclica::exactla::Field;
use common::*;
use proptest::prelude::*;

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(FIELDS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_agrees_with_dense_oracle(f in field(), seed in any::<u64>()) {
        prop_assert_eq!(check_rank_oracle(f, seed), Ok(()));
    }

    #[test]
    fn kunneth_on_random_pairs(f in field(), seed in any::<u64>()) {
        prop_assert_eq!(check_kunneth(f, seed), Ok(()));
    }

    #[test]
    fn dualize_is_an_involution(f in field(), seed in any::<u64>()) {
        prop_assert_eq!(check_dual_involution(f, seed), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn constructed_complexes_square_to_zero(f in field(), a in 1usize..=3, seed in any::<u64>()) {
        prop_assert_eq!(check_d_squared(f, a, seed), Ok(()));
    }

    #[test]
    fn psi_phi_round_trip(f in field(), a in 1usize..=4, seed in any::<u64>()) {
        prop_assert_eq!(check_psi_phi(f, a, seed), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5))]

    #[test]
    fn add_m_complexes_and_images_square_to_zero(seed in any::<u64>()) {
        for (name, x) in transfer_catalogue(seed) {
            prop_assert!(d_squared_zero(&x), "{}", name);
        }
    }
}
