mod props;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fidelity_is_symmetric(n in 1usize..=6, pa: bool, pb: bool, seed: u64) {
        props::fidelity_symmetric(n, pa, pb, seed)?;
    }

    #[test]
    fn fidelity_lies_in_unit_interval(n in 1usize..=6, pa: bool, pb: bool, seed: u64) {
        props::fidelity_in_range(n, pa, pb, seed)?;
    }

    #[test]
    fn fidelity_is_orthogonally_covariant(n in 1usize..=6, pa: bool, pb: bool, seed: u64) {
        props::fidelity_orthogonal_covariance(n, pa, pb, seed)?;
    }

    #[test]
    fn fidelity_factorizes_over_direct_sums(n1 in 1usize..=4, n2 in 1usize..=4, seed in 0u64..1 << 40) {
        props::fidelity_product_structure(n1, n2, seed)?;
    }

    #[test]
    fn correlation_matrices_keep_their_invariants(n in 1usize..=8, pure: bool, seed: u64) {
        props::correlation_invariants(n, pure, seed)?;
    }

    #[test]
    fn ground_states_are_pure_with_expected_energy(n in 1usize..=8, seed: u64) {
        props::ground_state_invariants(n, seed)?;
    }

    #[test]
    fn entropy_is_additive(n1 in 1usize..=5, n2 in 1usize..=5, seed in 0u64..1 << 40) {
        props::entropy_additive(n1, n2, seed)?;
    }

    #[test]
    fn pure_state_entropy_is_complementary(n in 2usize..=8, k: usize, seed: u64) {
        props::entropy_complementary(n, k, seed)?;
    }

    #[test]
    fn distinct_majorana_products_are_traceless(n in 1usize..=5, mask: u32) {
        props::majorana_products_traceless(n, mask)?;
    }

    #[test]
    fn bef_values_lie_in_unit_interval(ising: bool, n in 3usize..=16, h in 0.2f64..2.5) {
        props::bef_in_unit_interval(ising, n, h)?;
    }

    #[test]
    fn assembled_states_have_requested_block_values(n in 1usize..=6, seed: u64) {
        props::assemble_round_trip(n, seed)?;
    }
}
