mod common;

use common::*;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, rng_seed: RngSeed::Fixed(0x5e55_10a5), ..ProptestConfig::default() })]

    #[test]
    fn dual_is_an_involution(t in session_type(16)) {
        dual_involution(&t)?;
    }

    #[test]
    fn types_print_and_parse_back(t in session_type(16)) {
        type_round_trip(&t)?;
    }

    #[test]
    fn processes_print_and_parse_back(p in process()) {
        process_round_trip(&p)?;
    }

    #[test]
    fn normal_forms_are_fixed_points(t in session_type(12)) {
        normalize_idempotent(&t)?;
    }

    #[test]
    fn axiom_sides_normalize_alike(ax in axiom_instance()) {
        axiom_sides_share_normal_form(&ax)?;
    }

    #[test]
    fn identity_process_has_its_interface(t in session_type(16)) {
        identity_is_typed(&t)?;
    }

    #[test]
    fn synthesis_yields_certified_adapters((t, s) in iso_pair()) {
        synthesized_adapters_certify(&t, &s)?;
    }
}
