//! Invariant suites under fixed seeds.

mod common;

macro_rules! property_tests {
    ($($name:ident => $prop:path, $cases:expr;)*) => {
        $(
            #[test]
            fn $name() {
                if let Err(e) = $prop($cases) {
                    panic!("{e}");
                }
            }
        )*
    };
}

property_tests! {
    symbol_identities => common::prop_symbol_identities, 64;
    symbol_real => common::prop_symbol_real, 16;
    toeplitz_structure => common::prop_toeplitz_structure, 64;
    spectrum_containment => common::prop_spectrum_containment, 32;
    nesting => common::prop_nesting, 32;
    apply_composition => common::prop_apply_composition, 64;
    trace_fn_matches_apply => common::prop_trace_fn, 64;
    sandwich_endpoints => common::prop_sandwich_endpoints, 64;
    convexity => common::prop_convexity, 48;
    displacement_separation => common::prop_displacement_separation, 32;
    constant_scaling => common::prop_constant_scaling, 48;
    oracle_equivalence => common::prop_oracle_equivalence, 8;
    entropy_difference => common::prop_entropy_difference, 32;
    asymptotic_endpoints => common::prop_asymptotic_endpoints, 32;
    uniform_convergence => common::prop_uniform_convergence, 8;
    legendre => common::prop_legendre, 24;
    swap_symmetry => common::prop_swap_symmetry, 24;
    chernoff_below_entropies => common::prop_chernoff_below_entropies, 24;
    fock_multiplicative => common::prop_fock_multiplicative, 32;
    trace_identity => common::prop_trace_identity, 48;
    eigenstructure => common::prop_eigenstructure, 48;
    nussbaum_szkola => common::prop_nussbaum_szkola, 16;
    np_optimality => common::prop_np_optimality, 16;
    audenaert => common::prop_audenaert, 16;
    displacement_covariance => common::prop_displacement_covariance, 16;
}
