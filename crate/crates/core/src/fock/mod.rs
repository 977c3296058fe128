//! Brute-force simulation on the symmetric Fock space truncated by total photon number.

pub mod basis;
pub mod operator;
pub mod permanent;
pub mod state;
pub mod sweep;

pub use basis::{DEFAULT_BASIS_CAP, FockBasis, build_basis, build_basis_with_cap};
pub use operator::{
    BlockOperator, DisplacementOperator, annihilation, creation, displacement_operator, exponential_vector,
    fock_operator, second_quantization,
};
pub use permanent::{permanent, permanent_naive, permanent_repeated};
pub use state::{
    FockPair, NeymanPearson, NussbaumSzkola, TruncatedFockState, gaussian_density, neyman_pearson,
    nussbaum_szkola, quasi_power_trace, second_quantized_trace_check,
};
pub use sweep::{SweepCaps, SweepRow, error_exponent_sweep, lattice_states};
