//! XXZ chain: dense exact tensor algebra, R-matrices, transfer matrix, qKZ
//! operators, nonlocal Hamiltonians, the `E^ℏ` pairing and an exact
//! operator-identity suite.

mod identities;
mod ops;
mod qkz;
mod tensor;

pub use identities::{identity_suite, spectral_kernel, SpectralKernel, IDENTITY_NAMES};
pub use ops::{
    cartan_sum, e_hbar, e_hbar_full, hamiltonian_norm, nonlocal_hamiltonian, pole_expansion_at, pole_extract,
    qkz_operator, r_matrix, r_matrix_u, r_on_sites, r_weight, transfer_matrix, upsilon, weight_projector, RForm,
};
pub use qkz::{fit_insertions, qkz_trs_sum_check, FittedInsertions};
pub use tensor::{
    charpoly, flat_index, inversions, multi_index, solve_linear, weight_of, TensorOperator, TensorVector, WeightLabel,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::kernel::scalar::{random_distinct, random_q};
use crate::kernel::ParamPoint;

/// A seeded random generic parameter point with `w` equivariant and `n` twist parameters.
pub fn random_params(n: usize, w: usize, seed: u64) -> Result<ParamPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let h = random_q(&mut rng);
        let qh = random_q(&mut rng);
        let a = random_distinct(&mut rng, w);
        let zeta = random_distinct(&mut rng, n);
        let h2 = &h * &h;
        if h2 == num_traits::One::one() {
            continue;
        }
        if let Ok(p) = ParamPoint::new(qh, h, a, zeta, 0) {
            return Ok(p);
        }
    }
}
