//! Brute-force verification engine.
//!
//! Everything here is built from the definitions, without the recurrence or
//! the closed form: valence-bond states are expanded in the Schwinger-boson
//! Fock basis, environments are traced out and the resulting dense matrices
//! are diagonalised. Spin 1 additionally has a Pauli-string representation
//! that shares no code with the Fock construction.
//!
//! Basis ordering is site-major with the first site varying fastest. The
//! local index of a site is `n_a = s + m`, so magnetizations ascend from
//! `-s`:
//!
//! ```text
//! index = Σ_j (m_j + s_j) · Π_{j' < j} (2 s_{j'} + 1)
//! ```

mod correlator;
mod dense;
mod fock;
mod hamiltonian;
mod pauli;
mod reduced;
mod vbs;

pub use correlator::correlator_reconstruction;
pub use dense::{eigenspectrum, symmetric_eigen, DenseHermitian, SymmetricEigen};
pub use fock::{FockBasis, FockState, RawState, StateVector};
pub use hamiltonian::{
    block_hamiltonian, block_hamiltonian_operator, null_space_dimension, pair_projector,
    unique_hamiltonian, unique_hamiltonian_operator, ChainOperator,
};
pub use pauli::{
    pauli_channel_identity_check, pauli_density_matrix_spin1, pauli_ground_states_spin1,
    pauli_spectrum_spin1, ChannelIdentity,
};
pub use reduced::{
    fock_block_spectrum, ground_projector_check, reduced_density_matrix, GroundProjectorReport,
    OracleSpectrum,
};
pub use vbs::{
    apply_psi_dagger, build_block_vbs, build_full_vbs, degenerate_gram, degenerate_vbs,
    partial_inner_identity_check, psi_dagger, total_spin_checks, valence_bond_commutator_check,
    GramReport, PartialInnerReport, TotalSpinReport,
};

use crate::error::{Error, Result};

/// Resource limits for dense matrices and sparse state maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_dim: usize,
    pub max_entries: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_dim: 4096,
            max_entries: 5_000_000,
        }
    }
}

impl Caps {
    pub(crate) fn check_dim(&self, what: &'static str, requested: usize) -> Result<()> {
        if requested > self.max_dim {
            return Err(Error::ResourceCap {
                what,
                requested,
                cap: self.max_dim,
            });
        }
        Ok(())
    }

    pub(crate) fn check_entries(&self, what: &'static str, requested: usize) -> Result<()> {
        if requested > self.max_entries {
            return Err(Error::ResourceCap {
                what,
                requested,
                cap: self.max_entries,
            });
        }
        Ok(())
    }
}
