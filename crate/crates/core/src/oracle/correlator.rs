use std::ops::Range;

use super::reduced::{block_basis, split_index};
use super::{Caps, DenseHermitian, StateVector};
use crate::error::{Error, Result};

/// Rebuilds `ρ_block` from the correlators `⟨G| ⊗_j |b_j⟩⟨a_j| |G⟩ / ⟨G|G⟩`.
///
/// Each correlator is evaluated by applying the operator string to the
/// state and taking an inner product, so the result does not share the
/// partial-trace bookkeeping of [`super::reduced_density_matrix`].
pub fn correlator_reconstruction(state: &StateVector, block: Range<usize>, caps: &Caps) -> Result<DenseHermitian> {
    let inner = block_basis(state, &block)?;
    let d = inner.dim();
    caps.check_dim("density matrix dimension", d)?;
    caps.check_entries("correlator count", d.saturating_mul(d))?;
    let norm2 = state.norm_squared();
    if norm2 == 0.0 {
        return Err(Error::invalid("the zero state has no correlators"));
    }
    let full = state.basis();
    // Offset of block configuration `c` inside a full index.
    let offset = |c: usize| -> usize {
        block
            .clone()
            .enumerate()
            .map(|(k, site)| inner.digit(c, k) as usize * full.stride(site))
            .sum()
    };
    let offsets: Vec<usize> = (0..d).map(offset).collect();
    let mut by_config: Vec<Vec<(usize, f64)>> = vec![Vec::new(); d];
    for (k, amp) in state.iter() {
        let (local, env) = split_index(full, &inner, &block, k);
        by_config[local].push((env, amp));
    }
    let mut rho = DenseHermitian::zeros(d);
    for a in 0..d {
        for b in 0..d {
            // |b⟩⟨a| maps the a-component of |G⟩ onto configuration b.
            let mut value = 0.0;
            for &(env, amp) in &by_config[a] {
                value += state.get(env + offsets[b]) * amp;
            }
            rho.set(a, b, value / norm2);
        }
    }
    Ok(rho)
}
