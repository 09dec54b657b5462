use std::collections::BTreeMap;
use std::ops::Range;

use super::hamiltonian::block_hamiltonian_operator;
use super::{build_full_vbs, eigenspectrum, symmetric_eigen, Caps, DenseHermitian, FockBasis, StateVector};
use crate::angular::TwiceSpin;
use crate::error::{Error, Result};
use crate::spectrum::{bulk_spin, BlockSpectrum, Eigenvalue, Method, SpectrumEntry};

const LABEL_TOLERANCE: f64 = 1e-9;

pub(crate) fn block_basis(state: &StateVector, block: &Range<usize>) -> Result<FockBasis> {
    if block.start >= block.end || block.end > state.basis().sites() {
        return Err(Error::invalid(format!(
            "block {}..{} does not fit a chain of {} sites",
            block.start,
            block.end,
            state.basis().sites()
        )));
    }
    FockBasis::new(state.spins()[block.clone()].to_vec())
}

/// Splits a full-chain index into (block index, environment key).
pub(crate) fn split_index(full: &FockBasis, inner: &FockBasis, block: &Range<usize>, index: usize) -> (usize, usize) {
    let mut env = index;
    let mut local = 0;
    for (k, site) in block.clone().enumerate() {
        let d = full.digit(index, site) as usize;
        env -= d * full.stride(site);
        local += d * inner.stride(k);
    }
    (local, env)
}

/// Amplitudes of the normalised state grouped by environment configuration.
fn environment_vectors(state: &StateVector, block: &Range<usize>) -> Result<(FockBasis, Vec<Vec<(usize, f64)>>)> {
    let inner = block_basis(state, block)?;
    let norm2 = state.norm_squared();
    if norm2 == 0.0 {
        return Err(Error::invalid("the zero state has no density matrix"));
    }
    let scale = norm2.sqrt().recip();
    let mut groups: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
    for (k, amp) in state.iter() {
        let (local, env) = split_index(state.basis(), &inner, block, k);
        groups.entry(env).or_default().push((local, amp * scale));
    }
    Ok((inner, groups.into_values().collect()))
}

/// `Tr_outside |ψ⟩⟨ψ| / ⟨ψ|ψ⟩` over the block's product basis.
pub fn reduced_density_matrix(state: &StateVector, block: Range<usize>, caps: &Caps) -> Result<DenseHermitian> {
    let inner = block_basis(state, &block)?;
    caps.check_dim("density matrix dimension", inner.dim())?;
    let (inner, groups) = environment_vectors(state, &block)?;
    let mut rho = DenseHermitian::zeros(inner.dim());
    for g in &groups {
        for &(i, a) in g {
            for &(j, b) in g {
                rho.add_to(i, j, a * b);
            }
        }
    }
    Ok(rho)
}

/// Oracle eigenvalues together with the J-labelled spectrum read off from them.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleSpectrum {
    pub spectrum: BlockSpectrum,
    /// Every eigenvalue, descending.
    pub eigenvalues: Vec<f64>,
    /// Count of eigenvalues above `1e-10 · dim`.
    pub rank: usize,
    /// Largest `|λ|` among the eigenvalues outside the rank.
    pub max_null: f64,
}

pub(crate) fn rank_split(eigenvalues: &[f64]) -> (usize, f64) {
    let cutoff = 1e-10 * eigenvalues.len() as f64;
    let rank = eigenvalues.iter().filter(|v| v.abs() >= cutoff).count();
    let max_null = eigenvalues
        .iter()
        .filter(|v| v.abs() < cutoff)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    (rank, max_null)
}

/// Removes from `from` the closest match of each value in `remove`.
fn multiset_difference(from: &[f64], remove: &[f64]) -> Result<Vec<f64>> {
    let mut left = from.to_vec();
    for &r in remove {
        let pos = left
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - r).abs().total_cmp(&(b.1 - r).abs()))
            .map(|(i, _)| i)
            .filter(|&i| (left[i] - r).abs() < LABEL_TOLERANCE)
            .ok_or_else(|| Error::InvalidSpectrum(format!("eigenvalue {r} of a higher sector is missing below it")))?;
        left.remove(pos);
    }
    Ok(left)
}

/// Diagonalises a block density matrix sector by sector in `S^z_tot`.
///
/// A value present in sector `M = J` but not `M = J + 1` is labelled `J`.
pub(crate) fn labelled_spectrum(
    spin: TwiceSpin,
    length: usize,
    basis: &FockBasis,
    rho: &DenseHermitian,
) -> Result<OracleSpectrum> {
    let mut sectors: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for i in 0..basis.dim() {
        sectors.entry(basis.total_twice_m(i)).or_default().push(i);
    }
    let cutoff = 1e-10 * basis.dim() as f64;
    let mut all = Vec::with_capacity(basis.dim());
    let mut nonzero: BTreeMap<i32, Vec<f64>> = BTreeMap::new();
    for (&m, idx) in &sectors {
        let sub = DenseHermitian::from_fn(idx.len(), |a, b| rho.get(idx[a], idx[b]));
        let vals = eigenspectrum(&sub)?;
        nonzero.insert(m, vals.iter().copied().filter(|v| v.abs() >= cutoff).collect());
        all.extend(vals);
    }
    all.sort_by(|a, b| b.total_cmp(a));
    let (rank, max_null) = rank_split(&all);

    let mut entries = Vec::new();
    for (&m, vals) in nonzero.iter().filter(|(m, _)| **m >= 0) {
        let above = nonzero.get(&(m + 2)).cloned().unwrap_or_default();
        let j = TwiceSpin::new(m as u32);
        for v in multiset_difference(vals, &above)? {
            entries.push(SpectrumEntry {
                j,
                eigenvalue: Eigenvalue::Approx(v),
                multiplicity: j.dim(),
            });
        }
    }
    Ok(OracleSpectrum {
        spectrum: BlockSpectrum {
            spin,
            length: Some(length),
            entries,
            method: Method::FockOracle,
        },
        eigenvalues: all,
        rank,
        max_null,
    })
}

/// Fock-oracle spectrum of the block `k..k+L` inside the `N`-site chain.
///
/// Sites are numbered `0..=N+1` with spin-`S/2` ends, so `1 ≤ k` and
/// `k + L - 1 ≤ N`.
pub fn fock_block_spectrum(spin: TwiceSpin, length: usize, n: usize, k: usize, caps: &Caps) -> Result<OracleSpectrum> {
    bulk_spin(spin)?;
    if length < 1 || k < 1 || k + length > n + 1 {
        return Err(Error::invalid(format!("block k={k}, L={length} is not inside the bulk of N={n}")));
    }
    let state = build_full_vbs(spin, n, caps)?.to_state_vector(caps)?;
    let block = k..k + length;
    let rho = reduced_density_matrix(&state, block.clone(), caps)?;
    let basis = block_basis(&state, &block)?;
    labelled_spectrum(spin, length, &basis, &rho)
}

/// The ground-space projector test on a large block.
///
/// `ρ_L = Σ_e |v_e⟩⟨v_e|` with one vector per boundary configuration. The
/// span of the `v_e` is checked to be annihilated by `H_b`; `P` is the
/// orthogonal projector onto that span and is compared with `(S+1)² ρ_L`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundProjectorReport {
    pub length: usize,
    /// Rank of the span of the `v_e`.
    pub rank: usize,
    /// `max_e ‖H_b v_e‖ / ‖v_e‖`.
    pub hamiltonian_residual: f64,
    /// `max |ρ_L - P/(S+1)²|` over all entries.
    pub max_abs_deviation: f64,
    /// `‖ρ_L - P/(S+1)²‖₂`.
    pub two_norm_deviation: f64,
}

pub fn ground_projector_check(spin: TwiceSpin, length: usize, caps: &Caps) -> Result<GroundProjectorReport> {
    let s = bulk_spin(spin)? as usize;
    let k = ((s + 1) * (s + 1)) as f64;
    let state = build_full_vbs(spin, length, caps)?.to_state_vector(caps)?;
    let block = 1..length + 1;
    let (inner, groups) = environment_vectors(&state, &block)?;
    let vectors: Vec<StateVector> = groups
        .iter()
        .map(|g| StateVector::new(inner.clone(), g.iter().copied().collect()))
        .collect::<Result<_>>()?;

    let h = block_hamiltonian_operator(spin, length, &[])?;
    let mut hamiltonian_residual: f64 = 0.0;
    for v in &vectors {
        hamiltonian_residual = hamiltonian_residual.max(h.apply(v)?.norm() / v.norm());
    }

    let e = vectors.len();
    let mut gram = DenseHermitian::zeros(e);
    for a in 0..e {
        for b in 0..e {
            gram.set(a, b, vectors[a].inner(&vectors[b])?);
        }
    }
    let eig = symmetric_eigen(&gram)?;
    let top = eig.values.first().copied().unwrap_or(0.0);
    let rank = eig.values.iter().filter(|&&v| v > 1e-12 * top).count();
    if rank != e {
        return Err(Error::InvalidSpectrum(format!("boundary vectors span {rank} of {e} dimensions")));
    }
    let two_norm_deviation = eig.values.iter().fold(0.0f64, |m, v| m.max((v - 1.0 / k).abs()));

    // ρ - P/k = V (I - G⁻¹/k) Vᵀ, nonzero only on the support of the v_e.
    let mut middle = DenseHermitian::identity(e);
    for (val, vec) in eig.values.iter().zip(&eig.vectors) {
        for a in 0..e {
            for b in 0..e {
                middle.add_to(a, b, -vec[a] * vec[b] / (val * k));
            }
        }
    }
    let mut support: Vec<usize> = vectors.iter().flat_map(|v| v.iter().map(|(i, _)| i)).collect();
    support.sort_unstable();
    support.dedup();
    caps.check_dim("projector support", support.len())?;
    let rows: Vec<Vec<f64>> = support
        .iter()
        .map(|&i| vectors.iter().map(|v| v.get(i)).collect())
        .collect();
    let weighted: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| (0..e).map(|b| (0..e).map(|a| r[a] * middle.get(a, b)).sum()).collect())
        .collect();
    let mut max_abs_deviation: f64 = 0.0;
    for w in &weighted {
        for r in &rows {
            let d: f64 = w.iter().zip(r).map(|(x, y)| x * y).sum();
            max_abs_deviation = max_abs_deviation.max(d.abs());
        }
    }
    Ok(GroundProjectorReport {
        length,
        rank,
        hamiltonian_residual,
        max_abs_deviation,
        two_norm_deviation,
    })
}
