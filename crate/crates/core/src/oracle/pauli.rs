//! Spin-1 chain in the maximally entangled two-qubit basis.
//!
//! Each spin 1 is the triplet part of two spin-½'s, written
//! `|α⟩ = (-1)^{1+δ_{α0}} (I ⊗ σ_α)|0⟩` with `|0⟩` the singlet. A block
//! basis state is a string `α_1 … α_L` with `α_j ∈ {1,2,3}`, indexed by
//! `Σ_j (α_j - 1) 3^{j-1}`.

use num_complex::Complex64;

use super::reduced::rank_split;
use super::{eigenspectrum, Caps, DenseHermitian, OracleSpectrum};
use crate::angular::TwiceSpin;
use crate::error::{Error, Result};
use crate::spectrum::{BlockSpectrum, Eigenvalue, Method, SpectrumEntry};

type M2 = [[Complex64; 2]; 2];
type M4 = [[Complex64; 4]; 4];

const IMAGINARY_TOLERANCE: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sigma(alpha: usize) -> M2 {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    match alpha {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        3 => [[o, z], [z, -o]],
        _ => unreachable!("Pauli index {alpha}"),
    }
}

fn mul2(a: &M2, b: &M2) -> M2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `½ Tr(A† B)`.
fn half_trace_inner(a: &M2, b: &M2) -> Complex64 {
    let mut t = c(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            t += a[i][j].conj() * b[i][j];
        }
    }
    t * 0.5
}

/// The singlet `(|↑↓⟩ - |↓↑⟩)/√2`, index `2 q₁ + q₂` with `↑ = 0`.
fn singlet() -> [Complex64; 4] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [c(0.0, 0.0), c(r, 0.0), c(-r, 0.0), c(0.0, 0.0)]
}

/// `(A ⊗ B)|ψ⟩`.
fn kron_apply(a: &M2, b: &M2, psi: &[Complex64; 4]) -> [Complex64; 4] {
    let mut out = [c(0.0, 0.0); 4];
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    out[2 * i1 + i2] += a[i1][j1] * b[i2][j2] * psi[2 * j1 + j2];
                }
            }
        }
    }
    out
}

fn inner4(a: &[Complex64; 4], b: &[Complex64; 4]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `|β⟩ = (-1)^{1+δ_{β0}} (I ⊗ σ_β)|0⟩`.
fn basis_state(beta: usize) -> [Complex64; 4] {
    let sign = if beta == 0 { 1.0 } else { -1.0 };
    kron_apply(&sigma(0), &sigma(beta), &singlet()).map(|x| x * sign)
}

/// All strings `α_1 … α_len` over `{1,2,3}`, in basis order.
fn strings(len: usize) -> impl Iterator<Item = Vec<usize>> {
    let count = 3usize.pow(len as u32);
    (0..count).map(move |mut i| {
        (0..len)
            .map(|_| {
                let d = i % 3 + 1;
                i /= 3;
                d
            })
            .collect()
    })
}

/// `σ_{α_n} ··· σ_{α_1}` for the string `α_1 … α_n`.
fn ordered_product(alphas: &[usize]) -> M2 {
    alphas.iter().fold(sigma(0), |acc, &a| mul2(&sigma(a), &acc))
}

fn check_length(length: usize, max: usize) -> Result<()> {
    if length < 2 || length > max {
        return Err(Error::invalid(format!("Pauli oracle supports 2 ≤ L ≤ {max}, got {length}")));
    }
    Ok(())
}

fn real_part(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() > IMAGINARY_TOLERANCE {
        return Err(Error::InvalidSpectrum(format!("{what} has imaginary part {:e}", z.im)));
    }
    Ok(z.re)
}

/// `ρ_L[α, α'] = ½ Tr(σ_{α'_1}···σ_{α'_L} σ_{α_L}···σ_{α_1}) / 3^L`.
pub fn pauli_density_matrix_spin1(length: usize) -> Result<DenseHermitian> {
    check_length(length, 7)?;
    let words: Vec<M2> = strings(length).map(|s| ordered_product(&s)).collect();
    let n = words.len();
    let scale = 1.0 / n as f64;
    let mut rho = DenseHermitian::zeros(n);
    for a in 0..n {
        for b in 0..n {
            let z = half_trace_inner(&words[b], &words[a]) * scale;
            rho.set(a, b, real_part(z, "density matrix entry")?);
        }
    }
    Ok(rho)
}

/// Components `⟨α_L| σ_α ⊗ (σ_{α_{L-1}}···σ_{α_1}) |0⟩` of `|G; α⟩`.
///
/// The raw components are purely imaginary for `α ≠ 0`; one global phase
/// is removed so that a real vector is returned.
pub fn pauli_ground_states_spin1(length: usize, alpha: usize) -> Result<Vec<f64>> {
    if length < 2 {
        return Err(Error::invalid("ground states need L ≥ 2"));
    }
    if alpha > 3 {
        return Err(Error::invalid(format!("α must be 0..=3, got {alpha}")));
    }
    let zero = singlet();
    let raw: Vec<Complex64> = strings(length)
        .map(|s| {
            let inner = ordered_product(&s[..length - 1]);
            let ket = kron_apply(&sigma(alpha), &inner, &zero);
            inner4(&basis_state(s[length - 1]), &ket)
        })
        .collect();
    let pivot = raw
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .ok_or_else(|| Error::invalid("empty basis"))?;
    let phase = pivot.conj() / pivot.norm();
    raw.into_iter()
        .map(|z| real_part(z * phase, "ground-state component"))
        .collect()
}

/// Both sides of the single-string channel identity and their gap.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelIdentity {
    /// Max entrywise `|lhs - rhs|` over the 4×4 two-qubit matrix.
    pub residual: f64,
    /// `⟨β|lhs|β⟩` for `β = 0..3`.
    pub measured: [f64; 4],
    /// `A_β` from the closed expression.
    pub expected: [f64; 4],
}

/// Compares `Σ_{α'} (I ⊗ σ_{α'_{L-1}}···σ_{α'_1})|0⟩⟨0|(…)†` with `Σ_β A_β |β⟩⟨β|`.
pub fn pauli_channel_identity_check(length: usize) -> Result<ChannelIdentity> {
    check_length(length, 12)?;
    let zero = singlet();
    let mut lhs: M4 = [[c(0.0, 0.0); 4]; 4];
    for s in strings(length - 1) {
        let v = kron_apply(&sigma(0), &ordered_product(&s), &zero);
        for i in 0..4 {
            for j in 0..4 {
                lhs[i][j] += v[i] * v[j].conj();
            }
        }
    }
    let p = 3f64.powi(length as i32 - 1);
    let q = if (length - 1) % 2 == 0 { 1.0 } else { -1.0 };
    let expected = [0.25 * (p + 3.0 * q), 0.25 * (p - q), 0.25 * (p - q), 0.25 * (p - q)];
    let mut rhs: M4 = [[c(0.0, 0.0); 4]; 4];
    let mut measured = [0.0; 4];
    for beta in 0..4 {
        let b = basis_state(beta);
        for i in 0..4 {
            for j in 0..4 {
                rhs[i][j] += b[i] * b[j].conj() * expected[beta];
            }
        }
        let mut e = c(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                e += b[i].conj() * lhs[i][j] * b[j];
            }
        }
        measured[beta] = real_part(e, "channel coefficient")?;
    }
    let mut residual: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            residual = residual.max((lhs[i][j] - rhs[i][j]).norm());
        }
    }
    Ok(ChannelIdentity {
        residual,
        measured,
        expected,
    })
}

/// Pauli-oracle spectrum, labelled through the four ground states.
///
/// `α = 0` carries edge spin 0 and `α = 1,2,3` edge spin 1; each label's
/// value is the Rayleigh quotient of its ground states.
pub fn pauli_spectrum_spin1(length: usize, caps: &Caps) -> Result<OracleSpectrum> {
    caps.check_dim("density matrix dimension", 3usize.pow(length.min(20) as u32))?;
    let rho = pauli_density_matrix_spin1(length)?;
    let eigenvalues = eigenspectrum(&rho)?;
    let (rank, max_null) = rank_split(&eigenvalues);
    let quotient = |alpha: usize| -> Result<f64> {
        let g = pauli_ground_states_spin1(length, alpha)?;
        let rg = rho.matvec(&g);
        let num: f64 = g.iter().zip(&rg).map(|(a, b)| a * b).sum();
        let den: f64 = g.iter().map(|a| a * a).sum();
        Ok(num / den)
    };
    let singlet = quotient(0)?;
    let triplet = (quotient(1)? + quotient(2)? + quotient(3)?) / 3.0;
    let entries = vec![
        SpectrumEntry {
            j: TwiceSpin::ZERO,
            eigenvalue: Eigenvalue::Approx(singlet),
            multiplicity: 1,
        },
        SpectrumEntry {
            j: TwiceSpin::integer(1),
            eigenvalue: Eigenvalue::Approx(triplet),
            multiplicity: 3,
        },
    ];
    Ok(OracleSpectrum {
        spectrum: BlockSpectrum {
            spin: TwiceSpin::integer(1),
            length: Some(length),
            entries,
            method: Method::PauliOracle,
        },
        eigenvalues,
        rank,
        max_null,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spin1(l: usize) -> (f64, f64) {
        let x = (-1.0f64 / 3.0).powi(l as i32);
        (0.25 * (1.0 + 3.0 * x), 0.25 * (1.0 - x))
    }

    #[test]
    fn basis_is_orthonormal() {
        for a in 0..4 {
            for b in 0..4 {
                let z = inner4(&basis_state(a), &basis_state(b));
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((z - c(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn density_matrix_trace_and_spectrum() {
        for l in 2..=5 {
            let rho = pauli_density_matrix_spin1(l).unwrap();
            assert!((rho.trace() - 1.0).abs() < 1e-14);
            let e = eigenspectrum(&rho).unwrap();
            let (l0, l1) = spin1(l);
            let mut want = vec![l0, l1, l1, l1];
            want.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in e.iter().zip(&want) {
                assert!((a - b).abs() < 1e-10, "L={l}");
            }
            assert!(e[4..].iter().all(|v| v.abs() < 1e-10));
        }
        assert!(pauli_density_matrix_spin1(1).is_err());
        assert!(pauli_density_matrix_spin1(8).is_err());
    }

    #[test]
    fn ground_state_norms_and_orthogonality() {
        for l in 2..=5 {
            let p = 3f64.powi(l as i32);
            let q = if l % 2 == 0 { 1.0 } else { -1.0 };
            let gs: Vec<Vec<f64>> = (0..4).map(|a| pauli_ground_states_spin1(l, a).unwrap()).collect();
            let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
            assert!((dot(&gs[0], &gs[0]) - (p + 3.0 * q) / 4.0).abs() < 1e-12);
            for g in &gs[1..] {
                assert!((dot(g, g) - (p - q) / 4.0).abs() < 1e-12);
            }
            for a in 0..4 {
                for b in a + 1..4 {
                    assert!(dot(&gs[a], &gs[b]).abs() < 1e-12);
                }
            }
            let rho = pauli_density_matrix_spin1(l).unwrap();
            let (l0, l1) = spin1(l);
            for (a, g) in gs.iter().enumerate() {
                let lam = if a == 0 { l0 } else { l1 };
                let rg = rho.matvec(g);
                let res: f64 = rg.iter().zip(g).map(|(x, y)| (x - lam * y).powi(2)).sum::<f64>().sqrt();
                assert!(res < 1e-10);
            }
        }
        assert!(pauli_ground_states_spin1(2, 4).is_err());
    }

    #[test]
    fn channel_identity() {
        let r = pauli_channel_identity_check(2).unwrap();
        assert_eq!(r.expected, [0.0, 1.0, 1.0, 1.0]);
        assert!(r.residual < 1e-13);
        let r = pauli_channel_identity_check(3).unwrap();
        assert_eq!(r.expected, [3.0, 2.0, 2.0, 2.0]);
        assert!(r.residual < 1e-13);
        for l in 2..=6 {
            let r = pauli_channel_identity_check(l).unwrap();
            let total: f64 = r.measured.iter().sum();
            assert!((total - 3f64.powi(l as i32 - 1)).abs() < 1e-9);
            for (m, e) in r.measured.iter().zip(&r.expected) {
                assert!((m - e).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn labelled_spectrum() {
        let o = pauli_spectrum_spin1(3, &Caps::default()).unwrap();
        let (l0, l1) = spin1(3);
        assert!((o.spectrum.entries[0].eigenvalue.to_f64() - l0).abs() < 1e-12);
        assert!((o.spectrum.entries[1].eigenvalue.to_f64() - l1).abs() < 1e-12);
        assert_eq!(o.rank, 4);
    }
}
