use std::collections::BTreeMap;

use super::{eigenspectrum, Caps, DenseHermitian, FockBasis, StateVector};
use crate::angular::{clebsch_gordan, TwiceSpin};
use crate::error::{Error, Result};
use crate::spectrum::bulk_spin;

/// `Σ_M |J,M⟩⟨J,M|` on the product space of two sites, first site fastest.
pub fn pair_projector(s1: TwiceSpin, s2: TwiceSpin, jbond: TwiceSpin) -> Result<DenseHermitian> {
    let (t1, t2, tj) = (s1.twice(), s2.twice(), jbond.twice());
    if tj > t1 + t2 || tj < t1.abs_diff(t2) || (t1 + t2 + tj) % 2 != 0 {
        return Err(Error::invalid(format!(
            "bond spin {jbond} violates the triangle rule for {s1} ⊗ {s2}"
        )));
    }
    let (d1, d2) = (s1.dim(), s2.dim());
    let mut p = DenseHermitian::zeros(d1 * d2);
    for m in jbond.magnetizations() {
        let mut column = Vec::new();
        for (i1, m1) in s1.magnetizations().enumerate() {
            for (i2, m2) in s2.magnetizations().enumerate() {
                if m1 + m2 != m {
                    continue;
                }
                let cg = clebsch_gordan(s1, m1, s2, m2, jbond, m)?.to_f64();
                if cg != 0.0 {
                    column.push((i1 + d1 * i2, cg));
                }
            }
        }
        for &(a, x) in &column {
            for &(b, y) in &column {
                p.add_to(a, b, x * y);
            }
        }
    }
    Ok(p)
}

/// Sparse action of a two-site operator: for each input pair index, its outputs.
type PairAction = Vec<Vec<(usize, f64)>>;

/// Sum of nearest-neighbour two-site operators on a chain.
#[derive(Clone, Debug)]
pub struct ChainOperator {
    basis: FockBasis,
    bonds: Vec<(usize, PairAction)>,
}

impl ChainOperator {
    /// `bonds` lists `(i, h)` with `h` acting on sites `i` and `i + 1`.
    pub fn new(spins: Vec<TwiceSpin>, bonds: Vec<(usize, DenseHermitian)>) -> Result<Self> {
        let basis = FockBasis::new(spins)?;
        let mut actions = Vec::with_capacity(bonds.len());
        for (i, h) in bonds {
            if i + 1 >= basis.sites() {
                return Err(Error::invalid(format!("bond {i} is outside the chain")));
            }
            let d = basis.spins()[i].dim() * basis.spins()[i + 1].dim();
            if h.dim() != d {
                return Err(Error::invalid(format!("bond {i} operator has dimension {}, expected {d}", h.dim())));
            }
            let action = (0..d)
                .map(|col| {
                    (0..d)
                        .filter_map(|row| {
                            let v = h.get(row, col);
                            (v != 0.0).then_some((row, v))
                        })
                        .collect()
                })
                .collect();
            actions.push((i, action));
        }
        Ok(ChainOperator {
            basis,
            bonds: actions,
        })
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    fn for_each_output(&self, index: usize, mut f: impl FnMut(usize, f64)) {
        for (i, action) in &self.bonds {
            let d1 = self.basis.spins()[*i].dim();
            let (a, b) = (self.basis.digit(index, *i) as usize, self.basis.digit(index, *i + 1) as usize);
            let base = index - a * self.basis.stride(*i) - b * self.basis.stride(*i + 1);
            for &(row, v) in &action[a + d1 * b] {
                let (ra, rb) = (row % d1, row / d1);
                f(base + ra * self.basis.stride(*i) + rb * self.basis.stride(*i + 1), v);
            }
        }
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.basis() != &self.basis {
            return Err(Error::invalid("state and operator live in different bases"));
        }
        let mut out: BTreeMap<usize, f64> = BTreeMap::new();
        for (k, amp) in state.iter() {
            self.for_each_output(k, |r, v| *out.entry(r).or_insert(0.0) += v * amp);
        }
        StateVector::new(self.basis.clone(), out)
    }

    pub fn to_dense(&self, caps: &Caps) -> Result<DenseHermitian> {
        let n = self.basis.dim();
        caps.check_dim("Hamiltonian dimension", n)?;
        let mut m = DenseHermitian::zeros(n);
        for col in 0..n {
            self.for_each_output(col, |row, v| m.add_to(row, col, v));
        }
        Ok(m)
    }
}

fn weighted_projector(s1: TwiceSpin, s2: TwiceSpin, js: &[TwiceSpin], weights: &[f64]) -> Result<DenseHermitian> {
    let mut h = DenseHermitian::zeros(s1.dim() * s2.dim());
    for (&j, &w) in js.iter().zip(weights) {
        h = h.axpy(w, &pair_projector(s1, s2, j)?);
    }
    Ok(h)
}

/// `count` weights, defaulting to one; all must be positive.
fn couplings(given: &[f64], count: usize, name: &str) -> Result<Vec<f64>> {
    if given.is_empty() {
        return Ok(vec![1.0; count]);
    }
    if given.len() != count {
        return Err(Error::invalid(format!("{name} needs {count} couplings, got {}", given.len())));
    }
    if let Some(bad) = given.iter().find(|c| !(**c > 0.0) || !c.is_finite()) {
        return Err(Error::invalid(format!("{name} couplings must be positive, got {bad}")));
    }
    Ok(given.to_vec())
}

/// `Σ_j Σ_{J=S+1}^{2S} C_J P^J_{j,j+1}` on `L` spin-`S` sites, as an operator.
pub fn block_hamiltonian_operator(spin: TwiceSpin, length: usize, c: &[f64]) -> Result<ChainOperator> {
    let s = bulk_spin(spin)?;
    if length < 2 {
        return Err(Error::invalid("the block Hamiltonian needs L ≥ 2"));
    }
    let c = couplings(c, s as usize, "C")?;
    let js: Vec<TwiceSpin> = (s + 1..=2 * s).map(TwiceSpin::integer).collect();
    let h = weighted_projector(spin, spin, &js, &c)?;
    ChainOperator::new(vec![spin; length], (0..length - 1).map(|i| (i, h.clone())).collect())
}

pub fn block_hamiltonian(spin: TwiceSpin, length: usize, c: &[f64], caps: &Caps) -> Result<DenseHermitian> {
    bulk_spin(spin)?;
    let dim = spin.dim().checked_pow(length as u32).unwrap_or(usize::MAX);
    caps.check_dim("Hamiltonian dimension", dim)?;
    block_hamiltonian_operator(spin, length, c)?.to_dense(caps)
}

/// Bulk projectors plus boundary terms `Σ_{J=S/2+1}^{3S/2} D_J π^J` on sites `0..=N+1`.
pub fn unique_hamiltonian_operator(spin: TwiceSpin, n: usize, c: &[f64], d: &[f64]) -> Result<ChainOperator> {
    let s = bulk_spin(spin)?;
    if n < 1 {
        return Err(Error::invalid("the unique Hamiltonian needs N ≥ 1"));
    }
    let c = couplings(c, s as usize, "C")?;
    let d = couplings(d, s as usize, "D")?;
    let half = TwiceSpin::new(s);
    let bulk_js: Vec<TwiceSpin> = (s + 1..=2 * s).map(TwiceSpin::integer).collect();
    let edge_js: Vec<TwiceSpin> = (1..=s).map(|k| TwiceSpin::new(s + 2 * k)).collect();
    let bulk = weighted_projector(spin, spin, &bulk_js, &c)?;
    let left = weighted_projector(half, spin, &edge_js, &d)?;
    let right = weighted_projector(spin, half, &edge_js, &d)?;
    let mut spins = vec![spin; n + 2];
    spins[0] = half;
    spins[n + 1] = half;
    let mut bonds = vec![(0, left)];
    bonds.extend((1..n).map(|i| (i, bulk.clone())));
    bonds.push((n, right));
    ChainOperator::new(spins, bonds)
}

pub fn unique_hamiltonian(spin: TwiceSpin, n: usize, c: &[f64], d: &[f64], caps: &Caps) -> Result<DenseHermitian> {
    let op = unique_hamiltonian_operator(spin, n, c, d)?;
    op.to_dense(caps)
}

/// Number of eigenvalues with `|λ| < 1e-10 · dim`.
pub fn null_space_dimension(mat: &DenseHermitian) -> Result<usize> {
    let cutoff = 1e-10 * mat.dim() as f64;
    Ok(eigenspectrum(mat)?.iter().filter(|v| v.abs() < cutoff).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{build_full_vbs, degenerate_vbs};

    fn spins() -> Vec<(TwiceSpin, TwiceSpin)> {
        let mut out = Vec::new();
        for a in 1..=4 {
            for b in 1..=4 {
                out.push((TwiceSpin::new(a), TwiceSpin::new(b)));
            }
        }
        out
    }

    #[test]
    fn projector_contract() {
        for (s1, s2) in spins() {
            let d = s1.dim() * s2.dim();
            let mut sum = DenseHermitian::zeros(d);
            let lo = s1.twice().abs_diff(s2.twice());
            for tj in (lo..=s1.twice() + s2.twice()).step_by(2) {
                let j = TwiceSpin::new(tj);
                let p = pair_projector(s1, s2, j).unwrap();
                assert!(p.matmul(&p).max_abs_diff(&p) < 1e-12);
                assert!((p.trace() - j.dim() as f64).abs() < 1e-12);
                sum = sum.axpy(1.0, &p);
            }
            assert!(sum.max_abs_diff(&DenseHermitian::identity(d)) < 1e-12);
        }
        let one = TwiceSpin::integer(1);
        assert!(pair_projector(one, one, TwiceSpin::integer(3)).is_err());
        assert!(pair_projector(one, one, TwiceSpin::new(1)).is_err());
    }

    #[test]
    fn spin1_bilinear_biquadratic_form() {
        // ½[S₁·S₂ + ⅓(S₁·S₂)² + ⅔] built from spin matrices.
        let one = TwiceSpin::integer(1);
        let r2 = std::f64::consts::SQRT_2;
        // Basis m = -1, 0, 1; S^+ raises.
        let splus = [[0.0, 0.0, 0.0], [r2, 0.0, 0.0], [0.0, r2, 0.0]];
        let sz = [-1.0, 0.0, 1.0];
        let idx = |a: usize, b: usize| a + 3 * b;
        let mut dot = DenseHermitian::zeros(9);
        for a in 0..3 {
            for b in 0..3 {
                dot.add_to(idx(a, b), idx(a, b), sz[a] * sz[b]);
                for a2 in 0..3 {
                    for b2 in 0..3 {
                        // ½(S⁺S⁻ + S⁻S⁺)
                        let v = 0.5 * (splus[a2][a] * splus[b][b2] + splus[a][a2] * splus[b2][b]);
                        if v != 0.0 {
                            dot.add_to(idx(a2, b2), idx(a, b), v);
                        }
                    }
                }
            }
        }
        let form = dot
            .axpy(1.0 / 3.0, &dot.matmul(&dot))
            .axpy(2.0 / 3.0, &DenseHermitian::identity(9))
            .scaled(0.5);
        let p2 = pair_projector(one, one, TwiceSpin::integer(2)).unwrap();
        assert!(form.max_abs_diff(&p2) < 1e-12);
    }

    #[test]
    fn block_null_space_and_ground_states() {
        let caps = Caps::default();
        for (s, lmax) in [(1u32, 5usize), (2, 3)] {
            let spin = TwiceSpin::integer(s);
            for l in 2..=lmax {
                let h = block_hamiltonian(spin, l, &[], &caps).unwrap();
                assert_eq!(null_space_dimension(&h).unwrap(), ((s + 1) * (s + 1)) as usize, "S={s} L={l}");
                assert!(eigenspectrum(&h).unwrap().iter().all(|&v| v >= -1e-10));
                let op = block_hamiltonian_operator(spin, l, &[]).unwrap();
                for jv in 0..=s {
                    let j = TwiceSpin::integer(jv);
                    for m in j.magnetizations() {
                        let v = degenerate_vbs(spin, l, j, m, &caps).unwrap().to_state_vector(&caps).unwrap();
                        assert!(op.apply(&v).unwrap().norm() <= 1e-9 * v.norm());
                    }
                }
            }
        }
    }

    #[test]
    fn dense_and_sparse_actions_agree() {
        let spin = TwiceSpin::integer(1);
        let op = unique_hamiltonian_operator(spin, 2, &[], &[]).unwrap();
        let dense = op.to_dense(&Caps::default()).unwrap();
        for col in [0usize, 7, 20, 35] {
            let mut e = vec![0.0; dense.dim()];
            e[col] = 1.0;
            let v = StateVector::from_dense(op.basis().clone(), &e).unwrap();
            let got = op.apply(&v).unwrap().to_dense();
            assert_eq!(got, dense.matvec(&e));
        }
    }

    #[test]
    fn unique_ground_state() {
        let caps = Caps::default();
        let spin = TwiceSpin::integer(1);
        for n in 2..=4 {
            let h = unique_hamiltonian(spin, n, &[], &[], &caps).unwrap();
            assert_eq!(null_space_dimension(&h).unwrap(), 1, "N={n}");
            let doubled = unique_hamiltonian(spin, n, &[2.0], &[2.0], &caps).unwrap();
            assert_eq!(null_space_dimension(&doubled).unwrap(), 1);
            let vbs = build_full_vbs(spin, n, &caps).unwrap().to_state_vector(&caps).unwrap();
            let op = unique_hamiltonian_operator(spin, n, &[2.0], &[2.0]).unwrap();
            assert!(op.apply(&vbs).unwrap().norm() <= 1e-9 * vbs.norm());
        }
        let h = unique_hamiltonian(TwiceSpin::integer(2), 2, &[], &[], &caps).unwrap();
        assert_eq!(null_space_dimension(&h).unwrap(), 1);
    }

    #[test]
    fn invalid_couplings_and_caps() {
        let spin = TwiceSpin::integer(2);
        assert!(block_hamiltonian_operator(spin, 3, &[1.0]).is_err());
        assert!(block_hamiltonian_operator(spin, 3, &[1.0, -1.0]).is_err());
        assert!(block_hamiltonian_operator(spin, 1, &[]).is_err());
        let tight = Caps {
            max_dim: 100,
            max_entries: 100,
        };
        assert!(matches!(block_hamiltonian(spin, 3, &[], &tight), Err(Error::ResourceCap { .. })));
    }
}
