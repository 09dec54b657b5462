use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{Caps, RawState, StateVector};
use crate::angular::{clebsch_gordan, factorial, Sign, SignedSqrtRational, TwiceSpin};
use crate::error::{Error, Result};
use crate::spectrum::bulk_spin;

fn bond_product(sites: usize, bonds: impl Iterator<Item = usize>, s: u32, caps: &Caps) -> Result<RawState> {
    let mut state = RawState::vacuum(sites);
    for j in bonds {
        state = state.multiply(&RawState::bond_power(sites, j, j + 1, s)?, caps)?;
    }
    Ok(state)
}

fn check_terms(s: u32, bonds: usize, caps: &Caps) -> Result<()> {
    let terms = (s as usize + 1)
        .checked_pow(bonds as u32)
        .unwrap_or(usize::MAX);
    caps.check_entries("valence-bond expansion", terms)
}

/// `Π_{j=1}^{L-1} (a_j† b_{j+1}† - b_j† a_{j+1}†)^S |vac⟩` on `L` sites.
///
/// End sites carry `S` bosons (spin `S/2`), interior sites `2S`.
pub fn build_block_vbs(spin: TwiceSpin, length: usize, caps: &Caps) -> Result<RawState> {
    let s = bulk_spin(spin)?;
    if length < 2 {
        return Err(Error::invalid("a block needs at least two sites"));
    }
    check_terms(s, length - 1, caps)?;
    bond_product(length, 0..length - 1, s, caps)
}

/// The full chain `0..=N+1` with `N + 1` bonds and spin-`S/2` boundary sites.
pub fn build_full_vbs(spin: TwiceSpin, n: usize, caps: &Caps) -> Result<RawState> {
    let s = bulk_spin(spin)?;
    if n < 1 {
        return Err(Error::invalid("the chain needs at least one bulk site"));
    }
    check_terms(s, n + 1, caps)?;
    bond_product(n + 2, 0..=n, s, caps)
}

fn check_edge(spin: TwiceSpin, j: TwiceSpin, m: i32) -> Result<()> {
    if !j.is_integer() || j > spin {
        return Err(Error::invalid(format!("edge spin J = {j} must be an integer in 0..={spin}")));
    }
    j.check_projection(m)
}

/// `Ψ†_{JM} = Σ (S/2, m₁; S/2, m₂ | J, M) ψ†_{S/2,m₁} ⊗ ψ†_{S/2,m₂}` on sites `first` and `last`.
///
/// `m` is a twice-magnetization. All terms share one radicand, so the
/// coefficients stay rational.
pub fn psi_dagger(
    spin: TwiceSpin,
    sites: usize,
    first: usize,
    last: usize,
    j: TwiceSpin,
    m: i32,
) -> Result<RawState> {
    let s = bulk_spin(spin)?;
    check_edge(spin, j, m)?;
    if first >= sites || last >= sites || first == last {
        return Err(Error::invalid("Ψ† needs two distinct sites"));
    }
    let half = TwiceSpin::new(s);
    let mut parts = Vec::new();
    for m1 in half.magnetizations() {
        let m2 = m - m1;
        if !half.admits(m2) {
            continue;
        }
        let cg = clebsch_gordan(half, m1, half, m2, j, m)?;
        if cg.is_zero() {
            continue;
        }
        let occ = |tm: i32| (((s as i32 + tm) / 2) as u32, ((s as i32 - tm) / 2) as u32);
        let (p1, q1) = occ(m1);
        let (p2, q2) = occ(m2);
        let norm: BigInt = [p1, q1, p2, q2].iter().map(|&n| factorial(n as usize)).product();
        let inv = SignedSqrtRational::new(Sign::Plus, BigRational::new(BigInt::one(), norm))?;
        let mut key = vec![(0, 0); sites];
        key[first] = (p1, q1);
        key[last] = (p2, q2);
        parts.push((key, &cg * &inv));
    }
    common_radicand(sites, parts)
}

/// Collects `√`-valued coefficients that share a radicand into a [`RawState`].
/// Repeated keys are summed.
fn common_radicand(sites: usize, parts: Vec<(Vec<(u32, u32)>, SignedSqrtRational)>) -> Result<RawState> {
    let Some(reference) = parts.iter().map(|p| p.1.clone()).find(|v| !v.is_zero()) else {
        return Ok(RawState::zero(sites));
    };
    let sign = BigRational::from_integer(reference.sign().as_i32().into());
    let mut terms = Vec::with_capacity(parts.len());
    for (key, v) in parts {
        let ratio = v
            .ratio(&reference)
            .ok_or_else(|| Error::invalid("coefficients do not share a radicand"))?;
        terms.push((key, ratio * &sign));
    }
    RawState::from_terms(sites, reference.square().clone(), terms)
}

/// `Ψ†_{JM}` applied to the end sites of a block state.
pub fn apply_psi_dagger(state: &RawState, spin: TwiceSpin, j: TwiceSpin, m: i32, caps: &Caps) -> Result<RawState> {
    let s = bulk_spin(spin)?;
    let sites = state.sites();
    if sites < 2 {
        return Err(Error::invalid("Ψ† needs a block of at least two sites"));
    }
    if let Some(spins) = state.site_spins() {
        if spins[0].twice() != s || spins[sites - 1].twice() != s {
            return Err(Error::invalid(format!("end sites must carry spin {}", TwiceSpin::new(s))));
        }
    }
    let op = psi_dagger(spin, sites, 0, sites - 1, j, m)?;
    op.multiply(state, caps)
}

/// `|VBS_L(J, M)⟩` with `m` a twice-magnetization.
pub fn degenerate_vbs(spin: TwiceSpin, length: usize, j: TwiceSpin, m: i32, caps: &Caps) -> Result<RawState> {
    apply_psi_dagger(&build_block_vbs(spin, length, caps)?, spin, j, m, caps)
}

/// Exact Gram matrix of all `(S+1)²` degenerate VBS states of one block.
#[derive(Clone, Debug, PartialEq)]
pub struct GramReport {
    /// `(J, twice M)` in the order used for the matrix.
    pub labels: Vec<(TwiceSpin, i32)>,
    pub norms: Vec<BigRational>,
    /// `max |⟨i|j⟩| / √(⟨i|i⟩⟨j|j⟩)` over `i ≠ j`.
    pub max_offdiag_relative: f64,
    /// Whether every norm depends on `J` only.
    pub m_independent: bool,
}

pub fn degenerate_gram(spin: TwiceSpin, length: usize, caps: &Caps) -> Result<GramReport> {
    let block = build_block_vbs(spin, length, caps)?;
    let s = bulk_spin(spin)?;
    let mut labels = Vec::new();
    let mut states = Vec::new();
    for jv in 0..=s {
        let j = TwiceSpin::integer(jv);
        for m in j.magnetizations() {
            labels.push((j, m));
            states.push(apply_psi_dagger(&block, spin, j, m, caps)?);
        }
    }
    let norms: Vec<BigRational> = states.iter().map(RawState::norm_squared).collect();
    let mut worst: f64 = 0.0;
    for a in 0..states.len() {
        for b in a + 1..states.len() {
            let overlap = states[a].inner(&states[b]);
            if overlap.is_zero() {
                continue;
            }
            let denom = SignedSqrtRational::from_signed_square(&norms[a] * &norms[b]);
            worst = worst.max((overlap.to_f64() / denom.to_f64()).abs());
        }
    }
    let m_independent = labels.iter().zip(&norms).all(|((j, _), n)| {
        labels
            .iter()
            .zip(&norms)
            .filter(|((j2, _), _)| j2 == j)
            .all(|(_, n2)| n2 == n)
    });
    Ok(GramReport {
        labels,
        norms,
        max_offdiag_relative: worst,
        m_independent,
    })
}

/// Comparison of `₀,L+1⟨J,M|VBS⟩` with `(-1)^{S-J+M} (S!)² |VBS_L(J,-M)⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialInnerReport {
    /// `‖lhs - rhs‖ / ‖rhs‖`.
    pub residual: f64,
    /// `‖lhs + rhs‖ / ‖rhs‖`; small when only the phase disagrees.
    pub flipped_residual: f64,
    /// Whether both sides agree exactly, coefficient by coefficient.
    pub exact: bool,
}

impl PartialInnerReport {
    /// Both sides agree up to an overall sign and not otherwise.
    pub fn phase_mismatch(&self) -> bool {
        self.flipped_residual < 1e-10 && self.residual > 1e-10
    }
}

pub fn partial_inner_identity_check(
    spin: TwiceSpin,
    length: usize,
    j: TwiceSpin,
    m: i32,
    caps: &Caps,
) -> Result<PartialInnerReport> {
    let s = bulk_spin(spin)?;
    check_edge(spin, j, m)?;
    let full = build_full_vbs(spin, length, caps)?;
    let last = length + 1;
    let half = TwiceSpin::new(s);
    // ⟨S/2, m| on an unnormalised monomial (p, q) gives √(p! q!) when p - q = 2m.
    let mut parts = Vec::new();
    for (occ, c) in full.terms() {
        let (m0, ml) = (occ[0].0 as i32 - occ[0].1 as i32, occ[last].0 as i32 - occ[last].1 as i32);
        if m0 + ml != m {
            continue;
        }
        let cg = clebsch_gordan(half, m0, half, ml, j, m)?;
        if cg.is_zero() {
            continue;
        }
        let weight: BigInt = [occ[0].0, occ[0].1, occ[last].0, occ[last].1]
            .iter()
            .map(|&n| factorial(n as usize))
            .product();
        let root = SignedSqrtRational::new(Sign::Plus, BigRational::from_integer(weight))?;
        let coeff = &(&SignedSqrtRational::from_rational(c) * &cg) * &root;
        parts.push((occ[1..last].to_vec(), coeff));
    }
    let root = SignedSqrtRational::from_signed_square(full.radicand().clone());
    let parts = parts.into_iter().map(|(k, v)| (k, &v * &root)).collect();
    let lhs = common_radicand(length, parts)?;

    let phase_exp = (2 * s as i64 - j.twice() as i64 + m as i64) / 2;
    let sign = if phase_exp % 2 == 0 { 1 } else { -1 };
    let s_fact = BigRational::from_integer(factorial(s as usize));
    let rhs = degenerate_vbs(spin, length, j, -m, caps)?.scale(&(&s_fact * &s_fact * BigRational::from_integer(sign.into())));

    let spins = vec![TwiceSpin::integer(s); length];
    let lv = lhs.to_state_vector_with(spins.clone(), caps)?;
    let rv = rhs.to_state_vector_with(spins, caps)?;
    let norm = rv.norm();
    Ok(PartialInnerReport {
        residual: lv.distance(&rv)? / norm,
        flipped_residual: lv.axpy(1.0, &rv)?.norm() / norm,
        exact: lhs.same_state(&rhs),
    })
}

/// Residuals of the total-spin eigenvalue equations, relative to `‖v‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct TotalSpinReport {
    pub sz_residual: f64,
    pub s_squared_residual: f64,
    /// `‖S^+ v - √((J-M)(J+M+1)) |J,M+1⟩‖` if a raised state was supplied.
    pub raising_residual: Option<f64>,
}

/// Checks `S^z` and `S²` on `state`; with `raised` also the ladder relation.
pub fn total_spin_checks(
    state: &StateVector,
    j: TwiceSpin,
    m: i32,
    raised: Option<&StateVector>,
) -> Result<TotalSpinReport> {
    j.check_projection(m)?;
    let norm = state.norm();
    if norm == 0.0 {
        return Err(Error::invalid("zero state"));
    }
    let jv = j.value();
    let mv = f64::from(m) / 2.0;
    let sz = state.total_sz().axpy(-mv, state)?.norm() / norm;
    let s2 = state.total_s_squared().axpy(-jv * (jv + 1.0), state)?.norm() / norm;
    let raising = match raised {
        None => None,
        Some(up) => {
            let factor = ((jv - mv) * (jv + mv + 1.0)).sqrt();
            Some(state.total_s_plus().axpy(-factor, up)?.norm() / norm)
        }
    };
    Ok(TotalSpinReport {
        sz_residual: sz,
        s_squared_residual: s2,
        raising_residual: raising,
    })
}

/// Whether `S^+_tot`, `S^-_tot` and `S^z_tot` commute with the bond product on `seed`.
///
/// Compares `op(B · seed)` with `B · op(seed)` exactly.
pub fn valence_bond_commutator_check(spin: TwiceSpin, seed: &RawState, caps: &Caps) -> Result<[bool; 3]> {
    let s = bulk_spin(spin)?;
    let sites = seed.sites();
    if sites < 2 {
        return Err(Error::invalid("need at least two sites"));
    }
    let bonds = bond_product(sites, 0..sites - 1, s, caps)?;
    let built = bonds.multiply(seed, caps)?;
    let ops: [fn(&RawState) -> Result<RawState>; 3] =
        [RawState::total_s_plus, RawState::total_s_minus, RawState::total_sz];
    let mut out = [false; 3];
    for (k, op) in ops.iter().enumerate() {
        let after = op(&built)?;
        let before = bonds.multiply(&op(seed)?, caps)?;
        out[k] = after.same_state(&before);
    }
    Ok(out)
}
