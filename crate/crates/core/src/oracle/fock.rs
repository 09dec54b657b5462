use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Caps;
use crate::angular::{factorial, rational_to_f64, Sign, SignedSqrtRational, TwiceSpin};
use crate::error::{Error, Result};

/// Mixed-radix product basis over a list of site spins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockBasis {
    spins: Vec<TwiceSpin>,
    strides: Vec<usize>,
    dim: usize,
}

impl FockBasis {
    pub fn new(spins: Vec<TwiceSpin>) -> Result<Self> {
        let mut strides = Vec::with_capacity(spins.len());
        let mut dim: usize = 1;
        for s in &spins {
            strides.push(dim);
            dim = dim.checked_mul(s.dim()).ok_or(Error::ResourceCap {
                what: "basis dimension",
                requested: usize::MAX,
                cap: usize::MAX,
            })?;
        }
        Ok(FockBasis { spins, strides, dim })
    }

    pub fn spins(&self) -> &[TwiceSpin] {
        &self.spins
    }

    pub fn sites(&self) -> usize {
        self.spins.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn stride(&self, site: usize) -> usize {
        self.strides[site]
    }

    /// Local index (`n_a`) at `site` of basis state `index`.
    pub fn digit(&self, index: usize, site: usize) -> u32 {
        ((index / self.strides[site]) % self.spins[site].dim()) as u32
    }

    pub fn digits(&self, index: usize) -> Vec<u32> {
        (0..self.sites()).map(|j| self.digit(index, j)).collect()
    }

    pub fn index(&self, digits: &[u32]) -> usize {
        digits
            .iter()
            .zip(&self.strides)
            .map(|(&d, &st)| d as usize * st)
            .sum()
    }

    /// Twice the total magnetization of basis state `index`.
    pub fn total_twice_m(&self, index: usize) -> i32 {
        (0..self.sites())
            .map(|j| 2 * self.digit(index, j) as i32 - self.spins[j].twice() as i32)
            .sum()
    }
}

/// One product state, given by its per-site twice-magnetizations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState {
    pub spins: Vec<TwiceSpin>,
    pub twice_m: Vec<i32>,
}

impl FockState {
    pub fn new(spins: Vec<TwiceSpin>, twice_m: Vec<i32>) -> Result<Self> {
        if spins.len() != twice_m.len() {
            return Err(Error::invalid("one magnetization per site is required"));
        }
        for (s, &m) in spins.iter().zip(&twice_m) {
            s.check_projection(m)?;
        }
        Ok(FockState { spins, twice_m })
    }

    pub fn from_index(basis: &FockBasis, index: usize) -> Self {
        let twice_m = (0..basis.sites())
            .map(|j| 2 * basis.digit(index, j) as i32 - basis.spins[j].twice() as i32)
            .collect();
        FockState {
            spins: basis.spins.clone(),
            twice_m,
        }
    }

    /// `(n_a, n_b)` at every site.
    pub fn occupations(&self) -> Vec<(u32, u32)> {
        self.spins
            .iter()
            .zip(&self.twice_m)
            .map(|(s, &m)| {
                let t = s.twice() as i32;
                (((t + m) / 2) as u32, ((t - m) / 2) as u32)
            })
            .collect()
    }

    pub fn index(&self, basis: &FockBasis) -> usize {
        let digits: Vec<u32> = self.occupations().iter().map(|o| o.0).collect();
        basis.index(&digits)
    }
}

type Occupation = Vec<(u32, u32)>;

/// Exact state `√radicand · Σ c · Π_j (a_j†)^p (b_j†)^q |vac⟩`.
///
/// The bosons are not normalised: a monomial with occupations `(p, q)` has
/// norm-square `Π p! q!`. Site occupations are unconstrained, so the same
/// type describes operators applied to the vacuum.
#[derive(Clone, Debug, PartialEq)]
pub struct RawState {
    sites: usize,
    radicand: BigRational,
    terms: BTreeMap<Occupation, BigRational>,
}

fn occupation_weight(occ: &[(u32, u32)]) -> BigInt {
    occ.iter()
        .map(|&(p, q)| factorial(p as usize) * factorial(q as usize))
        .product()
}

impl RawState {
    pub fn vacuum(sites: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(0, 0); sites], BigRational::one());
        RawState {
            sites,
            radicand: BigRational::one(),
            terms,
        }
    }

    pub fn zero(sites: usize) -> Self {
        RawState {
            sites,
            radicand: BigRational::one(),
            terms: BTreeMap::new(),
        }
    }

    /// Builds a state from explicit terms sharing the common factor `√radicand`.
    pub fn from_terms(
        sites: usize,
        radicand: BigRational,
        terms: impl IntoIterator<Item = (Vec<(u32, u32)>, BigRational)>,
    ) -> Result<Self> {
        if radicand.is_negative() {
            return Err(Error::invalid("radicand must be non-negative"));
        }
        let mut out = RawState {
            sites,
            radicand,
            terms: BTreeMap::new(),
        };
        for (occ, c) in terms {
            if occ.len() != sites {
                return Err(Error::invalid("occupation list has the wrong length"));
            }
            out.accumulate(occ, c);
        }
        Ok(out)
    }

    /// `(a_i† b_j† - b_i† a_j†)^s` acting on the vacuum.
    pub fn bond_power(sites: usize, i: usize, j: usize, s: u32) -> Result<Self> {
        if i >= sites || j >= sites || i == j {
            return Err(Error::invalid(format!("bad bond ({i}, {j}) on {sites} sites")));
        }
        let mut binom = BigInt::one();
        let mut terms = BTreeMap::new();
        for k in 0..=s {
            let mut occ = vec![(0, 0); sites];
            occ[i] = (s - k, k);
            occ[j] = (k, s - k);
            let c = if k % 2 == 0 { binom.clone() } else { -binom.clone() };
            terms.insert(occ, BigRational::from_integer(c));
            binom = binom * BigInt::from(s - k) / BigInt::from(k + 1);
        }
        Ok(RawState {
            sites,
            radicand: BigRational::one(),
            terms,
        })
    }

    fn accumulate(&mut self, occ: Occupation, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(occ) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[(u32, u32)], &BigRational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Operator product: the boson polynomials multiply, radicands multiply.
    pub fn multiply(&self, other: &RawState, caps: &Caps) -> Result<RawState> {
        if self.sites != other.sites {
            return Err(Error::invalid("site counts differ"));
        }
        let mut out = RawState {
            sites: self.sites,
            radicand: &self.radicand * &other.radicand,
            terms: BTreeMap::new(),
        };
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let occ = k1
                    .iter()
                    .zip(k2)
                    .map(|(&(p1, q1), &(p2, q2))| (p1 + p2, q1 + q2))
                    .collect();
                out.accumulate(occ, c1 * c2);
            }
            caps.check_entries("state terms", out.terms.len())?;
        }
        Ok(out)
    }

    /// Sum of two states with the same radicand.
    pub fn add(&self, other: &RawState) -> Result<RawState> {
        if self.sites != other.sites {
            return Err(Error::invalid("site counts differ"));
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        if self.is_empty() {
            return Ok(other.clone());
        }
        let factor = SignedSqrtRational::new(Sign::Plus, &other.radicand / &self.radicand)?
            .to_rational()
            .ok_or_else(|| Error::invalid("radicands differ by an irrational factor"))?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), c * &factor);
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &BigRational) -> RawState {
        let mut out = RawState::zero(self.sites);
        out.radicand = self.radicand.clone();
        for (k, c) in &self.terms {
            out.accumulate(k.clone(), c * factor);
        }
        out
    }

    /// `a_j† b_j` (`up = true`) or `b_j† a_j` on one site.
    pub fn apply_ladder(&self, site: usize, up: bool) -> RawState {
        let mut out = RawState::zero(self.sites);
        out.radicand = self.radicand.clone();
        for (k, c) in &self.terms {
            let (p, q) = k[site];
            let (n, np, nq) = if up {
                (q, p + 1, q.wrapping_sub(1))
            } else {
                (p, p.wrapping_sub(1), q + 1)
            };
            if n == 0 {
                continue;
            }
            let mut occ = k.clone();
            occ[site] = (np, nq);
            out.accumulate(occ, c * BigRational::from_integer(n.into()));
        }
        out
    }

    /// `(a_j† a_j - b_j† b_j) / 2` on one site.
    pub fn apply_sz(&self, site: usize) -> RawState {
        let mut out = RawState::zero(self.sites);
        out.radicand = self.radicand.clone();
        for (k, c) in &self.terms {
            let (p, q) = k[site];
            let m = BigRational::new(BigInt::from(p as i64 - q as i64), BigInt::from(2));
            out.accumulate(k.clone(), c * m);
        }
        out
    }

    fn total(&self, f: impl Fn(&RawState, usize) -> RawState) -> Result<RawState> {
        let mut out = RawState::zero(self.sites);
        out.radicand = self.radicand.clone();
        for j in 0..self.sites {
            out = out.add(&f(self, j))?;
        }
        out.radicand = self.radicand.clone();
        Ok(out)
    }

    pub fn total_s_plus(&self) -> Result<RawState> {
        self.total(|s, j| s.apply_ladder(j, true))
    }

    pub fn total_s_minus(&self) -> Result<RawState> {
        self.total(|s, j| s.apply_ladder(j, false))
    }

    pub fn total_sz(&self) -> Result<RawState> {
        self.total(|s, j| s.apply_sz(j))
    }

    /// Exact `⟨self|other⟩` in the bosonic Fock space.
    pub fn inner(&self, other: &RawState) -> SignedSqrtRational {
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut sum = BigRational::zero();
        for (k, c) in &small.terms {
            if let Some(d) = large.terms.get(k) {
                sum += c * d * BigRational::from_integer(occupation_weight(k));
            }
        }
        let root = SignedSqrtRational::from_signed_square(&self.radicand * &other.radicand);
        &SignedSqrtRational::from_rational(&sum) * &root
    }

    /// Exact norm-square in the bosonic Fock space.
    pub fn norm_squared(&self) -> BigRational {
        let sum: BigRational = self
            .terms
            .iter()
            .map(|(k, c)| c * c * BigRational::from_integer(occupation_weight(k)))
            .sum();
        sum * &self.radicand
    }

    /// Whether both describe the same vector, comparing term by term exactly.
    pub fn same_state(&self, other: &RawState) -> bool {
        if self.sites != other.sites || self.terms.len() != other.terms.len() {
            return false;
        }
        self.terms.iter().all(|(k, c)| match other.terms.get(k) {
            Some(d) => c.signum() == d.signum() && c * c * &self.radicand == d * d * &other.radicand,
            None => false,
        })
    }

    /// Site spins implied by the occupations, if every site has a fixed boson count.
    pub fn site_spins(&self) -> Option<Vec<TwiceSpin>> {
        let mut totals: Option<Vec<u32>> = None;
        for k in self.terms.keys() {
            let t: Vec<u32> = k.iter().map(|&(p, q)| p + q).collect();
            match &totals {
                None => totals = Some(t),
                Some(prev) if *prev != t => return None,
                _ => {}
            }
        }
        totals.map(|t| t.into_iter().map(TwiceSpin::new).collect())
    }

    /// Converts to orthonormal `|s, m⟩` amplitudes, multiplying by `√(p! q!)` per site.
    pub fn to_state_vector(&self, caps: &Caps) -> Result<StateVector> {
        let spins = self
            .site_spins()
            .ok_or_else(|| Error::invalid("site boson numbers are not fixed"))?;
        self.to_state_vector_with(spins, caps)
    }

    /// As [`RawState::to_state_vector`] with explicit spins (needed for the zero state).
    pub fn to_state_vector_with(&self, spins: Vec<TwiceSpin>, caps: &Caps) -> Result<StateVector> {
        if spins.len() != self.sites {
            return Err(Error::invalid("one spin per site is required"));
        }
        caps.check_entries("state vector entries", self.terms.len())?;
        let basis = FockBasis::new(spins)?;
        let mut amplitudes = BTreeMap::new();
        for (k, c) in &self.terms {
            let mut digits = Vec::with_capacity(k.len());
            for (j, &(p, q)) in k.iter().enumerate() {
                if p + q != basis.spins[j].twice() {
                    return Err(Error::invalid(format!("site {j} does not carry spin {}", basis.spins[j])));
                }
                digits.push(p);
            }
            let square = c * c * &self.radicand * BigRational::from_integer(occupation_weight(k));
            let value = f64::from(if c.is_negative() { -1 } else { 1 }) * rational_to_f64(&square).sqrt();
            amplitudes.insert(basis.index(&digits), value);
        }
        Ok(StateVector { basis, amplitudes })
    }
}

/// Sparse floating-point amplitudes in the orthonormal product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: FockBasis,
    amplitudes: BTreeMap<usize, f64>,
}

impl StateVector {
    pub fn new(basis: FockBasis, amplitudes: BTreeMap<usize, f64>) -> Result<Self> {
        if let Some((&k, _)) = amplitudes.iter().next_back() {
            if k >= basis.dim() {
                return Err(Error::invalid("amplitude index outside the basis"));
            }
        }
        Ok(StateVector { basis, amplitudes })
    }

    pub fn from_dense(basis: FockBasis, values: &[f64]) -> Result<Self> {
        if values.len() != basis.dim() {
            return Err(Error::invalid("dense vector length does not match the basis"));
        }
        let amplitudes = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i, *v))
            .collect();
        Ok(StateVector { basis, amplitudes })
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn spins(&self) -> &[TwiceSpin] {
        self.basis.spins()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.amplitudes.get(&index).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.amplitudes.iter().map(|(&k, &v)| (k, v))
    }

    pub fn states(&self) -> impl Iterator<Item = (FockState, f64)> + '_ {
        self.iter().map(|(k, v)| (FockState::from_index(&self.basis, k), v))
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.basis.dim()];
        for (k, v) in self.iter() {
            out[k] = v;
        }
        out
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.values().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn normalized(&self) -> StateVector {
        let n = self.norm();
        self.scaled(if n > 0.0 { 1.0 / n } else { 1.0 })
    }

    pub fn scaled(&self, factor: f64) -> StateVector {
        StateVector {
            basis: self.basis.clone(),
            amplitudes: self.amplitudes.iter().map(|(&k, &v)| (k, v * factor)).collect(),
        }
    }

    fn check_same_basis(&self, other: &StateVector) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::invalid("states live in different bases"));
        }
        Ok(())
    }

    pub fn inner(&self, other: &StateVector) -> Result<f64> {
        self.check_same_basis(other)?;
        Ok(self
            .amplitudes
            .iter()
            .filter_map(|(k, v)| other.amplitudes.get(k).map(|w| v * w))
            .sum())
    }

    /// `self + factor · other`.
    pub fn axpy(&self, factor: f64, other: &StateVector) -> Result<StateVector> {
        self.check_same_basis(other)?;
        let mut amplitudes = self.amplitudes.clone();
        for (&k, &v) in &other.amplitudes {
            *amplitudes.entry(k).or_insert(0.0) += factor * v;
        }
        Ok(StateVector {
            basis: self.basis.clone(),
            amplitudes,
        })
    }

    /// `‖self - other‖`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        Ok(self.axpy(-1.0, other)?.norm())
    }

    /// `S^+_j` (`up = true`) or `S^-_j` with `√((s ∓ m)(s ± m + 1))` matrix elements.
    pub fn apply_ladder(&self, site: usize, up: bool) -> StateVector {
        let s = self.basis.spins[site].twice() as i64;
        let stride = self.basis.stride(site);
        let mut amplitudes = BTreeMap::new();
        for (&k, &v) in &self.amplitudes {
            let n = self.basis.digit(k, site) as i64;
            let tm = 2 * n - s;
            let (target, factor) = if up {
                if n == s {
                    continue;
                }
                (k + stride, ((s - tm) * (s + tm + 2)) as f64 / 4.0)
            } else {
                if n == 0 {
                    continue;
                }
                (k - stride, ((s + tm) * (s - tm + 2)) as f64 / 4.0)
            };
            *amplitudes.entry(target).or_insert(0.0) += v * factor.sqrt();
        }
        StateVector {
            basis: self.basis.clone(),
            amplitudes,
        }
    }

    fn sum_over_sites(&self, f: impl Fn(&StateVector, usize) -> StateVector) -> StateVector {
        let mut out = StateVector {
            basis: self.basis.clone(),
            amplitudes: BTreeMap::new(),
        };
        for j in 0..self.basis.sites() {
            for (k, v) in f(self, j).iter() {
                *out.amplitudes.entry(k).or_insert(0.0) += v;
            }
        }
        out
    }

    pub fn total_s_plus(&self) -> StateVector {
        self.sum_over_sites(|s, j| s.apply_ladder(j, true))
    }

    pub fn total_s_minus(&self) -> StateVector {
        self.sum_over_sites(|s, j| s.apply_ladder(j, false))
    }

    pub fn total_sz(&self) -> StateVector {
        StateVector {
            basis: self.basis.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(&k, &v)| (k, v * f64::from(self.basis.total_twice_m(k)) / 2.0))
                .collect(),
        }
    }

    /// `S_tot² = S^- S^+ + S^z (S^z + 1)`.
    pub fn total_s_squared(&self) -> StateVector {
        let a = self.total_s_plus().total_s_minus();
        let z = self.total_sz();
        let b = z.total_sz();
        a.axpy(1.0, &b)
            .and_then(|x| x.axpy(1.0, &z))
            .expect("same basis by construction")
    }
}
