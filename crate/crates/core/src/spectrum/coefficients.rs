use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::bulk_spin;
use crate::angular::{factorial, rational_to_f64, TwiceSpin};
use crate::error::{Error, Result};

pub(crate) fn lambda_raw(l: u32, s: u32) -> BigRational {
    debug_assert!(l <= s);
    let (l, s) = (l as usize, s as usize);
    let r = BigRational::new(
        factorial(s) * factorial(s + 1),
        factorial(s - l) * factorial(s + l + 1),
    );
    if l % 2 == 0 {
        r
    } else {
        -r
    }
}

/// Bond-kernel Legendre coefficient
/// `λ(l, S) = (-1)^l S!(S+1)! / ((S-l)!(S+l+1)!)`.
pub fn lambda_coeff(l: u32, spin: TwiceSpin) -> Result<BigRational> {
    let s = bulk_spin(spin)?;
    if l > s {
        return Err(Error::invalid(format!("order l = {l} exceeds S = {s}")));
    }
    Ok(lambda_raw(l, s))
}

/// `x(J) = J(J+1)/2 - (S/2)(S/2 + 1)`, the argument of `I_l` for edge spin `J`.
pub fn x_of_j(s: u32, j: u32) -> BigRational {
    let (s, j) = (BigInt::from(s), BigInt::from(j));
    BigRational::new(&j * (&j + 1u32), BigInt::from(2))
        - BigRational::new(&s * (&s + 2u32), BigInt::from(4))
}

/// The polynomial `I_l(x)` for bulk spin `S`, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IPolynomial {
    pub spin: TwiceSpin,
    pub l: u32,
    pub coefficients: Vec<BigRational>,
}

impl IPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

/// All of `I_0, ..., I_S` for bulk spin `s`, built by
/// `I_{l+1} = (2l+1)/(S+l+2)² (4x/(l+1) + l) I_l - l/(l+1) ((S-l+1)/(S+l+2))² I_{l-1}`
/// from `I_0 = 1`, `I_1 = x/(S/2+1)²`.
pub(crate) fn i_polynomials(s: u32) -> Vec<Vec<BigRational>> {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let si = i64::from(s);
    let mut polys: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
    if s == 0 {
        return polys;
    }
    polys.push(vec![BigRational::zero(), q(4, (si + 2) * (si + 2))]);
    for l in 1..si {
        let a = q(2 * l + 1, (si + l + 2) * (si + l + 2));
        let shift = a.clone() * BigRational::from_integer(l.into());
        let slope = a * q(4, l + 1);
        let back = q(l, l + 1) * q((si - l + 1) * (si - l + 1), (si + l + 2) * (si + l + 2));
        let cur = &polys[l as usize];
        let prev = &polys[l as usize - 1];
        let mut next = vec![BigRational::zero(); cur.len() + 1];
        for (k, c) in cur.iter().enumerate() {
            next[k] += &shift * c;
            next[k + 1] += &slope * c;
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] -= &back * c;
        }
        polys.push(next);
    }
    polys
}

pub fn i_polynomial(l: u32, spin: TwiceSpin) -> Result<IPolynomial> {
    let s = bulk_spin(spin)?;
    if l > s {
        return Err(Error::invalid(format!("order l = {l} exceeds S = {s}")));
    }
    let coefficients = i_polynomials(s).swap_remove(l as usize);
    Ok(IPolynomial {
        spin,
        l,
        coefficients,
    })
}

/// Legendre polynomial `P_l(t)` by the three-term recurrence.
pub fn legendre_p(l: u32, t: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, t);
    if l == 0 {
        return p0;
    }
    for n in 1..l {
        let n = f64::from(n);
        let p2 = ((2.0 * n + 1.0) * t * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `[(1-t)/2]^S - (1/(S+1)) Σ_l (2l+1) λ(l,S) P_l(t)` in floating point.
pub fn legendre_expansion_residual(spin: TwiceSpin, t: f64) -> Result<f64> {
    let s = bulk_spin(spin)?;
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::invalid(format!("t = {t} outside [-1, 1]")));
    }
    let lhs = (0.5 * (1.0 - t)).powi(s as i32);
    let rhs: f64 = (0..=s)
        .map(|l| f64::from(2 * l + 1) * rational_to_f64(&lambda_raw(l, s)) * legendre_p(l, t))
        .sum::<f64>()
        / f64::from(s + 1);
    Ok(lhs - rhs)
}
