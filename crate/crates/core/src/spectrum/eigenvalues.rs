use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coefficients::{i_polynomials, lambda_raw, x_of_j};
use super::{bulk_spin, edge_spin};
use crate::angular::{factorial, three_j_zero, TwiceSpin};
use crate::error::{Error, Result};

fn check_length(length: usize) -> Result<()> {
    if length == 0 {
        return Err(Error::invalid("block length must be at least 1"));
    }
    if length > i32::MAX as usize {
        return Err(Error::invalid("block length too large"));
    }
    Ok(())
}

fn fact(n: u32) -> BigInt {
    factorial(n as usize)
}

/// Λ(J) from the `I_l` recurrence:
/// `Λ(J) = (S+1)⁻² Σ_l (2l+1) λ(l,S)^(L-1) I_l(x(J))`.
pub fn eigenvalue_recurrence(spin: TwiceSpin, length: usize, j: TwiceSpin) -> Result<BigRational> {
    let s = bulk_spin(spin)?;
    let jv = edge_spin(j, s)?;
    check_length(length)?;
    let x = x_of_j(s, jv);
    let polys = i_polynomials(s);
    let mut sum = BigRational::zero();
    for (l, coeffs) in polys.iter().enumerate() {
        let il = coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c);
        let weight = lambda_raw(l as u32, s).pow(length as i32 - 1);
        sum += BigRational::from_integer((2 * l + 1).into()) * weight * il;
    }
    Ok(sum / BigRational::from_integer(BigInt::from(s + 1).pow(2)))
}

/// Inner double sum of the closed form for fixed `l1`:
/// `Σ_{lL ≤ S-J} Σ_{l ≤ J} (2lL+1)(2l+1) λ(lL, S-J) λ(l, J)² (l1 lL l; 0 0 0)²`.
fn closed_inner(l1: u32, s: u32, j: u32) -> BigRational {
    let mut acc = BigRational::zero();
    for l_end in 0..=(s - j) {
        let outer = BigRational::from_integer((2 * l_end + 1).into()) * lambda_raw(l_end, s - j);
        for l in 0..=j {
            let tj = three_j_zero(l1, l_end, l);
            if tj.is_zero() {
                continue;
            }
            let lam = lambda_raw(l, j);
            acc += &outer
                * BigRational::from_integer((2 * l + 1).into())
                * &lam
                * &lam
                * tj.square();
        }
    }
    acc
}

/// The triple sum shared by the closed eigenvalue and the degenerate norm.
fn closed_triple_sum(s: u32, length: usize, j: u32) -> BigRational {
    let mut sum = BigRational::zero();
    for l1 in 0..=s {
        let inner = closed_inner(l1, s, j);
        if inner.is_zero() {
            continue;
        }
        let weight = lambda_raw(l1, s).pow(length as i32 - 1);
        sum += BigRational::from_integer((2 * l1 + 1).into()) * weight * inner;
    }
    sum
}

/// Λ(J) from the closed triple sum over 3j squares:
/// `(2J+1)! S!² / ((S+J+1)!(S-J+1)!(J+1)!²) · Σ (2l1+1)(2lL+1)(2l+1)
///  λ(l1,S)^(L-1) λ(lL,S-J) λ(l,J)² (l1 lL l; 0 0 0)²`.
pub fn eigenvalue_closed(spin: TwiceSpin, length: usize, j: TwiceSpin) -> Result<BigRational> {
    let s = bulk_spin(spin)?;
    let jv = edge_spin(j, s)?;
    check_length(length)?;
    let prefactor = BigRational::new(
        fact(2 * jv + 1) * fact(s) * fact(s),
        fact(s + jv + 1) * fact(s - jv + 1) * fact(jv + 1) * fact(jv + 1),
    );
    Ok(prefactor * closed_triple_sum(s, length, jv))
}

/// Norm-square of the full-chain VBS state, `[(2S+1)!/(S+1)]^N S!(S+1)!`.
pub fn vbs_norm(spin: TwiceSpin, n: usize) -> Result<BigRational> {
    let s = bulk_spin(spin)?;
    let per_bond = BigRational::new(fact(2 * s + 1), BigInt::from(s + 1));
    let n = i32::try_from(n).map_err(|_| Error::invalid("N too large"))?;
    Ok(per_bond.pow(n) * BigRational::from_integer(fact(s) * fact(s + 1)))
}

/// `⟨VBS_L(J,M)|VBS_L(J,M)⟩`, independent of `M`.
pub fn degenerate_norm(spin: TwiceSpin, length: usize, j: TwiceSpin) -> Result<BigRational> {
    let s = bulk_spin(spin)?;
    let jv = edge_spin(j, s)?;
    check_length(length)?;
    if length < 2 {
        return Err(Error::invalid("degenerate VBS states need a block of length ≥ 2"));
    }
    let num = fact(2 * jv + 1) * fact(2 * s + 1).pow(length as u32);
    let den = BigInt::from(s + 1).pow(length as u32 - 1)
        * fact(s + jv + 1)
        * fact(s - jv + 1)
        * fact(jv + 1)
        * fact(jv + 1);
    Ok(BigRational::new(num, den) * closed_triple_sum(s, length, jv))
}

/// Spin-1 eigenvalues: `Λ₀ = (1 + 3(-1/3)^L)/4`, `Λ₁ = (1 - (-1/3)^L)/4`.
pub fn spin1_closed(length: usize, j: TwiceSpin) -> Result<BigRational> {
    check_length(length)?;
    let jv = edge_spin(j, 1)?;
    let r = BigRational::new((-1).into(), 3.into()).pow(length as i32);
    let quarter = BigRational::new(1.into(), 4.into());
    Ok(match jv {
        0 => quarter * (BigRational::one() + BigRational::from_integer(3.into()) * r),
        _ => quarter * (BigRational::one() - r),
    })
}

/// `K(S,J) = (S+1)⁻² Σ_{l ≥ 1} (2l+1) |I_l(x(J))|`.
pub fn limit_constant(spin: TwiceSpin, j: TwiceSpin) -> Result<BigRational> {
    let s = bulk_spin(spin)?;
    let jv = edge_spin(j, s)?;
    let x = x_of_j(s, jv);
    let sum = i_polynomials(s)
        .iter()
        .enumerate()
        .skip(1)
        .map(|(l, coeffs)| {
            let il = coeffs
                .iter()
                .rev()
                .fold(BigRational::zero(), |acc, c| acc * &x + c);
            BigRational::from_integer((2 * l + 1).into()) * il.abs()
        })
        .fold(BigRational::zero(), |a, b| a + b);
    Ok(sum / BigRational::from_integer(BigInt::from(s + 1).pow(2)))
}

/// Upper bound `K(S,J) |λ(1,S)|^(L-1)` on `|Λ(J) - 1/(S+1)²|`.
pub fn limit_bound(spin: TwiceSpin, length: usize, j: TwiceSpin) -> Result<BigRational> {
    check_length(length)?;
    let s = bulk_spin(spin)?;
    Ok(limit_constant(spin, j)? * lambda_raw(1, s).abs().pow(length as i32 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sp(s: u32) -> TwiceSpin {
        TwiceSpin::integer(s)
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(eigenvalue_recurrence(sp(1), 2, sp(0)).unwrap(), q(1, 3));
        assert_eq!(eigenvalue_recurrence(sp(1), 3, sp(1)).unwrap(), q(7, 27));
        let got: Vec<_> = (0..=2)
            .map(|j| eigenvalue_recurrence(sp(2), 2, sp(j)).unwrap())
            .collect();
        assert_eq!(got, vec![q(1, 5), q(3, 20), q(7, 100)]);
    }

    #[test]
    fn closed_examples() {
        assert_eq!(eigenvalue_closed(sp(1), 2, sp(1)).unwrap(), q(2, 9));
        assert_eq!(eigenvalue_closed(sp(2), 2, sp(2)).unwrap(), q(7, 100));
        for l in 1..=10 {
            let tr: BigRational = (0..=1)
                .map(|j| q(2 * j + 1, 1) * eigenvalue_closed(sp(1), l, sp(j as u32)).unwrap())
                .sum();
            assert_eq!(tr, q(1, 1));
        }
    }

    #[test]
    fn edge_spin_out_of_range() {
        assert!(eigenvalue_closed(sp(1), 2, sp(2)).is_err());
        assert!(eigenvalue_recurrence(sp(2), 2, TwiceSpin::new(1)).is_err());
        assert!(eigenvalue_recurrence(sp(2), 0, sp(0)).is_err());
        assert!(eigenvalue_closed(TwiceSpin::new(1), 2, sp(0)).is_err());
    }

    #[test]
    fn single_site_block() {
        // One bulk spin-1 site is maximally mixed: {0, 1/3 x 3}.
        assert_eq!(eigenvalue_closed(sp(1), 1, sp(0)).unwrap(), q(0, 1));
        assert_eq!(eigenvalue_recurrence(sp(1), 1, sp(1)).unwrap(), q(1, 3));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(vbs_norm(sp(1), 2).unwrap(), q(18, 1));
        assert_eq!(vbs_norm(sp(1), 1).unwrap(), q(6, 1));
        assert_eq!(vbs_norm(sp(2), 1).unwrap(), q(480, 1));
        assert_eq!(degenerate_norm(sp(1), 2, sp(0)).unwrap(), q(6, 1));
        assert_eq!(degenerate_norm(sp(1), 3, sp(1)).unwrap(), q(14, 1));
        assert!(degenerate_norm(sp(1), 1, sp(0)).is_err());
    }

    #[test]
    fn spin_one_degenerate_norms() {
        for l in 2..=10usize {
            let three = BigInt::from(3).pow(l as u32);
            let sign = if l % 2 == 0 { 1 } else { -1 };
            let n0 = BigRational::new(&three + 3 * sign, 2.into());
            let n1 = BigRational::new(&three - sign, 2.into());
            assert_eq!(degenerate_norm(sp(1), l, sp(0)).unwrap(), n0);
            assert_eq!(degenerate_norm(sp(1), l, sp(1)).unwrap(), n1);
        }
    }

    #[test]
    fn norm_and_eigenvalue_are_linked() {
        for s in 1..=4u32 {
            for l in 2..=6usize {
                for j in 0..=s {
                    let norm = degenerate_norm(sp(s), l, sp(j)).unwrap();
                    let pref = BigRational::new(BigInt::from(s + 1), fact(2 * s + 1)).pow(l as i32)
                        * BigRational::new(fact(s) * fact(s), BigInt::from(s + 1));
                    assert_eq!(pref * norm, eigenvalue_closed(sp(s), l, sp(j)).unwrap());
                }
            }
        }
    }

    #[test]
    fn spin1_closed_examples() {
        assert_eq!(spin1_closed(1, sp(0)).unwrap(), q(0, 1));
        assert_eq!(spin1_closed(2, sp(1)).unwrap(), q(2, 9));
        assert_eq!(spin1_closed(3, sp(0)).unwrap(), q(2, 9));
        assert!(spin1_closed(2, sp(2)).is_err());
    }

    #[test]
    fn limit_bound_holds_on_a_small_grid() {
        for s in 1..=3u32 {
            for l in 1..=12usize {
                let flat = q(1, i64::from((s + 1) * (s + 1)));
                for j in 0..=s {
                    let dev = (eigenvalue_closed(sp(s), l, sp(j)).unwrap() - &flat).abs();
                    assert!(dev <= limit_bound(sp(s), l, sp(j)).unwrap());
                }
            }
        }
    }
}
