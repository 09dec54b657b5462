use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::factorial::factorial;
use super::sqrt::{Sign, SignedSqrtRational};
use super::twice::TwiceSpin;
use crate::error::Result;

fn fact(n: i64) -> BigInt {
    debug_assert!(n >= 0);
    factorial(n as usize)
}

/// The 3j symbol `(l1 l2 l3; 0 0 0)` for integer orders.
///
/// Uses the closed form in `g = (l1 + l2 + l3) / 2`:
/// `(-1)^g √[(2g-2l1)!(2g-2l2)!(2g-2l3)!/(2g+1)!] · g!/((g-l1)!(g-l2)!(g-l3)!)`.
/// Zero when the sum is odd or the triangle condition fails.
pub fn three_j_zero(l1: u32, l2: u32, l3: u32) -> SignedSqrtRational {
    let (a, b, c) = (i64::from(l1), i64::from(l2), i64::from(l3));
    let sum = a + b + c;
    if sum % 2 != 0 || c > a + b || c < (a - b).abs() {
        return SignedSqrtRational::zero();
    }
    let g = sum / 2;
    let root = BigRational::new(
        fact(2 * g - 2 * a) * fact(2 * g - 2 * b) * fact(2 * g - 2 * c),
        fact(2 * g + 1),
    );
    let outer = BigRational::new(fact(g), fact(g - a) * fact(g - b) * fact(g - c));
    let square = root * &outer * &outer;
    SignedSqrtRational::new(Sign::parity(g), square).expect("non-zero 3j square")
}

/// Condon-Shortley Clebsch-Gordan coefficient `(J, M | j1, m1; j2, m2)`.
///
/// All arguments are twice-values. Computed from the Racah single sum, so the
/// result is exact. Returns zero unless `M = m1 + m2` and the triangle
/// condition holds; errors when a magnetization does not fit its spin.
pub fn clebsch_gordan(
    j1: TwiceSpin,
    m1: i32,
    j2: TwiceSpin,
    m2: i32,
    j: TwiceSpin,
    m: i32,
) -> Result<SignedSqrtRational> {
    j1.check_projection(m1)?;
    j2.check_projection(m2)?;
    j.check_projection(m)?;
    let (tj1, tj2, tj) = (j1.twice() as i64, j2.twice() as i64, j.twice() as i64);
    let (tm1, tm2, tm) = (i64::from(m1), i64::from(m2), i64::from(m));
    if tm1 + tm2 != tm || tj > tj1 + tj2 || tj < (tj1 - tj2).abs() {
        return Ok(SignedSqrtRational::zero());
    }
    // Every combination below is an integer once the triangle and projection rules hold.
    let h = |x: i64| {
        debug_assert!(x % 2 == 0);
        x / 2
    };
    let a = h(tj1 + tj2 - tj);
    let b = h(tj1 - tj2 + tj);
    let c = h(-tj1 + tj2 + tj);
    let d = h(tj1 + tj2 + tj) + 1;
    let prefactor = BigRational::new(
        BigInt::from(tj + 1)
            * fact(a)
            * fact(b)
            * fact(c)
            * fact(h(tj + tm))
            * fact(h(tj - tm))
            * fact(h(tj1 + tm1))
            * fact(h(tj1 - tm1))
            * fact(h(tj2 + tm2))
            * fact(h(tj2 - tm2)),
        fact(d),
    );

    let d1 = h(tj1 - tm1);
    let d2 = h(tj2 + tm2);
    let e1 = h(tj - tj2 + tm1);
    let e2 = h(tj - tj1 - tm2);
    let k_min = 0.max(-e1).max(-e2);
    let k_max = a.min(d1).min(d2);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let den = fact(k) * fact(a - k) * fact(d1 - k) * fact(d2 - k) * fact(e1 + k) * fact(e2 + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return Ok(SignedSqrtRational::zero());
    }
    let sign = if sum.is_negative() { Sign::Minus } else { Sign::Plus };
    let square = prefactor * &sum * &sum;
    SignedSqrtRational::new(sign, square)
}

/// General Wigner 3j symbol from the Clebsch-Gordan coefficient:
/// `(j1 j2 j3; m1 m2 m3) = (-1)^(j1-j2-m3) / √(2j3+1) · (j3, -m3 | j1, m1; j2, m2)`.
pub fn three_j(
    j1: TwiceSpin,
    m1: i32,
    j2: TwiceSpin,
    m2: i32,
    j3: TwiceSpin,
    m3: i32,
) -> Result<SignedSqrtRational> {
    j3.check_projection(m3)?;
    let cg = clebsch_gordan(j1, m1, j2, m2, j3, -m3)?;
    if cg.is_zero() {
        return Ok(cg);
    }
    let twice_phase = j1.twice() as i64 - j2.twice() as i64 - i64::from(m3);
    let phase = Sign::parity(twice_phase / 2);
    let scale = SignedSqrtRational::new(
        phase,
        BigRational::new(BigInt::one(), BigInt::from(j3.twice() + 1)),
    )?;
    Ok(&cg * &scale)
}
