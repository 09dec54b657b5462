use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Round-to-nearest-even conversion of an exact rational to `f64`.
///
/// The result is the double closest to the rational, so the relative error
/// is below 2⁻⁵³. Magnitudes outside the normal double range are not
/// handled specially (they overflow to infinity or flush through subnormal
/// scaling).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let negative = r.is_negative();
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    // Scale so the integer quotient carries 55 or 56 significant bits.
    let shift = 55 - (n.bits() as i64 - d.bits() as i64);
    let (num, den) = if shift >= 0 {
        (n << shift as usize, d.clone())
    } else {
        (n.clone(), d << (-shift) as usize)
    };
    let q = &num / &den;
    let exact = (&q * &den) == num;
    let extra = q.bits() - 53;
    let mut mantissa: u64 = u64::try_from(&q >> extra as usize).expect("53-bit mantissa");
    let round_bit = q.bit(extra - 1);
    let below = &q & ((BigUint::one() << (extra - 1) as usize) - 1u32);
    let sticky = !below.is_zero() || !exact;
    if round_bit && (sticky || mantissa & 1 == 1) {
        mantissa += 1;
    }
    let exponent = extra as i64 - shift;
    let value = mantissa as f64 * pow2(exponent);
    if negative {
        -value
    } else {
        value
    }
}

fn pow2(e: i64) -> f64 {
    // Split so intermediate factors stay normal.
    let mut e = e;
    let mut acc = 1.0f64;
    while e > 1000 {
        acc *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        acc *= 2f64.powi(-1000);
        e += 1000;
    }
    acc * 2f64.powi(e as i32)
}

/// The exact square root of a non-negative rational, if it is rational.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(BigRational::new(
            BigInt::from_biguint(BigSign::Plus, rn),
            BigInt::from_biguint(BigSign::Plus, rd),
        ))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn simple_fractions() {
        assert_eq!(rational_to_f64(&q(1, 3)), 1.0 / 3.0);
        assert_eq!(rational_to_f64(&q(-7, 100)), -0.07);
        assert_eq!(rational_to_f64(&q(0, 5)), 0.0);
        assert_eq!(rational_to_f64(&q(1, 1)), 1.0);
        assert_eq!(rational_to_f64(&q(1 << 60, 1)), (1u64 << 60) as f64);
    }

    #[test]
    fn huge_numerator_and_denominator() {
        let big = BigInt::from(3).pow(400);
        let r = BigRational::new(big.clone() * 2, big * 3);
        assert_eq!(rational_to_f64(&r), 2.0 / 3.0);
    }

    #[test]
    fn square_roots() {
        assert_eq!(rational_sqrt(&q(4, 9)), Some(q(2, 3)));
        assert_eq!(rational_sqrt(&q(2, 9)), None);
        assert_eq!(rational_sqrt(&q(0, 1)), Some(q(0, 1)));
        assert_eq!(rational_sqrt(&q(-1, 4)), None);
    }

    proptest! {
        // IEEE division of exactly representable operands is correctly rounded.
        #[test]
        fn agrees_with_ieee_division(n in 1u64..(1 << 53), d in 1u64..(1 << 53), neg: bool) {
            let sign = if neg { -1 } else { 1 };
            let r = BigRational::new(BigInt::from(n) * sign, BigInt::from(d));
            let expect = sign as f64 * (n as f64 / d as f64);
            prop_assert_eq!(rational_to_f64(&r), expect);
        }
    }
}
