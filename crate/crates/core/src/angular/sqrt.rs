use std::fmt;
use std::ops::{Mul, Neg};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::rational::{rational_sqrt, rational_to_f64};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Minus => -1,
            Sign::Zero => 0,
            Sign::Plus => 1,
        }
    }

    /// `(-1)^k` for an integer exponent.
    pub fn parity(k: i64) -> Sign {
        if k.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        match self.as_i32() * rhs.as_i32() {
            1 => Sign::Plus,
            -1 => Sign::Minus,
            _ => Sign::Zero,
        }
    }
}

/// The exact real number `sign · √square`.
///
/// Products and squares stay exact; sums of two values with different
/// radicands are not representable and are not offered.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedSqrtRational {
    sign: Sign,
    square: BigRational,
}

impl SignedSqrtRational {
    pub fn zero() -> Self {
        SignedSqrtRational {
            sign: Sign::Zero,
            square: BigRational::zero(),
        }
    }

    /// `sign · √square`; `square` must be non-negative and vanish exactly when `sign` does.
    pub fn new(sign: Sign, square: BigRational) -> Result<Self> {
        if square.is_negative() {
            return Err(Error::invalid("square of a SignedSqrtRational must be non-negative"));
        }
        if (sign == Sign::Zero) != square.is_zero() {
            return Err(Error::invalid("sign is zero exactly when the square is zero"));
        }
        Ok(SignedSqrtRational { sign, square })
    }

    /// Embeds a rational `r` as `sign(r) · √(r²)`.
    pub fn from_rational(r: &BigRational) -> Self {
        let sign = if r.is_zero() {
            Sign::Zero
        } else if r.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        };
        SignedSqrtRational {
            sign,
            square: r * r,
        }
    }

    /// `sign(r) · √|r|`.
    pub fn from_signed_square(r: BigRational) -> Self {
        let sign = if r.is_zero() {
            Sign::Zero
        } else if r.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        };
        SignedSqrtRational {
            sign,
            square: r.abs(),
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// The exact square of the value.
    pub fn square(&self) -> &BigRational {
        &self.square
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    /// The value itself when it happens to be rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        rational_sqrt(&self.square).map(|r| match self.sign {
            Sign::Minus => -r,
            _ => r,
        })
    }

    /// `self / other` when both share a radicand so the ratio is rational.
    pub fn ratio(&self, other: &SignedSqrtRational) -> Option<BigRational> {
        if other.is_zero() {
            return None;
        }
        let q = SignedSqrtRational {
            sign: self.sign * other.sign,
            square: &self.square / &other.square,
        };
        q.to_rational()
    }

    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign.as_i32()) * rational_to_f64(&self.square).sqrt()
    }
}

impl Mul for &SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn mul(self, rhs: &SignedSqrtRational) -> SignedSqrtRational {
        let sign = self.sign * rhs.sign;
        if sign == Sign::Zero {
            return SignedSqrtRational::zero();
        }
        SignedSqrtRational {
            sign,
            square: &self.square * &rhs.square,
        }
    }
}

impl Mul for SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn mul(self, rhs: SignedSqrtRational) -> SignedSqrtRational {
        &self * &rhs
    }
}

impl Neg for SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn neg(self) -> SignedSqrtRational {
        SignedSqrtRational {
            sign: self.sign * Sign::Minus,
            square: self.square,
        }
    }
}

impl fmt::Display for SignedSqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Zero => write!(f, "0"),
            Sign::Plus => write!(f, "√({})", self.square),
            Sign::Minus => write!(f, "-√({})", self.square),
        }
    }
}
