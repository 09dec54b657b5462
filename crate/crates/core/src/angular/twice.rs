use std::fmt;

use crate::error::{Error, Result};

/// A spin or total angular momentum `j`, stored as the integer `2j`.
///
/// Magnetizations that go with a `TwiceSpin` are also twice-values: an `i32`
/// `tm` stands for `m = tm / 2` and must satisfy `|tm| ≤ 2j`, `tm ≡ 2j (mod 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TwiceSpin(u32);

impl TwiceSpin {
    pub const ZERO: TwiceSpin = TwiceSpin(0);

    pub const fn new(twice: u32) -> Self {
        TwiceSpin(twice)
    }

    /// The spin with integer value `s` (twice-value `2s`).
    pub const fn integer(s: u32) -> Self {
        TwiceSpin(2 * s)
    }

    pub const fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// `2j + 1`.
    pub const fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// The integer value of the spin, or an error for half-integers.
    pub fn integer_value(self) -> Result<u32> {
        if self.is_integer() {
            Ok(self.0 / 2)
        } else {
            Err(Error::invalid(format!("spin {self} is not an integer")))
        }
    }

    /// Twice-magnetizations `-2j, -2j+2, ..., 2j` in ascending order.
    pub fn magnetizations(self) -> impl DoubleEndedIterator<Item = i32> + Clone {
        let t = self.0 as i32;
        (0..=self.0 as i32).map(move |k| -t + 2 * k)
    }

    /// Whether `tm` is a valid twice-magnetization for this spin.
    pub fn admits(self, tm: i32) -> bool {
        let t = self.0 as i32;
        tm.abs() <= t && (t - tm) % 2 == 0
    }

    pub(crate) fn check_projection(self, tm: i32) -> Result<()> {
        if (self.0 as i32 - tm) % 2 != 0 {
            return Err(Error::invalid(format!(
                "twice-magnetization {tm} has the wrong parity for spin {self}"
            )));
        }
        if tm.unsigned_abs() > self.0 {
            return Err(Error::invalid(format!(
                "|m| = {} exceeds spin {self}",
                f64::from(tm.abs()) / 2.0
            )));
        }
        Ok(())
    }
}

impl fmt::Display for TwiceSpin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}
