//! Exact arithmetic and angular-momentum coupling coefficients.
//!
//! Everything here is exact: factorials are big integers, 3j symbols and
//! Clebsch-Gordan coefficients are stored as `sign · √(rational)`.
//! Sign conventions follow Condon-Shortley.

mod coupling;
mod factorial;
mod rational;
mod sqrt;
mod twice;

pub use coupling::{clebsch_gordan, three_j, three_j_zero};
pub use factorial::{factorial, Factorials, DEFAULT_FACTORIAL_CAP};
pub use rational::{rational_sqrt, rational_to_f64};
pub use sqrt::{Sign, SignedSqrtRational};
pub use twice::TwiceSpin;
