//! Block density-matrix eigenvalues Λ(J) in exact arithmetic.
//!
//! Two independent routes are provided: the recurrence in the polynomials
//! `I_l` ([`eigenvalue_recurrence`]) and the closed triple sum over 3j
//! squares ([`eigenvalue_closed`]). Their exact agreement is checked by the
//! test-suite rather than assumed.

mod block;
mod coefficients;
mod eigenvalues;

pub use block::{BlockSpectrum, Eigenvalue, Method, SpectrumEntry};
pub use coefficients::{
    i_polynomial, lambda_coeff, legendre_expansion_residual, legendre_p, x_of_j, IPolynomial,
};
pub use eigenvalues::{
    degenerate_norm, eigenvalue_closed, eigenvalue_recurrence, limit_bound, limit_constant,
    spin1_closed, vbs_norm,
};

use crate::angular::TwiceSpin;
use crate::error::{Error, Result};

/// Integer bulk spin `S ≥ 1` from its twice-value.
pub(crate) fn bulk_spin(spin: TwiceSpin) -> Result<u32> {
    match spin.integer_value() {
        Ok(s) if s >= 1 => Ok(s),
        _ => Err(Error::invalid(format!(
            "bulk spin must be a positive integer, got {spin}"
        ))),
    }
}

/// Integer edge spin `0 ≤ J ≤ S`.
pub(crate) fn edge_spin(j: TwiceSpin, s: u32) -> Result<u32> {
    let jv = j
        .integer_value()
        .map_err(|_| Error::invalid(format!("edge spin J = {j} must be an integer")))?;
    if jv > s {
        return Err(Error::invalid(format!("edge spin J = {jv} exceeds S = {s}")));
    }
    Ok(jv)
}
