use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{bulk_spin, eigenvalue_closed, eigenvalue_recurrence};
use crate::angular::{rational_to_f64, TwiceSpin};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Recurrence,
    ClosedForm,
    FockOracle,
    PauliOracle,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Recurrence,
        Method::ClosedForm,
        Method::FockOracle,
        Method::PauliOracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Recurrence => "recurrence",
            Method::ClosedForm => "closed_form",
            Method::FockOracle => "fock_oracle",
            Method::PauliOracle => "pauli_oracle",
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Method::Recurrence | Method::ClosedForm)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown method '{s}'")))
    }
}

/// An eigenvalue that is either exact or a floating-point oracle estimate.
#[derive(Clone, Debug, PartialEq)]
pub enum Eigenvalue {
    Exact(BigRational),
    Approx(f64),
}

impl Eigenvalue {
    /// Nearest double; for exact values the error is below 2⁻⁵³ relative.
    pub fn to_f64(&self) -> f64 {
        match self {
            Eigenvalue::Exact(r) => rational_to_f64(r),
            Eigenvalue::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Eigenvalue::Exact(r) => Some(r),
            Eigenvalue::Approx(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub j: TwiceSpin,
    pub eigenvalue: Eigenvalue,
    pub multiplicity: usize,
}

/// The non-zero spectrum of a block density matrix, one entry per edge spin J.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSpectrum {
    pub spin: TwiceSpin,
    /// Block length; `None` for the infinite-block limit.
    pub length: Option<usize>,
    pub entries: Vec<SpectrumEntry>,
    pub method: Method,
}

impl BlockSpectrum {
    /// Exact spectrum from one of the two formula routes.
    pub fn exact(spin: TwiceSpin, length: usize, method: Method) -> Result<Self> {
        let s = bulk_spin(spin)?;
        let eval = match method {
            Method::Recurrence => eigenvalue_recurrence,
            Method::ClosedForm => eigenvalue_closed,
            other => {
                return Err(Error::invalid(format!("{other} is not an exact method")));
            }
        };
        let entries = (0..=s)
            .map(|j| {
                let j = TwiceSpin::integer(j);
                Ok(SpectrumEntry {
                    j,
                    eigenvalue: Eigenvalue::Exact(eval(spin, length, j)?),
                    multiplicity: j.dim(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockSpectrum {
            spin,
            length: Some(length),
            entries,
            method,
        })
    }

    /// The `L → ∞` spectrum: `1/(S+1)²` on all `(S+1)²` states.
    pub fn flat(spin: TwiceSpin, method: Method) -> Result<Self> {
        let s = bulk_spin(spin)?;
        let value = BigRational::new(1.into(), ((s + 1) * (s + 1)).into());
        let entries = (0..=s)
            .map(|j| SpectrumEntry {
                j: TwiceSpin::integer(j),
                eigenvalue: Eigenvalue::Exact(value.clone()),
                multiplicity: TwiceSpin::integer(j).dim(),
            })
            .collect();
        Ok(BlockSpectrum {
            spin,
            length: None,
            entries,
            method,
        })
    }

    /// `Σ_J (2J+1) Λ(J)` when every entry is exact.
    pub fn exact_trace(&self) -> Option<BigRational> {
        self.entries.iter().try_fold(BigRational::zero(), |acc, e| {
            e.eigenvalue
                .exact()
                .map(|v| acc + v * BigRational::from_integer(e.multiplicity.into()))
        })
    }

    pub fn float_trace(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.multiplicity as f64 * e.eigenvalue.to_f64())
            .sum()
    }

    /// Each eigenvalue repeated by its multiplicity, descending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.eigenvalue.to_f64(), e.multiplicity))
            .collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// Whether all exact eigenvalues are strictly positive.
    pub fn strictly_positive(&self) -> bool {
        self.entries.iter().all(|e| match &e.eigenvalue {
            Eigenvalue::Exact(r) => r.is_positive(),
            Eigenvalue::Approx(x) => *x > 0.0,
        })
    }

    /// Entry for edge spin `j`, if present.
    pub fn entry(&self, j: TwiceSpin) -> Option<&SpectrumEntry> {
        self.entries.iter().find(|e| e.j == j)
    }
}
