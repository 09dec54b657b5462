use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;

pub const DEFAULT_FACTORIAL_CAP: usize = 512;

/// A table of `0!, 1!, ..., cap!`; requests past the cap are computed on demand.
#[derive(Clone, Debug)]
pub struct Factorials {
    table: Vec<BigInt>,
}

impl Factorials {
    pub fn with_cap(cap: usize) -> Self {
        let mut table = Vec::with_capacity(cap + 1);
        let mut acc = BigInt::one();
        table.push(acc.clone());
        for n in 1..=cap {
            acc *= n;
            table.push(acc.clone());
        }
        Factorials { table }
    }

    pub fn cap(&self) -> usize {
        self.table.len() - 1
    }

    pub fn get(&self, n: usize) -> BigInt {
        match self.table.get(n) {
            Some(v) => v.clone(),
            None => {
                let mut acc = self.table.last().cloned().unwrap_or_else(BigInt::one);
                for k in self.table.len()..=n {
                    acc *= k;
                }
                acc
            }
        }
    }
}

static GLOBAL: OnceLock<Factorials> = OnceLock::new();

fn global() -> &'static Factorials {
    GLOBAL.get_or_init(|| Factorials::with_cap(DEFAULT_FACTORIAL_CAP))
}

/// Exact `n!` from the shared table.
pub fn factorial(n: usize) -> BigInt {
    global().get(n)
}
