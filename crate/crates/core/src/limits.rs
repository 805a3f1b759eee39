use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::DEFAULT_CAP;
use crate::poly::DEFAULT_BUDGET;

/// Resource limits shared by the exhaustive operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest field cardinality an operation may build or factor over.
    pub cap: u128,
    /// Largest number of candidates an enumeration may visit.
    pub budget: u128,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            cap: DEFAULT_CAP,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Limits {
    pub fn check_budget(&self, needed: u128) -> Result<()> {
        if needed > self.budget {
            Err(Error::BudgetExceeded {
                needed,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_cap(&self, cardinality: Option<u128>) -> Result<()> {
        match cardinality {
            Some(c) if c <= self.cap => Ok(()),
            _ => Err(Error::CardinalityCapExceeded { cap: self.cap }),
        }
    }
}
