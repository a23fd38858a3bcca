//! Exact symbolic engine for the skein algebra of the five-punctured sphere
//! and the Askey–Wilson algebras inside tensor powers of `U_q(sl2)`.

use serde::Serialize;

pub mod braidaction;
pub mod central;
pub mod cli;
pub mod coeff;
pub mod freealg;
pub mod hilbert;
pub mod oracle;
pub mod rewrite;
pub mod skein;
pub mod tensor;
pub mod uqsl2;

/// Outcome of a verification pass: how many identities were checked and a
/// witness string for each one that failed.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), checked: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records one check; `witness` is only evaluated on failure.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(witness());
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}
