//! Shared result types for cohomology and table verification.

use serde::Serialize;

/// Ranks of the differential matrices together with the four Poisson
/// cohomology dimensions `(h0, h1, h2, h3)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CohomologyReport {
    pub ranks: Vec<usize>,
    pub dims: [usize; 4],
}

impl CohomologyReport {
    pub fn euler_characteristic(&self) -> i64 {
        let [h0, h1, h2, h3] = self.dims.map(|d| d as i64);
        h0 - h1 + h2 - h3
    }
}

/// Outcome of checking one tabulated bracket entry against its chart
/// recomputation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EntryCheck {
    pub label: String,
    pub pass: bool,
}

impl EntryCheck {
    pub fn new(label: impl Into<String>, pass: bool) -> Self {
        EntryCheck {
            label: label.into(),
            pass,
        }
    }
}

pub fn all_pass(entries: &[EntryCheck]) -> bool {
    entries.iter().all(|e| e.pass)
}
