use std::fmt;

use serde::{Deserialize, Serialize};

/// A place where a closed formula and the independent oracle disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub context: String,
    pub location: String,
    pub formula: String,
    pub oracle: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub entries: Vec<Discrepancy>,
}

impl DiscrepancyReport {
    pub fn new() -> DiscrepancyReport {
        DiscrepancyReport::default()
    }

    pub fn push(&mut self, context: &str, location: String, formula: String, oracle: String) {
        self.entries.push(Discrepancy { context: context.into(), location, formula, oracle });
    }

    pub fn extend(&mut self, other: DiscrepancyReport) {
        self.entries.extend(other.entries);
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

impl fmt::Display for DiscrepancyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.entries {
            writeln!(f, "discrepancy [{}] at {}: formula {} oracle {}", d.context, d.location, d.formula, d.oracle)?;
        }
        Ok(())
    }
}
