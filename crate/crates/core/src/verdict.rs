use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    SmoothableGeneric,
    NonSmoothable,
    NonSmoothableGeneric,
    NonSmoothableGenericEquisingular,
    Obstructed,
    Unknown,
}

impl Outcome {
    pub fn is_non_smoothable(self) -> bool {
        matches!(
            self,
            Outcome::NonSmoothable
                | Outcome::NonSmoothableGeneric
                | Outcome::NonSmoothableGenericEquisingular
                | Outcome::Obstructed
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::SmoothableGeneric => "SMOOTHABLE_GENERIC",
            Outcome::NonSmoothable => "NON_SMOOTHABLE",
            Outcome::NonSmoothableGeneric => "NON_SMOOTHABLE_GENERIC",
            Outcome::NonSmoothableGenericEquisingular => "NON_SMOOTHABLE_GENERIC_EQUISINGULAR",
            Outcome::Obstructed => "OBSTRUCTED",
            Outcome::Unknown => "UNKNOWN",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A classification outcome together with the criterion that produced it
/// and the numbers it was decided on.
///
/// `Unknown` means no criterion fired; it never stands for "smoothable".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub provenance: String,
    pub witnesses: BTreeMap<String, i64>,
}

impl Verdict {
    pub fn new(outcome: Outcome, provenance: impl Into<String>) -> Self {
        Verdict {
            outcome,
            provenance: provenance.into(),
            witnesses: BTreeMap::new(),
        }
    }

    pub fn unknown(provenance: impl Into<String>) -> Self {
        Self::new(Outcome::Unknown, provenance)
    }

    pub fn with(mut self, key: &str, value: i64) -> Self {
        self.witnesses.insert(key.to_string(), value);
        self
    }

    pub fn witness(&self, key: &str) -> Option<i64> {
        self.witnesses.get(key).copied()
    }
}
