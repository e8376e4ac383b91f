use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CodeError;

/// One `[[n, k, d]] = [[2m, 2m-2, 2]]` block.
///
/// Physical layout: qubit 0 is the top `t`, qubits `1..=k` carry logical
/// qubits `0..k`, qubit `n-1` is the bottom `b`. Transversal H exchanges the
/// roles of the two end qubits; see [`crate::code::BlockBuilder`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeParams {
    m: usize,
}

impl CodeParams {
    pub fn new(m: usize) -> Result<CodeParams, CodeError> {
        if m < 2 {
            return Err(CodeError::BlockTooSmall(m));
        }
        Ok(CodeParams { m })
    }

    /// Smallest block holding `logical` qubits (rounded up to an even count).
    pub fn for_logical(logical: usize) -> CodeParams {
        let k = logical.max(2).div_ceil(2) * 2;
        CodeParams { m: k / 2 + 1 }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        2 * self.m
    }

    pub fn k(&self) -> usize {
        2 * self.m - 2
    }

    pub fn d(&self) -> usize {
        2
    }

    /// Correctable errors, `floor((d - 1) / 2)`.
    pub fn t(&self) -> usize {
        (self.d() - 1) / 2
    }

    pub fn top_index(&self) -> usize {
        0
    }

    pub fn bottom_index(&self) -> usize {
        self.n() - 1
    }

    /// Physical qubit of logical qubit `i`.
    pub fn data_index(&self, i: usize) -> Result<usize, CodeError> {
        if i >= self.k() {
            return Err(CodeError::LogicalIndex { index: i, k: self.k() });
        }
        Ok(i + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GadgetMode {
    #[serde(rename = "nonft")]
    NonFt,
    #[serde(rename = "ft")]
    Ft,
}

impl GadgetMode {
    pub fn as_str(self) -> &'static str {
        match self {
            GadgetMode::NonFt => "nonft",
            GadgetMode::Ft => "ft",
        }
    }
}

impl fmt::Display for GadgetMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GadgetMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "nonft" => Ok(GadgetMode::NonFt),
            "ft" => Ok(GadgetMode::Ft),
            _ => Err(format!("unknown gadget mode `{s}` (expected nonft or ft)")),
        }
    }
}
