//! System description files.
//!
//! A system file is TOML. Vertices are numbered from 1. Every transition
//! record `{ from = i, to = j, re, im }` stores the amplitude `T_ji`: the
//! record going *from i to j* fills row `j`, column `i`.
//!
//! Exactly one of two forms must be used:
//!
//! ```toml
//! # (a) transfer operator given directly
//! dimension = 2
//! [[transfer_entries]]
//! from = 1
//! to = 2
//! re = 0.5
//! im = 0.0
//! ```
//!
//! ```toml
//! # (b) free Hamiltonian, potential and energy; T = (E - H0)^-1 V
//! dimension = 2
//! free_hamiltonian = [0.0, 1.0]
//! energy = { re = 3.0, im = 0.0 }
//! [[potential_entries]]
//! from = 1
//! to = 2
//! re = 1.0
//! im = 0.0
//! ```

use std::collections::HashSet;
use std::path::Path;

use nilborn::{
    build_transfer_operator, Amplitude, DiagonalOperator, SparseOperator, TransferOperator,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("malformed system file: {0}")]
    Parse(String),

    #[error("{field}[{index}]: {message}")]
    Record {
        field: &'static str,
        index: usize,
        message: String,
    },

    #[error("{0}")]
    Form(String),

    #[error("energy {energy} is resonant with level {level} (E_{level} = {level_energy})")]
    Resonance {
        level: String,
        energy: Amplitude,
        level_energy: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexRecord {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<ComplexRecord> for Amplitude {
    fn from(c: ComplexRecord) -> Self {
        Amplitude::new(c.re, c.im)
    }
}

impl From<Amplitude> for ComplexRecord {
    fn from(z: Amplitude) -> Self {
        ComplexRecord { re: z.re, im: z.im }
    }
}

/// One transition `from -> to`, stored as `T[to][from]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionRecord {
    pub from: usize,
    pub to: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_hamiltonian: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<ComplexRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transfer_entries: Option<Vec<TransitionRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential_entries: Option<Vec<TransitionRecord>>,
}

/// A validated system: the transfer operator, plus the Hamiltonian data
/// when the file used form (b).
#[derive(Debug, Clone)]
pub struct LoadedSystem {
    pub spec: SystemSpec,
    pub transfer: TransferOperator,
    pub hamiltonian: Option<HamiltonianData>,
}

#[derive(Debug, Clone)]
pub struct HamiltonianData {
    pub free: DiagonalOperator,
    pub potential: SparseOperator,
    pub energy: Amplitude,
}

impl SystemSpec {
    pub fn from_toml_str(text: &str) -> Result<Self, SpecError> {
        toml::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("system spec is always representable in TOML")
    }

    /// Describes a transfer operator in form (a).
    pub fn from_transfer(t: &TransferOperator, basis_labels: Option<Vec<String>>) -> Self {
        let mut records: Vec<TransitionRecord> = t
            .entries()
            .map(|(row, col, z)| TransitionRecord {
                from: col + 1,
                to: row + 1,
                re: z.re,
                im: z.im,
            })
            .collect();
        records.sort_by_key(|r| (r.from, r.to));
        SystemSpec {
            dimension: t.dim(),
            basis_labels,
            free_hamiltonian: None,
            energy: None,
            transfer_entries: Some(records),
            potential_entries: None,
        }
    }

    /// Display label of zero-based state `i`.
    pub fn label(&self, i: usize) -> String {
        match &self.basis_labels {
            Some(labels) => labels[i].clone(),
            None => (i + 1).to_string(),
        }
    }

    fn operator_from_records(
        &self,
        field: &'static str,
        records: &[TransitionRecord],
    ) -> Result<SparseOperator, SpecError> {
        let n = self.dimension;
        let mut seen = HashSet::new();
        for (index, r) in records.iter().enumerate() {
            let fail = |message: String| SpecError::Record {
                field,
                index,
                message,
            };
            for (name, v) in [("from", r.from), ("to", r.to)] {
                if v == 0 || v > n {
                    return Err(fail(format!("`{name}` = {v} is outside 1..={n}")));
                }
            }
            if !(r.re.is_finite() && r.im.is_finite()) {
                return Err(fail("amplitude is not finite".into()));
            }
            if !seen.insert((r.from, r.to)) {
                return Err(fail(format!("duplicate transition {} -> {}", r.from, r.to)));
            }
        }
        SparseOperator::from_transitions(
            n,
            records
                .iter()
                .map(|r| (r.from - 1, r.to - 1, Amplitude::new(r.re, r.im))),
        )
        .map_err(|e| SpecError::Form(e.to_string()))
    }

    pub fn load(self) -> Result<LoadedSystem, SpecError> {
        let n = self.dimension;
        if n == 0 {
            return Err(SpecError::Form("`dimension` must be at least 1".into()));
        }
        if let Some(labels) = &self.basis_labels {
            if labels.len() != n {
                return Err(SpecError::Form(format!(
                    "`basis_labels` has {} entries, expected {n}",
                    labels.len()
                )));
            }
        }
        match (
            &self.transfer_entries,
            &self.free_hamiltonian,
            &self.potential_entries,
            &self.energy,
        ) {
            (Some(entries), None, None, None) => {
                let transfer = self.operator_from_records("transfer_entries", entries)?;
                Ok(LoadedSystem {
                    spec: self,
                    transfer,
                    hamiltonian: None,
                })
            }
            (None, Some(levels), Some(entries), Some(energy)) => {
                if levels.len() != n {
                    return Err(SpecError::Form(format!(
                        "`free_hamiltonian` has {} energies, expected {n}",
                        levels.len()
                    )));
                }
                let free = DiagonalOperator::new(levels.clone()).map_err(|_| {
                    SpecError::Form("`free_hamiltonian` contains a non-finite energy".into())
                })?;
                let potential = self.operator_from_records("potential_entries", entries)?;
                let energy = Amplitude::from(*energy);
                let transfer = match build_transfer_operator(&free, &potential, energy) {
                    Ok(t) => t,
                    Err(nilborn::Error::Resonance { level, .. }) => {
                        return Err(SpecError::Resonance {
                            level: self.label(level),
                            energy,
                            level_energy: levels[level],
                        })
                    }
                    Err(e) => return Err(SpecError::Form(e.to_string())),
                };
                Ok(LoadedSystem {
                    spec: self,
                    transfer,
                    hamiltonian: Some(HamiltonianData {
                        free,
                        potential,
                        energy,
                    }),
                })
            }
            _ => Err(SpecError::Form(
                "give either `transfer_entries`, or all of `free_hamiltonian`, `potential_entries` and `energy`"
                    .into(),
            )),
        }
    }
}

/// A state vector file: `amplitudes = [{ re = .., im = .. }, ...]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFile {
    pub amplitudes: Vec<ComplexRecord>,
}

impl VectorFile {
    pub fn from_path(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
            path: path.display().to_string(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| SpecError::Parse(e.to_string()))
    }
}
