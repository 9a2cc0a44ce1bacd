//! The JSON state-file format shared by every command.
//!
//! ```json
//! {
//!   "dims": [2, 2],
//!   "states": [{"name": "B1", "amps": [[0.7071067811865476, 0.0], ...]}],
//!   "detector_dims": [2, 2],
//!   "detectors": [...],
//!   "probs": [0.25, 0.25, 0.25, 0.25]
//! }
//! ```
//!
//! Complex amplitudes are `[re, im]` pairs in row-major order with party 0
//! most significant. `detector_dims` defaults to `dims`.

use loccgate::{Amplitude, PureState, Tolerances};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub amps: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub states: Vec<StateEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector_dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detectors: Option<Vec<StateEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
}

impl StateEntry {
    pub fn from_state(name: Option<String>, state: &PureState) -> Self {
        StateEntry {
            name,
            amps: state.amps().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    fn to_state(&self, dims: &[usize], tol: &Tolerances, label: &str) -> Result<PureState, CliError> {
        let amps = self.amps.iter().map(|&[re, im]| Amplitude::new(re, im)).collect();
        PureState::with_tolerance(dims.to_vec(), amps, tol.norm)
            .map_err(|e| CliError::Input(format!("{label}: {e}")))
    }
}

fn entries_to_states(
    entries: &[StateEntry],
    dims: &[usize],
    tol: &Tolerances,
    what: &str,
) -> Result<Vec<PureState>, CliError> {
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let label = match &e.name {
                Some(n) => format!("{what} {i} ({n})"),
                None => format!("{what} {i}"),
            };
            e.to_state(dims, tol, &label)
        })
        .collect()
}

impl StateFile {
    /// Parses a document; syntax errors carry line and column.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Input(format!(
                "malformed state file at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    pub fn read(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files always serialize") + "\n"
    }

    pub fn states(&self, tol: &Tolerances) -> Result<Vec<PureState>, CliError> {
        if self.states.is_empty() {
            return Err(CliError::Input("state file lists no states".into()));
        }
        entries_to_states(&self.states, &self.dims, tol, "state")
    }

    pub fn detector_dims(&self) -> &[usize] {
        self.detector_dims.as_deref().unwrap_or(&self.dims)
    }

    pub fn detectors(&self, tol: &Tolerances) -> Result<Vec<PureState>, CliError> {
        let entries = self
            .detectors
            .as_ref()
            .ok_or_else(|| CliError::Input("state file has no detectors".into()))?;
        entries_to_states(entries, self.detector_dims(), tol, "detector")
    }

    /// Builds a file from in-memory states; names are optional labels.
    pub fn from_states(
        states: &[PureState],
        names: Option<&[&str]>,
        detectors: Option<&[PureState]>,
        probs: Option<Vec<f64>>,
    ) -> Self {
        let entries = |list: &[PureState], prefix: Option<&[&str]>| {
            list.iter()
                .enumerate()
                .map(|(i, s)| StateEntry::from_state(prefix.and_then(|n| n.get(i)).map(|n| n.to_string()), s))
                .collect::<Vec<_>>()
        };
        let dims = states[0].dims().to_vec();
        let detector_dims = detectors
            .map(|d| d[0].dims().to_vec())
            .filter(|d| *d != dims);
        StateFile {
            dims,
            states: entries(states, names),
            detector_dims,
            detectors: detectors.map(|d| entries(d, None)),
            probs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use loccgate::statekit::{build_family, FamilySpec};

    #[test]
    fn parse_errors_report_position() {
        let err = StateFile::parse("{\n  \"dims\": [2,\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(StateFile::parse(r#"{"dims":[2],"states":[],"bogus":1}"#).is_err());
        assert!(StateFile::parse(r#"{"dims":[2],"states":[{"amps":[[NaN,0]]}]}"#).is_err());
    }

    #[test]
    fn rejects_invalid_states() {
        let tol = Tolerances::default();
        let short = StateFile::parse(r#"{"dims":[2],"states":[{"amps":[[1,0]]}]}"#).unwrap();
        assert!(matches!(short.states(&tol), Err(CliError::Input(_))));
        let unnormalized = StateFile::parse(r#"{"dims":[2],"states":[{"amps":[[1,0],[1,0]]}]}"#).unwrap();
        assert!(unnormalized.states(&tol).is_err());
        let no_detectors = StateFile::parse(r#"{"dims":[1],"states":[{"amps":[[1,0]]}]}"#).unwrap();
        assert!(no_detectors.detectors(&tol).is_err());
    }

    #[test]
    fn round_trip_preserves_amplitudes() {
        let fam = build_family(FamilySpec::SPrimeSet).unwrap();
        let det = fam.detectors.unwrap();
        let file = StateFile::from_states(fam.states.states(), Some(&["psi1", "psi2", "psi3'"]), Some(&det), Some(vec![0.16, 0.16, 0.68]));
        assert_eq!(file.detector_dims, Some(vec![2, 2]));
        let back = StateFile::parse(&file.to_json()).unwrap();
        assert_eq!(back, file);
        let tol = Tolerances::default();
        assert_eq!(back.states(&tol).unwrap(), fam.states.states());
        assert_eq!(back.detectors(&tol).unwrap(), det);
    }
}
