//! The versioned JSON scenario file.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closure::{ClosureError, ClosureSpec, ClosureSystem};
use crate::pairing::{PairingError, Scenario};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Payload {
    Closure(ClosureSpec),
    Pairing(Scenario),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub version: u32,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed scenario file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported scenario version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("expected a {expected} scenario, found {found}")]
    Kind { expected: &'static str, found: &'static str },
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
}

impl ScenarioFile {
    pub fn closure(spec: ClosureSpec) -> Self {
        Self { version: FORMAT_VERSION, payload: Payload::Closure(spec) }
    }

    pub fn pairing(scn: Scenario) -> Self {
        Self { version: FORMAT_VERSION, payload: Payload::Pairing(scn) }
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        if file.version != FORMAT_VERSION {
            return Err(IoError::Version(file.version));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario files always serialize")
    }

    pub fn kind(&self) -> &'static str {
        match self.payload {
            Payload::Closure(_) => "closure",
            Payload::Pairing(_) => "pairing",
        }
    }

    pub fn into_system(self) -> Result<ClosureSystem, IoError> {
        match self.payload {
            Payload::Closure(spec) => Ok(ClosureSystem::from_spec(spec)?),
            Payload::Pairing(_) => Err(IoError::Kind { expected: "closure", found: "pairing" }),
        }
    }

    pub fn into_scenario(self) -> Result<Scenario, IoError> {
        match self.payload {
            Payload::Pairing(scn) => {
                scn.validate()?;
                Ok(scn)
            }
            Payload::Closure(_) => Err(IoError::Kind { expected: "pairing", found: "closure" }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen, GenSpec, NAMES};

    #[test]
    fn generator_outputs_round_trip() {
        for name in NAMES {
            let file = gen(&GenSpec::new(name)).unwrap().to_file();
            let text = file.to_json();
            assert_eq!(ScenarioFile::from_json(&text).unwrap(), file, "{name}");
        }
    }

    #[test]
    fn wrong_version_and_kind() {
        let text = r#"{"version":2,"kind":"closure","payload":{"construction":"down","base":{"kind":"chain","size":2}}}"#;
        assert!(matches!(ScenarioFile::from_json(text), Err(IoError::Version(2))));
        let ok = text.replace("\"version\":2", "\"version\":1");
        let file = ScenarioFile::from_json(&ok).unwrap();
        assert!(matches!(file.into_scenario(), Err(IoError::Kind { .. })));
    }

    #[test]
    fn malformed_json() {
        assert!(matches!(ScenarioFile::from_json("{"), Err(IoError::Json(_))));
    }
}
