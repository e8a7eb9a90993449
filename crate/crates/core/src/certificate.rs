use serde::Serialize;
use serde_json::Value;

/// Canonical serialized form of a search outcome.
///
/// `recheck` records whether the witness re-verified against the set
/// oracles at the moment the certificate was built.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub op: String,
    pub inputs: Value,
    pub witness: Value,
    pub recheck: bool,
}

impl Certificate {
    pub fn new(op: &str, inputs: impl Serialize, witness: impl Serialize, recheck: bool) -> Self {
        Certificate {
            op: op.to_string(),
            inputs: serde_json::to_value(inputs).expect("serializable inputs"),
            witness: serde_json::to_value(witness).expect("serializable witness"),
            recheck,
        }
    }
}
