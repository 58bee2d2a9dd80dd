//! The JSON document shape shared by the statistical commands.

use crate::bias::BiasReport;
use serde::Serialize;
use serde_json::Value;

/// Version of the document layout.
pub const SCHEMA_VERSION: u32 = 1;

/// One experiment's outcome. `params` carries the op-specific inputs;
/// `estimate` and `std_error` are on the scale the op documents
/// (correlation scale for bias ops, success fraction for recovery).
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub op: String,
    pub params: Value,
    pub seed: u64,
    pub samples: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub pass: bool,
}

impl Report {
    pub fn new(
        op: impl Into<String>,
        params: Value,
        seed: u64,
        samples: u64,
        estimate: f64,
        std_error: f64,
        pass: bool,
    ) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            op: op.into(),
            params,
            seed,
            samples,
            estimate,
            std_error,
            pass,
        }
    }

    pub fn from_bias(op: impl Into<String>, params: Value, bias: &BiasReport, pass: bool) -> Self {
        Self::new(op, params, bias.seed, bias.samples, bias.estimate, bias.std_error, pass)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn serialization_is_deterministic_with_sorted_params() {
        let r = Report::new(
            "carry",
            json!({"workers": 2, "bit": 3}),
            7,
            1024,
            0.25,
            0.001,
            true,
        );
        let a = r.to_json_pretty();
        let b = r.to_json_pretty();
        assert_eq!(a, b);
        let bit_pos = a.find("\"bit\"").unwrap();
        let workers_pos = a.find("\"workers\"").unwrap();
        assert!(bit_pos < workers_pos, "params keys are sorted");
        assert!(a.contains("\"schema\": 1"));
    }

    #[test]
    fn parses_back_to_the_same_fields() {
        let r = Report::new("golomb", json!({"period": 255}), 0, 255, -1.0 / 255.0, 0.0, true);
        let v: Value = serde_json::from_str(&r.to_json_pretty()).unwrap();
        assert_eq!(v["op"], "golomb");
        assert_eq!(v["samples"], 255);
        assert_eq!(v["pass"], true);
        assert_eq!(v["params"]["period"], 255);
    }
}
