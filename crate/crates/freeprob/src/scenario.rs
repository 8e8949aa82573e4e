//! Scenario files: versioned JSON descriptions of a verification run.
//!
//! Parsing is strict at every level: unknown fields, unknown kinds, and
//! unknown suite names are schema violations, reported before any
//! computation starts. The payload is dispatched on the `kind` field into a
//! typed struct; `verify` payloads dispatch once more on `suite`.

use crate::error::{Error, Result};
use crate::wick::{CovarianceSpec, StarWord};
use serde::Deserialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Raw envelope: everything else hangs off `kind`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    schema_version: u32,
    name: String,
    kind: String,
    payload: serde_json::Value,
}

#[derive(Debug)]
pub struct Scenario {
    pub name: String,
    pub body: ScenarioBody,
}

#[derive(Debug)]
pub enum ScenarioBody {
    Partitions(PartitionsPayload),
    Moments(MomentsPayload),
    Cumulants(CumulantsPayload),
    Fock(FockPayload),
    Verify(VerifyPayload),
}

/// Non-crossing partition counting ranges.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionsPayload {
    /// Count NC(n) for n = 1..=max_n, by generation and by filtering.
    pub max_n: usize,
    /// Count pair partitions NCPP(2k) for k = 1..=max_pair_order.
    pub max_pair_order: usize,
}

/// Direct moment evaluations against optional expected values.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsPayload {
    pub covariance: CovarianceSpec,
    /// Words as 0-based generator indices.
    pub words: Vec<Vec<usize>>,
    #[serde(default)]
    pub expected_free: Option<Vec<f64>>,
    #[serde(default)]
    pub expected_classical: Option<Vec<f64>>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

/// Moment-cumulant inversion roundtrips plus scalar closed forms.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CumulantsPayload {
    pub systems: Vec<RoundtripSpec>,
    /// Random scalar moment tables checked against the order-2 and order-3
    /// closed forms.
    pub closed_form_samples: u64,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundtripSpec {
    pub dim: usize,
    pub max_order: usize,
    pub count: u64,
}

/// Fock realizations against the combinatorial oracles, exhaustively over
/// all words up to a length.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockPayload {
    pub covariance: CovarianceSpec,
    pub max_word_len: usize,
    #[serde(default)]
    pub depth: Option<usize>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Also check the single-variable moment sequences of both models
    /// against their known closed forms.
    #[serde(default = "default_true")]
    pub check_single_variable: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug)]
pub enum VerifyPayload {
    Prop32(AmplifiedVanishingParams),
    Thm1Forward(AmplifiedVanishingParams),
    Thm1Converse(DetectionParams),
    Def42(CircularParams),
    Cor43(ComplexCheckParams),
    Thm2Chain(ChainParams),
    Al(AlParams),
    Symfock(SymfockParams),
}

impl VerifyPayload {
    pub fn suite_name(&self) -> &'static str {
        match self {
            VerifyPayload::Prop32(_) => "prop32",
            VerifyPayload::Thm1Forward(_) => "thm1-forward",
            VerifyPayload::Thm1Converse(_) => "thm1-converse",
            VerifyPayload::Def42(_) => "def42",
            VerifyPayload::Cor43(_) => "cor43",
            VerifyPayload::Thm2Chain(_) => "thm2-chain",
            VerifyPayload::Al(_) => "al",
            VerifyPayload::Symfock(_) => "symfock",
        }
    }
}

/// Cumulant-functional vanishing for an amplified semicircular family.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplifiedVanishingParams {
    pub num_generators: usize,
    pub coeff_dim: usize,
    pub orders: Vec<usize>,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

/// Threshold detection on a family built from powers of one semicircular.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionParams {
    /// The functional order probed; matrix size is order + 1.
    pub order: usize,
    /// The tested family is { s^power }.
    pub power: usize,
    pub samples_per_trial: usize,
    pub threshold_factor: f64,
    /// Minimum detections for a pass; defaults to trials - 1.
    #[serde(default)]
    pub min_detections: Option<u64>,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Star-word moments of Fock-realized circular elements against the
/// combinatorial expansion.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircularParams {
    pub num_circular: usize,
    pub max_word_len: usize,
    /// Specific star-words to spot-check and report individually, besides
    /// the exhaustive sweep. Entries are (generator index, starred) pairs.
    #[serde(default)]
    pub highlighted_words: Vec<StarWord>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

/// Complex amplification decomposition check.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexCheckParams {
    pub num_circular: usize,
    pub coeff_dim: usize,
    pub orders: Vec<usize>,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

/// Operator-side versus combinatorial block expectations.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainParams {
    pub num_generators: usize,
    pub coeff_dims: Vec<usize>,
    pub max_word_len: usize,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

/// Standard polynomial vanishing and witness search.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlParams {
    pub sizes: Vec<usize>,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

/// Cyclic coefficient symmetrization sweep.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymfockParams {
    pub max_n: usize,
    pub max_m: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn schema_err(msg: impl Into<String>) -> Error {
    Error::InvalidScenario(msg.into())
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let envelope: Envelope =
        serde_json::from_str(text).map_err(|e| schema_err(format!("envelope: {e}")))?;
    if envelope.schema_version != SCHEMA_VERSION {
        return Err(schema_err(format!(
            "schema_version {} unsupported (expected {})",
            envelope.schema_version, SCHEMA_VERSION
        )));
    }
    if envelope.name.is_empty() {
        return Err(schema_err("empty scenario name"));
    }
    let payload = envelope.payload;
    let body = match envelope.kind.as_str() {
        "partitions" => ScenarioBody::Partitions(parse_payload(payload)?),
        "moments" => ScenarioBody::Moments(parse_payload(payload)?),
        "cumulants" => ScenarioBody::Cumulants(parse_payload(payload)?),
        "fock" => ScenarioBody::Fock(parse_payload(payload)?),
        "verify" => ScenarioBody::Verify(parse_verify(payload)?),
        other => {
            return Err(schema_err(format!(
                "unknown kind {other:?} (expected one of partitions, moments, \
                 cumulants, fock, verify)"
            )))
        }
    };
    Ok(Scenario {
        name: envelope.name,
        body,
    })
}

fn parse_payload<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| schema_err(format!("payload: {e}")))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyEnvelope {
    suite: String,
    params: serde_json::Value,
}

fn parse_verify(value: serde_json::Value) -> Result<VerifyPayload> {
    let env: VerifyEnvelope =
        serde_json::from_value(value).map_err(|e| schema_err(format!("verify payload: {e}")))?;
    let p = env.params;
    Ok(match env.suite.as_str() {
        "prop32" => VerifyPayload::Prop32(parse_payload(p)?),
        "thm1-forward" => VerifyPayload::Thm1Forward(parse_payload(p)?),
        "thm1-converse" => VerifyPayload::Thm1Converse(parse_payload(p)?),
        "def42" => VerifyPayload::Def42(parse_payload(p)?),
        "cor43" => VerifyPayload::Cor43(parse_payload(p)?),
        "thm2-chain" => VerifyPayload::Thm2Chain(parse_payload(p)?),
        "al" => VerifyPayload::Al(parse_payload(p)?),
        "symfock" => VerifyPayload::Symfock(parse_payload(p)?),
        other => {
            return Err(schema_err(format!(
                "unknown suite {other:?} (run `freeprob list` for the bundled set)"
            )))
        }
    })
}

/// Bundled scenarios compiled into the binary, one per suite.
pub const BUNDLED: &[(&str, &str)] = &[
    ("prop32", include_str!("../scenarios/prop32.json")),
    (
        "thm1-forward",
        include_str!("../scenarios/thm1-forward.json"),
    ),
    (
        "thm1-converse",
        include_str!("../scenarios/thm1-converse.json"),
    ),
    ("def42", include_str!("../scenarios/def42.json")),
    ("cor43", include_str!("../scenarios/cor43.json")),
    ("thm2-chain", include_str!("../scenarios/thm2-chain.json")),
    ("al", include_str!("../scenarios/al.json")),
    ("symfock", include_str!("../scenarios/symfock.json")),
];

pub fn bundled_scenario(name: &str) -> Option<&'static str> {
    BUNDLED
        .iter()
        .find(|&&(n, _)| n == name)
        .map(|&(_, text)| text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_top_level_field_rejected() {
        let text = r#"{"schema_version":1,"name":"x","kind":"partitions",
                       "payload":{"max_n":3,"max_pair_order":2},"extra":1}"#;
        assert!(matches!(
            parse_scenario(text),
            Err(Error::InvalidScenario(_))
        ));
    }

    #[test]
    fn unknown_payload_field_rejected() {
        let text = r#"{"schema_version":1,"name":"x","kind":"partitions",
                       "payload":{"max_n":3,"max_pair_order":2,"bogus":true}}"#;
        assert!(parse_scenario(text).is_err());
    }

    #[test]
    fn unknown_kind_rejected() {
        let text = r#"{"schema_version":1,"name":"x","kind":"mystery","payload":{}}"#;
        let err = parse_scenario(text).unwrap_err();
        assert!(err.to_string().contains("mystery"));
    }

    #[test]
    fn wrong_schema_version_rejected() {
        let text = r#"{"schema_version":2,"name":"x","kind":"partitions",
                       "payload":{"max_n":3,"max_pair_order":2}}"#;
        assert!(parse_scenario(text).is_err());
    }

    #[test]
    fn unknown_suite_rejected() {
        let text = r#"{"schema_version":1,"name":"x","kind":"verify",
                       "payload":{"suite":"nope","params":{}}}"#;
        assert!(parse_scenario(text).is_err());
    }

    #[test]
    fn bundled_scenarios_all_parse() {
        for &(name, text) in BUNDLED {
            let scenario =
                parse_scenario(text).unwrap_or_else(|e| panic!("bundled {name} invalid: {e}"));
            if let ScenarioBody::Verify(v) = &scenario.body {
                assert_eq!(v.suite_name(), name);
            } else {
                panic!("bundled {name} is not a verify scenario");
            }
        }
    }

    #[test]
    fn partitions_roundtrip() {
        let text = r#"{"schema_version":1,"name":"counts","kind":"partitions",
                       "payload":{"max_n":5,"max_pair_order":4}}"#;
        let s = parse_scenario(text).unwrap();
        match s.body {
            ScenarioBody::Partitions(p) => {
                assert_eq!(p.max_n, 5);
                assert_eq!(p.max_pair_order, 4);
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn covariance_embedded_in_moments_payload() {
        let text = r#"{"schema_version":1,"name":"m","kind":"moments","payload":{
            "covariance":{"names":["a","b"],"cov":[[1.0,0.25],[0.25,1.0]]},
            "words":[[0,1,1,0]],
            "expected_free":[1.0625]
        }}"#;
        let s = parse_scenario(text).unwrap();
        match s.body {
            ScenarioBody::Moments(m) => {
                assert_eq!(m.covariance.len(), 2);
                assert_eq!(m.words.len(), 1);
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn invalid_covariance_is_schema_violation() {
        let text = r#"{"schema_version":1,"name":"m","kind":"moments","payload":{
            "covariance":{"names":["a"],"cov":[[-1.0]]},
            "words":[[0,0]]
        }}"#;
        assert!(parse_scenario(text).is_err());
    }
}
