//! The JSON report envelope shared by every subcommand, and `recheck`.

use addcomb::{Error, GroupSet, Inequality};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// `sha256` of the canonical set JSON, hex encoded.
pub fn input_digest(a: &GroupSet) -> String {
    hex::encode(Sha256::digest(a.to_canonical_string().as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    /// The input set, so the digest can be recomputed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<Value>,
    pub params: Value,
    pub verdicts: Value,
    pub witnesses: Value,
    pub trace: Value,
    /// Every verdict rests on exhaustive search or exact arithmetic.
    pub certified: bool,
    /// No asserted inequality fails and no checked property is violated.
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, input: Option<&GroupSet>) -> Self {
        Report {
            command: command.into(),
            input_digest: input.map(input_digest).unwrap_or_default(),
            input: input.map(GroupSet::to_json),
            params: Value::Null,
            verdicts: Value::Null,
            witnesses: Value::Null,
            trace: Value::Null,
            certified: true,
            passed: true,
        }
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RecheckSummary {
    pub inequalities: usize,
    pub asserted: usize,
    pub digest_checked: bool,
    pub failures: Vec<String>,
}

impl RecheckSummary {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn looks_like_inequality(m: &serde_json::Map<String, Value>) -> bool {
    ["label", "lhs", "relation", "rhs", "holds", "asserted"].iter().all(|k| m.contains_key(*k))
}

fn walk(v: &Value, path: &str, out: &mut RecheckSummary) {
    match v {
        Value::Object(m) => {
            if looks_like_inequality(m) {
                out.inequalities += 1;
                match serde_json::from_value::<Inequality>(v.clone()) {
                    Ok(q) => {
                        if q.asserted {
                            out.asserted += 1;
                        }
                        if let Err(e) = q.recheck() {
                            out.failures.push(format!("{path}: {e}"));
                        }
                    }
                    Err(e) => out.failures.push(format!("{path}: malformed inequality: {e}")),
                }
                return;
            }
            for (k, x) in m {
                walk(x, &format!("{path}.{k}"), out);
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                walk(x, &format!("{path}[{i}]"), out);
            }
        }
        _ => {}
    }
}

/// Re-derives every embedded inequality from its integer data, and the
/// input digest from the embedded input.
pub fn recheck(report: &Value) -> Result<RecheckSummary, Error> {
    let obj = report.as_object().ok_or_else(|| Error::Parse("report is not a JSON object".into()))?;
    let mut out = RecheckSummary::default();
    if let (Some(input), Some(Value::String(d))) = (obj.get("input"), obj.get("input_digest")) {
        let set = GroupSet::from_json(input)?;
        out.digest_checked = true;
        if input_digest(&set) != *d {
            out.failures.push("input_digest does not match the embedded input".into());
        }
    }
    walk(report, "$", &mut out);
    Ok(out)
}
