use std::collections::BTreeMap;
use std::fmt;

use scpkit::moments2d::MomentSeq2;
use scpkit::scp2d::QuadraticData;
use scpkit::shifts::{WeightFamily2, WeightSeq1};
use scpkit::Rat;
use serde::de::DeserializeOwned;
use serde::Deserialize;

pub const DEFAULT_DEPTH: usize = 6;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Payload {
    Quadratic(QuadraticData),
    Family(WeightFamily2),
    OneVariable(WeightSeq1),
    Moments(MomentSeq2),
    Obstruction(MomentSeq2),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Quadratic(_) => "scp2d-quadratic",
            Payload::Family(_) => "scp2d-family",
            Payload::OneVariable(_) => "scp1d",
            Payload::Moments(_) => "moments",
            Payload::Obstruction(_) => "obstruction",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instance {
    pub payload: Payload,
    pub depth: usize,
    pub translate: Option<(Rat, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    /// Malformed JSON, a missing or unknown field, or a bad literal.
    Parse(String),
    /// Well-formed but mathematically invalid, e.g. a nonpositive weight.
    Validation(String),
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::Parse(m) => write!(f, "parse error: {m}"),
            InstanceError::Validation(m) => write!(f, "validation error: {m}"),
        }
    }
}

impl std::error::Error for InstanceError {}

#[derive(Deserialize)]
struct KindOnly {
    kind: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadraticRaw {
    #[allow(dead_code)]
    kind: String,
    a: Rat,
    b: Rat,
    c: Rat,
    d: Rat,
    e: Rat,
    depth: Option<usize>,
    translate: Option<[Rat; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyRaw {
    #[allow(dead_code)]
    kind: String,
    /// Keys are `"k1,k2"` with `k1` counting x-steps.
    alpha_sq: BTreeMap<String, Rat>,
    beta_sq: BTreeMap<String, Rat>,
    depth: Option<usize>,
    translate: Option<[Rat; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OneVariableRaw {
    #[allow(dead_code)]
    kind: String,
    alpha_sq: Vec<Rat>,
    depth: Option<usize>,
    translate: Option<[Rat; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MomentsRaw {
    #[allow(dead_code)]
    kind: String,
    /// Graded table `γ₀₀; γ₀₁, γ₁₀; …` (x-powers first within a degree).
    gamma: Vec<Rat>,
    depth: Option<usize>,
    translate: Option<[Rat; 2]>,
}

fn typed<T: DeserializeOwned>(text: &str, kind: &str) -> Result<T, InstanceError> {
    serde_json::from_str(text).map_err(|e| InstanceError::Parse(format!("{kind} instance: {e}")))
}

fn invalid(e: impl fmt::Display) -> InstanceError {
    InstanceError::Validation(e.to_string())
}

fn parse_index(key: &str) -> Result<(usize, usize), InstanceError> {
    let bad = || InstanceError::Parse(format!("weight index {key:?} is not of the form \"k1,k2\""));
    let (k1, k2) = key.split_once(',').ok_or_else(bad)?;
    Ok((k1.trim().parse().map_err(|_| bad())?, k2.trim().parse().map_err(|_| bad())?))
}

fn family(alpha: BTreeMap<String, Rat>, beta: BTreeMap<String, Rat>) -> Result<WeightFamily2, InstanceError> {
    let index = |map: BTreeMap<String, Rat>| -> Result<BTreeMap<(usize, usize), Rat>, InstanceError> {
        map.into_iter().map(|(k, v)| Ok((parse_index(&k)?, v))).collect()
    };
    let (alpha, beta) = (index(alpha)?, index(beta)?);
    let m = alpha
        .keys()
        .map(|k| k.0 + k.1)
        .max()
        .ok_or_else(|| InstanceError::Validation("alpha_sq is empty".into()))?;
    WeightFamily2::new(m, alpha, beta).map_err(invalid)
}

/// Parses and validates a JSON instance. Unknown fields are rejected; rationals are
/// `"p/q"` strings or JSON integers.
pub fn parse_instance(text: &[u8]) -> Result<Instance, InstanceError> {
    let text = std::str::from_utf8(text).map_err(|e| InstanceError::Parse(format!("input is not UTF-8: {e}")))?;
    let KindOnly { kind } =
        serde_json::from_str(text).map_err(|e| InstanceError::Parse(format!("instance header: {e}")))?;
    let (payload, depth, translate) = match kind.as_str() {
        "scp2d-quadratic" => {
            let r: QuadraticRaw = typed(text, &kind)?;
            let d = QuadraticData::new(r.a, r.b, r.c, r.d, r.e).map_err(invalid)?;
            (Payload::Quadratic(d), r.depth, r.translate)
        }
        "scp2d-family" => {
            let r: FamilyRaw = typed(text, &kind)?;
            (Payload::Family(family(r.alpha_sq, r.beta_sq)?), r.depth, r.translate)
        }
        "scp1d" => {
            let r: OneVariableRaw = typed(text, &kind)?;
            (Payload::OneVariable(WeightSeq1::new(r.alpha_sq).map_err(invalid)?), r.depth, r.translate)
        }
        "moments" | "obstruction" => {
            let r: MomentsRaw = typed(text, &kind)?;
            let seq = MomentSeq2::from_table(r.gamma).map_err(invalid)?;
            let p = if kind == "moments" { Payload::Moments(seq) } else { Payload::Obstruction(seq) };
            (p, r.depth, r.translate)
        }
        other => return Err(InstanceError::Parse(format!("unknown instance kind {other:?}"))),
    };
    Ok(Instance {
        payload,
        depth: depth.unwrap_or(DEFAULT_DEPTH),
        translate: translate.map(|[h, k]| (h, k)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_instance() {
        let text = br#"{"kind":"scp2d-quadratic","a":"1","b":"1","c":"2","d":"2","e":1}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.payload, Payload::Quadratic(QuadraticData::from_i64(1, 1, 2, 2, 1).unwrap()));
        assert_eq!(inst.depth, DEFAULT_DEPTH);
    }

    #[test]
    fn one_variable_and_family() {
        let inst = parse_instance(br#"{"kind":"scp1d","alpha_sq":["3/2","5/3","9/5"],"depth":3}"#).unwrap();
        assert_eq!(inst.depth, 3);
        assert!(matches!(inst.payload, Payload::OneVariable(ref w) if w.m() == 2));
        let fam = br#"{"kind":"scp2d-family","alpha_sq":{"0,0":1,"1,0":2,"0,1":1},"beta_sq":{"0,0":1,"1,0":1,"0,1":2}}"#;
        assert!(matches!(parse_instance(fam).unwrap().payload, Payload::Family(ref w) if w.m() == 1));
    }

    #[test]
    fn rejections() {
        let zero = br#"{"kind":"scp2d-quadratic","a":"0","b":"1","c":"2","d":"2","e":"1"}"#;
        assert!(matches!(parse_instance(zero), Err(InstanceError::Validation(_))));
        let extra = br#"{"kind":"scp1d","alpha_sq":["1"],"colour":"red"}"#;
        let Err(InstanceError::Parse(msg)) = parse_instance(extra) else { panic!() };
        assert!(msg.contains("colour") && msg.contains("line 1"), "{msg}");
        assert!(matches!(parse_instance(br#"{"kind":"scp1d","alpha_sq":[1.5]}"#), Err(InstanceError::Parse(_))));
        assert!(matches!(parse_instance(br#"{"kind":"nope"}"#), Err(InstanceError::Parse(_))));
        assert!(matches!(parse_instance(b"{"), Err(InstanceError::Parse(_))));
    }
}
