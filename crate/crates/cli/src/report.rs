use std::collections::BTreeMap;

use scpkit::exactla::{Mat, QuadExt};
use scpkit::shifts::{AtomicMeasure1, AtomicMeasure2, WeightFamily2};
use scpkit::Rat;
use serde::{Deserialize, Serialize};

/// A number in a report: a rational `"p/q"` or the surd `p + q·√radicand`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Rational(Rat),
    Surd { p: Rat, q: Rat, radicand: Rat },
}

impl From<&QuadExt> for Num {
    fn from(v: &QuadExt) -> Num {
        match v.as_rational() {
            Some(r) => Num::Rational(r.clone()),
            None => Num::Surd { p: v.p().clone(), q: v.q().clone(), radicand: v.radicand().clone() },
        }
    }
}

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Num::Rational(r) => write!(f, "{r}"),
            Num::Surd { p, q, radicand } => write!(f, "{}", QuadExt::new(p.clone(), q.clone(), radicand.clone())),
        }
    }
}

/// One atom; `y` is absent for one-variable measures.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub x: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Num>,
    pub density: Num,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewWeightsOut {
    pub p: Rat,
    pub q: Rat,
    pub r: Rat,
    pub s: Rat,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub kind: String,
    /// One of `solved`, `feasible`, `ok`, `no_completion`, `obstructed`, `unsupported`,
    /// `input_error`, `internal_error`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub new_weights: Option<NewWeightsOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<Vec<Atom>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<BTreeMap<String, Vec<Vec<Rat>>>>,
    #[serde(default)]
    pub checks: BTreeMap<String, bool>,
    /// `(combination, entry)` of an obstructed row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<[Rat; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<String>>,
    /// Graded moment table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<Vec<Rat>>,
    /// Completion weights, keyed `alpha_sq(k1,k2)` / `beta_sq(k1,k2)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, Rat>>,
    #[serde(default)]
    pub details: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Report {
    pub fn new(command: &str, kind: &str, status: &str) -> Report {
        Report { command: command.into(), kind: kind.into(), status: status.into(), ..Report::default() }
    }

    /// Exit code, a function of `status` alone.
    pub fn exit_code(&self) -> i32 {
        exit_code(&self.status)
    }
}

pub fn exit_code(status: &str) -> i32 {
    match status {
        "solved" | "feasible" | "ok" => 0,
        "no_completion" | "obstructed" => 1,
        "internal_error" => 3,
        _ => 2,
    }
}

pub fn atoms2(mu: &AtomicMeasure2) -> Vec<Atom> {
    mu.iter()
        .map(|((x, y), rho)| Atom { x: x.into(), y: Some(y.into()), density: rho.into() })
        .collect()
}

pub fn atoms1(mu: &AtomicMeasure1) -> Vec<Atom> {
    mu.iter().map(|(t, rho)| Atom { x: t.into(), y: None, density: rho.into() }).collect()
}

pub fn matrix(m: &Mat) -> Vec<Vec<Rat>> {
    m.to_rows()
}

pub fn weight_map(w: &WeightFamily2) -> BTreeMap<String, Rat> {
    let alpha = w.alpha_map().iter().map(|(k, v)| (format!("alpha_sq({},{})", k.0, k.1), v.clone()));
    let beta = w.beta_map().iter().map(|(k, v)| (format!("beta_sq({},{})", k.0, k.1), v.clone()));
    alpha.chain(beta).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Json,
    Text,
}

fn measure_text(atoms: &[Atom]) -> String {
    let terms: Vec<String> = atoms
        .iter()
        .map(|a| {
            let point = match &a.y {
                Some(y) => format!("({},{})", a.x, y),
                None => format!("{}", a.x),
            };
            let weight = match &a.density {
                Num::Rational(r) if r.is_one() => String::new(),
                d => format!("({d})"),
            };
            format!("{weight}δ_{{{point}}}")
        })
        .collect();
    terms.join(" + ")
}

/// JSON mode is canonical: sorted keys, compact, one trailing newline.
pub fn format_report(r: &Report, mode: Format) -> String {
    match mode {
        Format::Json => {
            let value = serde_json::to_value(r).expect("reports serialize");
            format!("{value}\n")
        }
        Format::Text => {
            let mut out = format!("{} [{}]: {}\n", r.command, r.kind, r.status);
            if let Some(m) = &r.message {
                out += &format!("message: {m}\n");
            }
            if let Some(c) = &r.case {
                out += &format!("case: {c}\n");
            }
            if let Some(k) = r.rank {
                out += &format!("rank: {k}\n");
            }
            if let Some(w) = &r.new_weights {
                out += &format!("new weights: p = {}, q = {}, r = {}, s = {}\n", w.p, w.q, w.r, w.s);
            }
            if let Some(atoms) = &r.measure {
                out += &format!("μ = {}\n", measure_text(atoms));
            }
            if let Some(rels) = &r.relations {
                for rel in rels {
                    out += &format!("relation: {rel} = 0\n");
                }
            }
            if let Some(g) = &r.moments {
                let g: Vec<String> = g.iter().map(ToString::to_string).collect();
                out += &format!("moments: {}\n", g.join(", "));
            }
            if let Some([a, b]) = &r.witness {
                out += &format!("witness: {a} ≠ {b}\n");
            }
            for (k, v) in &r.details {
                out += &format!("{k}: {v}\n");
            }
            let failed: Vec<&str> = r.checks.iter().filter(|(_, ok)| !**ok).map(|(k, _)| k.as_str()).collect();
            if !r.checks.is_empty() {
                if failed.is_empty() {
                    out += &format!("checks: all {} passed\n", r.checks.len());
                } else {
                    out += &format!("checks failed: {}\n", failed.join(", "));
                }
            }
            out
        }
    }
}

pub fn parse_report(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}
