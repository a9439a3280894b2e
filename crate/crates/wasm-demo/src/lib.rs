//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Every function takes plain strings from form fields and returns the text
//! rendering of a report, or its JSON form when `json` is set.

use scpkit_cli::{format_report, run_bytes, Format, Report};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn render(r: &Report, as_json: bool) -> String {
    format_report(r, if as_json { Format::Json } else { Format::Text })
}

/// Splits a comma or whitespace separated list, keeping each entry as a string
/// so that fractions like `3/2` survive untouched.
fn fields(list: &str) -> Vec<Value> {
    list.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| Value::String(s.to_string()))
        .collect()
}

/// Quadratic 2-variable completion for the five weights `a b c d e`.
#[wasm_bindgen]
pub fn complete_quadratic(weights: &str, as_json: bool) -> String {
    let w = fields(weights);
    let report = if w.len() != 5 {
        let mut r = Report::new("complete", "scp2d-quadratic", "input_error");
        r.message = Some(format!("expected 5 weights, got {}", w.len()));
        r
    } else {
        let input = json!({"kind": "scp2d-quadratic", "a": w[0], "b": w[1], "c": w[2], "d": w[3], "e": w[4]});
        run_bytes("complete", input.to_string().as_bytes(), None)
    };
    render(&report, as_json)
}

/// One-variable completion from the squared weights `α₀², …, α_m²`.
#[wasm_bindgen]
pub fn complete_one_variable(squares: &str, as_json: bool) -> String {
    let input = json!({"kind": "scp1d", "alpha_sq": fields(squares)});
    render(&run_bytes("complete", input.to_string().as_bytes(), None), as_json)
}

/// Flat-extension obstruction check on a graded degree-4 moment table.
#[wasm_bindgen]
pub fn obstruct(gamma: &str, as_json: bool) -> String {
    let input = json!({"kind": "obstruction", "gamma": fields(gamma)});
    render(&run_bytes("obstruct", input.to_string().as_bytes(), None), as_json)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn status(out: &str) -> String {
        let v: Value = serde_json::from_str(out).unwrap();
        v["status"].as_str().unwrap().to_string()
    }

    #[test]
    fn quadratic() {
        assert_eq!(status(&complete_quadratic("1 1 2 2 1", true)), "solved");
        assert_eq!(status(&complete_quadratic("1, 1, 2", true)), "input_error");
        assert!(complete_quadratic("1 1 2 2 1", false).contains("δ_"));
    }

    #[test]
    fn one_variable() {
        assert_eq!(status(&complete_one_variable("1, 2", true)), "solved");
        assert_eq!(status(&complete_one_variable("2 1", true)), "no_completion");
    }

    #[test]
    fn obstruction() {
        let gamma = "1 4 5 17 19 27 76 77 97 157 354 331 371 535 972";
        let out = obstruct(gamma, true);
        assert_eq!(status(&out), "obstructed");
        assert!(out.contains("7376"));
    }
}
