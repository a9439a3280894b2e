use std::panic::{catch_unwind, AssertUnwindSafe};

use scpkit::moments2d::{column_relations, hyponormality_matrix, moment_matrix, MomentSeq2};
use scpkit::scp1d::{scc_check, scc_complete};
use scpkit::scp2d::{
    flat_obstruction_check, measure_from_flat, quadratic_scp, singular_m2, CompletionResult, ObstructionStatus,
    QuadraticData,
};
use scpkit::shifts::{moments_from_weights, moments_of_measure, WeightFamily2};
use scpkit::{Error, Result};

use crate::instance::{parse_instance, Instance, InstanceError, Payload};
use crate::report::{atoms1, atoms2, matrix, weight_map, NewWeightsOut, Report};

pub const COMMANDS: [&str; 6] = ["check", "complete", "translate", "relations", "obstruct", "hypo"];

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::NoCompletion(_) => "no_completion",
        Error::Unsupported(_) | Error::UnsupportedDegree(_) | Error::NotSingular => "unsupported",
        Error::Internal(_)
        | Error::NotSquare { .. }
        | Error::NotSymmetric
        | Error::DimensionMismatch { .. }
        | Error::Range
        | Error::InvalidMeasure(_) => "internal_error",
        _ => "input_error",
    }
}

fn failure(command: &str, kind: &str, e: &Error) -> Report {
    let mut r = Report::new(command, kind, status_of(e));
    r.message = Some(e.to_string());
    r
}

/// Two-variable moments of the payload, translated when requested.
fn moments(inst: &Instance) -> Result<MomentSeq2> {
    let seq = match &inst.payload {
        Payload::Quadratic(d) => d.moments(),
        Payload::Family(w) => moments_from_weights(w)?,
        Payload::Moments(s) | Payload::Obstruction(s) => s.clone(),
        Payload::OneVariable(_) => {
            return Err(Error::Precondition("this command needs two-variable data".into()));
        }
    };
    Ok(match &inst.translate {
        Some((h, k)) => seq.translate(h, k),
        None => seq,
    })
}

fn quadratic_of(w: &WeightFamily2) -> Result<QuadraticData> {
    moments_from_weights(w)?;
    let get = |v: Option<&scpkit::Rat>| v.cloned().expect("level-1 weights present");
    QuadraticData::new(
        get(w.alpha_sq((0, 0))),
        get(w.beta_sq((0, 0))),
        get(w.alpha_sq((1, 0))),
        get(w.beta_sq((0, 1))),
        get(w.alpha_sq((0, 1))),
    )
}

fn solve_weights(inst: &Instance) -> Result<CompletionResult> {
    match &inst.payload {
        Payload::Quadratic(d) => quadratic_scp(d, inst.depth),
        Payload::Family(w) if w.m() == 1 => quadratic_scp(&quadratic_of(w)?, inst.depth),
        Payload::Family(w) if w.m() == 2 => singular_m2(w, inst.depth),
        Payload::Family(w) => Err(Error::UnsupportedDegree(w.m())),
        _ => unreachable!("weight payloads only"),
    }
}

fn completion_report(command: &str, kind: &str, res: &CompletionResult) -> Report {
    let mut r = Report::new(command, kind, "solved");
    r.case = Some(res.case_name());
    r.rank = Some(res.rank_m1);
    let w = &res.weights;
    r.new_weights = Some(NewWeightsOut { p: w.p.clone(), q: w.q.clone(), r: w.r.clone(), s: w.s.clone() });
    r.measure = Some(atoms2(&res.measure));
    r.matrices = Some(
        [("m2", &res.m2), ("mx", &res.mx), ("my", &res.my)]
            .into_iter()
            .map(|(k, m)| (k.to_string(), matrix(&m.mat)))
            .collect(),
    );
    r.checks = res.checks.clone();
    r.weights = Some(weight_map(&res.completion));
    for (k, v) in [("z", &res.z), ("y0", &res.y0), ("yc", &res.yc)] {
        if let Some(v) = v {
            r.details.insert(k.into(), v.to_string());
        }
    }
    r.details.insert("swapped".into(), res.swapped.to_string());
    r
}

fn no_translate(inst: &Instance) -> Result<()> {
    match (&inst.payload, &inst.translate) {
        (Payload::Quadratic(_) | Payload::Family(_) | Payload::OneVariable(_), Some(_)) => Err(Error::Precondition(
            "translate applies to moment data; use the translate command for weight data".into(),
        )),
        _ => Ok(()),
    }
}

fn check(inst: &Instance) -> Result<Report> {
    let kind = inst.payload.kind();
    no_translate(inst)?;
    match &inst.payload {
        Payload::OneVariable(w) => {
            let v = scc_check(w);
            let mut r = Report::new("check", kind, if v.admits_completion { "feasible" } else { "no_completion" });
            r.rank = Some(scpkit::exactla::rank(&v.hk));
            r.checks.insert("psd_hk".into(), v.psd_hk);
            r.checks.insert("psd_hx".into(), v.psd_hx);
            r.checks.insert("range".into(), v.range_ok);
            r.matrices = Some([("hk".into(), matrix(&v.hk)), ("hx".into(), matrix(&v.hx))].into());
            Ok(r)
        }
        Payload::Quadratic(_) | Payload::Family(_) => {
            let seq = moments(inst)?;
            if let Payload::Family(w) = &inst.payload {
                if w.m() >= 2 {
                    return match solve_weights(inst) {
                        Ok(res) => {
                            let mut r = Report::new("check", kind, "feasible");
                            r.rank = Some(res.rank_m1);
                            Ok(r)
                        }
                        Err(e) => Ok(failure("check", kind, &e)),
                    };
                }
            }
            let m1 = moment_matrix(&seq, 1)?;
            let psd = m1.is_psd();
            let mut r = Report::new("check", kind, if psd { "feasible" } else { "no_completion" });
            r.rank = Some(m1.rank());
            r.checks.insert("psd_m1".into(), psd);
            r.matrices = Some([("m1".into(), matrix(&m1.mat))].into());
            Ok(r)
        }
        Payload::Moments(_) => {
            let seq = moments(inst)?;
            let n = seq.degree_bound() / 2;
            let mn = moment_matrix(&seq, n)?;
            let mut r = Report::new("check", kind, "feasible");
            r.rank = Some(mn.rank());
            r.checks.insert(format!("psd_m{n}"), mn.is_psd());
            if seq.degree_bound() >= 1 {
                let nl = (seq.degree_bound() - 1) / 2;
                for (name, axis) in [("x", scpkit::moments2d::Axis::X), ("y", scpkit::moments2d::Axis::Y)] {
                    let l = scpkit::moments2d::localizing_matrix(&seq, nl, axis)?;
                    r.checks.insert(format!("psd_m{name}{nl}"), l.is_psd());
                }
            }
            if r.checks.values().any(|ok| !ok) {
                r.status = "no_completion".into();
            }
            Ok(r)
        }
        Payload::Obstruction(_) => obstruct(inst, "check"),
    }
}

fn complete(inst: &Instance) -> Result<Report> {
    let kind = inst.payload.kind();
    no_translate(inst)?;
    match &inst.payload {
        Payload::OneVariable(w) => {
            let mu = scc_complete(w)?;
            let mut r = Report::new("complete", kind, "solved");
            r.rank = Some(mu.len());
            r.measure = Some(atoms1(&mu));
            r.moments = Some(mu.moments(inst.depth + 1));
            Ok(r)
        }
        Payload::Quadratic(_) | Payload::Family(_) => Ok(completion_report("complete", kind, &solve_weights(inst)?)),
        Payload::Moments(_) => {
            let seq = moments(inst)?;
            let n = seq.degree_bound() / 2;
            if n == 0 {
                return Err(Error::InsufficientDegree { need: 2, have: seq.degree_bound() });
            }
            let mn = moment_matrix(&seq, n)?;
            if !mn.is_psd() {
                return Err(Error::NoCompletion(format!("M({n}) is not positive semi-definite")));
            }
            let rank = mn.rank();
            if rank != moment_matrix(&seq, n - 1)?.rank() {
                return Err(Error::Unsupported(format!("M({n}) is not a flat extension of M({})", n - 1)));
            }
            let mu = measure_from_flat(&mn)?;
            let mut r = Report::new("complete", kind, "solved");
            r.rank = Some(rank);
            r.measure = Some(atoms2(&mu));
            r.checks.insert("interpolates".into(), moments_of_measure(&mu, seq.degree_bound()) == seq);
            Ok(r)
        }
        Payload::Obstruction(_) => obstruct(inst, "complete"),
    }
}

fn translate(inst: &Instance) -> Result<Report> {
    let Some((h, k)) = &inst.translate else {
        return Err(Error::Precondition("translate needs a \"translate\": [h, k] field".into()));
    };
    let seq = moments(inst)?;
    let mut r = Report::new("translate", inst.payload.kind(), "ok");
    r.moments = Some(seq.table().to_vec());
    r.details.insert("h".into(), h.to_string());
    r.details.insert("k".into(), k.to_string());
    Ok(r)
}

fn relations(inst: &Instance) -> Result<Report> {
    no_translate(inst)?;
    let seq = moments(inst)?;
    let n = seq.degree_bound() / 2;
    let mn = moment_matrix(&seq, n)?;
    let mut r = Report::new("relations", inst.payload.kind(), "ok");
    r.rank = Some(mn.rank());
    r.relations = Some(column_relations(&mn)?.iter().map(ToString::to_string).collect());
    r.details.insert("n".into(), n.to_string());
    Ok(r)
}

fn obstruct(inst: &Instance, command: &str) -> Result<Report> {
    no_translate(inst)?;
    let rep = flat_obstruction_check(&moments(inst)?)?;
    let status = match &rep.status {
        ObstructionStatus::Obstructed => "obstructed",
        ObstructionStatus::FlatFeasible => "feasible",
        ObstructionStatus::Unsupported(_) => "unsupported",
    };
    let mut r = Report::new(command, inst.payload.kind(), status);
    if let ObstructionStatus::Unsupported(why) = &rep.status {
        r.message = Some(why.clone());
    }
    r.rank = Some(rep.rank);
    r.relations = rep.relation.as_ref().map(|rel| vec![rel.to_string()]);
    if let Some((h, k)) = &rep.lines {
        r.details.insert("h".into(), h.to_string());
        r.details.insert("k".into(), k.to_string());
    }
    for (m, a) in &rep.coefficients {
        r.details.insert(format!("A_{m}"), a.to_string());
    }
    for ((i, j), f) in &rep.propagated {
        r.details.insert(format!("gamma({i},{j})"), f.to_string());
    }
    if let Some(w) = &rep.witness {
        r.witness = Some([w.combination.clone(), w.entry.clone()]);
        r.details.insert("witness_row".into(), w.row.to_string());
    }
    Ok(r)
}

fn hypo(inst: &Instance) -> Result<Report> {
    let kind = inst.payload.kind();
    let (seq, window) = match &inst.payload {
        Payload::Quadratic(_) | Payload::Family(_) => {
            no_translate(inst)?;
            let res = solve_weights(inst)?;
            (moments_of_measure(&res.measure, inst.depth + 1), inst.depth.saturating_sub(2))
        }
        _ => {
            let seq = moments(inst)?;
            let d = seq.degree_bound();
            if d < 2 {
                return Err(Error::InsufficientDegree { need: 2, have: d });
            }
            (seq, d - 2)
        }
    };
    let mut r = Report::new("hypo", kind, "feasible");
    for level in 0..=window {
        for i in 0..=level {
            let m = hyponormality_matrix(&seq, (i, level - i), 1)?;
            r.checks.insert(format!("M_u(1) u=({i},{})", level - i), m.is_psd());
        }
    }
    if r.checks.values().any(|ok| !ok) {
        r.status = "no_completion".into();
    }
    Ok(r)
}

/// Dispatches `command` on a parsed instance. Never panics: a tripped assertion inside the
/// solvers is reported as an internal error.
pub fn run(command: &str, inst: &Instance) -> Report {
    let kind = inst.payload.kind();
    let outcome = catch_unwind(AssertUnwindSafe(|| match command {
        "check" => check(inst),
        "complete" => complete(inst),
        "translate" => translate(inst),
        "relations" => relations(inst),
        "obstruct" => obstruct(inst, "obstruct"),
        "hypo" => hypo(inst),
        other => Err(Error::Precondition(format!("unknown command {other:?}"))),
    }));
    match outcome {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => failure(command, kind, &e),
        Err(_) => {
            let mut r = Report::new(command, kind, "internal_error");
            r.message = Some("solver panicked".into());
            r
        }
    }
}

/// Parses `input` and runs `command`; `depth` overrides the instance's depth.
pub fn run_bytes(command: &str, input: &[u8], depth: Option<usize>) -> Report {
    match parse_instance(input) {
        Ok(mut inst) => {
            if let Some(d) = depth {
                inst.depth = d;
            }
            run(command, &inst)
        }
        Err(e) => {
            let mut r = Report::new(command, "unknown", "input_error");
            r.message = Some(e.to_string());
            if let InstanceError::Validation(_) = e {
                r.details.insert("error".into(), "validation".into());
            } else {
                r.details.insert("error".into(), "parse".into());
            }
            r
        }
    }
}
