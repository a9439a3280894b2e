//! Two-variable subnormal completions: quadratic data, the singular `m = 2` case, and
//! detection of moment data that admit no flat extension.

mod obstruction;
mod quadratic;
mod singular;
mod variety;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactla::{Mat, Rat};
use crate::moments2d::{MomentMat, MomentSeq2};
use crate::shifts::{moments_from_weights, moments_of_measure, AtomicMeasure2, WeightFamily2};

pub use obstruction::{flat_obstruction_check, AffineForm, ObstructionReport, ObstructionStatus};
pub use quadratic::{build_flat_m2, quadratic_scp};
pub use singular::singular_m2;
pub use variety::measure_from_flat;

/// Quadratic initial data `a = α₀₀², b = β₀₀², c = α₁₀², d = β₀₁², e = α₀₁²`.
///
/// The remaining weight `f = β₁₀² = be/a` is forced by commutativity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticData {
    a: Rat,
    b: Rat,
    c: Rat,
    d: Rat,
    e: Rat,
}

impl QuadraticData {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat, e: Rat) -> Result<QuadraticData> {
        for (name, v) in [("a", &a), ("b", &b), ("c", &c), ("d", &d), ("e", &e)] {
            if !v.is_positive() {
                return Err(Error::Positivity(format!("{name} = {v} must be positive")));
            }
        }
        Ok(QuadraticData { a, b, c, d, e })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64, e: i64) -> Result<QuadraticData> {
        QuadraticData::new(Rat::int(a), Rat::int(b), Rat::int(c), Rat::int(d), Rat::int(e))
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }
    pub fn b(&self) -> &Rat {
        &self.b
    }
    pub fn c(&self) -> &Rat {
        &self.c
    }
    pub fn d(&self) -> &Rat {
        &self.d
    }
    pub fn e(&self) -> &Rat {
        &self.e
    }

    pub fn f(&self) -> Rat {
        &self.b * &self.e / &self.a
    }

    pub fn family(&self) -> WeightFamily2 {
        WeightFamily2::quadratic(&self.a, &self.b, &self.c, &self.d, &self.e)
            .expect("positive data form a valid family")
    }

    /// `1; a, b; ac, be, bd`.
    pub fn moments(&self) -> MomentSeq2 {
        moments_from_weights(&self.family()).expect("quadratic families commute")
    }

    pub fn m1(&self) -> Mat {
        let (a, b) = (&self.a, &self.b);
        let (ac, be, bd) = (a * &self.c, b * &self.e, b * &self.d);
        Mat::from_rows(vec![
            vec![Rat::one(), a.clone(), b.clone()],
            vec![a.clone(), ac, be.clone()],
            vec![b.clone(), be, bd],
        ])
    }

    /// Data of the same problem with the two variables exchanged.
    pub fn swapped(&self) -> QuadraticData {
        QuadraticData {
            a: self.b.clone(),
            b: self.a.clone(),
            c: self.d.clone(),
            d: self.c.clone(),
            e: self.f(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CaseTag {
    Rank1,
    AEqC,
    Rank2,
    Rank3EEqC,
    Rank3ELtC,
    SingularRank1,
    SingularRank2,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Rank1 => "rank1",
            CaseTag::AEqC => "a_eq_c",
            CaseTag::Rank2 => "rank2",
            CaseTag::Rank3EEqC => "rank3_e_eq_c",
            CaseTag::Rank3ELtC => "rank3_e_lt_c",
            CaseTag::SingularRank1 => "singular_rank1",
            CaseTag::SingularRank2 => "singular_rank2",
        })
    }
}

/// The quadratic-level weights of a completion: `p = α̂₂₀², q = α̂₁₁², r = α̂₀₂², s = β̂₀₂²`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NewWeights {
    pub p: Rat,
    pub q: Rat,
    pub r: Rat,
    pub s: Rat,
}

impl NewWeights {
    fn of(w: &WeightFamily2) -> NewWeights {
        let get = |v: Option<&Rat>| v.expect("level-2 weights present").clone();
        NewWeights {
            p: get(w.alpha_sq((2, 0))),
            q: get(w.alpha_sq((1, 1))),
            r: get(w.alpha_sq((0, 2))),
            s: get(w.beta_sq((0, 2))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompletionResult {
    pub case: CaseTag,
    /// Solved after exchanging the variables.
    pub swapped: bool,
    pub rank_m1: usize,
    pub weights: NewWeights,
    /// The flat `M(2)` of the completion.
    pub m2: MomentMat,
    pub mx: MomentMat,
    pub my: MomentMat,
    pub measure: AtomicMeasure2,
    /// Weights of the subnormal completion through the requested depth.
    pub completion: WeightFamily2,
    pub z: Option<Rat>,
    pub y0: Option<Rat>,
    pub yc: Option<Rat>,
    /// Named identity checks performed along the way; all must hold.
    pub checks: BTreeMap<String, bool>,
}

impl CompletionResult {
    /// Case name, with a `_swapped` suffix when the variables were exchanged.
    pub fn case_name(&self) -> String {
        if self.swapped {
            format!("{}_swapped", self.case)
        } else {
            self.case.to_string()
        }
    }
}

/// True iff `mu` interpolates the moments of `w`, lies in the closed first quadrant and has
/// an atom in the open quadrant.
pub fn verify_completion(w: &WeightFamily2, mu: &AtomicMeasure2) -> bool {
    let Ok(expected) = moments_from_weights(w) else {
        return false;
    };
    moments_of_measure(mu, w.m() + 1) == expected
        && mu.in_closed_quadrant()
        && mu.has_open_quadrant_atom()
}

/// Fails with an internal error naming the first violated check.
fn require_checks(checks: &BTreeMap<String, bool>) -> Result<()> {
    match checks.iter().find(|(_, ok)| !**ok) {
        None => Ok(()),
        Some((name, _)) => Err(Error::Internal(format!("check `{name}` failed"))),
    }
}
