use std::collections::BTreeMap;

use super::measure::{moments_of_measure, AtomicMeasure2};
use crate::error::{Error, Result};
use crate::exactla::Rat;
use crate::moments2d::MomentSeq2;

/// Shift index `k = (k₁, k₂)`: `k₁` counts x-steps, `k₂` counts y-steps.
pub type ShiftIndex = (usize, usize);

/// The only place where shift indices meet moment indices: `γ_k ↔ γ_{k₂,k₁}`
/// (moment tables are indexed by y-degree first).
pub fn shift_moment(seq: &MomentSeq2, k: ShiftIndex) -> Option<&Rat> {
    seq.get(k.1, k.0)
}

fn indices(m: usize) -> impl Iterator<Item = ShiftIndex> {
    (0..=m).flat_map(move |d| (0..=d).map(move |k2| (d - k2, k2)))
}

/// Squared weights `α_k², β_k²` for `|k| ≤ m` of a two-variable weighted shift.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightFamily2 {
    m: usize,
    alpha_sq: BTreeMap<ShiftIndex, Rat>,
    beta_sq: BTreeMap<ShiftIndex, Rat>,
}

impl WeightFamily2 {
    /// Both maps must hold exactly the indices `|k| ≤ m`, with positive values.
    pub fn new(
        m: usize,
        alpha_sq: BTreeMap<ShiftIndex, Rat>,
        beta_sq: BTreeMap<ShiftIndex, Rat>,
    ) -> Result<WeightFamily2> {
        for (name, map) in [("α²", &alpha_sq), ("β²", &beta_sq)] {
            if map.len() != (m + 1) * (m + 2) / 2 || indices(m).any(|k| !map.contains_key(&k)) {
                return Err(Error::Precondition(format!(
                    "{name} must be given for every |k| ≤ {m}"
                )));
            }
            if let Some((k, v)) = map.iter().find(|(_, v)| !v.is_positive()) {
                return Err(Error::Positivity(format!("{name}{k:?} = {v}")));
            }
        }
        Ok(WeightFamily2 {
            m,
            alpha_sq,
            beta_sq,
        })
    }

    pub fn from_fn(
        m: usize,
        mut alpha: impl FnMut(ShiftIndex) -> Rat,
        mut beta: impl FnMut(ShiftIndex) -> Rat,
    ) -> Result<WeightFamily2> {
        WeightFamily2::new(
            m,
            indices(m).map(|k| (k, alpha(k))).collect(),
            indices(m).map(|k| (k, beta(k))).collect(),
        )
    }

    /// The `m = 1` family with `α₀₀² = a, β₀₀² = b, α₁₀² = c, β₀₁² = d, α₀₁² = e` and
    /// `β₁₀² = be/a`, the value forced by commutativity.
    pub fn quadratic(a: &Rat, b: &Rat, c: &Rat, d: &Rat, e: &Rat) -> Result<WeightFamily2> {
        let f = b * e / a;
        WeightFamily2::new(
            1,
            BTreeMap::from([((0, 0), a.clone()), ((1, 0), c.clone()), ((0, 1), e.clone())]),
            BTreeMap::from([((0, 0), b.clone()), ((1, 0), f), ((0, 1), d.clone())]),
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn alpha_sq(&self, k: ShiftIndex) -> Option<&Rat> {
        self.alpha_sq.get(&k)
    }

    pub fn beta_sq(&self, k: ShiftIndex) -> Option<&Rat> {
        self.beta_sq.get(&k)
    }

    pub fn alpha_map(&self) -> &BTreeMap<ShiftIndex, Rat> {
        &self.alpha_sq
    }

    pub fn beta_map(&self) -> &BTreeMap<ShiftIndex, Rat> {
        &self.beta_sq
    }

    /// Restriction to `|k| ≤ m`.
    pub fn truncate(&self, m: usize) -> Result<WeightFamily2> {
        if m > self.m {
            return Err(Error::Precondition(format!("cannot truncate level {} to {m}", self.m)));
        }
        let keep = |map: &BTreeMap<ShiftIndex, Rat>| {
            map.iter()
                .filter(|(k, _)| k.0 + k.1 <= m)
                .map(|(k, v)| (*k, v.clone()))
                .collect()
        };
        WeightFamily2::new(m, keep(&self.alpha_sq), keep(&self.beta_sq))
    }

    /// First `k` at which `β²_{k+ε₁}α²_k ≠ α²_{k+ε₂}β²_k`.
    fn commutativity_defect(&self) -> Option<ShiftIndex> {
        let m = self.m.checked_sub(1)?;
        indices(m).find(|&(k1, k2)| {
            let k = (k1, k2);
            &self.beta_sq[&(k1 + 1, k2)] * &self.alpha_sq[&k]
                != &self.alpha_sq[&(k1, k2 + 1)] * &self.beta_sq[&k]
        })
    }
}

pub fn check_commutative(w: &WeightFamily2) -> bool {
    w.commutativity_defect().is_none()
}

/// Moments `γ_k`, `|k| ≤ m + 1`, with `γ₀ = 1`, accumulated along x-steps and then y-steps.
///
/// The y-then-x path is computed as well and must agree.
pub fn moments_from_weights(w: &WeightFamily2) -> Result<MomentSeq2> {
    if let Some((k1, k2)) = w.commutativity_defect() {
        return Err(Error::NonCommutative(k1, k2));
    }
    let x_then_y = |(k1, k2): ShiftIndex| -> Rat {
        let along_x: Rat = (0..k1).map(|t| w.alpha_sq[&(t, 0)].clone()).product();
        let then_y: Rat = (0..k2).map(|s| w.beta_sq[&(k1, s)].clone()).product();
        along_x * then_y
    };
    let y_then_x = |(k1, k2): ShiftIndex| -> Rat {
        let along_y: Rat = (0..k2).map(|s| w.beta_sq[&(0, s)].clone()).product();
        let then_x: Rat = (0..k1).map(|t| w.alpha_sq[&(t, k2)].clone()).product();
        along_y * then_x
    };
    let seq = MomentSeq2::from_fn(w.m + 1, |i, j| x_then_y((j, i)))?;
    for k in indices(w.m + 1) {
        if *shift_moment(&seq, k).expect("in range") != y_then_x(k) {
            return Err(Error::Internal(format!("moment path dependence at k = {k:?}")));
        }
    }
    Ok(seq)
}

/// `α_k² = γ_{k+ε₁}/γ_k`, `β_k² = γ_{k+ε₂}/γ_k` for `|k| ≤ m`; needs `γ₀ = 1` scaling
/// only up to a constant, and degree `m + 1` data.
pub fn weights_from_moments(seq: &MomentSeq2, m: usize) -> Result<WeightFamily2> {
    seq.require_degree(m + 1)?;
    let mut alpha = BTreeMap::new();
    let mut beta = BTreeMap::new();
    for k in indices(m) {
        let g = shift_moment(seq, k).expect("in range");
        if !g.is_positive() {
            return Err(Error::Positivity(format!(
                "moment γ_{{{},{}}} = {g} is not positive",
                k.1, k.0
            )));
        }
        let gx = shift_moment(seq, (k.0 + 1, k.1)).expect("in range");
        let gy = shift_moment(seq, (k.0, k.1 + 1)).expect("in range");
        alpha.insert(k, gx / g);
        beta.insert(k, gy / g);
    }
    WeightFamily2::new(m, alpha, beta)
}

/// The weight family of the shift whose Berger measure is `mu`, through level `depth`.
pub fn weights_from_measure(mu: &AtomicMeasure2, depth: usize) -> Result<WeightFamily2> {
    if !mu.in_closed_quadrant() {
        return Err(Error::Positivity("atoms must lie in the closed first quadrant".into()));
    }
    let w = weights_from_moments(&moments_of_measure(mu, depth + 1), depth)?;
    debug_assert!(check_commutative(&w));
    Ok(w)
}

/// Squared weights `α₀², …, α_m²` of a one-variable shift.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightSeq1 {
    alpha_sq: Vec<Rat>,
}

impl WeightSeq1 {
    pub fn new(alpha_sq: Vec<Rat>) -> Result<WeightSeq1> {
        if alpha_sq.is_empty() {
            return Err(Error::Precondition("at least one weight is required".into()));
        }
        if let Some(v) = alpha_sq.iter().find(|v| !v.is_positive()) {
            return Err(Error::Positivity(format!("weight² {v}")));
        }
        Ok(WeightSeq1 { alpha_sq })
    }

    pub fn alpha_sq(&self) -> &[Rat] {
        &self.alpha_sq
    }

    pub fn m(&self) -> usize {
        self.alpha_sq.len() - 1
    }

    /// `[γ₀, …, γ_{m+1}]` with `γ₀ = 1`.
    pub fn moments(&self) -> Vec<Rat> {
        let mut out = vec![Rat::one()];
        for a in &self.alpha_sq {
            let next = out.last().expect("nonempty") * a;
            out.push(next);
        }
        out
    }

    /// `α_k² = γ_{k+1}/γ_k` for `k ≤ m`.
    pub fn from_moments(gamma: &[Rat], m: usize) -> Result<WeightSeq1> {
        if gamma.len() < m + 2 {
            return Err(Error::InsufficientDegree {
                need: m + 1,
                have: gamma.len().saturating_sub(1),
            });
        }
        if let Some(g) = gamma[..=m].iter().find(|g| !g.is_positive()) {
            return Err(Error::Positivity(format!("moment {g}")));
        }
        WeightSeq1::new((0..=m).map(|k| &gamma[k + 1] / &gamma[k]).collect())
    }
}
