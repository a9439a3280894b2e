use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::exactla::{inverse, Rat};
use crate::moments2d::{column_relations, moment_matrix, monomial_basis, Monomial, MomentSeq2, PolyRelation};

/// `c + u·γ_{0,5} + v·γ_{5,0}`: an exact affine form in the two free degree-5 moments.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AffineForm {
    pub c: Rat,
    pub u: Rat,
    pub v: Rat,
}

impl AffineForm {
    pub fn constant(c: Rat) -> AffineForm {
        AffineForm { c, ..AffineForm::default() }
    }

    fn param_u() -> AffineForm {
        AffineForm { u: Rat::one(), ..AffineForm::default() }
    }

    fn param_v() -> AffineForm {
        AffineForm { v: Rat::one(), ..AffineForm::default() }
    }

    pub fn is_constant(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn add(&self, o: &AffineForm) -> AffineForm {
        AffineForm { c: &self.c + &o.c, u: &self.u + &o.u, v: &self.v + &o.v }
    }

    pub fn sub(&self, o: &AffineForm) -> AffineForm {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, s: &Rat) -> AffineForm {
        AffineForm { c: &self.c * s, u: &self.u * s, v: &self.v * s }
    }

    /// Product, provided one factor is constant.
    pub fn mul(&self, o: &AffineForm) -> Option<AffineForm> {
        if self.is_constant() {
            Some(o.scale(&self.c))
        } else if o.is_constant() {
            Some(self.scale(&o.c))
        } else {
            None
        }
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut push = |coef: &Rat, var: &str| {
            if coef.is_zero() {
                return;
            }
            let mag = coef.abs();
            let body = if var.is_empty() || !mag.is_one() { format!("{mag}{var}") } else { var.to_string() };
            match (out.is_empty(), coef.is_negative()) {
                (true, true) => out.push_str(&format!("-{body}")),
                (true, false) => out.push_str(&body),
                (false, true) => out.push_str(&format!(" - {body}")),
                (false, false) => out.push_str(&format!(" + {body}")),
            }
        };
        push(&self.c, "");
        push(&self.u, "u");
        push(&self.v, "v");
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ObstructionStatus {
    /// Some row forces `combination = entry` with two distinct constants: no flat extension.
    Obstructed,
    /// Every checkable row is consistent.
    FlatFeasible,
    /// The test does not apply, or a row depends on the free moments.
    Unsupported(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub row: Monomial,
    pub combination: Rat,
    pub entry: Rat,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ObstructionReport {
    pub status: ObstructionStatus,
    pub relation: Option<PolyRelation>,
    /// `(h, k)` with relation `(X − h)(Y − k) = 0`.
    pub lines: Option<(Rat, Rat)>,
    pub rank: usize,
    /// Degree-5 and degree-6 moments `γ_{i,j}` (i = y-degree) forced by the relation.
    pub propagated: BTreeMap<(usize, usize), AffineForm>,
    /// Coefficients of `X³` over the basis `1, X, Y, X², Y²`.
    pub coefficients: Vec<(Monomial, AffineForm)>,
    pub witness: Option<Witness>,
}

impl ObstructionReport {
    fn unsupported(rank: usize, relation: Option<PolyRelation>, why: impl Into<String>) -> ObstructionReport {
        ObstructionReport {
            status: ObstructionStatus::Unsupported(why.into()),
            lines: relation.as_ref().and_then(PolyRelation::as_product_of_lines),
            relation,
            rank,
            propagated: BTreeMap::new(),
            coefficients: Vec::new(),
            witness: None,
        }
    }
}

/// Moments through degree 6 as affine forms, where known.
struct Extended<'a> {
    seq: &'a MomentSeq2,
    h: Rat,
    k: Rat,
    propagated: BTreeMap<(usize, usize), AffineForm>,
}

impl Extended<'_> {
    /// `γ_{i,j}`; `None` for the undetermined `γ_{0,6}` and `γ_{6,0}`.
    fn get(&mut self, i: usize, j: usize) -> Option<AffineForm> {
        if i + j <= 4 {
            return Some(AffineForm::constant(self.seq.gamma(i, j)));
        }
        match (i, j) {
            (0, 5) => return Some(AffineForm::param_u()),
            (5, 0) => return Some(AffineForm::param_v()),
            (0, _) | (_, 0) => return None,
            _ => {}
        }
        if let Some(v) = self.propagated.get(&(i, j)) {
            return Some(v.clone());
        }
        // y^i x^j = k·y^{i-1}x^j + h·y^i x^{j-1} − hk·y^{i-1}x^{j-1}
        let hk = &self.h * &self.k;
        let v = self
            .get(i - 1, j)?
            .scale(&self.k.clone())
            .add(&self.get(i, j - 1)?.scale(&self.h.clone()))
            .sub(&self.get(i - 1, j - 1)?.scale(&hk));
        self.propagated.insert((i, j), v.clone());
        Some(v)
    }

    fn at(&mut self, m: Monomial) -> Option<AffineForm> {
        self.get(m.ydeg, m.xdeg)
    }
}

/// Tests whether degree-4 data whose `M(2)` has the single relation `(X − h)(Y − k) = 0`
/// can have a flat extension `M(3)`.
///
/// The relation fixes every mixed moment of degree 5 and 6; only `u = γ_{0,5}` and
/// `v = γ_{5,0}` stay free (degree-6 pure powers are never needed except in skipped rows).
/// Flatness forces `X³ = Σ A_m m` over `m ∈ {1, X, Y, X², Y²}`, with `A` fixed by the rows
/// of that basis. Every other row of `M(3)` must then agree.
pub fn flat_obstruction_check(seq: &MomentSeq2) -> Result<ObstructionReport> {
    let seq = seq.truncate(4)?;
    let m2 = moment_matrix(&seq, 2)?;
    let rank = m2.rank();
    if !m2.is_psd() {
        return Ok(ObstructionReport::unsupported(rank, None, "M(2) is not positive semi-definite"));
    }
    let relations = column_relations(&m2)?;
    if relations.len() != 1 {
        return Ok(ObstructionReport::unsupported(
            rank,
            None,
            format!("expected exactly one column relation, found {}", relations.len()),
        ));
    }
    let relation = relations.into_iter().next().expect("one relation");
    let Some((h, k)) = relation.as_product_of_lines() else {
        return Ok(ObstructionReport::unsupported(
            rank,
            Some(relation),
            "the relation is not a product of two axis-parallel lines",
        ));
    };

    let basis = [Monomial::ONE, Monomial::X, Monomial::Y, Monomial::new(0, 2), Monomial::new(2, 0)];
    let idx: Vec<usize> = basis.iter().map(Monomial::index).collect();
    let g = m2.mat.select(&idx, &idx);
    let Ok(g_inv) = inverse(&g) else {
        return Ok(ObstructionReport::unsupported(
            rank,
            Some(relation),
            "compression of M(2) to 1, X, Y, X², Y² is singular",
        ));
    };

    let mut ext = Extended { seq: &seq, h: h.clone(), k: k.clone(), propagated: BTreeMap::new() };
    for d in 5..=6 {
        for i in 1..d {
            ext.get(i, d - i);
        }
    }
    let x3 = Monomial::new(0, 3);
    let rhs: Vec<AffineForm> = basis
        .iter()
        .map(|m| ext.at(m.times(&x3)).expect("degree ≤ 5"))
        .collect();
    let coeffs: Vec<AffineForm> = (0..basis.len())
        .map(|r| {
            rhs.iter()
                .enumerate()
                .fold(AffineForm::default(), |acc, (c, f)| acc.add(&f.scale(&g_inv[(r, c)])))
        })
        .collect();

    let mut witness = None;
    let mut dependent = Vec::new();
    for row in monomial_basis(3).into_iter().filter(|m| !basis.contains(m)) {
        let Some(entry) = ext.at(row.times(&x3)) else { continue };
        let mut combination = Some(AffineForm::default());
        for (m, a) in basis.iter().zip(&coeffs) {
            combination = match (combination, ext.at(row.times(m))) {
                (Some(acc), Some(g)) => a.mul(&g).map(|t| acc.add(&t)),
                _ => None,
            };
        }
        let Some(combination) = combination else {
            dependent.push(row);
            continue;
        };
        let diff = entry.sub(&combination);
        if !diff.is_constant() {
            dependent.push(row);
        } else if !diff.c.is_zero() && witness.is_none() {
            witness = Some(Witness { row, combination: combination.c, entry: entry.c });
        }
    }

    let status = if witness.is_some() {
        ObstructionStatus::Obstructed
    } else if !dependent.is_empty() {
        let rows: Vec<String> = dependent.iter().map(ToString::to_string).collect();
        ObstructionStatus::Unsupported(format!("rows {} depend on the free moments", rows.join(", ")))
    } else {
        ObstructionStatus::FlatFeasible
    };
    Ok(ObstructionReport {
        status,
        relation: Some(relation),
        lines: Some((h, k)),
        rank,
        propagated: ext.propagated,
        coefficients: basis.iter().copied().zip(coeffs).collect(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn translated() -> MomentSeq2 {
        MomentSeq2::from_i64(&[1, 4, 5, 17, 19, 27, 76, 77, 97, 157, 354, 331, 371, 535, 972]).unwrap()
    }

    fn form(c: i64, u: i64, v: i64) -> AffineForm {
        AffineForm { c: Rat::int(c), u: Rat::int(u), v: Rat::int(v) }
    }

    #[test]
    fn translated_example_is_obstructed() {
        let rep = flat_obstruction_check(&translated()).unwrap();
        assert_eq!(rep.status, ObstructionStatus::Obstructed);
        assert_eq!(rep.rank, 5);
        assert_eq!(rep.lines, Some((Rat::int(3), Rat::int(4))));
        assert_eq!(rep.propagated[&(1, 4)], form(1497, 0, 0));
        assert_eq!(rep.propagated[&(1, 5)], form(243, 4, 0));
        assert_eq!(rep.propagated[&(5, 1)], form(1024, 0, 3));
        let coeffs: Vec<String> = rep.coefficients.iter().map(|(_, a)| a.to_string()).collect();
        assert_eq!(coeffs, ["-25513 + 15u", "13587 - 8u", "1", "-1692 + u", "0"]);
        let w = rep.witness.unwrap();
        assert_eq!((w.row, w.combination, w.entry), (Monomial::new(3, 0), Rat::int(7376), Rat::int(7375)));
    }

    #[test]
    fn untranslated_example_is_obstructed() {
        let seq = MomentSeq2::from_i64(&[1, 1, 1, 2, 0, 3, 4, 0, 0, 9, 9, 0, 0, 0, 28]).unwrap();
        let rep = flat_obstruction_check(&seq).unwrap();
        assert_eq!(rep.lines, Some((Rat::zero(), Rat::zero())));
        assert_eq!(rep.status, ObstructionStatus::Obstructed);
    }

    #[test]
    fn other_shapes_are_unsupported() {
        // three atoms on a parabola-free configuration: several relations
        let seq = MomentSeq2::from_fn(4, |i, j| Rat::int(2).pow((i + j) as u32)).unwrap();
        let rep = flat_obstruction_check(&seq).unwrap();
        assert!(matches!(rep.status, ObstructionStatus::Unsupported(_)));
        assert!(flat_obstruction_check(&seq.truncate(3).unwrap()).is_err());
    }

    #[test]
    fn flat_quadratic_completion_is_out_of_shape() {
        let d = crate::scp2d::QuadraticData::from_i64(1, 1, 2, 2, 1).unwrap();
        let res = crate::scp2d::quadratic_scp(&d, 4).unwrap();
        let seq = crate::shifts::moments_of_measure(&res.measure, 4);
        let rep = flat_obstruction_check(&seq).unwrap();
        assert_eq!(rep.rank, 3);
        assert!(matches!(rep.status, ObstructionStatus::Unsupported(_)));
    }

    #[test]
    fn affine_display() {
        assert_eq!(form(0, 0, 0).to_string(), "0");
        assert_eq!(form(-3, 1, -2).to_string(), "-3 + u - 2v");
        assert!(form(1, 1, 0).mul(&form(2, 0, 1)).is_none());
        assert_eq!(form(2, 0, 0).mul(&form(1, 1, 0)), Some(form(2, 2, 0)));
    }
}
