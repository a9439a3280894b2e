use std::collections::BTreeMap;

use super::variety::measure_from_flat;
use super::{require_checks, verify_completion, CaseTag, CompletionResult, NewWeights, QuadraticData};
use crate::error::{Error, Result};
use crate::exactla::{flat_complete, is_psd, rank, Mat, Rat};
use crate::moments2d::{
    is_moment_matrix, localizing_matrix, moment_matrix, monomial_basis, Axis, MatrixKind, MomentMat,
};
use crate::shifts::{moments_of_measure, weights_from_measure, AtomicMeasure2};

/// Chooses `p, q, r, s` and completes `M(2)` as the flat extension of `M(1)`.
///
/// Requires `M(1) ⪰ 0`, `c ≥ e` and `a < c`. With `e < c`, `r` is the extremal value `ef/d`
/// and `s` the root of `det M_y(2)(s) = 0`; with `e = c`, `r = c` and `s = d`.
pub fn build_flat_m2(d: &QuadraticData) -> Result<(NewWeights, MomentMat)> {
    let (a, b, c, dd, e) = (d.a(), d.b(), d.c(), d.d(), d.e());
    let m1 = d.m1();
    if !is_psd(&m1)? {
        return Err(Error::NoCompletion("M(1) is not positive semi-definite".into()));
    }
    if c < e || a >= c {
        return Err(Error::Precondition("flat M(2) construction needs c ≥ e and a < c".into()));
    }
    let f = d.f();
    let p = c.clone();
    let q = c.clone();
    let (r, s) = if e == c {
        (c.clone(), dd.clone())
    } else {
        let r = e * &f / dd;
        let num = a * a * c * dd * dd - Rat::int(2) * a * b * dd * e * e + b * b * e * e * e;
        let s = num / (a * a * dd * (c - e));
        (r, s)
    };
    let (ac, be, bd) = (a * c, b * e, b * dd);
    let bmat = Mat::from_rows(vec![
        vec![ac.clone(), be.clone(), bd.clone()],
        vec![&ac * &p, &be * &q, &bd * &r],
        vec![&be * &q, &bd * &r, &bd * &s],
    ]);
    let cmat = flat_complete(&m1, &bmat)
        .map_err(|_| Error::Internal("B block is not in the range of M(1)".into()))?;
    let m2 = MomentMat {
        n: 2,
        basis: monomial_basis(2),
        mat: Mat::block_symmetric(&m1, &bmat, &cmat)?,
        kind: MatrixKind::Moment,
    };
    if !is_moment_matrix(&m2) {
        return Err(Error::Internal("flat corner of M(2) is not Hankel".into()));
    }
    Ok((NewWeights { p, q, r, s }, m2))
}

/// Measure and bookkeeping from the oriented (`c ≥ e`) problem.
struct Oriented {
    case: CaseTag,
    measure: AtomicMeasure2,
    z: Option<Rat>,
    y0: Option<Rat>,
    yc: Option<Rat>,
    checks: BTreeMap<String, bool>,
}

fn rational_measure(items: &[((Rat, Rat), Rat)]) -> Result<AtomicMeasure2> {
    AtomicMeasure2::from_rationals(items)
}

fn solve_oriented(d: &QuadraticData, rank_m1: usize) -> Result<Oriented> {
    let (a, b, c, dd, e) = (d.a(), d.b(), d.c(), d.d(), d.e());
    let f = d.f();
    let mut checks = BTreeMap::new();
    if a == c {
        // Positivity of M(1) forces e = a and f = b ≤ d; b = d is the rank-one case.
        checks.insert("a_eq_c_forces_e_eq_a".into(), e == a && f == *b && b <= dd);
        require_checks(&checks)?;
        let ratio = b / dd;
        let measure = rational_measure(&[
            ((a.clone(), Rat::zero()), Rat::one() - &ratio),
            ((a.clone(), dd.clone()), ratio),
        ])?;
        return Ok(Oriented { case: CaseTag::AEqC, measure, z: None, y0: None, yc: None, checks });
    }

    let (nw, m2) = build_flat_m2(d)?;
    checks.insert("flat".into(), m2.rank() == rank_m1);
    let corner = |i: usize, j: usize| m2.mat[(3 + i, 3 + j)].clone();
    checks.insert("c13_eq_bcdr".into(), corner(0, 2) == b * c * dd * &nw.r);
    checks.insert("c13_eq_c22".into(), corner(0, 2) == corner(1, 1));
    if e < c {
        checks.insert("c22_eq_b2ce2_over_a".into(), corner(1, 1) == b * b * c * e * e / a);
        let gap = &nw.s - dd;
        let expected = e * (a * dd - b * e) * (a * dd - b * e) / (a * a * dd * (c - e));
        checks.insert("s_minus_d".into(), gap == expected && !gap.is_negative());
        checks.insert("r_ge_ef_over_d".into(), nw.r >= e * &f / dd);
    }
    let measure = measure_from_flat(&m2)?;
    let oriented_weights = NewWeights::of(&weights_from_measure(&measure, 2)?);
    checks.insert("new_weights_match_measure".into(), oriented_weights == nw);

    let (case, z, y0, yc) = match rank_m1 {
        2 => {
            let y0 = b * (c - e) / (c - a);
            let ratio = a / c;
            let expected = rational_measure(&[
                ((Rat::zero(), y0.clone()), Rat::one() - &ratio),
                ((c.clone(), f.clone()), ratio),
            ])?;
            checks.insert("two_atom_closed_form".into(), measure == expected);
            (CaseTag::Rank2, None, Some(y0), Some(f.clone()))
        }
        3 if e == c => (CaseTag::Rank3EEqC, None, None, None),
        3 => {
            let cdef = c * dd - e * &f;
            let z = &cdef / (c - e);
            let det_m1 = crate::exactla::det(&d.m1())?;
            let expected = rational_measure(&[
                ((Rat::zero(), Rat::zero()), det_m1 / (a * b * &cdef)),
                ((Rat::zero(), z.clone()), b * (c - e) * (c - e) / (c * &cdef)),
                ((c.clone(), f.clone()), a / c),
            ])?;
            checks.insert("three_atom_closed_form".into(), measure == expected);
            (CaseTag::Rank3ELtC, Some(z), None, None)
        }
        r => return Err(Error::Internal(format!("unexpected rank {r} of M(1)"))),
    };
    require_checks(&checks)?;
    Ok(Oriented { case, measure, z, y0, yc, checks })
}

/// Solves the subnormal completion problem for quadratic data.
///
/// Returns `NoCompletion` exactly when `M(1)` fails to be positive semi-definite. `depth`
/// (at least 2) is the level through which completion weights are reported.
pub fn quadratic_scp(d: &QuadraticData, depth: usize) -> Result<CompletionResult> {
    if depth < 2 {
        return Err(Error::Precondition("completion depth must be at least 2".into()));
    }
    let m1 = d.m1();
    if !is_psd(&m1)? {
        return Err(Error::NoCompletion("M(1) is not positive semi-definite".into()));
    }
    let rank_m1 = rank(&m1);
    let (oriented, swapped) = if rank_m1 == 1 {
        let o = Oriented {
            case: CaseTag::Rank1,
            measure: AtomicMeasure2::point(d.a().clone(), d.b().clone()),
            z: None,
            y0: None,
            yc: None,
            checks: BTreeMap::new(),
        };
        (o, false)
    } else if d.c() < d.e() {
        // cd ≥ ef makes d > f, so the exchanged problem satisfies c ≥ e.
        (solve_oriented(&d.swapped(), rank_m1)?, true)
    } else {
        (solve_oriented(d, rank_m1)?, false)
    };
    let measure = if swapped { oriented.measure.swapped() } else { oriented.measure };

    let seq = moments_of_measure(&measure, 4);
    let m2 = moment_matrix(&seq, 2)?;
    let mx = localizing_matrix(&seq, 1, Axis::X)?;
    let my = localizing_matrix(&seq, 1, Axis::Y)?;
    let completion = weights_from_measure(&measure, depth)?;
    let mut checks = oriented.checks;
    checks.insert("interpolates".into(), verify_completion(&d.family(), &measure));
    checks.insert("flat_rank".into(), m2.rank() == rank_m1);
    checks.insert("psd_m2".into(), m2.is_psd());
    checks.insert("psd_mx".into(), mx.is_psd());
    checks.insert("psd_my".into(), my.is_psd());
    checks.insert("atom_count".into(), measure.len() == rank_m1);
    let on_y_axis = measure.atoms().iter().filter(|(x, _)| x.is_zero()).count();
    let on_x_axis = measure.atoms().iter().filter(|(_, y)| y.is_zero()).count();
    checks.insert("atoms_on_x_eq_0".into(), on_y_axis == rank_m1 - mx.rank());
    checks.insert("atoms_on_y_eq_0".into(), on_x_axis == rank_m1 - my.rank());
    require_checks(&checks)?;
    Ok(CompletionResult {
        case: oriented.case,
        swapped,
        rank_m1,
        weights: NewWeights::of(&completion),
        m2,
        mx,
        my,
        measure,
        completion,
        z: oriented.z,
        y0: oriented.y0,
        yc: oriented.yc,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn data(v: [Rat; 5]) -> QuadraticData {
        let [a, b, c, d, e] = v;
        QuadraticData::new(a, b, c, d, e).unwrap()
    }

    #[test]
    fn rank_three_instance() {
        let d = QuadraticData::from_i64(1, 1, 2, 2, 1).unwrap();
        let (nw, m2) = build_flat_m2(&d).unwrap();
        assert_eq!(nw, NewWeights { p: rat!(2), q: rat!(2), r: rat!(1 / 2), s: rat!(5 / 2) });
        assert_eq!(m2.mat[(3, 5)], rat!(2));
        assert_eq!(m2.rank(), 3);

        let res = quadratic_scp(&d, 6).unwrap();
        assert_eq!(res.case_name(), "rank3_e_lt_c");
        assert_eq!(res.weights, nw);
        assert_eq!(res.z, Some(rat!(3)));
        assert_eq!(res.measure.to_string(), "(1/3)δ_{(0, 0)} + (1/6)δ_{(0, 3)} + (1/2)δ_{(2, 1)}");
        assert_eq!(res.completion.m(), 6);
        assert!(res.checks.values().all(|ok| *ok));
    }

    #[test]
    fn rank_one_and_degenerate() {
        let res = quadratic_scp(&QuadraticData::from_i64(1, 1, 1, 1, 1).unwrap(), 3).unwrap();
        assert_eq!(res.case, CaseTag::Rank1);
        assert_eq!(res.measure, AtomicMeasure2::point(rat!(1), rat!(1)));

        let res = quadratic_scp(&QuadraticData::from_i64(2, 1, 2, 4, 2).unwrap(), 3).unwrap();
        assert_eq!(res.case, CaseTag::AEqC);
        let expected = AtomicMeasure2::from_rationals(&[
            ((rat!(2), rat!(0)), rat!(3 / 4)),
            ((rat!(2), rat!(4)), rat!(1 / 4)),
        ])
        .unwrap();
        assert_eq!(res.measure, expected);
    }

    #[test]
    fn rank_two_instance() {
        let d = data([rat!(1), rat!(2), rat!(2), rat!(5 / 2), rat!(3 / 2)]);
        let res = quadratic_scp(&d, 4).unwrap();
        assert_eq!(res.case, CaseTag::Rank2);
        assert_eq!((res.y0.clone(), res.yc.clone()), (Some(rat!(1)), Some(rat!(3))));
        let expected = AtomicMeasure2::from_rationals(&[
            ((rat!(0), rat!(1)), rat!(1 / 2)),
            ((rat!(2), rat!(3)), rat!(1 / 2)),
        ])
        .unwrap();
        assert_eq!(res.measure, expected);
    }

    #[test]
    fn e_equals_c_instance() {
        let d = QuadraticData::from_i64(1, 1, 2, 3, 2).unwrap();
        let (nw, _) = build_flat_m2(&d).unwrap();
        assert_eq!((nw.r.clone(), nw.s.clone()), (rat!(2), rat!(3)));
        let res = quadratic_scp(&d, 4).unwrap();
        assert_eq!(res.case, CaseTag::Rank3EEqC);
        assert_eq!(res.measure.len(), 3);
    }

    #[test]
    fn swapped_instance() {
        let d = data([rat!(1), rat!(1), rat!(2), rat!(3), rat!(9 / 4)]);
        let res = quadratic_scp(&d, 3).unwrap();
        assert!(res.swapped);
        assert!(verify_completion(&d.family(), &res.measure));
        let direct = quadratic_scp(&d.swapped(), 3).unwrap();
        assert!(!direct.swapped);
        assert_eq!(direct.measure.swapped(), res.measure);
    }

    #[test]
    fn not_psd() {
        let d = data([rat!(1), rat!(1), rat!(1 / 2), rat!(1), rat!(1)]);
        assert!(matches!(quadratic_scp(&d, 3), Err(Error::NoCompletion(_))));
    }
}
