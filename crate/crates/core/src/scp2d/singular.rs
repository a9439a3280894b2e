use std::collections::BTreeMap;

use super::variety::measure_from_flat;
use super::{require_checks, verify_completion, CaseTag, CompletionResult, NewWeights};
use crate::error::{Error, Result};
use crate::exactla::{det, solve_in_range, Mat, Rat};
use crate::moments2d::{
    is_moment_matrix, localizing_matrix, moment_matrix, monomial_basis, Axis, MatrixKind, Monomial, MomentMat,
};
use crate::shifts::{moments_from_weights, moments_of_measure, weights_from_measure, WeightFamily2};

/// Records `name: lhs == num/den` unless `den` vanishes.
fn identity(checks: &mut BTreeMap<String, bool>, name: &str, lhs: &Rat, num: Rat, den: Rat) {
    if !den.is_zero() {
        checks.insert(name.into(), *lhs == num / den);
    }
}

/// Completes an `m = 2` family whose `M(1)` is singular.
///
/// Every weight of `w` is treated as given data. A completion exists iff the degree-3 block
/// lies in the range of `M(1)` and the resulting flat corner is Hankel; the representing
/// measure of that flat `M(2)` must also sit in the closed first quadrant.
pub fn singular_m2(w: &WeightFamily2, depth: usize) -> Result<CompletionResult> {
    if w.m() != 2 {
        return Err(Error::Precondition(format!("expected an m = 2 family, got m = {}", w.m())));
    }
    if depth < 2 {
        return Err(Error::Precondition("completion depth must be at least 2".into()));
    }
    let seq = moments_from_weights(w)?;
    let a_mat = moment_matrix(&seq, 1)?;
    if !a_mat.is_psd() {
        return Err(Error::NoCompletion("M(1) is not positive semi-definite".into()));
    }
    if !det(&a_mat.mat)?.is_zero() {
        return Err(Error::NotSingular);
    }
    for axis in [Axis::X, Axis::Y] {
        if !localizing_matrix(&seq, 1, axis)?.is_psd() {
            return Err(Error::NoCompletion(format!("localizing matrix for {axis:?} is not PSD")));
        }
    }

    let rows = monomial_basis(1);
    let cols = [Monomial::new(0, 2), Monomial::new(1, 1), Monomial::new(2, 0)];
    let b = Mat::from_fn(3, 3, |i, j| seq.at(rows[i].times(&cols[j])).expect("degree ≤ 3").clone());
    let wmat = solve_in_range(&a_mat.mat, &b).map_err(|e| match e {
        Error::Range => Error::NoCompletion("degree-3 block is not in the range of M(1)".into()),
        other => other,
    })?;
    let c = &(&wmat.transpose() * &a_mat.mat) * &wmat;
    let m2 = MomentMat {
        n: 2,
        basis: monomial_basis(2),
        mat: Mat::block_symmetric(&a_mat.mat, &b, &c)?,
        kind: MatrixKind::Moment,
    };
    if !is_moment_matrix(&m2) {
        return Err(Error::NoCompletion("the flat corner of M(2) is not Hankel".into()));
    }
    let measure = measure_from_flat(&m2)?;
    if !measure.in_closed_quadrant() {
        return Err(Error::NoCompletion(format!(
            "the flat extension is represented by {measure}, which leaves the closed quadrant"
        )));
    }

    let rank_m1 = a_mat.rank();
    let al = |k| w.alpha_sq(k).expect("level ≤ 2").clone();
    let be = |k| w.beta_sq(k).expect("level ≤ 2").clone();
    let (a, bb, cc, d, e) = (al((0, 0)), be((0, 0)), al((1, 0)), be((0, 1)), al((0, 1)));
    let (p, q, r, s) = (al((2, 0)), al((1, 1)), al((0, 2)), be((0, 2)));
    let mut checks = BTreeMap::new();
    identity(
        &mut checks,
        "d_singular",
        &d,
        &a * &bb * &cc - Rat::int(2) * &a * &bb * &e + &bb * &e * &e,
        &a * (&cc - &a),
    );
    identity(
        &mut checks,
        "alpha20",
        &p,
        &a * &cc * &cc - &a * &cc * &e + &a * &e * &q - &cc * &e * &q,
        &cc * (&a - &e),
    );
    identity(
        &mut checks,
        "alpha11",
        &q,
        &a * &cc * &e - &a * &e * &e - &a * &cc * &r + Rat::int(2) * &a * &e * &r - &e * &e * &r,
        &e * (&a - &e),
    );
    identity(
        &mut checks,
        "alpha02",
        &r,
        &a * (&bb * &cc - &bb * &e + &a * &s - &cc * &s),
        &bb * (&a - &e),
    );
    let mseq = moments_of_measure(&measure, 3);
    let mx = localizing_matrix(&mseq, 1, Axis::X)?;
    let my = localizing_matrix(&mseq, 1, Axis::Y)?;
    checks.insert("flat_rank".into(), m2.rank() == rank_m1);
    checks.insert("atom_count".into(), measure.len() == rank_m1);
    checks.insert("interpolates".into(), verify_completion(w, &measure));
    require_checks(&checks)?;

    let completion = weights_from_measure(&measure, depth)?;
    let case = if rank_m1 == 1 { CaseTag::SingularRank1 } else { CaseTag::SingularRank2 };
    Ok(CompletionResult {
        case,
        swapped: false,
        rank_m1,
        weights: NewWeights { p, q, r, s },
        m2,
        mx,
        my,
        measure,
        completion,
        z: None,
        y0: None,
        yc: None,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use crate::shifts::AtomicMeasure2;

    fn two_atoms() -> AtomicMeasure2 {
        AtomicMeasure2::from_rationals(&[((rat!(0), rat!(1)), rat!(1 / 2)), ((rat!(2), rat!(3)), rat!(1 / 2))])
            .unwrap()
    }

    #[test]
    fn recovers_two_atoms() {
        let w = weights_from_measure(&two_atoms(), 2).unwrap();
        assert_eq!(w.alpha_sq((0, 2)), Some(&rat!(9 / 5)));
        assert_eq!(w.beta_sq((0, 2)), Some(&rat!(14 / 5)));
        let res = singular_m2(&w, 4).unwrap();
        assert_eq!(res.case, CaseTag::SingularRank2);
        assert_eq!(res.measure, two_atoms());
        assert_eq!(res.checks.len(), 7);
        assert!(res.checks.values().all(|ok| *ok));
        assert_eq!(res.completion.truncate(2).unwrap(), w);
    }

    #[test]
    fn equal_leading_weights_use_linear_algebra_path() {
        let mu = AtomicMeasure2::from_rationals(&[((rat!(0), rat!(1)), rat!(1 / 2)), ((rat!(2), rat!(1)), rat!(1 / 2))])
            .unwrap();
        let w = weights_from_measure(&mu, 2).unwrap();
        assert_eq!(w.alpha_sq((0, 0)), w.alpha_sq((0, 1)));
        let res = singular_m2(&w, 3).unwrap();
        assert_eq!(res.measure, mu);
        assert!(!res.checks.contains_key("alpha02"));
    }

    #[test]
    fn point_mass() {
        let w = weights_from_measure(&AtomicMeasure2::point(rat!(2), rat!(3)), 2).unwrap();
        let res = singular_m2(&w, 2).unwrap();
        assert_eq!(res.case, CaseTag::SingularRank1);
        assert_eq!(res.measure, AtomicMeasure2::point(rat!(2), rat!(3)));
    }

    #[test]
    fn rejections() {
        let w = weights_from_measure(&two_atoms(), 2).unwrap();
        let perturbed = WeightFamily2::from_fn(
            2,
            |k| if k == (2, 0) { rat!(3) } else { w.alpha_sq(k).unwrap().clone() },
            |k| w.beta_sq(k).unwrap().clone(),
        )
        .unwrap();
        assert!(matches!(singular_m2(&perturbed, 2), Err(Error::NoCompletion(_))));

        let three = AtomicMeasure2::from_rationals(&[
            ((rat!(0), rat!(0)), rat!(1 / 3)),
            ((rat!(0), rat!(3)), rat!(1 / 6)),
            ((rat!(2), rat!(1)), rat!(1 / 2)),
        ])
        .unwrap();
        let w3 = weights_from_measure(&three, 2).unwrap();
        assert!(matches!(singular_m2(&w3, 2), Err(Error::NotSingular)));
        assert!(matches!(singular_m2(&w3.truncate(1).unwrap(), 2), Err(Error::Precondition(_))));
    }
}
