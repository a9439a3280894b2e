//! One-variable subnormal completions.

use crate::error::{Error, Result};
use crate::exactla::{is_psd, solve_in_range, Mat, Rat};
use crate::shifts::{abc_measure, AtomicMeasure1, WeightSeq1};

/// Outcome of the one-variable completion criterion for `α₀², …, α_m²`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SCCVerdict {
    pub m: usize,
    /// `⌊(m+1)/2⌋`
    pub k: usize,
    /// `⌊m/2⌋ + 1`
    pub ell: usize,
    /// `H(k) = (γ_{i+j})`
    pub hk: Mat,
    /// `H_x(ℓ−1) = (γ_{i+j+1})`
    pub hx: Mat,
    pub psd_hk: bool,
    pub psd_hx: bool,
    pub range_ok: bool,
    pub admits_completion: bool,
}

fn hankel(gamma: &[Rat], size: usize, shift: usize) -> Mat {
    Mat::from_fn(size, size, |i, j| gamma[i + j + shift].clone())
}

/// `v(i, j) = (γ_i, …, γ_{i+j})ᵀ`.
fn v(gamma: &[Rat], i: usize, j: usize) -> Mat {
    Mat::column(gamma[i..=i + j].to_vec())
}

pub fn scc_check(w: &WeightSeq1) -> SCCVerdict {
    let m = w.m();
    let k = m.div_ceil(2);
    let ell = m / 2 + 1;
    let gamma = w.moments();
    let hk = hankel(&gamma, k + 1, 0);
    let hx = hankel(&gamma, ell, 1);
    let psd_hk = is_psd(&hk).expect("Hankel matrices are symmetric");
    let psd_hx = is_psd(&hx).expect("Hankel matrices are symmetric");
    let range_ok = if m.is_multiple_of(2) {
        solve_in_range(&hk, &v(&gamma, k + 1, k)).is_ok()
    } else {
        solve_in_range(&hx, &v(&gamma, ell + 1, ell - 1)).is_ok()
    };
    SCCVerdict {
        m,
        k,
        ell,
        hk,
        hx,
        psd_hk,
        psd_hx,
        range_ok,
        admits_completion: psd_hk && psd_hx && range_ok,
    }
}

fn two_step(a0: &Rat, a1: &Rat) -> Result<AtomicMeasure1> {
    if a0 == a1 {
        return Ok(AtomicMeasure1::point(a0.clone()));
    }
    let ratio = a0 / a1;
    AtomicMeasure1::from_rationals(&[(Rat::zero(), Rat::one() - &ratio), (a1.clone(), ratio)])
}

/// Berger measure of the canonical subnormal completion for `m ≤ 2`.
pub fn scc_complete(w: &WeightSeq1) -> Result<AtomicMeasure1> {
    let verdict = scc_check(w);
    if !verdict.admits_completion {
        return Err(Error::NoCompletion(
            "the one-variable completion criterion fails".into(),
        ));
    }
    let a = w.alpha_sq();
    let mu = match a.len() {
        1 => AtomicMeasure1::point(a[0].clone()),
        2 => two_step(&a[0], &a[1])?,
        // Equal trailing weights reduce to the m = 1 completion. Equal leading weights force
        // a flat shift, which the criterion has already confirmed.
        3 if a[1] == a[2] => two_step(&a[0], &a[1])?,
        3 => abc_measure(&a[0], &a[1], &a[2])?.1,
        _ => return Err(Error::UnsupportedDegree(w.m())),
    };
    if mu.moments(w.m() + 1) != w.moments() {
        return Err(Error::Internal("completion does not interpolate the weights".into()));
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn seq(v: &[Rat]) -> WeightSeq1 {
        WeightSeq1::new(v.to_vec()).unwrap()
    }

    #[test]
    fn verdict_examples() {
        assert!(scc_check(&seq(&[rat!(1), rat!(1)])).admits_completion);
        let v = scc_check(&seq(&[rat!(3 / 2), rat!(5 / 3), rat!(9 / 5)]));
        assert!(v.admits_completion);
        assert_eq!((v.k, v.ell), (1, 2));
        assert_eq!(v.hx, Mat::from_rows(vec![vec![rat!(3 / 2), rat!(5 / 2)], vec![rat!(5 / 2), rat!(9 / 2)]]));
        let bad = scc_check(&seq(&[rat!(2), rat!(1)]));
        assert!(!bad.psd_hk && !bad.admits_completion);
        // α₀ = α₁ < α₂ passes both positivity tests but fails the range test
        let flat_then_up = scc_check(&seq(&[rat!(1), rat!(1), rat!(2)]));
        assert!(flat_then_up.psd_hk && flat_then_up.psd_hx && !flat_then_up.range_ok);
    }

    #[test]
    fn canonical_completions() {
        assert_eq!(scc_complete(&seq(&[rat!(4)])).unwrap(), AtomicMeasure1::point(rat!(4)));
        assert_eq!(
            scc_complete(&seq(&[rat!(1), rat!(2)])).unwrap(),
            AtomicMeasure1::from_rationals(&[(rat!(0), rat!(1 / 2)), (rat!(2), rat!(1 / 2))]).unwrap()
        );
        assert_eq!(
            scc_complete(&seq(&[rat!(3 / 2), rat!(5 / 3), rat!(9 / 5)])).unwrap(),
            AtomicMeasure1::from_rationals(&[(rat!(1), rat!(1 / 2)), (rat!(2), rat!(1 / 2))]).unwrap()
        );
    }

    #[test]
    fn equal_weight_reductions() {
        assert_eq!(scc_complete(&seq(&[rat!(3), rat!(3)])).unwrap(), AtomicMeasure1::point(rat!(3)));
        assert_eq!(
            scc_complete(&seq(&[rat!(3), rat!(3), rat!(3)])).unwrap(),
            AtomicMeasure1::point(rat!(3))
        );
        assert_eq!(
            scc_complete(&seq(&[rat!(1), rat!(4), rat!(4)])).unwrap(),
            AtomicMeasure1::from_rationals(&[(rat!(0), rat!(3 / 4)), (rat!(4), rat!(1 / 4))]).unwrap()
        );
        assert!(matches!(
            scc_complete(&seq(&[rat!(1), rat!(1), rat!(2)])),
            Err(Error::NoCompletion(_))
        ));
    }

    #[test]
    fn errors() {
        assert!(matches!(scc_complete(&seq(&[rat!(2), rat!(1)])), Err(Error::NoCompletion(_))));
        let four = seq(&[rat!(1), rat!(2), rat!(3), rat!(4)]);
        // γ = (1, 1, 2, 6, 24): H(2) and H_x(1) are positive definite
        assert!(scc_check(&four).admits_completion);
        assert_eq!(scc_complete(&four), Err(Error::UnsupportedDegree(3)));
    }
}
