use super::measure::AtomicMeasure1;
use crate::error::{Error, Result};
use crate::exactla::{quadratic_roots, QuadExt, Rat};

/// Moments generated by `γ_{n+2} = φ₀γ_n + φ₁γ_{n+1}` from `γ₀, γ₁`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RecursiveMeasure1 {
    pub phi0: Rat,
    pub phi1: Rat,
    pub gamma0: Rat,
    pub gamma1: Rat,
}

impl RecursiveMeasure1 {
    /// Fails unless `γ₀, …, γ_n` are all strictly positive.
    pub fn check_positive(&self, n: usize) -> Result<()> {
        match recursive_moments(self, n).iter().position(|g| !g.is_positive()) {
            None => Ok(()),
            Some(k) => Err(Error::Positivity(format!("recursive moment γ_{k} is not positive"))),
        }
    }
}

/// `[γ₀, …, γ_n]`.
pub fn recursive_moments(r: &RecursiveMeasure1, n: usize) -> Vec<Rat> {
    let mut out = vec![r.gamma0.clone(), r.gamma1.clone()];
    while out.len() < n + 1 {
        let k = out.len();
        let next = &r.phi0 * &out[k - 2] + &r.phi1 * &out[k - 1];
        out.push(next);
    }
    out.truncate(n + 1);
    out
}

/// The 2-atomic measure whose shift starts with squared weights `a < b < c`.
///
/// Solves `γ₂ = φ₀γ₀ + φ₁γ₁`, `γ₃ = φ₀γ₁ + φ₁γ₂` for `γ = (1, a, ab, abc)`; the atoms are
/// the roots of `t² − φ₁t − φ₀`.
pub fn abc_measure(a: &Rat, b: &Rat, c: &Rat) -> Result<(RecursiveMeasure1, AtomicMeasure1)> {
    if !(a.is_positive() && a < b && b < c) {
        return Err(Error::Order(format!("need 0 < {a} < {b} < {c}")));
    }
    let phi1 = b * (c - a) / (b - a);
    let phi0 = a * b * (b - c) / (b - a);
    let rec = RecursiveMeasure1 {
        phi0: phi0.clone(),
        phi1: phi1.clone(),
        gamma0: Rat::one(),
        gamma1: a.clone(),
    };
    let roots = quadratic_roots(&-&phi1, &-&phi0);
    let [t0, t1] = roots.as_slice() else {
        return Err(Error::Internal("generating function lacks two real roots".into()));
    };
    let a_q = QuadExt::from(a.clone());
    let gap = t1 - t0;
    let rho0 = &(t1 - &a_q) / &gap;
    let rho1 = &(&a_q - t0) / &gap;
    let mu = AtomicMeasure1::new(vec![t0.clone(), t1.clone()], vec![rho0, rho1])?;
    Ok((rec, mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    /// Direct check of the interpolation `γ₀..γ₃` and the generating function.
    fn assert_abc(a: Rat, b: Rat, c: Rat) -> (RecursiveMeasure1, AtomicMeasure1) {
        let (rec, mu) = abc_measure(&a, &b, &c).unwrap();
        let expected = vec![Rat::one(), a.clone(), &a * &b, &a * &b * &c];
        assert_eq!(mu.moments(3), expected);
        for t in mu.atoms() {
            let g = &(&(t * t) - &(&QuadExt::from(rec.phi1.clone()) * t)) - &QuadExt::from(rec.phi0.clone());
            assert!(g.is_zero());
            assert!(!t.is_negative());
        }
        assert_eq!(recursive_moments(&rec, 12), mu.moments(12));
        (rec, mu)
    }

    #[test]
    fn rational_abc() {
        let (rec, mu) = assert_abc(rat!(3 / 2), rat!(5 / 3), rat!(9 / 5));
        assert_eq!((rec.phi1.clone(), rec.phi0.clone()), (rat!(3), rat!(-2)));
        let expected = AtomicMeasure1::from_rationals(&[(rat!(1), rat!(1 / 2)), (rat!(2), rat!(1 / 2))]).unwrap();
        assert_eq!(mu, expected);
    }

    #[test]
    fn surd_abc() {
        let (rec, mu) = assert_abc(rat!(1), rat!(2), rat!(3));
        assert_eq!((rec.phi1, rec.phi0), (rat!(4), rat!(-2)));
        let t0 = QuadExt::new(rat!(2), rat!(-1), rat!(2));
        assert_eq!(mu.atoms(), &[t0.clone(), t0.conjugate()]);
        let rho0 = QuadExt::new(rat!(1 / 2), rat!(1 / 4), rat!(2));
        assert_eq!(mu.densities(), &[rho0.clone(), rho0.conjugate()]);
    }

    #[test]
    fn order_is_enforced() {
        assert!(matches!(abc_measure(&rat!(2), &rat!(1), &rat!(3)), Err(Error::Order(_))));
        assert!(abc_measure(&rat!(1), &rat!(1), &rat!(3)).is_err());
    }

    #[test]
    fn recursion_examples() {
        let r = RecursiveMeasure1 { phi0: rat!(-2), phi1: rat!(3), gamma0: rat!(1), gamma1: rat!(3 / 2) };
        assert_eq!(
            recursive_moments(&r, 4),
            vec![rat!(1), rat!(3 / 2), rat!(5 / 2), rat!(9 / 2), rat!(17 / 2)]
        );
        let ones = RecursiveMeasure1 { phi0: rat!(0), phi1: rat!(1), gamma0: rat!(1), gamma1: rat!(1) };
        assert!(recursive_moments(&ones, 9).iter().all(Rat::is_one));
        assert_eq!(recursive_moments(&ones, 0).len(), 1);
        assert!(ones.check_positive(20).is_ok());
        let bad = RecursiveMeasure1 { phi0: rat!(-5), phi1: rat!(1), gamma0: rat!(1), gamma1: rat!(1) };
        assert!(bad.check_positive(5).is_err());
    }
}
