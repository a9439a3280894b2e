use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::exactla::{QuadExt, Rat};

/// The monomial `yⁱxʲ`, with `ydeg = i` and `xdeg = j`.
///
/// Ordered by total degree, then by increasing `ydeg`, which yields the basis
/// `1, X, Y, X², YX, Y², X³, …`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub ydeg: usize,
    pub xdeg: usize,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { ydeg: 0, xdeg: 0 };
    pub const X: Monomial = Monomial { ydeg: 0, xdeg: 1 };
    pub const Y: Monomial = Monomial { ydeg: 1, xdeg: 0 };

    pub fn new(ydeg: usize, xdeg: usize) -> Monomial {
        Monomial { ydeg, xdeg }
    }

    pub fn degree(&self) -> usize {
        self.ydeg + self.xdeg
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.ydeg + other.ydeg, self.xdeg + other.xdeg)
    }

    /// Position in the graded basis.
    pub fn index(&self) -> usize {
        let d = self.degree();
        d * (d + 1) / 2 + self.ydeg
    }

    pub fn eval(&self, x: &QuadExt, y: &QuadExt) -> QuadExt {
        &y.pow(self.ydeg as u32) * &x.pow(self.xdeg as u32)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.index().cmp(&other.index())
    }
}

fn power(f: &mut fmt::Formatter<'_>, var: char, e: usize) -> fmt::Result {
    match e {
        0 => Ok(()),
        1 => write!(f, "{var}"),
        _ => write!(f, "{var}^{e}"),
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        power(f, 'Y', self.ydeg)?;
        power(f, 'X', self.xdeg)
    }
}

/// All monomials of total degree at most `n`, in basis order.
pub fn monomial_basis(n: usize) -> Vec<Monomial> {
    (0..=n)
        .flat_map(|d| (0..=d).map(move |i| Monomial::new(i, d - i)))
        .collect()
}

/// Sparse real polynomial in `x`, `y` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly2 {
    pub fn zero() -> Poly2 {
        Poly2::default()
    }

    pub fn constant(c: Rat) -> Poly2 {
        Poly2::from_terms([(Monomial::ONE, c)])
    }

    pub fn monomial(m: Monomial, c: Rat) -> Poly2 {
        Poly2::from_terms([(m, c)])
    }

    pub fn x() -> Poly2 {
        Poly2::monomial(Monomial::X, Rat::one())
    }

    pub fn y() -> Poly2 {
        Poly2::monomial(Monomial::Y, Rat::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Poly2 {
        let mut p = Poly2::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &Rat) {
        let entry = self.terms.entry(m).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    /// Latest monomial in basis order.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(*m, c);
        }
        p
    }

    pub fn scale(&self, s: &Rat) -> Poly2 {
        Poly2::from_terms(self.terms.iter().map(|(m, c)| (*m, c * s)))
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut p = Poly2::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                p.add_term(m1.times(m2), &(c1 * c2));
            }
        }
        p
    }

    pub fn pow(&self, e: usize) -> Poly2 {
        (0..e).fold(Poly2::constant(Rat::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &QuadExt, y: &QuadExt) -> QuadExt {
        self.terms
            .iter()
            .fold(QuadExt::from_int(0), |acc, (m, c)| {
                &acc + &(&QuadExt::rational(c.clone()) * &m.eval(x, y))
            })
    }

    /// Coefficients of the univariate polynomial in `y` obtained by fixing `x`
    /// (index = power of `y`).
    pub fn restrict_x(&self, x: &QuadExt) -> Vec<QuadExt> {
        self.restrict(|m| (m.ydeg, m.xdeg), x)
    }

    /// Coefficients of the univariate polynomial in `x` obtained by fixing `y`.
    pub fn restrict_y(&self, y: &QuadExt) -> Vec<QuadExt> {
        self.restrict(|m| (m.xdeg, m.ydeg), y)
    }

    fn restrict(&self, split: impl Fn(&Monomial) -> (usize, usize), fixed: &QuadExt) -> Vec<QuadExt> {
        let mut out: Vec<QuadExt> = Vec::new();
        for (m, c) in &self.terms {
            let (free, fixed_pow) = split(m);
            if out.len() <= free {
                out.resize(free + 1, QuadExt::from_int(0));
            }
            let term = &QuadExt::rational(c.clone()) * &fixed.pow(fixed_pow as u32);
            out[free] = &out[free] + &term;
        }
        while out.last().is_some_and(QuadExt::is_zero) {
            out.pop();
        }
        out
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.degree() == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A column relation of a moment matrix, normalized so that the basis-latest monomial
/// carries coefficient 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyRelation {
    poly: Poly2,
}

impl PolyRelation {
    /// Normalizes `poly`; `None` for the zero polynomial.
    pub fn new(poly: Poly2) -> Option<PolyRelation> {
        let lead = poly.leading()?.1.clone();
        Some(PolyRelation {
            poly: poly.scale(&lead.recip()),
        })
    }

    /// Relation from a coefficient vector over `basis`.
    pub fn from_coefficients(basis: &[Monomial], coeffs: &[Rat]) -> Option<PolyRelation> {
        PolyRelation::new(Poly2::from_terms(
            basis.iter().copied().zip(coeffs.iter().cloned()),
        ))
    }

    /// `(X − h)(Y − k)`.
    pub fn product_of_lines(h: &Rat, k: &Rat) -> PolyRelation {
        let p = Poly2::x()
            .add(&Poly2::constant(-h))
            .mul(&Poly2::y().add(&Poly2::constant(-k)));
        PolyRelation::new(p).expect("nonzero")
    }

    pub fn poly(&self) -> &Poly2 {
        &self.poly
    }

    pub fn terms(&self) -> Vec<(Monomial, Rat)> {
        self.poly.terms().map(|(m, c)| (*m, c.clone())).collect()
    }

    pub fn coefficients(&self, basis: &[Monomial]) -> Vec<Rat> {
        basis.iter().map(|m| self.poly.coeff(m)).collect()
    }

    /// Reads `(h, k)` when the relation is `(X − h)(Y − k) = 0`.
    pub fn as_product_of_lines(&self) -> Option<(Rat, Rat)> {
        let p = &self.poly;
        let yx = Monomial::new(1, 1);
        if p.degree() != Some(2) || !p.coeff(&yx).is_one() {
            return None;
        }
        let h = -p.coeff(&Monomial::Y);
        let k = -p.coeff(&Monomial::X);
        (PolyRelation::product_of_lines(&h, &k) == *self).then_some((h, k))
    }
}

impl fmt::Display for PolyRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_order() {
        let show = |n| {
            monomial_basis(n)
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        };
        assert_eq!(show(0), ["1"]);
        assert_eq!(show(1), ["1", "X", "Y"]);
        assert_eq!(show(2), ["1", "X", "Y", "X^2", "YX", "Y^2"]);
        for n in 0..6 {
            let b = monomial_basis(n);
            assert_eq!(b.len(), (n + 1) * (n + 2) / 2);
            assert!(b.windows(2).all(|w| w[0] < w[1]));
            assert!(b.iter().enumerate().all(|(i, m)| m.index() == i));
        }
    }

    #[test]
    fn relation_normalization_and_lines() {
        let rel = PolyRelation::product_of_lines(&Rat::int(3), &Rat::int(4));
        assert_eq!(rel.to_string(), "YX - 3Y - 4X + 12");
        assert_eq!(rel.as_product_of_lines(), Some((Rat::int(3), Rat::int(4))));
        let scaled = PolyRelation::new(rel.poly().scale(&Rat::int(-5))).unwrap();
        assert_eq!(scaled, rel);
        let other = PolyRelation::new(Poly2::x().mul(&Poly2::x())).unwrap();
        assert_eq!(other.as_product_of_lines(), None);
    }

    #[test]
    fn restriction_to_lines() {
        // y² − 3y + x at x = 0 → y² − 3y
        let p = Poly2::from_terms([
            (Monomial::new(2, 0), Rat::one()),
            (Monomial::Y, Rat::int(-3)),
            (Monomial::X, Rat::one()),
        ]);
        let r = p.restrict_x(&QuadExt::from_int(0));
        assert_eq!(r, vec![QuadExt::from_int(0), QuadExt::from_int(-3), QuadExt::from_int(1)]);
        let r = p.restrict_y(&QuadExt::from_int(3));
        assert_eq!(r, vec![QuadExt::from_int(0), QuadExt::from_int(1)]);
    }
}
