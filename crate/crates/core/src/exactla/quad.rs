use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rat;

/// Exact element `p + q·√radicand` of a real quadratic field.
///
/// Canonical form: when `q = 0` the radicand is stored as 0; otherwise the radicand is a
/// positive integer that is not a perfect square. Values whose radicand is a rational square
/// collapse to pure rationals on construction.
///
/// Binary operations require both operands to live in the same field (radicands whose ratio
/// is a rational square). Mixing unrelated fields panics; measures enforce a shared radicand
/// before doing arithmetic.
#[derive(Clone, Eq, Default)]
pub struct QuadExt {
    p: Rat,
    q: Rat,
    radicand: Rat,
}

const SMALL_SQUARE_LIMIT: u32 = 1000;

impl QuadExt {
    pub fn new(p: Rat, q: Rat, radicand: Rat) -> QuadExt {
        assert!(!radicand.is_negative(), "negative radicand");
        if q.is_zero() || radicand.is_zero() {
            return QuadExt::rational(p);
        }
        if let Some(root) = radicand.sqrt_exact() {
            return QuadExt::rational(p + q * root);
        }
        // √(n/d) = √(n·d)/d, then pull out small square factors.
        let mut n: BigInt = radicand.numer() * radicand.denom();
        let mut coeff = q / Rat::from_bigint(radicand.denom().clone());
        let mut k: u32 = 2;
        while k <= SMALL_SQUARE_LIMIT {
            let sq = BigInt::from(k * k);
            if sq > n {
                break;
            }
            while (&n % &sq).is_zero() {
                n /= &sq;
                coeff = coeff * Rat::int(k as i64);
            }
            k += 1;
        }
        QuadExt {
            p,
            q: coeff,
            radicand: Rat::from_bigint(n),
        }
    }

    /// Builds from an already canonical radicand.
    fn raw(p: Rat, q: Rat, radicand: Rat) -> QuadExt {
        if q.is_zero() || radicand.is_zero() {
            QuadExt::rational(p)
        } else {
            QuadExt { p, q, radicand }
        }
    }

    pub fn rational(p: Rat) -> QuadExt {
        QuadExt {
            p,
            q: Rat::zero(),
            radicand: Rat::zero(),
        }
    }

    pub fn from_int(n: i64) -> QuadExt {
        QuadExt::rational(Rat::int(n))
    }

    /// `√r` for `r ≥ 0`.
    pub fn sqrt(r: &Rat) -> QuadExt {
        QuadExt::new(Rat::zero(), Rat::one(), r.clone())
    }

    pub fn p(&self) -> &Rat {
        &self.p
    }

    pub fn q(&self) -> &Rat {
        &self.q
    }

    pub fn radicand(&self) -> &Rat {
        &self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.p)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.q.is_zero() && self.p.is_one()
    }

    pub fn conjugate(&self) -> QuadExt {
        QuadExt {
            p: self.p.clone(),
            q: -&self.q,
            radicand: self.radicand.clone(),
        }
    }

    /// Field norm `p² − q²·v`.
    pub fn norm(&self) -> Rat {
        &self.p * &self.p - &self.q * &self.q * &self.radicand
    }

    /// -1, 0 or 1, decided exactly.
    pub fn signum(&self) -> i32 {
        let sp = self.p.signum();
        let sq = self.q.signum();
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        // Opposite signs: the larger magnitude wins.
        match (&self.p * &self.p).cmp(&(&self.q * &self.q * &self.radicand)) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn recip(&self) -> QuadExt {
        let n = self.norm();
        assert!(!n.is_zero(), "reciprocal of zero");
        let c = self.conjugate();
        QuadExt {
            p: &c.p / &n,
            q: &c.q / &n,
            radicand: c.radicand,
        }
    }

    pub fn pow(&self, exp: u32) -> QuadExt {
        let mut acc = QuadExt::from_int(1);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.p.to_f64() + self.q.to_f64() * self.radicand.to_f64().sqrt()
    }

    /// The radicand of the field this value lives in, `None` for rationals.
    pub fn field(&self) -> Option<&Rat> {
        (!self.is_rational()).then_some(&self.radicand)
    }

    /// Whether `self` and `other` can be combined arithmetically.
    pub fn compatible(&self, other: &QuadExt) -> bool {
        match (self.field(), other.field()) {
            (Some(u), Some(v)) => u == v || (u / v).sqrt_exact().is_some(),
            _ => true,
        }
    }

    /// Rewrites both operands over a common radicand.
    fn unify(a: &QuadExt, b: &QuadExt) -> (Rat, Rat, Rat, Rat, Rat) {
        match (a.field(), b.field()) {
            (None, None) => (a.p.clone(), Rat::zero(), b.p.clone(), Rat::zero(), Rat::zero()),
            (Some(v), None) => (a.p.clone(), a.q.clone(), b.p.clone(), Rat::zero(), v.clone()),
            (None, Some(v)) => (a.p.clone(), Rat::zero(), b.p.clone(), b.q.clone(), v.clone()),
            (Some(u), Some(v)) => {
                if u == v {
                    (a.p.clone(), a.q.clone(), b.p.clone(), b.q.clone(), v.clone())
                } else {
                    let t = (u / v)
                        .sqrt_exact()
                        .unwrap_or_else(|| panic!("incompatible radicands √{u} and √{v}"));
                    (a.p.clone(), &a.q * &t, b.p.clone(), b.q.clone(), v.clone())
                }
            }
        }
    }
}

impl From<Rat> for QuadExt {
    fn from(r: Rat) -> QuadExt {
        QuadExt::rational(r)
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &QuadExt) -> bool {
        if self.p != other.p || self.q.signum() != other.q.signum() {
            return false;
        }
        &self.q * &self.q * &self.radicand == &other.q * &other.q * &other.radicand
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &QuadExt) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadExt {
    /// Numeric order. Panics for operands from unrelated fields.
    fn cmp(&self, other: &QuadExt) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl Add<&QuadExt> for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        let (p1, q1, p2, q2, v) = QuadExt::unify(self, rhs);
        QuadExt::raw(p1 + p2, q1 + q2, v)
    }
}

impl Sub<&QuadExt> for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        let (p1, q1, p2, q2, v) = QuadExt::unify(self, rhs);
        QuadExt::raw(p1 - p2, q1 - q2, v)
    }
}

impl Mul<&QuadExt> for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        let (p1, q1, p2, q2, v) = QuadExt::unify(self, rhs);
        let p = &p1 * &p2 + &q1 * &q2 * &v;
        let q = &p1 * &q2 + &p2 * &q1;
        QuadExt::raw(p, q, v)
    }
}

impl Div<&QuadExt> for &QuadExt {
    type Output = QuadExt;
    fn div(self, rhs: &QuadExt) -> QuadExt {
        self * &rhs.recip()
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                $trait::$method(&self, rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            p: -&self.p,
            q: -&self.q,
            radicand: self.radicand.clone(),
        }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.p);
        }
        let mag = self.q.abs();
        let surd = if mag.is_one() {
            format!("√{}", self.radicand)
        } else {
            format!("{}√{}", mag, self.radicand)
        };
        match (self.p.is_zero(), self.q.is_negative()) {
            (true, false) => write!(f, "{surd}"),
            (true, true) => write!(f, "-{surd}"),
            (false, false) => write!(f, "{} + {surd}", self.p),
            (false, true) => write!(f, "{} - {surd}", self.p),
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Real roots of `t² + b·t + c`, ascending. Double roots are reported once.
pub fn quadratic_roots(b: &Rat, c: &Rat) -> Vec<QuadExt> {
    let disc = b * b - Rat::int(4) * c;
    if disc.is_negative() {
        return Vec::new();
    }
    let half = Rat::frac(1, 2);
    let center = -b * &half;
    if disc.is_zero() {
        return vec![QuadExt::rational(center)];
    }
    let lo = QuadExt::new(center.clone(), -&half, disc.clone());
    let hi = QuadExt::new(center, half, disc);
    vec![lo, hi]
}

impl One for QuadExt {
    fn one() -> QuadExt {
        QuadExt::from_int(1)
    }
}

impl Zero for QuadExt {
    fn zero() -> QuadExt {
        QuadExt::from_int(0)
    }
    fn is_zero(&self) -> bool {
        QuadExt::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, q: i64, v: i64) -> QuadExt {
        QuadExt::new(Rat::int(p), Rat::int(q), Rat::int(v))
    }

    #[test]
    fn perfect_squares_collapse() {
        let x = QuadExt::new(Rat::int(1), Rat::int(2), Rat::frac(9, 4));
        assert!(x.is_rational());
        assert_eq!(x, QuadExt::from_int(4));
    }

    #[test]
    fn square_factors_are_extracted() {
        let x = QuadExt::sqrt(&Rat::int(8));
        assert_eq!(x.radicand(), &Rat::int(2));
        assert_eq!(x.q(), &Rat::int(2));
        let y = QuadExt::sqrt(&Rat::frac(1, 2));
        assert_eq!(y.radicand(), &Rat::int(2));
        assert_eq!(y.q(), &Rat::frac(1, 2));
    }

    #[test]
    fn conjugate_product_is_rational() {
        let a = q(2, 1, 2);
        let prod = &a * &a.conjugate();
        assert_eq!(prod, QuadExt::from_int(2));
        assert_eq!(&a / &a, QuadExt::from_int(1));
    }

    #[test]
    fn ordering_is_exact() {
        // 2 - √2 ≈ 0.586 > 0, 1 - √2 < 0, 3 - √9 collapses to 0
        assert!(q(2, -1, 2).is_positive());
        assert!(q(1, -1, 2).is_negative());
        assert!(q(3, -1, 9).is_zero());
        assert!(q(2, -1, 2) < q(2, 1, 2));
    }

    #[test]
    fn roots_of_generating_polynomial() {
        let r = quadratic_roots(&Rat::int(-4), &Rat::int(2));
        assert_eq!(r, vec![q(2, -1, 2), q(2, 1, 2)]);
        let r = quadratic_roots(&Rat::int(-3), &Rat::int(2));
        assert_eq!(r, vec![QuadExt::from_int(1), QuadExt::from_int(2)]);
        assert!(quadratic_roots(&Rat::zero(), &Rat::one()).is_empty());
    }

    #[test]
    fn display() {
        assert_eq!(q(2, -1, 2).to_string(), "2 - √2");
        assert_eq!(QuadExt::new(Rat::frac(1, 2), Rat::frac(1, 4), Rat::int(2)).to_string(), "1/2 + 1/4√2");
    }
}
