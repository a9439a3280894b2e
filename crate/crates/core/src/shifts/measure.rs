use std::fmt;

use crate::error::{Error, Result};
use crate::exactla::{QuadExt, Rat};
use crate::moments2d::MomentSeq2;

fn q_zero() -> QuadExt {
    QuadExt::from_int(0)
}

fn q_sum<'a>(it: impl IntoIterator<Item = &'a QuadExt>) -> QuadExt {
    it.into_iter().fold(q_zero(), |acc, v| &acc + v)
}

/// Checks that every irrational coordinate lives over one radicand.
fn common_radicand<'a>(values: impl IntoIterator<Item = &'a QuadExt>) -> Result<Option<Rat>> {
    let mut field: Option<Rat> = None;
    for v in values {
        if let Some(r) = v.field() {
            match &field {
                None => field = Some(r.clone()),
                Some(f) if f == r => {}
                Some(f) => {
                    return Err(Error::InvalidMeasure(format!(
                        "mixed radicands √{f} and √{r}"
                    )))
                }
            }
        }
    }
    Ok(field)
}

fn rational_moment(v: QuadExt) -> Rat {
    v.as_rational()
        .cloned()
        .unwrap_or_else(|| panic!("conjugate-closed measure produced irrational moment {v}"))
}

/// Finitely atomic probability measure on the plane, `Σ ρ_i δ_{(x_i, y_i)}`.
///
/// Atoms are sorted by `(x, y)`. Irrational coordinates share a single radicand and come in
/// conjugate pairs with conjugate densities, so all moments are rational.
#[derive(Clone, PartialEq, Eq)]
pub struct AtomicMeasure2 {
    atoms: Vec<(QuadExt, QuadExt)>,
    densities: Vec<QuadExt>,
}

impl AtomicMeasure2 {
    pub fn new(atoms: Vec<(QuadExt, QuadExt)>, densities: Vec<QuadExt>) -> Result<AtomicMeasure2> {
        if atoms.is_empty() || atoms.len() != densities.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} atoms with {} densities",
                atoms.len(),
                densities.len()
            )));
        }
        common_radicand(atoms.iter().flat_map(|(x, y)| [x, y]).chain(&densities))?;
        if let Some(rho) = densities.iter().find(|r| !r.is_positive()) {
            return Err(Error::InvalidMeasure(format!("nonpositive density {rho}")));
        }
        if q_sum(&densities) != QuadExt::from_int(1) {
            return Err(Error::InvalidMeasure("densities do not sum to 1".into()));
        }
        let mut pairs: Vec<_> = atoms.into_iter().zip(densities).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidMeasure("repeated atom".into()));
        }
        for ((x, y), rho) in &pairs {
            let conj = ((x.conjugate(), y.conjugate()), rho.conjugate());
            if !pairs.contains(&conj) {
                return Err(Error::InvalidMeasure(format!(
                    "atom ({x}, {y}) lacks its conjugate"
                )));
            }
        }
        let (atoms, densities) = pairs.into_iter().unzip();
        Ok(AtomicMeasure2 { atoms, densities })
    }

    /// Rational atoms and densities.
    pub fn from_rationals(items: &[((Rat, Rat), Rat)]) -> Result<AtomicMeasure2> {
        AtomicMeasure2::new(
            items
                .iter()
                .map(|((x, y), _)| (QuadExt::from(x.clone()), QuadExt::from(y.clone())))
                .collect(),
            items.iter().map(|(_, r)| QuadExt::from(r.clone())).collect(),
        )
    }

    pub fn point(x: Rat, y: Rat) -> AtomicMeasure2 {
        AtomicMeasure2 {
            atoms: vec![(x.into(), y.into())],
            densities: vec![QuadExt::from_int(1)],
        }
    }

    pub fn atoms(&self) -> &[(QuadExt, QuadExt)] {
        &self.atoms
    }

    pub fn densities(&self) -> &[QuadExt] {
        &self.densities
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(QuadExt, QuadExt), &QuadExt)> {
        self.atoms.iter().zip(&self.densities)
    }

    pub fn in_closed_quadrant(&self) -> bool {
        self.atoms.iter().all(|(x, y)| !x.is_negative() && !y.is_negative())
    }

    pub fn has_open_quadrant_atom(&self) -> bool {
        self.atoms.iter().any(|(x, y)| x.is_positive() && y.is_positive())
    }

    /// `∫ yⁱxʲ dμ`.
    pub fn moment(&self, i: usize, j: usize) -> Rat {
        let v = self.iter().fold(q_zero(), |acc, ((x, y), rho)| {
            &acc + &(rho * &(&y.pow(i as u32) * &x.pow(j as u32)))
        });
        rational_moment(v)
    }

    /// Exchanges the roles of the two coordinates.
    pub fn swapped(&self) -> AtomicMeasure2 {
        AtomicMeasure2::new(
            self.atoms.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
            self.densities.clone(),
        )
        .expect("swap preserves validity")
    }
}

impl fmt::Display for AtomicMeasure2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|((x, y), rho)| {
                if rho.is_one() {
                    format!("δ_{{({x}, {y})}}")
                } else {
                    format!("({rho})δ_{{({x}, {y})}}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for AtomicMeasure2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `γ_{ij}` of `mu` for `i + j ≤ degree`.
pub fn moments_of_measure(mu: &AtomicMeasure2, degree: usize) -> MomentSeq2 {
    MomentSeq2::from_fn(degree, |i, j| mu.moment(i, j)).expect("probability measure has γ₀₀ = 1")
}

/// Finitely atomic probability measure on the line.
#[derive(Clone, PartialEq, Eq)]
pub struct AtomicMeasure1 {
    atoms: Vec<QuadExt>,
    densities: Vec<QuadExt>,
}

impl AtomicMeasure1 {
    pub fn new(atoms: Vec<QuadExt>, densities: Vec<QuadExt>) -> Result<AtomicMeasure1> {
        let two = AtomicMeasure2::new(
            atoms.into_iter().map(|t| (t, q_zero())).collect(),
            densities,
        )?;
        Ok(AtomicMeasure1 {
            atoms: two.atoms.into_iter().map(|(t, _)| t).collect(),
            densities: two.densities,
        })
    }

    pub fn from_rationals(items: &[(Rat, Rat)]) -> Result<AtomicMeasure1> {
        AtomicMeasure1::new(
            items.iter().map(|(t, _)| t.clone().into()).collect(),
            items.iter().map(|(_, r)| r.clone().into()).collect(),
        )
    }

    pub fn point(t: Rat) -> AtomicMeasure1 {
        AtomicMeasure1 {
            atoms: vec![t.into()],
            densities: vec![QuadExt::from_int(1)],
        }
    }

    pub fn atoms(&self) -> &[QuadExt] {
        &self.atoms
    }

    pub fn densities(&self) -> &[QuadExt] {
        &self.densities
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&QuadExt, &QuadExt)> {
        self.atoms.iter().zip(&self.densities)
    }

    pub fn moment(&self, k: usize) -> Rat {
        let v = self
            .iter()
            .fold(q_zero(), |acc, (t, rho)| &acc + &(rho * &t.pow(k as u32)));
        rational_moment(v)
    }

    /// `[γ₀, …, γ_n]`.
    pub fn moments(&self, n: usize) -> Vec<Rat> {
        (0..=n).map(|k| self.moment(k)).collect()
    }
}

impl fmt::Display for AtomicMeasure1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|(t, rho)| {
                let atom = if t.is_rational() { format!("δ_{t}") } else { format!("δ_{{{t}}}") };
                if rho.is_one() {
                    atom
                } else {
                    format!("({rho}){atom}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for AtomicMeasure1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn collapse(points: impl Iterator<Item = (QuadExt, QuadExt)>) -> AtomicMeasure1 {
    let mut acc: Vec<(QuadExt, QuadExt)> = Vec::new();
    for (t, rho) in points {
        match acc.iter_mut().find(|(s, _)| *s == t) {
            Some((_, r)) => *r = &*r + &rho,
            None => acc.push((t, rho)),
        }
    }
    let (atoms, densities) = acc.into_iter().unzip();
    AtomicMeasure1::new(atoms, densities).expect("marginal of a valid measure")
}

/// `(μ^X, μ^Y)`: push-forwards onto each coordinate.
pub fn marginals(mu: &AtomicMeasure2) -> (AtomicMeasure1, AtomicMeasure1) {
    let mx = collapse(mu.iter().map(|((x, _), r)| (x.clone(), r.clone())));
    let my = collapse(mu.iter().map(|((_, y), r)| (y.clone(), r.clone())));
    (mx, my)
}

/// `(1/γ_h)·tʰ dξ(t)`.
pub fn restricted_measure(xi: &AtomicMeasure1, h: usize) -> Result<AtomicMeasure1> {
    let gamma_h = xi.moment(h);
    if gamma_h.is_zero() {
        return Err(Error::Positivity(format!("γ_{h} vanishes")));
    }
    let scale = QuadExt::from(gamma_h.recip());
    let (atoms, densities): (Vec<_>, Vec<_>) = xi
        .iter()
        .map(|(t, rho)| (t.clone(), &(rho * &t.pow(h as u32)) * &scale))
        .filter(|(_, r)| !r.is_zero())
        .unzip();
    AtomicMeasure1::new(atoms, densities)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::frac(n, d)
    }

    fn three_atom() -> AtomicMeasure2 {
        AtomicMeasure2::from_rationals(&[
            ((r(0, 1), r(0, 1)), r(1, 3)),
            ((r(0, 1), r(3, 1)), r(1, 6)),
            ((r(2, 1), r(1, 1)), r(1, 2)),
        ])
        .unwrap()
    }

    #[test]
    fn validation() {
        let half = || r(1, 2);
        assert!(AtomicMeasure2::from_rationals(&[((r(0, 1), r(0, 1)), half())]).is_err());
        assert!(AtomicMeasure2::from_rationals(&[
            ((r(1, 1), r(1, 1)), half()),
            ((r(1, 1), r(1, 1)), half())
        ])
        .is_err());
        assert!(AtomicMeasure2::from_rationals(&[
            ((r(1, 1), r(1, 1)), r(3, 2)),
            ((r(2, 1), r(1, 1)), r(-1, 2))
        ])
        .is_err());
        // 2 + √2 alone is not conjugate-closed
        let s = QuadExt::new(r(2, 1), r(1, 1), r(2, 1));
        let lone = AtomicMeasure1::new(
            vec![s.clone(), QuadExt::from_int(0)],
            vec![QuadExt::from(half()), QuadExt::from(half())],
        );
        assert!(lone.is_err());
        let pair = AtomicMeasure1::new(
            vec![s.clone(), s.conjugate()],
            vec![QuadExt::from(half()), QuadExt::from(half())],
        )
        .unwrap();
        assert_eq!(pair.atoms()[0], s.conjugate());
    }

    #[test]
    fn moments_examples() {
        let delta = AtomicMeasure2::point(r(1, 1), r(1, 1));
        assert!(moments_of_measure(&delta, 3).table().iter().all(Rat::is_one));
        let m = moments_of_measure(&three_atom(), 2);
        assert_eq!(m, MomentSeq2::from_i64(&[1, 1, 1, 2, 1, 2]).unwrap());
        let two = AtomicMeasure2::from_rationals(&[
            ((r(0, 1), r(1, 1)), r(1, 2)),
            ((r(2, 1), r(3, 1)), r(1, 2)),
        ])
        .unwrap();
        let m = moments_of_measure(&two, 2);
        assert_eq!(m, MomentSeq2::from_i64(&[1, 1, 2, 2, 3, 5]).unwrap());
    }

    #[test]
    fn marginal_examples() {
        let (mx, my) = marginals(&three_atom());
        assert_eq!(mx, AtomicMeasure1::from_rationals(&[(r(0, 1), r(1, 2)), (r(2, 1), r(1, 2))]).unwrap());
        assert_eq!(
            my,
            AtomicMeasure1::from_rationals(&[(r(0, 1), r(1, 3)), (r(1, 1), r(1, 2)), (r(3, 1), r(1, 6))])
                .unwrap()
        );
        let (px, py) = marginals(&AtomicMeasure2::point(r(2, 1), r(5, 1)));
        assert_eq!((px, py), (AtomicMeasure1::point(r(2, 1)), AtomicMeasure1::point(r(5, 1))));
        let axis = AtomicMeasure2::from_rationals(&[
            ((r(0, 1), r(1, 1)), r(1, 2)),
            ((r(0, 1), r(2, 1)), r(1, 2)),
        ])
        .unwrap();
        assert_eq!(marginals(&axis).0, AtomicMeasure1::point(r(0, 1)));
    }

    #[test]
    fn restriction_examples() {
        let xi = AtomicMeasure1::from_rationals(&[(r(1, 1), r(1, 2)), (r(2, 1), r(1, 2))]).unwrap();
        let expected = AtomicMeasure1::from_rationals(&[(r(1, 1), r(1, 3)), (r(2, 1), r(2, 3))]).unwrap();
        assert_eq!(restricted_measure(&xi, 1).unwrap(), expected);
        assert_eq!(restricted_measure(&xi, 0).unwrap(), xi);
        let d = AtomicMeasure1::point(r(7, 3));
        assert_eq!(restricted_measure(&d, 5).unwrap(), d);
        assert!(restricted_measure(&AtomicMeasure1::point(r(0, 1)), 2).is_err());
    }

    #[test]
    fn display_uses_delta_notation() {
        assert_eq!(AtomicMeasure2::point(r(1, 1), r(1, 1)).to_string(), "δ_{(1, 1)}");
        assert_eq!(
            three_atom().to_string(),
            "(1/3)δ_{(0, 0)} + (1/6)δ_{(0, 3)} + (1/2)δ_{(2, 1)}"
        );
    }
}
