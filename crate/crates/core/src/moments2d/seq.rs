use std::fmt;

use super::poly::{Monomial, Poly2};
use crate::error::{Error, Result};
use crate::exactla::Rat;

/// Truncated two-variable moment sequence `γ_{ij} = ∫ yⁱxʲ dμ` for `i + j ≤ D`.
///
/// Entries are stored in graded basis order: `γ₀₀; γ₀₁, γ₁₀; γ₀₂, γ₁₁, γ₂₀; …`
/// (within a degree, increasing y-degree).
#[derive(Clone, PartialEq, Eq)]
pub struct MomentSeq2 {
    degree_bound: usize,
    table: Vec<Rat>,
}

fn triangle_len(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

impl MomentSeq2 {
    /// Builds from a graded table; its length must be triangular and `γ₀₀ > 0`.
    pub fn from_table(table: Vec<Rat>) -> Result<MomentSeq2> {
        let mut d = 0;
        while triangle_len(d) < table.len() {
            d += 1;
        }
        if table.is_empty() || triangle_len(d) != table.len() {
            return Err(Error::InvalidMoments(format!(
                "table length {} is not a triangular number",
                table.len()
            )));
        }
        if !table[0].is_positive() {
            return Err(Error::InvalidMoments("γ₀₀ must be positive".into()));
        }
        Ok(MomentSeq2 {
            degree_bound: d,
            table,
        })
    }

    pub fn from_i64(table: &[i64]) -> Result<MomentSeq2> {
        MomentSeq2::from_table(table.iter().map(|&v| Rat::int(v)).collect())
    }

    /// Builds from `f(i, j)` for all `i + j ≤ degree_bound`.
    pub fn from_fn(degree_bound: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Result<MomentSeq2> {
        let table = (0..=degree_bound)
            .flat_map(|d| (0..=d).map(move |i| (i, d - i)))
            .map(|(i, j)| f(i, j))
            .collect();
        MomentSeq2::from_table(table)
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn table(&self) -> &[Rat] {
        &self.table
    }

    /// `γ_{ij}` (i = y-degree, j = x-degree), if within the degree bound.
    pub fn get(&self, i: usize, j: usize) -> Option<&Rat> {
        (i + j <= self.degree_bound).then(|| &self.table[Monomial::new(i, j).index()])
    }

    pub fn at(&self, m: Monomial) -> Option<&Rat> {
        self.get(m.ydeg, m.xdeg)
    }

    /// Panicking accessor for indices known to be in range.
    pub fn gamma(&self, i: usize, j: usize) -> Rat {
        self.get(i, j)
            .cloned()
            .unwrap_or_else(|| panic!("γ_{{{i},{j}}} beyond degree {}", self.degree_bound))
    }

    pub fn require_degree(&self, need: usize) -> Result<()> {
        if self.degree_bound < need {
            Err(Error::InsufficientDegree {
                need,
                have: self.degree_bound,
            })
        } else {
            Ok(())
        }
    }

    /// Restriction to degree `≤ d`.
    pub fn truncate(&self, d: usize) -> Result<MomentSeq2> {
        self.require_degree(d)?;
        MomentSeq2::from_table(self.table[..triangle_len(d)].to_vec())
    }

    /// The Riesz functional `L(yⁱxʲ) = γ_{ij}`, extended linearly.
    pub fn riesz_eval(&self, poly: &Poly2) -> Result<Rat> {
        if let Some(d) = poly.degree() {
            self.require_degree(d)?;
        }
        Ok(poly
            .terms()
            .map(|(m, c)| c * &self.table[m.index()])
            .sum())
    }

    /// Degree-one translation: `γ̃_{ij} = L((y + k)ⁱ(x + h)ʲ)`.
    pub fn translate(&self, h: &Rat, k: &Rat) -> MomentSeq2 {
        let xs = Poly2::x().add(&Poly2::constant(h.clone()));
        let ys = Poly2::y().add(&Poly2::constant(k.clone()));
        let table = (0..=self.degree_bound)
            .flat_map(|d| (0..=d).map(move |i| (i, d - i)))
            .map(|(i, j)| {
                let p = ys.pow(i).mul(&xs.pow(j));
                self.riesz_eval(&p).expect("translation preserves degree")
            })
            .collect();
        MomentSeq2 {
            degree_bound: self.degree_bound,
            table,
        }
    }
}

impl fmt::Debug for MomentSeq2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MomentSeq2(D={}) [", self.degree_bound)?;
        for d in 0..=self.degree_bound {
            let row: Vec<String> = (0..=d).map(|i| self.gamma(i, d - i).to_string()).collect();
            write!(f, "{}{}", if d == 0 { "" } else { "; " }, row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The untranslated degree-4 table of the obstruction example.
    pub(crate) fn original() -> MomentSeq2 {
        MomentSeq2::from_i64(&[1, 1, 1, 2, 0, 3, 4, 0, 0, 9, 9, 0, 0, 0, 28]).unwrap()
    }

    #[test]
    fn table_shape_validation() {
        assert!(MomentSeq2::from_i64(&[1, 2]).is_err());
        assert!(MomentSeq2::from_i64(&[0, 1, 1]).is_err());
        assert_eq!(original().degree_bound(), 4);
        assert_eq!(original().gamma(2, 0), Rat::int(3));
        assert_eq!(original().gamma(0, 2), Rat::int(2));
        assert!(original().get(3, 2).is_none());
    }

    #[test]
    fn riesz_examples() {
        let s = original();
        assert_eq!(s.riesz_eval(&Poly2::constant(Rat::one())).unwrap(), Rat::one());
        // (v + 4)²(u + 3)
        let p = Poly2::y()
            .add(&Poly2::constant(Rat::int(4)))
            .pow(2)
            .mul(&Poly2::x().add(&Poly2::constant(Rat::int(3))));
        assert_eq!(s.riesz_eval(&p).unwrap(), Rat::int(97));
        assert_eq!(s.riesz_eval(&Poly2::x().add(&Poly2::y())).unwrap(), Rat::int(2));
        let too_high = Poly2::x().pow(5);
        assert!(matches!(s.riesz_eval(&too_high), Err(Error::InsufficientDegree { .. })));
    }

    #[test]
    fn translation_table() {
        let t = original().translate(&Rat::int(3), &Rat::int(4));
        let expected = MomentSeq2::from_i64(&[
            1, 4, 5, 17, 19, 27, 76, 77, 97, 157, 354, 331, 371, 535, 972,
        ])
        .unwrap();
        assert_eq!(t, expected);
        let back = t.translate(&Rat::int(-3), &Rat::int(-4));
        assert_eq!(back, original());
        assert_eq!(original().translate(&Rat::zero(), &Rat::zero()), original());
    }
}
