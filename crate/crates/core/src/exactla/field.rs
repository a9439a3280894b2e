use std::fmt::Debug;

use super::{QuadExt, Rat};

/// Minimal exact field interface shared by [`Rat`] and [`QuadExt`].
pub trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
}

impl Field for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

impl Field for QuadExt {
    fn zero() -> Self {
        QuadExt::from_int(0)
    }
    fn one() -> Self {
        QuadExt::from_int(1)
    }
    fn is_zero(&self) -> bool {
        QuadExt::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

/// Solves the (possibly overdetermined) system `rows · x = rhs` by Gauss–Jordan elimination.
///
/// Returns `Some(x)` only when the system is consistent and the solution is unique.
pub fn solve_unique<F: Field>(rows: &[Vec<F>], rhs: &[F]) -> Option<Vec<F>> {
    let m = rows.len();
    if m == 0 || rhs.len() != m {
        return None;
    }
    let n = rows[0].len();
    let mut aug: Vec<Vec<F>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..n {
        let p = (pivot_row..m).find(|&i| !aug[i][col].is_zero())?;
        aug.swap(pivot_row, p);
        let inv = F::one().div(&aug[pivot_row][col]);
        for v in aug[pivot_row].iter_mut() {
            *v = v.mul(&inv);
        }
        for i in 0..m {
            if i != pivot_row && !aug[i][col].is_zero() {
                let factor = aug[i][col].clone();
                for j in col..=n {
                    let t = aug[pivot_row][j].mul(&factor);
                    aug[i][j] = aug[i][j].sub(&t);
                }
            }
        }
        pivot_row += 1;
    }
    // Leftover rows must be identically zero, including the right-hand side.
    if aug[pivot_row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|i| aug[i][n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unique_solution_over_rationals() {
        let rows = vec![vec![Rat::int(1), Rat::int(1)], vec![Rat::int(1), Rat::int(2)], vec![Rat::int(2), Rat::int(3)]];
        let rhs = vec![Rat::int(3), Rat::int(5), Rat::int(8)];
        assert_eq!(solve_unique(&rows, &rhs), Some(vec![Rat::int(1), Rat::int(2)]));
        let bad = vec![Rat::int(3), Rat::int(5), Rat::int(9)];
        assert_eq!(solve_unique(&rows, &bad), None);
    }

    #[test]
    fn singular_system_has_no_unique_solution() {
        let rows = vec![vec![Rat::int(1), Rat::int(1)], vec![Rat::int(2), Rat::int(2)]];
        assert_eq!(solve_unique(&rows, &[Rat::int(1), Rat::int(2)]), None);
    }

    #[test]
    fn solves_over_quadratic_field() {
        // atoms 2±√2 with densities ρ₀, ρ₁: ρ₀+ρ₁ = 1, ρ₀t₀+ρ₁t₁ = 1
        let t0 = QuadExt::new(Rat::int(2), Rat::int(-1), Rat::int(2));
        let t1 = t0.conjugate();
        let rows = vec![vec![QuadExt::from_int(1), QuadExt::from_int(1)], vec![t0, t1]];
        let x = solve_unique(&rows, &[QuadExt::from_int(1), QuadExt::from_int(1)]).unwrap();
        assert_eq!(&x[0] + &x[1], QuadExt::from_int(1));
        assert_eq!(x[0], x[1].conjugate());
    }
}
